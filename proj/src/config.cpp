#include "coinknn/config.hpp"

#include "coinknn/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

using nlohmann::json;

namespace coinknn {

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) {
            const std::string path = where.empty() ? key : where + "." + key;
            throw ConfigError(path, "unknown key");
        }
    }
}

const json& require_object(const json& j, const std::string& key) {
    if (!j.is_object()) {
        throw ConfigError(key, "expected an object");
    }
    return j;
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) {
        throw ConfigError(key, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(key, "must be finite");
    }
    return v;
}

std::size_t positive_integer(const json& j, const std::string& key) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 1) {
        throw ConfigError(key, fmt::format("expected a positive integer, got {}", j.dump()));
    }
    return j.get<std::size_t>();
}

TransformKind parse_transform(const json& j) {
    std::string kind;
    double alpha = 0.2;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        reject_unknown(j, "transform", {"kind", "alpha"});
        if (!j.contains("kind") || !j["kind"].is_string()) {
            throw ConfigError("transform.kind", "expected a transform name");
        }
        kind = j["kind"].get<std::string>();
        if (j.contains("alpha")) {
            if (kind != "exp") {
                throw ConfigError("transform.alpha", "only the exp transform takes alpha");
            }
            alpha = number(j["alpha"], "transform.alpha");
        }
    } else {
        throw ConfigError("transform", "expected a string or an object");
    }
    if (kind == "power2") return PowerOfTwo{};
    if (kind == "square") return Square{};
    if (kind == "cube") return Cube{};
    if (kind == "identity" || kind == "linear") return Identity{};
    if (kind == "exp") {
        if (!(alpha > 0.0)) {
            throw ConfigError("transform.alpha", "must be > 0");
        }
        return ExpAlpha{alpha};
    }
    throw ConfigError("transform", fmt::format("unknown transform '{}'", kind));
}

BaseDensity parse_base(const json& j, const std::string& key) {
    require_object(j, key);
    if (!j.contains("type") || !j["type"].is_string()) {
        throw ConfigError(key + ".type", "expected \"uniform\" or \"normal\"");
    }
    const auto type = j["type"].get<std::string>();
    BaseDensity base;
    if (type == "uniform") {
        reject_unknown(j, key, {"type", "low", "high"});
        if (!j.contains("low") || !j.contains("high")) {
            throw ConfigError(key, "uniform base needs low and high");
        }
        base = Uniform{number(j["low"], key + ".low"), number(j["high"], key + ".high")};
    } else if (type == "normal") {
        reject_unknown(j, key, {"type", "mean", "sigma"});
        if (!j.contains("mean") || !j.contains("sigma")) {
            throw ConfigError(key, "normal base needs mean and sigma");
        }
        base = Normal{number(j["mean"], key + ".mean"), number(j["sigma"], key + ".sigma")};
    } else {
        throw ConfigError(key + ".type", fmt::format("unknown base type '{}'", type));
    }
    try {
        validate(base);
    } catch (const InvalidInput& e) {
        throw ConfigError(key, e.what());
    }
    return base;
}

void parse_group(const json& j, const std::string& key, int dimensions, std::vector<BaseDensity>& bases,
                 std::size_t& n) {
    require_object(j, key);
    reject_unknown(j, key, {"n", "base"});
    if (j.contains("n")) {
        n = positive_integer(j["n"], key + ".n");
    }
    if (j.contains("base")) {
        const json& b = j["base"];
        bases.clear();
        if (dimensions == 1 && b.is_object()) {
            bases.push_back(parse_base(b, key + ".base"));
        } else if (b.is_array()) {
            for (std::size_t i = 0; i < b.size(); ++i) {
                bases.push_back(parse_base(b[i], fmt::format("{}.base[{}]", key, i)));
            }
        } else {
            throw ConfigError(key + ".base", "expected a base object (1D) or a list of per-axis bases");
        }
        if (bases.size() != static_cast<std::size_t>(dimensions)) {
            throw ConfigError(key + ".base", fmt::format("expected {} per-axis bases, got {}", dimensions, bases.size()));
        }
    }
}

ComparatorKind parse_comparator(const json& j, std::size_t index, double d, double e) {
    const std::string key = fmt::format("comparators[{}]", index);
    std::string kind;
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        reject_unknown(j, key, {"kind", "d", "e"});
        if (!j.contains("kind") || !j["kind"].is_string()) {
            throw ConfigError(key + ".kind", "expected \"euclidean\" or \"dissimilarity\"");
        }
        kind = j["kind"].get<std::string>();
        if (kind == "euclidean" && (j.contains("d") || j.contains("e"))) {
            throw ConfigError(key, "euclidean takes no exponents");
        }
        if (j.contains("d")) d = number(j["d"], key + ".d");
        if (j.contains("e")) e = number(j["e"], key + ".e");
    } else {
        throw ConfigError(key, "expected a string or an object");
    }
    if (kind == "euclidean") {
        return Euclidean{};
    }
    if (kind != "dissimilarity") {
        throw ConfigError(key, fmt::format("unknown comparator '{}'", kind));
    }
    if (!(d > 0.0)) {
        throw ConfigError(key + ".d", "D must be > 0");
    }
    if (!(e >= 0.0)) {
        throw ConfigError(key + ".e", "E must be >= 0");
    }
    return CoincidenceDissimilarity{d, e};
}

ProfileSettings parse_profile(const json& j) {
    require_object(j, "profile");
    reject_unknown(j, "profile", {"reference", "grid_min", "grid_max", "step"});
    ProfileSettings p;
    if (j.contains("reference")) p.reference = number(j["reference"], "profile.reference");
    if (j.contains("grid_min")) p.grid_min = number(j["grid_min"], "profile.grid_min");
    if (j.contains("grid_max")) p.grid_max = number(j["grid_max"], "profile.grid_max");
    if (j.contains("step")) p.step = number(j["step"], "profile.step");
    if (!(p.grid_max > p.grid_min)) {
        throw ConfigError("profile.grid_max", "must exceed grid_min");
    }
    if (!(p.step > 0.0) || (p.grid_max - p.grid_min) / p.step < 2.0) {
        throw ConfigError("profile.step", "must be > 0 and give at least 3 grid points");
    }
    return p;
}

template <std::size_t N>
std::array<double, N> number_array(const json& j, const std::string& key) {
    if (!j.is_array() || j.size() != N) {
        throw ConfigError(key, fmt::format("expected a list of {} numbers", N));
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = number(j[i], key);
    }
    return out;
}

LevelSetSettings parse_levelsets(const json& j) {
    require_object(j, "levelsets");
    reject_unknown(j, "levelsets", {"resolution", "rect", "reference", "levels", "neighbor_counts"});
    LevelSetSettings s;
    if (j.contains("resolution")) {
        s.resolution = positive_integer(j["resolution"], "levelsets.resolution");
        if (s.resolution < 2) {
            throw ConfigError("levelsets.resolution", "must be >= 2");
        }
    }
    if (j.contains("rect")) {
        s.rect = number_array<4>(j["rect"], "levelsets.rect");
        const auto& r = *s.rect;
        if (!(r[2] > r[0]) || !(r[3] > r[1])) {
            throw ConfigError("levelsets.rect", "expected [x_min, y_min, x_max, y_max] with min < max");
        }
    }
    if (j.contains("reference")) {
        s.reference = number_array<2>(j["reference"], "levelsets.reference");
    }
    if (j.contains("levels")) {
        const json& l = j["levels"];
        if (!l.is_array() || l.empty()) {
            throw ConfigError("levelsets.levels", "expected a non-empty list of numbers");
        }
        s.levels.emplace();
        for (const auto& v : l) {
            s.levels->push_back(number(v, "levelsets.levels"));
        }
    }
    if (j.contains("neighbor_counts")) {
        const json& l = j["neighbor_counts"];
        if (!l.is_array() || l.empty()) {
            throw ConfigError("levelsets.neighbor_counts", "expected a non-empty list of positive integers");
        }
        s.neighbor_counts.clear();
        for (const auto& v : l) {
            s.neighbor_counts.push_back(positive_integer(v, "levelsets.neighbor_counts"));
        }
    }
    return s;
}

}  // namespace

bool operator==(const RunSettings& a, const RunSettings& b) {
    return a.experiment == b.experiment && a.d_exponent == b.d_exponent && a.e_exponent == b.e_exponent &&
           a.profile == b.profile && a.levelsets == b.levelsets;
}

RunSettings parse_config(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config", "top level must be a JSON object");
    }
    reject_unknown(doc, "",
                   {"experiment_id", "dimensions", "transform", "groups", "comparators", "d_exponent", "e_exponent",
                    "k_values", "realizations", "seed", "profile", "levelsets"});

    int dimensions = 1;
    if (doc.contains("dimensions")) {
        const json& d = doc["dimensions"];
        if (!d.is_number_integer()) {
            throw ConfigError("dimensions", "expected an integer");
        }
        dimensions = d.get<int>();
        if (dimensions != 1 && dimensions != 2) {
            throw ConfigError("dimensions", fmt::format("unsupported configuration: dimensions must be 1 or 2, got {}",
                                                        dimensions));
        }
    }

    RunSettings s;
    s.experiment = default_config(dimensions);
    ExperimentConfig& c = s.experiment;

    if (doc.contains("experiment_id")) {
        if (!doc["experiment_id"].is_string() || doc["experiment_id"].get<std::string>().empty()) {
            throw ConfigError("experiment_id", "expected a non-empty string");
        }
        c.experiment_id = doc["experiment_id"].get<std::string>();
    }
    if (doc.contains("transform")) {
        c.transform = parse_transform(doc["transform"]);
    }
    if (doc.contains("groups")) {
        const json& g = require_object(doc["groups"], "groups");
        reject_unknown(g, "groups", {"a", "b"});
        if (g.contains("a")) parse_group(g["a"], "groups.a", dimensions, c.bases_a, c.n_a);
        if (g.contains("b")) parse_group(g["b"], "groups.b", dimensions, c.bases_b, c.n_b);
    }
    if (doc.contains("d_exponent")) {
        s.d_exponent = number(doc["d_exponent"], "d_exponent");
        if (!(s.d_exponent > 0.0)) {
            throw ConfigError("d_exponent", "D must be > 0");
        }
    }
    if (doc.contains("e_exponent")) {
        s.e_exponent = number(doc["e_exponent"], "e_exponent");
        if (!(s.e_exponent >= 0.0)) {
            throw ConfigError("e_exponent", "E must be >= 0");
        }
    }
    c.comparators = {Euclidean{}, CoincidenceDissimilarity{s.d_exponent, s.e_exponent}};
    if (doc.contains("comparators")) {
        const json& list = doc["comparators"];
        if (!list.is_array() || list.empty()) {
            throw ConfigError("comparators", "expected a non-empty list");
        }
        c.comparators.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            c.comparators.push_back(parse_comparator(list[i], i, s.d_exponent, s.e_exponent));
        }
    }
    if (doc.contains("k_values")) {
        const json& list = doc["k_values"];
        if (!list.is_array() || list.empty()) {
            throw ConfigError("k_values", "expected a non-empty list of positive integers");
        }
        c.k_values.clear();
        for (const auto& k : list) {
            c.k_values.push_back(positive_integer(k, "k_values"));
        }
    }
    for (std::size_t k : c.k_values) {
        if (k > c.n_a + c.n_b) {
            throw ConfigError("k_values", fmt::format("k = {} exceeds the {} pooled points", k, c.n_a + c.n_b));
        }
    }
    if (doc.contains("realizations")) {
        c.realizations = positive_integer(doc["realizations"], "realizations");
    }
    if (doc.contains("seed")) {
        const json& seed = doc["seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        c.master_seed = seed.get<std::uint64_t>();
    }
    if (doc.contains("profile")) {
        s.profile = parse_profile(doc["profile"]);
    }
    if (doc.contains("levelsets")) {
        s.levelsets = parse_levelsets(doc["levelsets"]);
    }

    try {
        validate(c);
        reference_point(c);
    } catch (const UnsupportedConfiguration& e) {
        throw ConfigError("groups", fmt::format("unsupported configuration: {}", e.what()));
    } catch (const InvalidInput& e) {
        throw ConfigError("groups", e.what());
    }
    return s;
}

RunSettings parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", fmt::format("malformed JSON: {}", e.what()));
    }
    return parse_config(doc);
}

RunSettings parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

json base_json(const BaseDensity& base) {
    if (const auto* u = std::get_if<Uniform>(&base)) {
        return {{"type", "uniform"}, {"low", u->low}, {"high", u->high}};
    }
    const auto& n = std::get<Normal>(base);
    return {{"type", "normal"}, {"mean", n.mean}, {"sigma", n.sigma}};
}

json group_json(const std::vector<BaseDensity>& bases, std::size_t n, int dimensions) {
    json out{{"n", n}};
    if (dimensions == 1) {
        out["base"] = base_json(bases.at(0));
    } else {
        out["base"] = json::array();
        for (const auto& b : bases) {
            out["base"].push_back(base_json(b));
        }
    }
    return out;
}

}  // namespace

json to_json(const RunSettings& s) {
    const ExperimentConfig& c = s.experiment;
    json out;
    out["experiment_id"] = c.experiment_id;
    out["dimensions"] = c.dimensions;
    if (const auto* e = std::get_if<ExpAlpha>(&c.transform)) {
        out["transform"] = {{"kind", "exp"}, {"alpha", e->alpha}};
    } else {
        out["transform"] = transform_name(c.transform);
    }
    out["groups"] = {{"a", group_json(c.bases_a, c.n_a, c.dimensions)},
                     {"b", group_json(c.bases_b, c.n_b, c.dimensions)}};
    out["comparators"] = json::array();
    for (const auto& comp : c.comparators) {
        if (const auto* d = std::get_if<CoincidenceDissimilarity>(&comp)) {
            out["comparators"].push_back({{"kind", "dissimilarity"}, {"d", d->d_exponent}, {"e", d->e_exponent}});
        } else {
            out["comparators"].push_back({{"kind", "euclidean"}});
        }
    }
    out["d_exponent"] = s.d_exponent;
    out["e_exponent"] = s.e_exponent;
    out["k_values"] = c.k_values;
    out["realizations"] = c.realizations;
    out["seed"] = c.master_seed;
    out["profile"] = {{"reference", s.profile.reference},
                      {"grid_min", s.profile.grid_min},
                      {"grid_max", s.profile.grid_max},
                      {"step", s.profile.step}};
    json ls{{"resolution", s.levelsets.resolution}, {"neighbor_counts", s.levelsets.neighbor_counts}};
    if (s.levelsets.rect) ls["rect"] = *s.levelsets.rect;
    if (s.levelsets.reference) ls["reference"] = *s.levelsets.reference;
    if (s.levelsets.levels) ls["levels"] = *s.levelsets.levels;
    out["levelsets"] = ls;
    return out;
}

}  // namespace coinknn
