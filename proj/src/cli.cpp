#include "coinknn/cli.hpp"

#include "coinknn/errors.hpp"
#include "coinknn/sensitivity.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace coinknn::cli {

namespace fs = std::filesystem;

namespace {

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    }
}

bool is_euclidean(const ComparatorKind& c) { return std::holds_alternative<Euclidean>(c); }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::size_t resolve_threads(std::optional<std::size_t> flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("COINKNN_THREADS"); env && *env) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (*end != '\0' || v < 0) {
            throw ConfigError("COINKNN_THREADS", fmt::format("expected a non-negative integer, got '{}'", env));
        }
        return static_cast<std::size_t>(v);
    }
    return 0;
}

CsvWriter results_table(const ExperimentConfig& config, const AccuracyStats& stats) {
    CsvWriter csv({"experiment_id", "comparator", "transform", "dim", "k", "mean_beta", "std_beta", "realizations"});
    for (const auto& cell : stats.cells) {
        csv.add_row({config.experiment_id, comparator_name(stats.comparators[cell.comparator]),
                     transform_label(config.transform), std::to_string(config.dimensions), std::to_string(cell.k),
                     format_double(cell.mean_beta), format_double(cell.std_beta),
                     std::to_string(cell.realizations.size())});
    }
    return csv;
}

CsvWriter beta_histogram_table(const ExperimentConfig& config, const AccuracyStats& stats) {
    CsvWriter csv({"experiment_id", "comparator", "k", "beta_value", "count"});
    for (const auto& cell : stats.cells) {
        for (const auto& bin : cell.histogram) {
            csv.add_row({config.experiment_id, comparator_name(stats.comparators[cell.comparator]),
                         std::to_string(cell.k), format_double(bin.beta), std::to_string(bin.count)});
        }
    }
    return csv;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const RunSettings& settings,
                    std::vector<std::string> files) {
    files.push_back("manifest.json");
    nlohmann::json manifest{
        {"tool", "coinknn"},
        {"version", kVersion},
        {"command", command},
        {"seed", settings.experiment.master_seed},
        {"timestamp", utc_timestamp()},
        {"config", to_json(settings)},
        {"files", files},
    };
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::string> cmd_sweep(const RunSettings& settings, const fs::path& out_dir, std::size_t threads) {
    ensure_directory(out_dir);
    const ExperimentConfig& config = settings.experiment;
    const AccuracyStats stats = run_experiment(config, {threads});

    results_table(config, stats).save(out_dir / "results.csv");
    beta_histogram_table(config, stats).save(out_dir / "beta_hist.csv");

    SvgPlot plot(fmt::format("{}: accuracy at the decision point ({}, {}D)", config.experiment_id,
                             transform_label(config.transform), config.dimensions),
                 "k", "beta (mean +/- std)");
    plot.set_y_range(0.0, 1.05);
    for (std::size_t c = 0; c < stats.comparators.size(); ++c) {
        std::vector<double> ks, mean, lo, hi;
        for (const auto& cell : stats.cells) {
            if (cell.comparator != c) continue;
            ks.push_back(static_cast<double>(cell.k));
            mean.push_back(cell.mean_beta);
            lo.push_back(cell.mean_beta - cell.std_beta);
            hi.push_back(cell.mean_beta + cell.std_beta);
        }
        const std::string color = comparator_color(c, is_euclidean(stats.comparators[c]));
        plot.add_band(ks, lo, hi, color);
        plot.add_line(ks, mean, color, comparator_name(stats.comparators[c]));
    }
    write_text_file(out_dir / "sweep.svg", render_svg({plot}));

    std::vector<std::string> files{"results.csv", "beta_hist.csv", "sweep.svg"};
    write_manifest(out_dir, "sweep", settings, files);
    return files;
}

std::vector<std::string> cmd_single(const RunSettings& settings, const fs::path& out_dir, std::size_t threads,
                                    std::size_t k) {
    ExperimentConfig config = settings.experiment;
    if (k < 1 || k > config.n_a + config.n_b) {
        throw ConfigError("k", fmt::format("k = {} must be in [1, {}]", k, config.n_a + config.n_b));
    }
    config.k_values = {k};
    RunSettings echo = settings;
    echo.experiment.k_values = {k};

    ensure_directory(out_dir);
    const AccuracyStats stats = run_experiment(config, {threads});

    results_table(config, stats).save(out_dir / "results.csv");
    beta_histogram_table(config, stats).save(out_dir / "beta_hist.csv");

    CsvWriter per_run({"experiment_id", "comparator", "k", "realization", "n_a", "n_b", "beta"});
    for (const auto& cell : stats.cells) {
        for (std::size_t r = 0; r < cell.realizations.size(); ++r) {
            const auto& res = cell.realizations[r];
            per_run.add_row({config.experiment_id, comparator_name(stats.comparators[cell.comparator]),
                             std::to_string(k), std::to_string(r), std::to_string(res.n_a), std::to_string(res.n_b),
                             format_double(res.beta)});
        }
    }
    per_run.save(out_dir / "realizations.csv");

    SvgPlot plot(fmt::format("{}: beta histogram, k = {} ({})", config.experiment_id, k, transform_label(config.transform)),
                 "beta", "realizations");
    plot.set_x_range(-0.02, 1.02);
    const double width = 0.8 / static_cast<double>(kCoarseBins);
    for (std::size_t c = 0; c < stats.comparators.size(); ++c) {
        const auto& cell = stats.cell(c, k);
        std::vector<double> xs, hs;
        for (std::size_t b = 0; b < kCoarseBins; ++b) {
            xs.push_back((static_cast<double>(b) + 0.5) / kCoarseBins + (c % 2 == 0 ? -0.25 : 0.25) * width);
            hs.push_back(static_cast<double>(cell.coarse_histogram[b]));
        }
        plot.add_bars(xs, hs, width * 0.5, comparator_color(c, is_euclidean(stats.comparators[c])),
                      fmt::format("{} (mean {:.3f})", comparator_name(stats.comparators[c]), cell.mean_beta));
    }
    write_text_file(out_dir / "single.svg", render_svg({plot}));

    std::vector<std::string> files{"results.csv", "beta_hist.csv", "realizations.csv", "single.svg"};
    write_manifest(out_dir, "single", echo, files);
    return files;
}

std::vector<std::string> cmd_profile(const RunSettings& settings, const fs::path& out_dir) {
    ensure_directory(out_dir);
    const auto& p = settings.profile;
    const auto& comparators = settings.experiment.comparators;
    const auto grid = uniform_grid(p.grid_min, p.grid_max, p.step);

    std::vector<ProfileCurve> curves;
    std::vector<std::vector<std::optional<double>>> sens;
    for (const auto& c : comparators) {
        curves.push_back(profile(c, p.reference, grid));
        sens.push_back(sensitivity_curve(curves.back()));
    }

    std::vector<std::string> header{"y"};
    for (const auto& c : comparators) header.push_back(comparator_name(c));
    CsvWriter values_csv(header);
    CsvWriter sens_csv(header);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> vrow{format_double(grid[i])};
        std::vector<std::string> srow{format_double(grid[i])};
        for (std::size_t c = 0; c < comparators.size(); ++c) {
            vrow.push_back(format_double(curves[c].values[i]));
            srow.push_back(sens[c][i] ? format_double(*sens[c][i]) : std::string());
        }
        values_csv.add_row(std::move(vrow));
        sens_csv.add_row(std::move(srow));
    }
    values_csv.save(out_dir / "profile.csv");
    sens_csv.save(out_dir / "sensitivity.csv");

    SvgPlot values_plot(fmt::format("comparison with the reference value {:g}", p.reference), "y", "value");
    SvgPlot sens_plot("sensitivity |d value / dy|", "y", "sensitivity");
    for (std::size_t c = 0; c < comparators.size(); ++c) {
        const std::string color = comparator_color(c, is_euclidean(comparators[c]));
        values_plot.add_line(grid, curves[c].values, color, comparator_name(comparators[c]));
        std::vector<double> s;
        for (const auto& v : sens[c]) s.push_back(v ? *v : std::numeric_limits<double>::quiet_NaN());
        sens_plot.add_line(grid, s, color, comparator_name(comparators[c]));
        sens_plot.add_marker(p.reference, 0.0, color, {});
    }
    write_text_file(out_dir / "profile.svg", render_svg({values_plot, sens_plot}));

    std::vector<std::string> files{"profile.csv", "sensitivity.csv", "profile.svg"};
    write_manifest(out_dir, "profile", settings, files);
    return files;
}

std::vector<std::string> cmd_levelsets(const RunSettings& settings, const fs::path& out_dir) {
    const ExperimentConfig& config = settings.experiment;
    const auto& ls = settings.levelsets;
    if (config.dimensions != 2) {
        throw ConfigError("dimensions", "levelsets needs a 2D experiment");
    }
    ensure_directory(out_dir);

    const auto points = sample_realization(config, 0);
    Point2 reference{};
    if (ls.reference) {
        reference = *ls.reference;
    } else {
        const auto ref = reference_point(config);
        reference = {ref.y[0], ref.y[1]};
    }
    Rect rect;
    if (ls.rect) {
        rect = {(*ls.rect)[0], (*ls.rect)[1], (*ls.rect)[2], (*ls.rect)[3]};
    } else {
        rect = {reference[0], reference[1], reference[0], reference[1]};
        for (const auto& p : points) {
            rect.x_min = std::min(rect.x_min, p.features[0]);
            rect.x_max = std::max(rect.x_max, p.features[0]);
            rect.y_min = std::min(rect.y_min, p.features[1]);
            rect.y_max = std::max(rect.y_max, p.features[1]);
        }
    }
    for (std::size_t n : ls.neighbor_counts) {
        if (!ls.levels && n > points.size()) {
            throw ConfigError("levelsets.neighbor_counts",
                              fmt::format("{} exceeds the {} sampled points", n, points.size()));
        }
    }

    CsvWriter points_csv({"group", "y1", "y2"});
    std::vector<double> ax, ay, bx, by;
    for (const auto& p : points) {
        points_csv.add_row({to_string(p.label), format_double(p.features[0]), format_double(p.features[1])});
        (p.label == Group::A ? ax : bx).push_back(p.features[0]);
        (p.label == Group::A ? ay : by).push_back(p.features[1]);
    }
    points_csv.save(out_dir / "points.csv");

    CsvWriter contours_csv({"comparator", "level", "polyline", "closed", "vertex", "y1", "y2"});
    SvgPlot plot(fmt::format("level sets around ({:.4g}, {:.4g}), {}", reference[0], reference[1],
                             transform_label(config.transform)),
                 "y1", "y2");
    plot.set_x_range(rect.x_min, rect.x_max);
    plot.set_y_range(rect.y_min, rect.y_max);
    plot.add_points(ax, ay, "#f4a261", "group A");
    plot.add_points(bx, by, "#6a9f58", "group B");

    for (std::size_t c = 0; c < config.comparators.size(); ++c) {
        const auto& kind = config.comparators[c];
        std::vector<double> levels;
        if (ls.levels) {
            levels = *ls.levels;
        } else {
            const std::size_t n_max = *std::max_element(ls.neighbor_counts.begin(), ls.neighbor_counts.end());
            const auto ranked = k_nearest(reference, points, n_max, kind);
            for (std::size_t n : ls.neighbor_counts) {
                levels.push_back(ranked[n - 1].value);
            }
        }
        const auto grid = level_set_grid(kind, reference, rect, ls.resolution, levels);
        const std::string color = is_euclidean(kind) ? "#7b3fa0" : comparator_color(c, false);
        bool labelled = false;
        for (const auto& lc : grid.contours) {
            for (std::size_t l = 0; l < lc.polylines.size(); ++l) {
                const auto& line = lc.polylines[l];
                for (std::size_t v = 0; v < line.vertices.size(); ++v) {
                    contours_csv.add_row({comparator_name(kind), format_double(lc.level), std::to_string(l),
                                          line.closed ? "1" : "0", std::to_string(v),
                                          format_double(line.vertices[v][0]), format_double(line.vertices[v][1])});
                }
                plot.add_path(line.vertices, color, 1.4);
            }
            if (!labelled) {
                plot.add_line({}, {}, color, comparator_name(kind));
                labelled = true;
            }
        }
    }
    plot.add_marker(reference[0], reference[1], "#000000", "reference");
    contours_csv.save(out_dir / "levelsets.csv");
    write_text_file(out_dir / "levelsets.svg", render_svg({plot}, 760.0, 700.0));

    std::vector<std::string> files{"points.csv", "levelsets.csv", "levelsets.svg"};
    write_manifest(out_dir, "levelsets", settings, files);
    return files;
}

int run(int argc, char** argv) {
    CLI::App app{"k-NN accuracy at the decision point under the Euclidean distance and the coincidence dissimilarity"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::size_t k = 70;

    const auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", config_path, "JSON configuration file (defaults apply when omitted)");
        if (with_out) {
            sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        }
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (0 = machine parallelism; env COINKNN_THREADS)");
    };
    auto* sweep = app.add_subcommand("sweep", "accuracy over every configured k");
    auto* single = app.add_subcommand("single", "one k with the full beta histogram");
    auto* prof = app.add_subcommand("profile", "comparator profiles and sensitivity around a scalar reference");
    auto* levels = app.add_subcommand("levelsets", "2D iso-contours of each comparator over sampled data");
    auto* check = app.add_subcommand("validate", "check a configuration and print the resolved echo");
    for (auto* sub : {sweep, single, prof, levels}) add_common(sub, true);
    add_common(check, false);
    single->add_option("--k", k, "number of neighbors")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        RunSettings settings = config_path.empty() ? parse_config(nlohmann::json::object())
                                                   : parse_config(fs::path(config_path));
        if (seed) {
            settings.experiment.master_seed = *seed;
        }
        const std::size_t n_threads = resolve_threads(threads);

        std::vector<std::string> files;
        if (*check) {
            std::cout << to_json(settings).dump(2) << "\n";
            return kOk;
        }
        if (*sweep) files = cmd_sweep(settings, out_dir, n_threads);
        if (*single) files = cmd_single(settings, out_dir, n_threads, k);
        if (*prof) files = cmd_profile(settings, out_dir);
        if (*levels) files = cmd_levelsets(settings, out_dir);
        for (const auto& f : files) {
            std::cout << (fs::path(out_dir) / f).string() << "\n";
        }
        std::cout << (fs::path(out_dir) / "manifest.json").string() << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kComputationError;
    }
}

}  // namespace coinknn::cli
