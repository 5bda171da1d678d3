#include "coinknn/experiment.hpp"

#include "coinknn/errors.hpp"
#include "coinknn/parallel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace coinknn {

ExperimentConfig default_config(int dimensions) {
    ExperimentConfig config;
    config.dimensions = dimensions;
    if (dimensions == 2) {
        config.bases_a = {Normal{7.0, 1.0}, Normal{9.0, 1.0}};
        config.bases_b = {Normal{9.0, 1.0}, Normal{11.0, 1.0}};
        config.n_a = config.n_b = 1000;
    } else {
        config.bases_a = {Uniform{2.0, 4.0}};
        config.bases_b = {Uniform{4.0, 6.0}};
        config.n_a = config.n_b = 100;
    }
    config.comparators = {Euclidean{}, CoincidenceDissimilarity{3.0, 1.0}};
    config.k_values.clear();
    for (std::size_t k = 1; k <= 100; ++k) {
        config.k_values.push_back(k);
    }
    return config;
}

void validate(const ExperimentConfig& config) {
    if (config.dimensions != 1 && config.dimensions != 2) {
        throw UnsupportedConfiguration(fmt::format("dimensions must be 1 or 2, got {}", config.dimensions));
    }
    const auto dims = static_cast<std::size_t>(config.dimensions);
    if (config.bases_a.size() != dims || config.bases_b.size() != dims) {
        throw InvalidInput(fmt::format("each group needs exactly {} base densities", dims));
    }
    if (config.n_a < 1 || config.n_b < 1) {
        throw InvalidInput("group sample counts must be >= 1");
    }
    for (std::size_t axis = 0; axis < dims; ++axis) {
        validate(group_spec(config, Group::A, axis));
        validate(group_spec(config, Group::B, axis));
    }
    if (config.comparators.empty()) {
        throw InvalidInput("at least one comparator is required");
    }
    for (const auto& c : config.comparators) {
        validate(c);
    }
    if (config.k_values.empty()) {
        throw InvalidInput("k_values must not be empty");
    }
    for (std::size_t k : config.k_values) {
        if (k < 1 || k > config.n_a + config.n_b) {
            throw InvalidInput(fmt::format("k = {} must be in [1, {}]", k, config.n_a + config.n_b));
        }
    }
    if (config.realizations < 1) {
        throw InvalidInput("realizations must be >= 1");
    }
    // Rejects unsupported base combinations early.
    reference_point(config);
}

GroupSpec group_spec(const ExperimentConfig& config, Group group, std::size_t axis) {
    const auto& bases = group == Group::A ? config.bases_a : config.bases_b;
    if (axis >= bases.size()) {
        throw InvalidInput(fmt::format("group {} has no base for axis {}", to_string(group), axis));
    }
    return GroupSpec{group, bases[axis], config.transform, group == Group::A ? config.n_a : config.n_b};
}

namespace {

double decision_point(const BaseDensity& a, const BaseDensity& b) {
    const auto* ua = std::get_if<Uniform>(&a);
    const auto* ub = std::get_if<Uniform>(&b);
    if (ua && ub) {
        if (ua->high == ub->low) {
            return ua->high;
        }
        if (ub->high == ua->low) {
            return ua->low;
        }
        throw UnsupportedConfiguration("uniform bases must be adjacent (share one endpoint)");
    }
    const auto* na = std::get_if<Normal>(&a);
    const auto* nb = std::get_if<Normal>(&b);
    if (na && nb) {
        if (na->sigma != nb->sigma) {
            throw UnsupportedConfiguration("normal bases must share the same sigma");
        }
        return 0.5 * (na->mean + nb->mean);
    }
    throw UnsupportedConfiguration("groups must use the same base family on each axis");
}

}  // namespace

ReferencePoint reference_point(const ExperimentConfig& config) {
    ReferencePoint ref;
    for (std::size_t axis = 0; axis < config.bases_a.size() && axis < config.bases_b.size(); ++axis) {
        const double x = decision_point(config.bases_a[axis], config.bases_b[axis]);
        ref.x.push_back(x);
        ref.y.push_back(transform_apply(config.transform, x));
    }
    return ref;
}

double accuracy_beta(std::size_t n_a, std::size_t n_b) {
    if (n_a == 0 && n_b == 0) {
        throw InvalidInput("accuracy_beta: both counts are zero");
    }
    return static_cast<double>(std::min(n_a, n_b)) / static_cast<double>(std::max(n_a, n_b));
}

std::vector<LabeledPoint> sample_realization(const ExperimentConfig& config, std::size_t index) {
    Rng rng(substream_seed(config.master_seed, index));
    std::vector<LabeledPoint> points;
    points.reserve(config.n_a + config.n_b);
    for (Group g : {Group::A, Group::B}) {
        if (config.dimensions == 1) {
            for (const auto& s : sample_group(group_spec(config, g, 0), rng)) {
                points.push_back({FeatureVector{s.y}, s.label});
            }
        } else {
            for (const auto& s : sample_group_2d(group_spec(config, g, 0), group_spec(config, g, 1), rng)) {
                points.push_back({FeatureVector{s.y1, s.y2}, s.label});
            }
        }
    }
    return points;
}

RealizationResult run_realization(const ExperimentConfig& config, const ComparatorKind& comparator, std::size_t k,
                                  std::size_t realization_index) {
    validate(config);
    const auto points = sample_realization(config, realization_index);
    const auto ref = reference_point(config);
    const auto counts = count_by_group(k_nearest(ref.y, points, k, comparator));
    return {counts.n_a, counts.n_b, accuracy_beta(counts.n_a, counts.n_b)};
}

std::vector<double> attainable_betas(std::size_t k) {
    std::vector<double> out;
    for (std::size_t m = 0; 2 * m <= k; ++m) {
        out.push_back(accuracy_beta(m, k - m));
    }
    return out;
}

const AccuracyCell& AccuracyStats::cell(std::size_t comparator, std::size_t k) const {
    for (const auto& c : cells) {
        if (c.comparator == comparator && c.k == k) {
            return c;
        }
    }
    throw InvalidInput(fmt::format("no cell for comparator {} and k = {}", comparator, k));
}

namespace {

AccuracyCell summarize(std::size_t comparator, std::size_t k, std::vector<RealizationResult> results) {
    AccuracyCell cell;
    cell.comparator = comparator;
    cell.k = k;

    const auto betas = attainable_betas(k);
    cell.histogram.reserve(betas.size());
    for (double b : betas) {
        cell.histogram.push_back({b, 0});
    }
    cell.coarse_histogram.assign(kCoarseBins, 0);

    double sum = 0.0;
    for (const auto& r : results) {
        sum += r.beta;
        ++cell.histogram[std::min(r.n_a, r.n_b)].count;
        const auto bin = std::min(kCoarseBins - 1, static_cast<std::size_t>(r.beta * kCoarseBins));
        ++cell.coarse_histogram[bin];
    }
    const double n = static_cast<double>(results.size());
    cell.mean_beta = sum / n;
    double sq = 0.0;
    for (const auto& r : results) {
        sq += (r.beta - cell.mean_beta) * (r.beta - cell.mean_beta);
    }
    cell.std_beta = std::sqrt(sq / n);
    cell.realizations = std::move(results);
    return cell;
}

}  // namespace

AccuracyStats run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate(config);
    const auto ref = reference_point(config);
    const std::size_t k_max = *std::max_element(config.k_values.begin(), config.k_values.end());
    const std::size_t n_comp = config.comparators.size();
    const std::size_t n_k = config.k_values.size();

    // per_realization[r][c * n_k + j]
    std::vector<std::vector<RealizationResult>> per_realization(config.realizations);

    parallel_for_index(config.realizations, options.threads, [&](std::size_t r) {
        const auto points = sample_realization(config, r);
        auto& out = per_realization[r];
        out.resize(n_comp * n_k);
        for (std::size_t c = 0; c < n_comp; ++c) {
            const NeighborSet ranked = k_nearest(ref.y, points, k_max, config.comparators[c]);
            // Prefix counts: n_a among the first i neighbors.
            std::vector<std::size_t> prefix_a(k_max + 1, 0);
            for (std::size_t i = 0; i < k_max; ++i) {
                prefix_a[i + 1] = prefix_a[i] + (ranked[i].label == Group::A ? 1 : 0);
            }
            for (std::size_t j = 0; j < n_k; ++j) {
                const std::size_t k = config.k_values[j];
                const std::size_t n_a = prefix_a[k];
                out[c * n_k + j] = {n_a, k - n_a, accuracy_beta(n_a, k - n_a)};
            }
        }
    });

    AccuracyStats stats;
    stats.comparators = config.comparators;
    stats.cells.reserve(n_comp * n_k);
    for (std::size_t c = 0; c < n_comp; ++c) {
        for (std::size_t j = 0; j < n_k; ++j) {
            std::vector<RealizationResult> results;
            results.reserve(config.realizations);
            for (const auto& r : per_realization) {
                results.push_back(r[c * n_k + j]);
            }
            stats.cells.push_back(summarize(c, config.k_values[j], std::move(results)));
        }
    }
    return stats;
}

}  // namespace coinknn
