#pragma once

/**
 * @file experiment.hpp
 *
 * Accuracy of k-NN at the decision point between two groups.
 *
 * Each realization resamples both groups from its own RNG substream, retrieves the
 * k points closest to the transformed decision point P_y = f(P_x) and records how
 * many belong to each group. The accuracy index beta = min(n_A, n_B) / max(n_A, n_B)
 * is 1 when the neighborhood is perfectly balanced.
 *
 * Realizations may run on any number of threads; every reduction is done in
 * realization-index order, so results do not depend on the thread count.
 */

#include "coinknn/densities.hpp"
#include "coinknn/knn.hpp"
#include "coinknn/similarity.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coinknn {

struct ExperimentConfig {
    std::string experiment_id = "experiment";
    int dimensions = 1;
    TransformKind transform = Identity{};
    /// One base per axis.
    std::vector<BaseDensity> bases_a;
    std::vector<BaseDensity> bases_b;
    std::size_t n_a = 100;
    std::size_t n_b = 100;
    std::vector<ComparatorKind> comparators;
    std::vector<std::size_t> k_values;
    std::size_t realizations = 1000;
    std::uint64_t master_seed = 0;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/**
 * Defaults for a 1D or 2D experiment.
 *
 * 1D: A = U(2,4), B = U(4,6), 100 points each.
 * 2D: A = N(7,1) x N(9,1), B = N(9,1) x N(11,1), 1000 points each.
 * Both: Euclidean and dissimilarity(D=3,E=1), k = 1..100, R = 1000, seed 0.
 */
ExperimentConfig default_config(int dimensions = 1);

/// Throws InvalidInput or UnsupportedConfiguration.
void validate(const ExperimentConfig& config);

GroupSpec group_spec(const ExperimentConfig& config, Group group, std::size_t axis);

struct ReferencePoint {
    std::vector<double> x;  ///< decision point on the base features
    std::vector<double> y;  ///< f(x), axis by axis
};

/// Shared boundary of adjacent uniforms or midpoint of equal-sigma normals, per axis.
ReferencePoint reference_point(const ExperimentConfig& config);

/// beta = min / max; 0 when exactly one count is zero. Throws InvalidInput when both are zero.
double accuracy_beta(std::size_t n_a, std::size_t n_b);

/// Group A points followed by group B points, drawn from realization `index`'s substream.
std::vector<LabeledPoint> sample_realization(const ExperimentConfig& config, std::size_t index);

struct RealizationResult {
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    double beta = 0.0;
    friend bool operator==(const RealizationResult&, const RealizationResult&) = default;
};

RealizationResult run_realization(const ExperimentConfig& config, const ComparatorKind& comparator, std::size_t k,
                                  std::size_t realization_index);

struct BetaBin {
    double beta = 0.0;   ///< attainable value m / (k - m)
    std::size_t count = 0;
    friend bool operator==(const BetaBin&, const BetaBin&) = default;
};

struct AccuracyCell {
    std::size_t comparator = 0;  ///< index into AccuracyStats::comparators
    std::size_t k = 0;
    double mean_beta = 0.0;
    double std_beta = 0.0;  ///< population standard deviation over realizations
    /// One bin per attainable beta for this k, ascending.
    std::vector<BetaBin> histogram;
    /// 20 equal bins on [0, 1]; the last bin is closed.
    std::vector<std::size_t> coarse_histogram;
    /// Per-realization results, by realization index.
    std::vector<RealizationResult> realizations;
    friend bool operator==(const AccuracyCell&, const AccuracyCell&) = default;
};

struct AccuracyStats {
    std::vector<ComparatorKind> comparators;
    /// Comparator-major, then k in config order.
    std::vector<AccuracyCell> cells;

    const AccuracyCell& cell(std::size_t comparator, std::size_t k) const;
};

inline constexpr std::size_t kCoarseBins = 20;

/// Sorted list of every value beta can take for k neighbors.
std::vector<double> attainable_betas(std::size_t k);

struct RunOptions {
    std::size_t threads = 0;  ///< 0 = machine parallelism
};

AccuracyStats run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace coinknn
