#pragma once

/**
 * @file similarity.hpp
 *
 * Comparators between real feature vectors: the coincidence similarity index
 * (a signed multiset Jaccard ratio raised to D times an interiority ratio raised
 * to E), its dissimilarity 1 - C, and the Euclidean distance.
 *
 * All functions are pure and thread-safe.
 */

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace coinknn {

/// Ordered list of M >= 1 finite feature values.
class FeatureVector {
public:
    FeatureVector() = default;
    FeatureVector(std::initializer_list<double> values);
    explicit FeatureVector(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    operator std::span<const double>() const noexcept { return values_; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::vector<double> values_;
};

/// Positive/negative mass decomposition of a vector. positive[k] + negative[k] == v[k].
struct NpSet {
    std::vector<double> positive;
    std::vector<double> negative;
};

NpSet npset_decompose(std::span<const double> v);

/**
 * General signed coincidence index.
 *
 * With np-set masses p(.) and n(.):
 *   inter = sum_k min(p_u, p_v) + min(|n_u|, |n_v|)
 *   uni   = sum_k max(p_u, p_v) + max(|n_u|, |n_v|)
 *   C     = (inter / uni)^D * (inter / min(|u|_1, |v|_1))^E
 *
 * Throws InvalidInput on length mismatch, empty or non-finite input, D <= 0 or E < 0;
 * UndefinedComparison when both vectors are zero.
 */
double coincidence(std::span<const double> u, std::span<const double> v, double d_exponent, double e_exponent);

/// min/max form of the coincidence index; every coordinate must be >= 0.
double coincidence_nonneg(std::span<const double> u, std::span<const double> v, double d_exponent,
                          double e_exponent);

/// 1 - coincidence(u, v, D, E).
double dissimilarity(std::span<const double> u, std::span<const double> v, double d_exponent, double e_exponent);

double euclidean(std::span<const double> u, std::span<const double> v);

struct Euclidean {
    friend bool operator==(const Euclidean&, const Euclidean&) = default;
};

struct CoincidenceDissimilarity {
    double d_exponent = 3.0;
    double e_exponent = 1.0;
    friend bool operator==(const CoincidenceDissimilarity&, const CoincidenceDissimilarity&) = default;
};

using ComparatorKind = std::variant<Euclidean, CoincidenceDissimilarity>;

/// Throws InvalidInput if D <= 0 or E < 0.
void validate(const ComparatorKind& kind);

/// Short stable name used in reports, e.g. "euclidean" or "dissimilarity(D=3,E=1)".
std::string comparator_name(const ComparatorKind& kind);

/// Smaller is always closer: Euclidean distance or coincidence dissimilarity.
double compare(const ComparatorKind& kind, std::span<const double> u, std::span<const double> v);

}  // namespace coinknn
