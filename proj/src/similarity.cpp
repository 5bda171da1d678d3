#include "coinknn/similarity.hpp"

#include "coinknn/errors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace coinknn {

namespace {

void check_finite(std::span<const double> v, const char* what) {
    if (v.empty()) {
        throw InvalidInput(fmt::format("{}: empty feature vector", what));
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidInput(fmt::format("{}: non-finite feature value", what));
        }
    }
}

void check_pair(std::span<const double> u, std::span<const double> v, const char* what) {
    check_finite(u, what);
    check_finite(v, what);
    if (u.size() != v.size()) {
        throw InvalidInput(fmt::format("{}: length mismatch ({} vs {})", what, u.size(), v.size()));
    }
}

void check_exponents(double d_exponent, double e_exponent) {
    if (!(d_exponent > 0.0) || !std::isfinite(d_exponent)) {
        throw InvalidInput(fmt::format("coincidence: D must be a positive real, got {}", d_exponent));
    }
    if (!(e_exponent >= 0.0) || !std::isfinite(e_exponent)) {
        throw InvalidInput(fmt::format("coincidence: E must be a non-negative real, got {}", e_exponent));
    }
}

double combine(double intersection, double union_mass, double smaller_mass, double d_exponent, double e_exponent) {
    if (union_mass == 0.0) {
        throw UndefinedComparison("coincidence: both vectors are zero");
    }
    if (intersection == 0.0) {
        return 0.0;
    }
    const double jaccard = intersection / union_mass;
    const double interiority = intersection / smaller_mass;
    return std::pow(jaccard, d_exponent) * std::pow(interiority, e_exponent);
}

}  // namespace

FeatureVector::FeatureVector(std::initializer_list<double> values) : FeatureVector(std::vector<double>(values)) {}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
    check_finite(values_, "FeatureVector");
}

NpSet npset_decompose(std::span<const double> v) {
    check_finite(v, "npset_decompose");
    NpSet out;
    out.positive.reserve(v.size());
    out.negative.reserve(v.size());
    for (double x : v) {
        out.positive.push_back(std::max(x, 0.0));
        out.negative.push_back(std::min(x, 0.0));
    }
    return out;
}

double coincidence(std::span<const double> u, std::span<const double> v, double d_exponent, double e_exponent) {
    check_pair(u, v, "coincidence");
    check_exponents(d_exponent, e_exponent);

    double intersection = 0.0;
    double union_mass = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double pu = std::max(u[k], 0.0);
        const double pv = std::max(v[k], 0.0);
        const double nu = -std::min(u[k], 0.0);
        const double nv = -std::min(v[k], 0.0);
        intersection += std::min(pu, pv) + std::min(nu, nv);
        union_mass += std::max(pu, pv) + std::max(nu, nv);
        mass_u += pu + nu;
        mass_v += pv + nv;
    }
    return combine(intersection, union_mass, std::min(mass_u, mass_v), d_exponent, e_exponent);
}

double coincidence_nonneg(std::span<const double> u, std::span<const double> v, double d_exponent,
                          double e_exponent) {
    check_pair(u, v, "coincidence_nonneg");
    check_exponents(d_exponent, e_exponent);

    double min_sum = 0.0;
    double max_sum = 0.0;
    double sum_u = 0.0;
    double sum_v = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] < 0.0 || v[k] < 0.0) {
            throw InvalidInput("coincidence_nonneg: negative coordinate");
        }
        min_sum += std::min(u[k], v[k]);
        max_sum += std::max(u[k], v[k]);
        sum_u += u[k];
        sum_v += v[k];
    }
    return combine(min_sum, max_sum, std::min(sum_u, sum_v), d_exponent, e_exponent);
}

double dissimilarity(std::span<const double> u, std::span<const double> v, double d_exponent, double e_exponent) {
    return 1.0 - coincidence(u, v, d_exponent, e_exponent);
}

double euclidean(std::span<const double> u, std::span<const double> v) {
    check_pair(u, v, "euclidean");
    double sum = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double diff = u[k] - v[k];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

void validate(const ComparatorKind& kind) {
    if (const auto* c = std::get_if<CoincidenceDissimilarity>(&kind)) {
        check_exponents(c->d_exponent, c->e_exponent);
    }
}

std::string comparator_name(const ComparatorKind& kind) {
    if (std::holds_alternative<Euclidean>(kind)) {
        return "euclidean";
    }
    const auto& c = std::get<CoincidenceDissimilarity>(kind);
    return fmt::format("dissimilarity(D={:g},E={:g})", c.d_exponent, c.e_exponent);
}

double compare(const ComparatorKind& kind, std::span<const double> u, std::span<const double> v) {
    if (std::holds_alternative<Euclidean>(kind)) {
        return euclidean(u, v);
    }
    const auto& c = std::get<CoincidenceDissimilarity>(kind);
    return dissimilarity(u, v, c.d_exponent, c.e_exponent);
}

}  // namespace coinknn
