#pragma once

/**
 * @file densities.hpp
 *
 * Monotone feature transforms, symmetric base densities and the densities they
 * induce on the transformed feature, plus seeded samplers for 1D groups and
 * separable 2D groups.
 *
 * Normal bases are truncated at x = 0 (negative draws are resampled) so that all
 * features stay non-negative. The analytic pdf and cdf account for the truncation.
 */

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace coinknn {

enum class Group { A, B };

std::string to_string(Group g);

struct PowerOfTwo {
    friend bool operator==(const PowerOfTwo&, const PowerOfTwo&) = default;
};
struct Square {
    friend bool operator==(const Square&, const Square&) = default;
};
struct Cube {
    friend bool operator==(const Cube&, const Cube&) = default;
};
struct ExpAlpha {
    double alpha = 0.2;
    friend bool operator==(const ExpAlpha&, const ExpAlpha&) = default;
};
struct Identity {
    friend bool operator==(const Identity&, const Identity&) = default;
};

/// y = 2^x, x^2, x^3, e^{alpha x} or x. All strictly increasing on their domain.
using TransformKind = std::variant<PowerOfTwo, Square, Cube, ExpAlpha, Identity>;

/// "power2", "square", "cube", "exp" or "identity".
std::string transform_name(const TransformKind& kind);

/// Like transform_name, but carries alpha for ExpAlpha ("exp(0.2)").
std::string transform_label(const TransformKind& kind);

double transform_apply(const TransformKind& kind, double x);
double transform_inverse(const TransformKind& kind, double y);
/// f'(x)
double transform_derivative(const TransformKind& kind, double x);
/// Lower end of the domain; Square and Cube are restricted to x >= 0.
double transform_domain_min(const TransformKind& kind);

struct Uniform {
    double low = 0.0;
    double high = 1.0;
    friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Normal {
    double mean = 0.0;
    double sigma = 1.0;
    friend bool operator==(const Normal&, const Normal&) = default;
};

using BaseDensity = std::variant<Uniform, Normal>;

/// Throws InvalidInput unless low < high, low >= 0, sigma > 0 and all values finite.
void validate(const BaseDensity& base);

/// Density of the base on x (normal truncated to [0, inf)).
double base_pdf(const BaseDensity& base, double x);
double base_cdf(const BaseDensity& base, double x);

/// [lo, hi] of the base support; hi is +inf for normals.
std::pair<double, double> base_support(const BaseDensity& base);

/// p_y(y) = p_x(f^-1(y)) / f'(f^-1(y)); zero outside the image of the support.
double transformed_pdf(const BaseDensity& base, const TransformKind& kind, double y);

/// F_y(y) = F_x(f^-1(y)).
double transformed_cdf(const BaseDensity& base, const TransformKind& kind, double y);

struct GroupSpec {
    Group label = Group::A;
    BaseDensity base = Uniform{};
    TransformKind transform = Identity{};
    std::size_t n = 1;
};

void validate(const GroupSpec& spec);

struct Sample1D {
    double y = 0.0;
    Group label = Group::A;
};

struct Sample2D {
    double y1 = 0.0;
    double y2 = 0.0;
    Group label = Group::A;
};

using Rng = std::mt19937_64;

/// Seed of realization `index`'s substream: splitmix64(master + golden * (index + 1)).
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index);

/// One draw of x from the base (normal draws below zero are rejected).
double sample_base(const BaseDensity& base, Rng& rng);

/// n draws of x from spec.base, each emitted as f(x).
std::vector<Sample1D> sample_group(const GroupSpec& spec, Rng& rng);

/// Independent axes; for every point x1 is drawn before x2. Both specs need the same label and n.
std::vector<Sample2D> sample_group_2d(const GroupSpec& axis1, const GroupSpec& axis2, Rng& rng);

}  // namespace coinknn
