#include "coinknn/densities.hpp"

#include "coinknn/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace coinknn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_cdf_std(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Mass of an untruncated normal on [0, inf).
double normal_kept_mass(const Normal& n) { return 1.0 - normal_cdf_std(-n.mean / n.sigma); }

// f^-1(y) without domain checks; only meaningful for y in the image.
bool in_image(const TransformKind& kind, double y) {
    return std::visit(overloaded{
                          [&](const PowerOfTwo&) { return y > 0.0; },
                          [&](const Square&) { return y >= 0.0; },
                          [&](const Cube&) { return y >= 0.0; },
                          [&](const ExpAlpha&) { return y > 0.0; },
                          [&](const Identity&) { return true; },
                      },
                      kind);
}

}  // namespace

std::string to_string(Group g) { return g == Group::A ? "A" : "B"; }

std::string transform_name(const TransformKind& kind) {
    return std::visit(overloaded{
                          [](const PowerOfTwo&) { return std::string("power2"); },
                          [](const Square&) { return std::string("square"); },
                          [](const Cube&) { return std::string("cube"); },
                          [](const ExpAlpha&) { return std::string("exp"); },
                          [](const Identity&) { return std::string("identity"); },
                      },
                      kind);
}

std::string transform_label(const TransformKind& kind) {
    if (const auto* e = std::get_if<ExpAlpha>(&kind)) {
        return fmt::format("exp({:g})", e->alpha);
    }
    return transform_name(kind);
}

double transform_domain_min(const TransformKind& kind) {
    if (std::holds_alternative<Square>(kind) || std::holds_alternative<Cube>(kind)) {
        return 0.0;
    }
    return -kInf;
}

double transform_apply(const TransformKind& kind, double x) {
    if (!std::isfinite(x)) {
        throw InvalidInput("transform_apply: non-finite input");
    }
    if (x < transform_domain_min(kind)) {
        throw InvalidInput(fmt::format("transform_apply: {} requires x >= 0, got {}", transform_name(kind), x));
    }
    return std::visit(overloaded{
                          [&](const PowerOfTwo&) { return std::exp2(x); },
                          [&](const Square&) { return x * x; },
                          [&](const Cube&) { return x * x * x; },
                          [&](const ExpAlpha& e) {
                              if (!(e.alpha > 0.0)) {
                                  throw InvalidInput("transform_apply: exp transform needs alpha > 0");
                              }
                              return std::exp(e.alpha * x);
                          },
                          [&](const Identity&) { return x; },
                      },
                      kind);
}

double transform_inverse(const TransformKind& kind, double y) {
    if (!std::isfinite(y) || !in_image(kind, y)) {
        throw InvalidInput(fmt::format("transform_inverse: {} is outside the image of {}", y, transform_name(kind)));
    }
    return std::visit(overloaded{
                          [&](const PowerOfTwo&) { return std::log2(y); },
                          [&](const Square&) { return std::sqrt(y); },
                          [&](const Cube&) { return std::cbrt(y); },
                          [&](const ExpAlpha& e) {
                              if (!(e.alpha > 0.0)) {
                                  throw InvalidInput("transform_inverse: exp transform needs alpha > 0");
                              }
                              return std::log(y) / e.alpha;
                          },
                          [&](const Identity&) { return y; },
                      },
                      kind);
}

double transform_derivative(const TransformKind& kind, double x) {
    return std::visit(overloaded{
                          [&](const PowerOfTwo&) { return std::exp2(x) * std::numbers::ln2; },
                          [&](const Square&) { return 2.0 * x; },
                          [&](const Cube&) { return 3.0 * x * x; },
                          [&](const ExpAlpha& e) { return e.alpha * std::exp(e.alpha * x); },
                          [&](const Identity&) { return 1.0; },
                      },
                      kind);
}

void validate(const BaseDensity& base) {
    std::visit(overloaded{
                   [](const Uniform& u) {
                       if (!std::isfinite(u.low) || !std::isfinite(u.high) || !(u.low < u.high)) {
                           throw InvalidInput(fmt::format("uniform base needs low < high, got [{}, {}]", u.low, u.high));
                       }
                       if (u.low < 0.0) {
                           throw InvalidInput(fmt::format("uniform base must lie in [0, inf), got low = {}", u.low));
                       }
                   },
                   [](const Normal& n) {
                       if (!std::isfinite(n.mean) || !std::isfinite(n.sigma) || !(n.sigma > 0.0)) {
                           throw InvalidInput(fmt::format("normal base needs finite mean and sigma > 0, got ({}, {})",
                                                          n.mean, n.sigma));
                       }
                   },
               },
               base);
}

double base_pdf(const BaseDensity& base, double x) {
    return std::visit(overloaded{
                          [&](const Uniform& u) { return (x >= u.low && x <= u.high) ? 1.0 / (u.high - u.low) : 0.0; },
                          [&](const Normal& n) {
                              if (x < 0.0) {
                                  return 0.0;
                              }
                              const double z = (x - n.mean) / n.sigma;
                              return std::exp(-0.5 * z * z) / (n.sigma * std::sqrt(2.0 * std::numbers::pi)) /
                                     normal_kept_mass(n);
                          },
                      },
                      base);
}

double base_cdf(const BaseDensity& base, double x) {
    return std::visit(overloaded{
                          [&](const Uniform& u) {
                              if (x <= u.low) {
                                  return 0.0;
                              }
                              if (x >= u.high) {
                                  return 1.0;
                              }
                              return (x - u.low) / (u.high - u.low);
                          },
                          [&](const Normal& n) {
                              if (x <= 0.0) {
                                  return 0.0;
                              }
                              const double below_zero = normal_cdf_std(-n.mean / n.sigma);
                              return (normal_cdf_std((x - n.mean) / n.sigma) - below_zero) / (1.0 - below_zero);
                          },
                      },
                      base);
}

std::pair<double, double> base_support(const BaseDensity& base) {
    return std::visit(overloaded{
                          [](const Uniform& u) { return std::pair{u.low, u.high}; },
                          [](const Normal&) { return std::pair{0.0, kInf}; },
                      },
                      base);
}

double transformed_pdf(const BaseDensity& base, const TransformKind& kind, double y) {
    if (!std::isfinite(y) || !in_image(kind, y)) {
        return 0.0;
    }
    const double x = transform_inverse(kind, y);
    const double px = base_pdf(base, x);
    if (px == 0.0) {
        return 0.0;
    }
    const double slope = transform_derivative(kind, x);
    return slope > 0.0 ? px / slope : kInf;
}

double transformed_cdf(const BaseDensity& base, const TransformKind& kind, double y) {
    if (std::isnan(y)) {
        throw InvalidInput("transformed_cdf: NaN");
    }
    if (y == kInf) {
        return 1.0;
    }
    if (y == -kInf || !in_image(kind, y)) {
        return 0.0;
    }
    return base_cdf(base, transform_inverse(kind, y));
}

void validate(const GroupSpec& spec) {
    validate(spec.base);
    if (spec.n < 1) {
        throw InvalidInput("group sample count must be >= 1");
    }
    if (const auto* e = std::get_if<ExpAlpha>(&spec.transform); e && !(e->alpha > 0.0 && std::isfinite(e->alpha))) {
        throw InvalidInput(fmt::format("exp transform needs alpha > 0, got {}", e->alpha));
    }
    const double lo = base_support(spec.base).first;
    if (lo < transform_domain_min(spec.transform)) {
        throw InvalidInput(fmt::format("base support starts below the domain of {}", transform_name(spec.transform)));
    }
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) {
    // splitmix64 finalizer
    std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double sample_base(const BaseDensity& base, Rng& rng) {
    return std::visit(overloaded{
                          [&](const Uniform& u) { return std::uniform_real_distribution<double>(u.low, u.high)(rng); },
                          [&](const Normal& n) {
                              std::normal_distribution<double> dist(n.mean, n.sigma);
                              double x = dist(rng);
                              while (x < 0.0) {
                                  x = dist(rng);
                              }
                              return x;
                          },
                      },
                      base);
}

std::vector<Sample1D> sample_group(const GroupSpec& spec, Rng& rng) {
    validate(spec);
    std::vector<Sample1D> out;
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        out.push_back({transform_apply(spec.transform, sample_base(spec.base, rng)), spec.label});
    }
    return out;
}

std::vector<Sample2D> sample_group_2d(const GroupSpec& axis1, const GroupSpec& axis2, Rng& rng) {
    validate(axis1);
    validate(axis2);
    if (axis1.label != axis2.label || axis1.n != axis2.n) {
        throw InvalidInput("sample_group_2d: axes must share label and sample count");
    }
    std::vector<Sample2D> out;
    out.reserve(axis1.n);
    for (std::size_t i = 0; i < axis1.n; ++i) {
        const double x1 = sample_base(axis1.base, rng);
        const double x2 = sample_base(axis2.base, rng);
        out.push_back({transform_apply(axis1.transform, x1), transform_apply(axis2.transform, x2), axis1.label});
    }
    return out;
}

}  // namespace coinknn
