#include "coinknn/densities.hpp"
#include "coinknn/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace coinknn;

namespace {

const std::vector<TransformKind> kAllTransforms{PowerOfTwo{}, Square{}, Cube{}, ExpAlpha{0.2}, Identity{}};

double integrate(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

}  // namespace

TEST_CASE("transform examples") {
    CHECK(transform_apply(Square{}, 3) == 9.0);
    CHECK(transform_apply(PowerOfTwo{}, 3) == 8.0);
    CHECK(transform_apply(ExpAlpha{0.2}, 0) == 1.0);
    CHECK(transform_inverse(PowerOfTwo{}, 8) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(transform_inverse(Cube{}, 27) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(transform_inverse(Identity{}, 4.2) == 4.2);

    CHECK(transform_name(PowerOfTwo{}) == "power2");
    CHECK(transform_name(ExpAlpha{0.2}) == "exp");
    CHECK(transform_label(ExpAlpha{0.2}) == "exp(0.2)");
}

TEST_CASE("transform domain errors") {
    CHECK_THROWS_AS(transform_apply(Square{}, -1.0), InvalidInput);
    CHECK_THROWS_AS(transform_apply(Cube{}, -0.5), InvalidInput);
    CHECK_THROWS_AS(transform_inverse(Square{}, -1.0), InvalidInput);
    CHECK_THROWS_AS(transform_inverse(PowerOfTwo{}, 0.0), InvalidInput);
    CHECK_THROWS_AS(transform_inverse(ExpAlpha{0.2}, -2.0), InvalidInput);
    CHECK_THROWS_AS(transform_apply(ExpAlpha{0.0}, 1.0), InvalidInput);
}

TEST_CASE("transforms are increasing and invert within 1e-12") {
    for (const auto& t : kAllTransforms) {
        double prev = transform_apply(t, 0.01);
        for (double x = 0.02; x < 12.0; x += 0.01) {
            const double y = transform_apply(t, x);
            REQUIRE(y > prev);
            prev = y;
            REQUIRE(std::abs(transform_inverse(t, y) - x) <= 1e-12 * std::max(1.0, x));
            // derivative against a central difference
            const double h = 1e-6;
            const double fd = (transform_apply(t, x + h) - transform_apply(t, x - h)) / (2 * h);
            REQUIRE(transform_derivative(t, x) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("base density validation") {
    CHECK_THROWS_AS(validate(BaseDensity{Uniform{4, 2}}), InvalidInput);
    CHECK_THROWS_AS(validate(BaseDensity{Uniform{-1, 2}}), InvalidInput);
    CHECK_THROWS_AS(validate(BaseDensity{Normal{1, 0}}), InvalidInput);
    CHECK_THROWS_AS(validate(BaseDensity{Normal{std::nan(""), 1}}), InvalidInput);
    CHECK_NOTHROW(validate(BaseDensity{Normal{2.8, 0.333}}));
}

TEST_CASE("transformed_pdf examples") {
    CHECK(transformed_pdf(Uniform{2, 4}, Square{}, 9) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    // outside the image the density vanishes
    CHECK(transformed_pdf(Uniform{2, 4}, Square{}, 3) == 0.0);
    CHECK(transformed_pdf(Uniform{2, 4}, Square{}, 17) == 0.0);
    for (double y : {2.5, 3.0, 3.9}) {
        CHECK(transformed_pdf(Uniform{2, 4}, Identity{}, y) == base_pdf(Uniform{2, 4}, y));
        CHECK(transformed_pdf(Normal{2.8, 0.333}, Identity{}, y) == base_pdf(Normal{2.8, 0.333}, y));
    }
}

TEST_CASE("transformed_pdf integrates to one for every base and transform") {
    const std::vector<BaseDensity> bases{Uniform{2, 4}, Uniform{4, 6}, Normal{2.8, 0.333}, Normal{4.0, 0.333},
                                         Normal{7, 1}, Normal{9, 1}, Normal{11, 1}};
    for (const auto& base : bases) {
        for (const auto& t : kAllTransforms) {
            auto [lo, hi] = base_support(base);
            if (std::holds_alternative<Normal>(base)) {
                const auto& n = std::get<Normal>(base);
                lo = std::max(lo, n.mean - 12 * n.sigma);
                hi = n.mean + 12 * n.sigma;
            }
            const double ylo = transform_apply(t, std::max(lo, 0.0));
            const double yhi = transform_apply(t, hi);
            const double mass = integrate([&](double y) { return transformed_pdf(base, t, y); }, ylo, yhi);
            INFO(transform_name(t));
            CHECK(std::abs(mass - 1.0) <= 1e-6);
            // the cdf is the running integral of the pdf
            const double ymid = transform_apply(t, 0.5 * (std::max(lo, 0.0) + hi));
            const double part = integrate([&](double y) { return transformed_pdf(base, t, y); }, ylo, ymid);
            CHECK(std::abs(part - transformed_cdf(base, t, ymid)) <= 1e-6);
        }
    }
}

TEST_CASE("substream seeds are distinct and deterministic") {
    CHECK(substream_seed(0, 0) == substream_seed(0, 0));
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 10000; ++i) seeds.push_back(substream_seed(42, i));
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
    CHECK(substream_seed(1, 0) != substream_seed(0, 0));
}

TEST_CASE("sample_group support and determinism") {
    const GroupSpec spec{Group::A, Uniform{2, 4}, Identity{}, 5};
    Rng rng(substream_seed(3, 0));
    const auto s = sample_group(spec, rng);
    REQUIRE(s.size() == 5);
    for (const auto& p : s) {
        CHECK(p.y >= 2.0);
        CHECK(p.y <= 4.0);
        CHECK(p.label == Group::A);
    }
    Rng again(substream_seed(3, 0));
    const auto s2 = sample_group(spec, again);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].y == s2[i].y);

    CHECK_THROWS_AS(validate(GroupSpec{Group::A, Uniform{2, 4}, Identity{}, 0}), InvalidInput);
}

TEST_CASE("uniform under square has the analytic mean") {
    const std::size_t n = 100000;
    Rng rng(substream_seed(11, 0));
    const auto s = sample_group(GroupSpec{Group::A, Uniform{2, 4}, Square{}, n}, rng);
    double sum = 0, sum2 = 0;
    for (const auto& p : s) {
        sum += p.y;
        sum2 += p.y * p.y;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(std::abs(mean - 28.0 / 3.0) <= 3 * sd / std::sqrt(double(n)));
}

TEST_CASE("normal under power2 keeps the median") {
    const std::size_t n = 100000;
    Rng rng(substream_seed(12, 0));
    const auto s = sample_group(GroupSpec{Group::A, Normal{2.8, 0.333}, PowerOfTwo{}, n}, rng);
    std::vector<double> ys;
    for (const auto& p : s) {
        REQUIRE(p.y > 0.0);
        ys.push_back(p.y);
    }
    std::nth_element(ys.begin(), ys.begin() + n / 2, ys.end());
    const double median = ys[n / 2];
    // standard error of the median: 1 / (2 p(m) sqrt(n))
    const double se = 1.0 / (2.0 * transformed_pdf(Normal{2.8, 0.333}, PowerOfTwo{}, std::pow(2.0, 2.8)) *
                             std::sqrt(double(n)));
    CHECK(std::abs(median - std::pow(2.0, 2.8)) <= 3 * se);
}

TEST_CASE("sampler matches the analytic cdf (KS, n = 1e5)") {
    const std::size_t n = 100000;
    const double crit = oracle::kKsCritical1Percent / std::sqrt(double(n));
    const std::vector<BaseDensity> bases{Uniform{2, 4}, Normal{2.8, 0.333}, Normal{7, 1}};
    // One substream per base: the statistic is invariant under the monotone transform, so
    // every transform sees the same base draws and must reproduce the same D up to rounding.
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& base = bases[b];
        for (const auto& t : kAllTransforms) {
            Rng rng(substream_seed(99, b));
            std::vector<double> ys;
            for (const auto& p : sample_group(GroupSpec{Group::B, base, t, n}, rng)) ys.push_back(p.y);
            const double d = oracle::ks_statistic(ys, [&](double y) { return transformed_cdf(base, t, y); });
            INFO(transform_name(t), " D=", d);
            CHECK(d < crit);
        }
    }
}

TEST_CASE("KS exceedance rate is consistent with the nominal level") {
    // 200 independent samples of size 1e4 per base; at the 5% level the count of
    // exceedances is Binomial(200, 0.05): mean 10, P(> 22) < 1e-3.
    const std::size_t n = 10000;
    const double crit = oracle::kKsCritical5Percent / std::sqrt(double(n));
    for (const BaseDensity base : {BaseDensity{Uniform{2, 4}}, BaseDensity{Normal{2.8, 0.333}}}) {
        int over = 0;
        for (std::uint64_t s = 0; s < 200; ++s) {
            Rng rng(substream_seed(500, s));
            std::vector<double> xs(n);
            for (auto& x : xs) x = sample_base(base, rng);
            over += oracle::ks_statistic(xs, [&](double x) { return base_cdf(base, x); }) > crit;
        }
        CHECK(over <= 22);
    }
}

TEST_CASE("truncated normal is handled near zero") {
    const Normal close{0.3, 1.0};
    const std::size_t n = 100000;
    Rng rng(substream_seed(5, 5));
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) {
        xs.push_back(sample_base(close, rng));
        REQUIRE(xs.back() >= 0.0);
    }
    CHECK(base_cdf(close, 0.0) == 0.0);
    const double d = oracle::ks_statistic(xs, [&](double x) { return base_cdf(close, x); });
    CHECK(d < oracle::kKsCritical1Percent / std::sqrt(double(n)));
}

TEST_CASE("2D sampler: independent axes, marginals match 1D sampling") {
    const std::size_t n = 10000;
    Rng rng(substream_seed(21, 0));
    const GroupSpec ax1{Group::A, Normal{7, 1}, Identity{}, n};
    const GroupSpec ax2{Group::A, Normal{9, 1}, Identity{}, n};
    const auto pts = sample_group_2d(ax1, ax2, rng);
    REQUIRE(pts.size() == n);
    double m1 = 0, m2 = 0;
    for (const auto& p : pts) {
        m1 += p.y1;
        m2 += p.y2;
    }
    m1 /= n;
    m2 /= n;
    double c12 = 0, v1 = 0, v2 = 0;
    for (const auto& p : pts) {
        c12 += (p.y1 - m1) * (p.y2 - m2);
        v1 += (p.y1 - m1) * (p.y1 - m1);
        v2 += (p.y2 - m2) * (p.y2 - m2);
    }
    CHECK(std::abs(c12 / std::sqrt(v1 * v2)) <= 3.0 / std::sqrt(double(n)));

    const GroupSpec c1{Group::B, Normal{7, 1}, Cube{}, n};
    const GroupSpec c2{Group::B, Normal{9, 1}, Cube{}, n};
    Rng r2(substream_seed(22, 0)), r1(substream_seed(23, 0));
    std::vector<double> a, b;
    for (const auto& p : sample_group_2d(c1, c2, r2)) {
        a.push_back(p.y1);
        CHECK(p.label == Group::B);
    }
    for (const auto& p : sample_group(c1, r1)) b.push_back(p.y);
    const double d = oracle::ks_two_sample(a, b);
    CHECK(d < oracle::kKsCritical5Percent * std::sqrt(2.0 / n));

    CHECK_THROWS_AS(sample_group_2d(c1, GroupSpec{Group::A, Normal{9, 1}, Cube{}, n}, r2), InvalidInput);
}
