#include "coinknn/errors.hpp"
#include "coinknn/similarity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace coinknn;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t m, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(m);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("npset_decompose splits positive and negative masses") {
    auto s = npset_decompose(std::vector<double>{3, -2, 0});
    CHECK(s.positive == std::vector<double>{3, 0, 0});
    CHECK(s.negative == std::vector<double>{0, -2, 0});

    s = npset_decompose(std::vector<double>{0, 0});
    CHECK(s.positive == std::vector<double>{0, 0});
    CHECK(s.negative == std::vector<double>{0, 0});

    s = npset_decompose(std::vector<double>{1.5, 2.5});
    CHECK(s.positive == std::vector<double>{1.5, 2.5});
    CHECK(s.negative == std::vector<double>{0, 0});

    CHECK_THROWS_AS(npset_decompose(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}),
                    InvalidInput);
}

TEST_CASE("npset masses reconstruct the vector") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 1000; ++t) {
        const auto v = random_vector(rng, 1 + t % 8, -5, 5);
        const auto s = npset_decompose(v);
        for (std::size_t k = 0; k < v.size(); ++k) {
            CHECK(s.positive[k] + s.negative[k] == v[k]);
            CHECK((s.positive[k] == 0.0 || s.negative[k] == 0.0));
        }
    }
}

TEST_CASE("coincidence matches hand-evaluated examples") {
    const std::vector<double> u{2, 2}, v{1, 1};
    CHECK(oracle::coincidence(u, v, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(coincidence(u, v, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(coincidence(u, v, 3, 1) == doctest::Approx(0.125).epsilon(1e-12));

    const std::vector<double> w{1, 2, 3};
    for (double d : {0.5, 1.0, 3.0, 7.0}) {
        for (double e : {0.0, 1.0, 2.5}) {
            CHECK(coincidence(w, w, d, e) == 1.0);
        }
    }

    // signed masses: intersection 1, union 3, smaller total 2
    CHECK(oracle::coincidence({1, -1}, {1, 1}, 1, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(coincidence(std::vector<double>{1, -1}, std::vector<double>{1, 1}, 1, 1) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("coincidence error paths") {
    const std::vector<double> zero{0, 0};
    CHECK_THROWS_AS(coincidence(zero, zero, 3, 1), UndefinedComparison);
    CHECK_THROWS_AS(coincidence(std::vector<double>{1, 2}, std::vector<double>{1}, 3, 1), InvalidInput);
    CHECK_THROWS_AS(coincidence(std::vector<double>{1}, std::vector<double>{1}, 0, 1), InvalidInput);
    CHECK_THROWS_AS(coincidence(std::vector<double>{1}, std::vector<double>{1}, 1, -1), InvalidInput);
    CHECK_THROWS_AS(coincidence(std::vector<double>{1}, std::vector<double>{std::numeric_limits<double>::infinity()}, 1, 1),
                    InvalidInput);
    // one zero vector is fine and shares nothing
    CHECK(coincidence(zero, std::vector<double>{1, 0}, 3, 1) == 0.0);
}

TEST_CASE("coincidence_nonneg examples and errors") {
    CHECK(coincidence_nonneg(std::vector<double>{2, 2}, std::vector<double>{1, 1}, 1, 1) ==
          doctest::Approx(0.5).epsilon(1e-12));
    for (double d : {1.0, 3.0}) {
        for (double e : {0.0, 1.0}) {
            CHECK(coincidence_nonneg(std::vector<double>{1, 0}, std::vector<double>{0, 1}, d, e) == 0.0);
        }
    }
    CHECK(coincidence_nonneg(std::vector<double>{6, 6}, std::vector<double>{3, 3}, 1, 1) ==
          doctest::Approx(coincidence(std::vector<double>{2, 2}, std::vector<double>{1, 1}, 1, 1)).epsilon(1e-12));
    CHECK_THROWS_AS(coincidence_nonneg(std::vector<double>{1, -1}, std::vector<double>{1, 1}, 1, 1), InvalidInput);
    CHECK_THROWS_AS(coincidence_nonneg(std::vector<double>{0}, std::vector<double>{0}, 1, 1), UndefinedComparison);
}

TEST_CASE("dissimilarity and euclidean examples") {
    const std::vector<double> u{2, 2}, v{1, 1};
    CHECK(dissimilarity(u, u, 3, 1) == 0.0);
    CHECK(dissimilarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}, 3, 1) == 1.0);
    CHECK(dissimilarity(u, v, 1, 1) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(euclidean(std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 5.0);
    CHECK(euclidean(std::vector<double>{7}, std::vector<double>{7}) == 0.0);
    CHECK(euclidean(std::vector<double>{1}, std::vector<double>{4}) == 3.0);
    CHECK_THROWS_AS(euclidean(std::vector<double>{1, 2}, std::vector<double>{1}), InvalidInput);
}

TEST_CASE("compare dispatches with smaller meaning closer") {
    CHECK(compare(Euclidean{}, std::vector<double>{0}, std::vector<double>{3}) == 3.0);
    CHECK(compare(CoincidenceDissimilarity{3, 1}, std::vector<double>{2, 2}, std::vector<double>{2, 2}) == 0.0);
    CHECK(compare(CoincidenceDissimilarity{1, 1}, std::vector<double>{2, 2}, std::vector<double>{1, 1}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(comparator_name(Euclidean{}) == "euclidean");
    CHECK(comparator_name(CoincidenceDissimilarity{3, 1}) == "dissimilarity(D=3,E=1)");
    CHECK_THROWS_AS(compare(CoincidenceDissimilarity{-1, 1}, std::vector<double>{1}, std::vector<double>{1}),
                    InvalidInput);
}

TEST_CASE("FeatureVector rejects non-finite and empty input") {
    CHECK_THROWS_AS(FeatureVector({1.0, std::numeric_limits<double>::infinity()}), InvalidInput);
    CHECK_THROWS_AS(FeatureVector(std::vector<double>{}), InvalidInput);
    const FeatureVector f{1.0, 2.0};
    CHECK(f.size() == 2);
    CHECK(f[1] == 2.0);
}

TEST_CASE("bounds, symmetry and identity over random pairs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> exp_d(0.05, 8.0), exp_e(0.0, 4.0);
    for (int t = 0; t < 100000; ++t) {
        const std::size_t m = 1 + static_cast<std::size_t>(t % 8);
        const auto u = random_vector(rng, m, -10, 10);
        const auto v = random_vector(rng, m, -10, 10);
        const double d = exp_d(rng), e = exp_e(rng);
        const double c = coincidence(u, v, d, e);
        REQUIRE(c >= 0.0);
        REQUIRE(c <= 1.0);
        const double delta = dissimilarity(u, v, d, e);
        REQUIRE(delta >= 0.0);
        REQUIRE(delta <= 1.0);
        REQUIRE(c == coincidence(v, u, d, e));
        REQUIRE(euclidean(u, v) == euclidean(v, u));
        REQUIRE(coincidence(u, u, d, e) == 1.0);
    }
}

TEST_CASE("scale invariance of coincidence, homogeneity of euclidean") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_gamma(std::log(1e-3), std::log(1e3));
    for (int t = 0; t < 10000; ++t) {
        const std::size_t m = 1 + static_cast<std::size_t>(t % 8);
        auto u = random_vector(rng, m, -10, 10);
        auto v = random_vector(rng, m, -10, 10);
        const double gamma = std::exp(log_gamma(rng));
        std::vector<double> gu(u), gv(v);
        for (auto& x : gu) x *= gamma;
        for (auto& x : gv) x *= gamma;
        REQUIRE(std::abs(coincidence(gu, gv, 3, 1) - coincidence(u, v, 3, 1)) <= 1e-12);
        REQUIRE(std::abs(euclidean(gu, gv) - gamma * euclidean(u, v)) <= 1e-12 * std::max(1.0, gamma * euclidean(u, v)));
    }
}

TEST_CASE("general and non-negative forms agree") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20000; ++t) {
        const std::size_t m = 1 + static_cast<std::size_t>(t % 8);
        const auto u = random_vector(rng, m, 0, 10);
        const auto v = random_vector(rng, m, 0, 10);
        REQUIRE(std::abs(coincidence_nonneg(u, v, 3, 1) - coincidence(u, v, 3, 1)) <= 1e-12);
        REQUIRE(std::abs(coincidence_nonneg(u, v, 0.7, 2.0) - coincidence(u, v, 0.7, 2.0)) <= 1e-12);
    }
}

namespace {

// Exhaustive pairwise check that two D values rank every pair of pairs the same way.
void check_rank_invariance(std::size_t m, double e, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pool;
    for (int i = 0; i < 60; ++i) {
        pool.emplace_back(random_vector(rng, m, 0.1, 10), random_vector(rng, m, 0.1, 10));
    }
    const double ds[] = {0.5, 1.0, 3.0, 5.0};
    for (std::size_t a = 0; a < pool.size(); ++a) {
        for (std::size_t b = 0; b < pool.size(); ++b) {
            const bool ref = coincidence(pool[a].first, pool[a].second, ds[0], e) >=
                             coincidence(pool[b].first, pool[b].second, ds[0], e);
            for (double d : ds) {
                const bool got = coincidence(pool[a].first, pool[a].second, d, e) >=
                                 coincidence(pool[b].first, pool[b].second, d, e);
                REQUIRE(got == ref);
            }
        }
    }
}

}  // namespace

TEST_CASE("ranking does not depend on D for scalars or without interiority") {
    // M = 1: interiority is identically 1 on same-sign values, so C = J^D.
    for (double e : {0.0, 1.0, 2.0}) {
        check_rank_invariance(1, e, 5);
    }
    // E = 0: C = J^D for any M.
    for (std::size_t m : {2u, 3u, 8u}) {
        check_rank_invariance(m, 0.0, 17 + m);
    }
}

TEST_CASE("with E > 0 and M >= 2 the ranking can change with D") {
    // (J, I) = (0.5, 1) versus (0.6, 0.75).
    const std::vector<double> u{2, 2}, v{1, 1};
    const std::vector<double> r{1, 0.6}, s{0.6, 1};
    const double c1_d1 = coincidence(u, v, 1, 1), c2_d1 = coincidence(r, s, 1, 1);
    const double c1_d5 = coincidence(u, v, 5, 1), c2_d5 = coincidence(r, s, 5, 1);
    CHECK((c1_d1 >= c2_d1) != (c1_d5 >= c2_d5));
}
