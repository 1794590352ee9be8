#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evp/measures.hpp"

using namespace evp;

TEST_CASE("total weight sums the first n weights") {
    CHECK(total_weight(WeightScheme::constant(), 5) == 5.0);
    CHECK(total_weight(WeightScheme::power(1.0), 4) == 10.0); // 1+2+3+4
    CHECK(total_weight(WeightScheme::power(2.0), 3) == 14.0); // 1+4+9
}

TEST_CASE("total weight is monotone in n and exact for constant weights") {
    const auto scheme = WeightScheme::power(1.5);
    double prev = 0.0;
    for (std::size_t n = 1; n <= 64; ++n) {
        const double d = total_weight(scheme, n);
        CHECK(d > prev);
        prev = d;
    }
    for (std::size_t n : {1u, 10u, 1000u})
        CHECK(total_weight(WeightScheme::constant(), n) == static_cast<double>(n));
}

TEST_CASE("max weight") {
    CHECK(max_weight(WeightScheme::constant(), 7) == 1.0);
    CHECK(max_weight(WeightScheme::power(1.0), 4) == 4.0);
    CHECK(max_weight(WeightScheme::explicit_table({2.0, 5.0, 3.0}), 3) == 5.0);
}

TEST_CASE("explicit tables shorter than n are configuration errors") {
    const auto scheme = WeightScheme::explicit_table({1.0, 2.0});
    CHECK_THROWS_AS(total_weight(scheme, 3), std::invalid_argument);
    CHECK_THROWS_AS(max_weight(scheme, 5), std::invalid_argument);
    CHECK_THROWS_AS(empirical_measure(scheme, 4), std::invalid_argument);
    CHECK_THROWS_AS(WeightScheme::explicit_table({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(WeightScheme::power(-0.5), std::invalid_argument);
}

TEST_CASE("empirical measure atoms and weights") {
    SUBCASE("power beta=1, n=4: weights j/10") {
        const auto dm = empirical_measure(WeightScheme::power(1.0), 4);
        REQUIRE(dm.atoms().size() == 4);
        const double locs[] = {0.25, 0.5, 0.75, 1.0};
        const double wts[] = {0.1, 0.2, 0.3, 0.4};
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(dm.atoms()[k].location == doctest::Approx(locs[k]));
            CHECK(dm.atoms()[k].weight == doctest::Approx(wts[k]));
        }
    }
    SUBCASE("constant, n=2") {
        const auto dm = empirical_measure(WeightScheme::constant(), 2);
        CHECK(dm.atoms()[0].location == 0.5);
        CHECK(dm.atoms()[0].weight == 0.5);
        CHECK(dm.atoms()[1].location == 1.0);
        CHECK(dm.atoms()[1].weight == 0.5);
    }
    SUBCASE("explicit [1,3], n=2") {
        const auto dm = empirical_measure(WeightScheme::explicit_table({1.0, 3.0}), 2);
        CHECK(dm.atoms()[0].weight == doctest::Approx(0.25));
        CHECK(dm.atoms()[1].weight == doctest::Approx(0.75));
    }
}

TEST_CASE("empirical measure weights sum to 1 within 1e-12") {
    for (double beta : {0.0, 0.7, 1.0, 2.0, 3.3}) {
        for (std::size_t n : {1u, 17u, 1000u, 10000u}) {
            const auto dm = empirical_measure(WeightScheme::power(beta), n);
            double sum = 0.0;
            for (const auto& a : dm.atoms()) sum += a.weight;
            CHECK(std::fabs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("H1: max weight over total weight vanishes for power schemes") {
    for (double beta : {0.0, 1.0, 2.0}) {
        const auto scheme = WeightScheme::power(beta);
        for (std::size_t n : {100u, 1000u, 10000u}) {
            const double ratio = max_weight(scheme, n) / total_weight(scheme, n);
            CHECK(ratio < 2.0 * (beta + 1.0) / static_cast<double>(n));
        }
    }
}

TEST_CASE("power limit measure cdf and quantile") {
    SUBCASE("beta=0 is uniform") {
        const auto lm = power_limit_measure(0.0);
        CHECK(lm.cdf(0.0) == 0.0);
        CHECK(lm.cdf(0.3) == doctest::Approx(0.3));
        CHECK(lm.cdf(1.0) == 1.0);
    }
    SUBCASE("beta=1 at t=0.5 agrees with the partial-sum oracle") {
        // Oracle: sum_{j<=n/2} j / sum_{j<=n} j at n = 1e6.
        const double n = 1e6;
        const double half = n / 2.0;
        const double oracle = (half * (half + 1.0) / 2.0) / (n * (n + 1.0) / 2.0);
        const auto lm = power_limit_measure(1.0);
        CHECK(std::fabs(lm.cdf(0.5) - oracle) < 2e-6);
    }
    SUBCASE("beta=2 quantile inverts the cube") {
        const auto lm = power_limit_measure(2.0);
        CHECK(lm.quantile(0.125) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("quantile domain") {
        const auto lm = power_limit_measure(1.0);
        CHECK_THROWS_AS(lm.quantile(0.0), std::domain_error);
        CHECK_THROWS_AS(lm.quantile(1.0), std::domain_error);
    }
}

TEST_CASE("quantile/cdf round trip on a 1000-point grid") {
    const auto check_round_trip = [](const LimitMeasure& lm) {
        for (int k = 1; k < 1000; ++k) {
            const double u = static_cast<double>(k) / 1000.0;
            CHECK(std::fabs(lm.cdf(lm.quantile(u)) - u) < 1e-10);
        }
    };
    check_round_trip(power_limit_measure(0.0));
    check_round_trip(power_limit_measure(1.0));
    check_round_trip(power_limit_measure(2.0));
    // Custom cdf with bisection quantile.
    check_round_trip(LimitMeasure::from_cdf([](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return 0.5 * t + 0.5 * t * t;
    }));
}

TEST_CASE("cdf sup distance against the uniform limit") {
    SUBCASE("constant n=4 vs uniform is 0.25") {
        const auto dm = empirical_measure(WeightScheme::constant(), 4);
        CHECK(cdf_sup_distance(dm, power_limit_measure(0.0)) == doctest::Approx(0.25));
    }
    SUBCASE("constant n=1000 vs uniform is 0.001") {
        const auto dm = empirical_measure(WeightScheme::constant(), 1000);
        CHECK(cdf_sup_distance(dm, power_limit_measure(0.0)) ==
              doctest::Approx(0.001).epsilon(1e-9));
    }
    SUBCASE("a measure against its own step cdf has distance 0") {
        const auto dm = empirical_measure(WeightScheme::power(1.0), 8);
        std::vector<DiscreteMeasure::Atom> atoms = dm.atoms();
        auto step_cdf = [atoms](double t) {
            double cum = 0.0;
            for (const auto& a : atoms) {
                if (a.location <= t)
                    cum += a.weight;
                else
                    break;
            }
            return cum;
        };
        const auto lm = LimitMeasure::from_cdf(step_cdf);
        CHECK(cdf_sup_distance(dm, lm) == 0.0);
    }
    SUBCASE("agrees with a brute-force grid scan") {
        const auto dm = empirical_measure(WeightScheme::power(2.0), 37);
        const auto lm = power_limit_measure(2.0);
        double brute = 0.0;
        const int grid = 2000000;
        for (int k = 0; k <= grid; ++k) {
            const double t = static_cast<double>(k) / grid;
            double cum = 0.0;
            for (const auto& a : dm.atoms())
                if (a.location <= t) cum += a.weight;
            brute = std::max(brute, std::fabs(cum - lm.cdf(t)));
        }
        const double exact = cdf_sup_distance(dm, lm);
        CHECK(exact >= brute - 1e-9);
        CHECK(exact <= brute + 1e-5);
    }
}

TEST_CASE("H1 convergence: sup distance to the power limit decreases and is small") {
    for (double beta : {0.0, 1.0, 2.0}) {
        const auto lm = power_limit_measure(beta);
        double prev = 1.0;
        for (std::size_t n : {10u, 100u, 1000u}) {
            const double d = cdf_sup_distance(empirical_measure(WeightScheme::power(beta), n), lm);
            CHECK(d < prev);
            prev = d;
        }
        CHECK(prev < 0.01); // n = 1000
    }
}

TEST_CASE("frechet tail measure") {
    const auto gamma = TailMeasure::frechet(2.0);
    CHECK(gamma.alpha() == 2.0);
    CHECK(gamma.tail(0.1) == doctest::Approx(100.0));
    CHECK(gamma.tail(10.0) == doctest::Approx(0.01));
    SUBCASE("tail is strictly decreasing and vanishes at infinity") {
        double prev = gamma.tail(0.01);
        for (double x : {0.1, 1.0, 10.0, 1e3, 1e6}) {
            CHECK(gamma.tail(x) < prev);
            prev = gamma.tail(x);
        }
        CHECK(gamma.tail(1e12) < 1e-20);
    }
    SUBCASE("inverse tail round trip within relative 1e-10") {
        for (double x = 0.125; x < 1e4; x *= 1.7) {
            const double y = gamma.inverse_tail(gamma.tail(x));
            CHECK(std::fabs(y - x) <= 1e-10 * x);
        }
    }
}

TEST_CASE("discrete measure invariants are enforced") {
    CHECK_THROWS_AS(DiscreteMeasure({{0.5, 0.6}, {0.4, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure({{0.5, 0.6}, {0.6, 0.5}}), std::invalid_argument);
    CHECK_NOTHROW(DiscreteMeasure({{0.5, 0.5}, {1.0, 0.5}}));
}
