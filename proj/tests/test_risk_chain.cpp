#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsg/risk_chain.hpp"

using namespace dsg;

namespace {

// direct geometric-sum oracle for the first level:
// T_1 = 2 + Geometric(alpha), so E(delta^{T_1}) = alpha delta^2 / (1 - (1-alpha) delta)
double first_level_oracle(double alpha, double delta) {
    return alpha * delta * delta / (1.0 - (1.0 - alpha) * delta);
}

}  // namespace

TEST_CASE("closed form at level zero is delta") {
    for (double alpha : {0.1, 0.5, 0.9})
        for (double delta : {0.05, 0.5, 0.99}) {
            auto d = DiscountFactor::from_value(delta);
            CHECK(discounted_hit_factor(RiskChain{alpha}, d, 0) == doctest::Approx(delta).epsilon(1e-14));
        }
}

TEST_CASE("golden values at alpha = delta = 1/2") {
    RiskChain ch{0.5};
    auto d = DiscountFactor::from_value(0.5);
    CHECK(discounted_hit_factor(ch, d, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(discounted_hit_factor(ch, d, 2) == doctest::Approx(1.0 / 22.0).epsilon(1e-13));
    CHECK(discounted_hit_recursion(ch, d, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(discounted_hit_recursion(ch, d, 2) == doctest::Approx(1.0 / 22.0).epsilon(1e-13));
}

TEST_CASE("closed form matches the geometric oracle at level one") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9})
        for (double delta : {0.2, 0.5, 0.9, 0.99}) {
            auto d = DiscountFactor::from_value(delta);
            CHECK(discounted_hit_factor(RiskChain{alpha}, d, 1) ==
                  doctest::Approx(first_level_oracle(alpha, delta)).epsilon(1e-12));
        }
}

TEST_CASE("closed form satisfies the recursion across the grid") {
    for (double alpha : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})
        for (double delta : {0.5, 0.9, 0.99}) {
            auto d = DiscountFactor::from_value(delta);
            RiskChain ch{alpha};
            for (long a = 0; a <= 40; ++a) {
                double closed = discounted_hit_factor(ch, d, a);
                double rec = discounted_hit_recursion(ch, d, a);
                CHECK(std::fabs(closed - rec) <= 1e-12 * closed);
            }
        }
}

TEST_CASE("monotone in the level and in the discount") {
    RiskChain ch{0.3};
    for (double delta : {0.5, 0.9, 0.99}) {
        auto d = DiscountFactor::from_value(delta);
        double prev = 1.0;
        for (long a = 0; a <= 30; ++a) {
            double cur = discounted_hit_factor(ch, d, a);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
    }
    for (long a : {1L, 5L, 15L}) {
        double prev = 0.0;
        for (double delta : {0.3, 0.6, 0.9, 0.99, 0.9999}) {
            double cur = discounted_hit_factor(ch, DiscountFactor::from_value(delta), a);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("hitting cannot happen before a+1 periods") {
    for (double alpha : {0.2, 0.5, 0.8})
        for (double delta : {0.5, 0.9})
            for (long a = 1; a <= 20; ++a) {
                auto d = DiscountFactor::from_value(delta);
                CHECK(discounted_hit_factor(RiskChain{alpha}, d, a) <=
                      d.pow(static_cast<double>(a + 1)));
            }
}

TEST_CASE("expected hitting times") {
    RiskChain ch{0.5};
    CHECK(expected_hitting_time(ch, 0) == 1.0);
    CHECK(expected_hitting_time(ch, 1) == 3.0);
    CHECK(expected_hitting_time(ch, 2) == 7.0);

    // Monte Carlo confirmation through the exact-law sampler
    Rng rng(SeedStream{18, 555});
    for (long a : {1L, 2L}) {
        double sum = 0.0;
        const int n = 400000;
        for (int k = 0; k < n; ++k) sum += sample_hitting_time(ch, rng, a, 1e15);
        double exact = expected_hitting_time(ch, a);
        double sd = a == 1 ? 2.0 : 6.0;  // rough upper bounds on the std dev
        CHECK(std::fabs(sum / n - exact) < 5.0 * sd / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("hitting times never beat the level-by-level climb") {
    Rng rng(SeedStream{5, 5});
    for (double alpha : {0.2, 0.7})
        for (long a : {0L, 1L, 4L}) {
            for (int k = 0; k < 2000; ++k) {
                double t = sample_hitting_time(RiskChain{alpha}, rng, a, 1e9);
                CHECK(t >= static_cast<double>(a == 0 ? 1 : a + 1));
                if (a == 0) CHECK(t == 1.0);
            }
        }
}

TEST_CASE("monte carlo honors the closed form") {
    RiskChain ch{0.5};
    auto d = DiscountFactor::from_value(0.5);
    auto mc = hit_factor_mc(ch, d, 1, 100000, SeedStream{18, 0});
    CHECK(std::fabs(mc.estimate.mean - 1.0 / 6.0) <= 3.0 * mc.estimate.stderr_);

    auto mc9 = hit_factor_mc(ch, DiscountFactor::from_value(0.9), 3, 100000, SeedStream{18, 1});
    double closed = discounted_hit_factor(ch, DiscountFactor::from_value(0.9), 3);
    CHECK(std::fabs(mc9.estimate.mean - closed) <= 3.0 * mc9.estimate.stderr_);
}

TEST_CASE("level zero is deterministic") {
    auto mc = hit_factor_mc(RiskChain{0.3}, DiscountFactor::from_value(0.7), 0, 1000,
                            SeedStream{18, 2});
    CHECK(mc.estimate.mean == 0.7);
    CHECK(mc.estimate.stderr_ == 0.0);
}

TEST_CASE("seeded runs are bit-identical") {
    RiskChain ch{0.4};
    auto d = DiscountFactor::from_value(0.8);
    auto a = hit_factor_mc(ch, d, 2, 20000, SeedStream{42, 7});
    auto b = hit_factor_mc(ch, d, 2, 20000, SeedStream{42, 7});
    CHECK(a.estimate.mean == b.estimate.mean);
    CHECK(a.estimate.stderr_ == b.estimate.stderr_);
    auto c = hit_factor_mc(ch, d, 2, 20000, SeedStream{42, 8});
    CHECK(a.estimate.mean != c.estimate.mean);
}

TEST_CASE("domain errors") {
    auto d = DiscountFactor::from_value(0.5);
    CHECK_THROWS_AS(discounted_hit_factor(RiskChain{0.0}, d, 1), std::invalid_argument);
    CHECK_THROWS_AS(discounted_hit_factor(RiskChain{0.5}, d, -1), std::invalid_argument);
    CHECK_THROWS_AS(hit_factor_mc(RiskChain{0.5}, d, 1, 0, SeedStream{}), std::invalid_argument);
}

TEST_CASE("trajectory cap keeps the truncated tail below 1e-12") {
    for (double delta : {0.5, 0.9, 0.99}) {
        auto d = DiscountFactor::from_value(delta);
        long cap = trajectory_cap(d);
        CHECK(std::pow(delta, static_cast<double>(cap)) < 1e-12);
    }
}
