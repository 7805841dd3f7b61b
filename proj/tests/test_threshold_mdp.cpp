#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsg/risk_chain.hpp"
#include "dsg/threshold_mdp.hpp"

using namespace dsg;

TEST_CASE("score goldens") {
    MdpParams p{0.5, 1.0};
    auto d = DiscountFactor::from_value(0.5);
    CHECK(score(p, d, 0.0) == 0.0);
    CHECK(score(p, d, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(score(p, d, 2.0) == doctest::Approx(3.0 / 88.0).epsilon(1e-13));
}

TEST_CASE("score factors through the hit factor") {
    for (double alpha : {0.2, 0.5, 0.8})
        for (double delta : {0.4, 0.9, 0.99}) {
            auto d = DiscountFactor::from_value(delta);
            for (long a = 0; a <= 12; ++a) {
                double expect = (1.0 - std::pow(alpha, static_cast<double>(a))) *
                                discounted_hit_factor(RiskChain{alpha}, d, a);
                CHECK(score(MdpParams{alpha, 1.0}, d, static_cast<double>(a)) ==
                      doctest::Approx(expect).epsilon(1e-12));
            }
        }
}

TEST_CASE("value and argmax goldens") {
    auto v = mdp_value(MdpParams{0.5, 1.0}, DiscountFactor::from_value(0.5));
    CHECK(v.value == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(v.argmax == 1);

    // the value climbs toward 1 deep on the aligned grid
    MdpParams p{0.1, 1.0};
    auto deep = delta_from_level(p, 8, 0.0);
    CHECK(deep.complement() == doctest::Approx(0.9e-16).epsilon(1e-12));
    CHECK(mdp_value(p, deep).value >= 0.99);

    // and it vanishes with the discount
    CHECK(mdp_value(p, DiscountFactor::from_value(1e-6)).value <= 1e-5);
    CHECK(mdp_value(p, DiscountFactor::from_value(0.0)).value == 0.0);
}

TEST_CASE("critical threshold") {
    MdpParams half{0.5, 1.0};
    CHECK(critical_threshold(half, DiscountFactor::from_value(0.875)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(critical_threshold(half, delta_from_level(half, 3, 0.0)) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(critical_threshold(MdpParams{0.1, 1.0}, DiscountFactor::from_value(0.99)) ==
          doctest::Approx(0.97712125471966249).epsilon(1e-12));
    CHECK_THROWS_AS(critical_threshold(MdpParams{0.9, 1.0}, DiscountFactor::from_value(0.5)),
                    std::invalid_argument);
}

TEST_CASE("grid discounts and the round trip") {
    MdpParams half{0.5, 1.0};
    CHECK(delta_from_level(half, 1, 0.0).value() == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(critical_threshold(half, delta_from_level(half, 1, 0.5)) ==
          doctest::Approx(1.25).epsilon(1e-10));
    for (double alpha : {0.1, 0.37, 0.5})
        for (long a : {0L, 1L, 5L, 20L, 80L})
            for (double eta : {-1.0, 0.0, 0.7, 1.5}) {
                if (2 * a + eta < 0) continue;
                MdpParams p{alpha, 1.0};
                auto d = delta_from_level(p, a, eta);
                CHECK(std::fabs(critical_threshold(p, d) -
                                (static_cast<double>(a) + eta / 2.0)) < 1e-10);
            }
    CHECK_THROWS_AS(delta_from_level(half, 0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(delta_from_level(half, 1, 2.0), std::invalid_argument);
}

TEST_CASE("level-set classification") {
    MdpParams p{0.3, 1.0};
    for (long a : {0L, 2L, 9L}) {
        auto tag = level_set_classify(p, delta_from_level(p, a, 0.0));
        CHECK(tag.tag == LevelSet::Delta1);
        CHECK(tag.nearest_a == a);
        CHECK(std::fabs(tag.eta) <= 2e-9);
    }
    auto mid = level_set_classify(p, delta_from_level(p, 3, 1.0));
    CHECK(mid.tag == LevelSet::Delta2);
    CHECK(std::fabs(mid.eta) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mid.a_star == doctest::Approx(3.5).epsilon(1e-10));
    // frac(a*) = 0.1 sits in neither set
    auto off = level_set_classify(p, delta_from_level(p, 3, 0.2));
    CHECK(off.tag == LevelSet::Neither);
}

TEST_CASE("sandwich bounds hold on a grid and tighten near 1") {
    for (double alpha : {0.1, 0.3, 0.5, 0.7})
        for (double delta : {0.55, 0.9, 0.99, 0.9999}) {
            if (delta < alpha) continue;
            auto b = score_bounds(MdpParams{alpha, 1.0}, DiscountFactor::from_value(delta));
            CHECK(b.lower_at_astar <= b.score_at_astar + 1e-12);
            CHECK(b.score_at_astar <= b.upper_at_astar + 1e-12);
        }
    MdpParams p{0.1, 1.0};
    auto b3 = score_bounds(p, delta_from_level(p, 3, 0.0));
    double ratio = 1e-6 / 0.9 * 0.9;  // (1-delta)/(1-alpha) at level 3
    CHECK(b3.upper_at_astar - b3.lower_at_astar <=
          3.0 * ratio + 2.0 * std::sqrt(ratio) * (std::pow(1.0 - 0.9e-6, -4.0) - 1.0) + 1e-12);
    auto deep = score_bounds(p, delta_from_level(p, 20, 0.0));
    CHECK(deep.lower_at_astar >= 1.0 - 1e-12);
    CHECK(deep.upper_at_astar >= 1.0 - 1e-12);
}

TEST_CASE("asymptotic ratio on the aligned and misaligned grids") {
    MdpParams p{0.1, 1.0};
    for (long a = 5; a <= 12; ++a) {
        auto d = delta_from_level(p, a, 0.0);
        auto v = mdp_value(p, d);
        CHECK(v.argmax == a);  // the critical level is optimal on the grid
    }
    double r10 = asymptotic_ratio(p, delta_from_level(p, 10, 0.0));
    CHECK(std::fabs(r10 - 2.0 / std::sqrt(0.9)) <= 0.05 * 2.0 / std::sqrt(0.9));
    double r2 = asymptotic_ratio(p, delta_from_level(p, 10, 1.0));
    CHECK(r2 >= 0.95 / std::sqrt(std::sqrt(0.1) * 0.9));
}

TEST_CASE("reward scale moves the value, never the argmax") {
    for (double alpha : {0.15, 0.5})
        for (double delta : {0.6, 0.9, 0.999}) {
            auto d = DiscountFactor::from_value(delta);
            auto base = mdp_value(MdpParams{alpha, 1.0}, d);
            for (double reward : {0.5, 7.0}) {
                auto scaled = mdp_value(MdpParams{alpha, reward}, d);
                CHECK(scaled.argmax == base.argmax);
                CHECK(scaled.value == doctest::Approx(reward * base.value).epsilon(1e-12));
            }
        }
}

TEST_CASE("argmax hugs the critical threshold for small alpha") {
    for (double alpha : {0.05, 0.1, 0.2})
        for (double delta : {0.5, 0.9, 0.99, 0.999999}) {
            if (delta < alpha) continue;
            MdpParams p{alpha, 1.0};
            auto d = DiscountFactor::from_value(delta);
            auto v = mdp_value(p, d);
            double a_star = critical_threshold(p, d);
            CHECK(static_cast<double>(v.argmax) >= std::floor(a_star) - 1e-9);
            CHECK(static_cast<double>(v.argmax) <= std::ceil(a_star) + 1e-9);
        }
}

TEST_CASE("bellman oracle agrees with the closed-form scan") {
    auto d5 = DiscountFactor::from_value(0.5);
    auto vi = mdp_vi_oracle(MdpParams{0.5, 1.0}, d5, 40, ViConfig{1e-12, 5'000'000});
    CHECK(vi.value == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
    CHECK(vi.jump_level == 1);

    auto vi2 = mdp_vi_oracle(MdpParams{0.3, 1.0}, DiscountFactor::from_value(0.9), 60, {});
    auto closed = mdp_value(MdpParams{0.3, 1.0}, DiscountFactor::from_value(0.9));
    CHECK(std::fabs(vi2.value - closed.value) <= 1e-8);
    CHECK(vi2.jump_level == closed.argmax);

    CHECK(mdp_vi_oracle(MdpParams{0.5, 1.0}, DiscountFactor::from_value(0.0), 20, {}).value ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(mdp_vi_oracle(MdpParams{0.5, 1.0}, DiscountFactor::from_value(0.9999), 40, {}),
                    std::invalid_argument);
}

TEST_CASE("bellman oracle scales linearly in the reward with a fixed policy") {
    auto d = DiscountFactor::from_value(0.9);
    auto unit = mdp_vi_oracle(MdpParams{0.3, 1.0}, d, 40, {});
    auto twice = mdp_vi_oracle(MdpParams{0.3, 2.0}, d, 40, {});
    CHECK(twice.value == doctest::Approx(2.0 * unit.value).epsilon(1e-9));
    CHECK(twice.jump_level == unit.jump_level);
}

TEST_CASE("cross-oracle agreement over a parameter sweep") {
    for (double alpha : {0.1, 0.2, 0.3, 0.5, 0.7})
        for (double delta : {0.3, 0.6, 0.9, 0.99}) {
            auto d = DiscountFactor::from_value(delta);
            auto closed = mdp_value(MdpParams{alpha, 1.0}, d);
            auto vi = mdp_vi_oracle(MdpParams{alpha, 1.0}, d, 60, {});
            CHECK(std::fabs(closed.value - vi.value) <= 1e-8);
        }
}
