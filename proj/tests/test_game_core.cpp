#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsg/classic_examples.hpp"
#include "dsg/discount.hpp"
#include "dsg/game_json.hpp"
#include "dsg/linalg.hpp"
#include "dsg/risk_chain.hpp"
#include "dsg/rng.hpp"
#include "dsg/stochastic_game.hpp"

using namespace dsg;

TEST_CASE("discount representation round trips") {
    auto d = DiscountFactor::from_value(0.5);
    CHECK(d.complement() == 0.5);
    CHECK(d.value() == 0.5);
    auto tiny = DiscountFactor::from_complement(0.9e-16);
    CHECK(tiny.complement() == 0.9e-16);
    // below half an ulp of 1, delta itself rounds to 1: the complement is the
    // only faithful representation there
    CHECK(DiscountFactor::from_complement(2e-17).value() == 1.0);
    auto deep = DiscountFactor::from_log_complement(-5000.0);
    CHECK(deep.complement() == 0.0);
    CHECK(deep.log_complement() == -5000.0);
    CHECK(deep.deep());
    CHECK_THROWS_AS(DiscountFactor::from_value(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DiscountFactor::from_complement(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DiscountFactor::from_log_complement(0.5), std::invalid_argument);
}

TEST_CASE("discount powers near one") {
    auto d = DiscountFactor::from_complement(1e-12);
    CHECK(d.pow(0.0) == 1.0);
    CHECK(d.pow(1e6) == doctest::Approx(std::exp(-1e-6)).epsilon(1e-12));
}

TEST_CASE("seed streams split deterministically") {
    Rng a(SeedStream{12345, 3}), b(SeedStream{12345, 3}), c(SeedStream{12345, 4});
    bool all_equal = true, any_diff = false;
    for (int k = 0; k < 100; ++k) {
        auto x = a.bits(), y = b.bits(), z = c.bits();
        all_equal = all_equal && x == y;
        any_diff = any_diff || x != z;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("mc engine basics") {
    auto det = mc_mean([](Rng&) { return 0.25; }, 1000, SeedStream{1, 1});
    CHECK(det.mean == 0.25);
    CHECK(det.stderr_ == 0.0);
    auto coin = mc_mean([](Rng& r) { return r.uniform() < 0.5 ? 1.0 : 0.0; }, 100000,
                        SeedStream{1, 2});
    CHECK(std::fabs(coin.mean - 0.5) <= 3.0 * coin.stderr_);
    CHECK_THROWS_AS(mc_mean([](Rng&) { return 0.0; }, 0, SeedStream{}), std::invalid_argument);
}

TEST_CASE("dense solver on a known system") {
    auto x = solve_dense({{2.0, 1.0}, {1.0, 3.0}}, {5.0, 10.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(3.0));
}

TEST_CASE("game validation catches broken tables") {
    auto g = make_example1_game();
    CHECK_NOTHROW(g.validate());
    auto bad = g;
    bad.transition[0][0][0][0].prob = 0.9;  // no longer sums to 1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    auto bad2 = g;
    bad2.transition[3][0][0] = {{0, 1.0}};  // absorbing state leaks out
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

namespace {

StationaryProfile pure_profile(const FiniteStochasticGame& g, const std::vector<int>& i1,
                               const std::vector<int>& i2) {
    StationaryProfile p;
    p.act1.resize(g.n_states());
    p.act2.resize(g.n_states());
    for (int s = 0; s < g.n_states(); ++s) {
        p.act1[s].probs.assign(g.actions1[s].size(), 0.0);
        p.act1[s].probs[i1[s]] = 1.0;
        p.act2[s].probs.assign(g.actions2[s].size(), 0.0);
        p.act2[s].probs[i2[s]] = 1.0;
    }
    return p;
}

}  // namespace

TEST_CASE("absorbing states repeat their payoff at every discount") {
    auto g = make_example1_game();
    for (double delta : {0.1, 0.5, 0.97}) {
        auto v = eval_discounted_payoffs(g, pure_profile(g, {0, 0, 0, 0, 0, 0, 0},
                                                         {0, 0, 0, 0, 0, 0, 0}),
                                         DiscountFactor::from_value(delta));
        CHECK(v[3].p1 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v[3].p2 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v[5].p1 == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(v[6].p2 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("locking in the safe door pays (1/2, 0) at any discount") {
    auto g = make_example1_game();
    // player 1 plays the top action at k1; the rest is irrelevant
    auto prof = pure_profile(g, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0});
    for (double delta : {0.2, 0.5, 0.9, 0.99}) {
        auto v = eval_discounted_payoffs(g, prof, DiscountFactor::from_value(delta));
        CHECK(v[0].p1 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v[0].p2 == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("split play through the bimatrix stage reaches the even division") {
    auto g = make_example1_game();
    for (long n : {1L, 2L, 5L}) {
        double delta = std::pow(0.5, 1.0 / static_cast<double>(n));
        // (T,L) for n stages, then (B,R) forever, from the bimatrix state
        MarkovProfile prof;
        prof.stages.assign(static_cast<std::size_t>(n),
                           pure_profile(g, {0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0}));
        prof.tail = pure_profile(g, {0, 0, 1, 0, 0, 0, 0}, {0, 1, 1, 0, 0, 0, 0});
        auto v = eval_discounted_payoffs(g, prof, DiscountFactor::from_value(delta));
        CHECK(v[2].p1 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v[2].p2 == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("linear evaluation agrees with the truncated series") {
    auto g = make_example15_game();
    StationaryProfile prof;
    prof.act1.resize(g.n_states());
    prof.act2.resize(g.n_states());
    for (int s = 0; s < g.n_states(); ++s) {
        prof.act1[s].probs = {1.0 / 3.0, 2.0 / 3.0};
        prof.act2[s].probs = {0.2, 0.3, 0.5};
    }
    for (double delta : {0.4, 0.9}) {
        auto d = DiscountFactor::from_value(delta);
        long horizon = trajectory_cap(d);
        auto exact = eval_discounted_payoffs(g, prof, d);
        auto series = eval_truncated(g, prof, d, horizon);
        double bound = std::pow(delta, static_cast<double>(horizon)) * 60.0;
        for (int s = 0; s < g.n_states(); ++s) {
            CHECK(std::fabs(exact[s].p1 - series[s].p1) <= bound + 1e-12);
            CHECK(std::fabs(exact[s].p2 - series[s].p2) <= bound + 1e-12);
        }
    }
}

TEST_CASE("profile validation") {
    auto g = make_example1_game();
    StationaryProfile p;  // wrong dimensions
    CHECK_THROWS_AS(eval_discounted_payoffs(g, p, DiscountFactor::from_value(0.5)),
                    std::invalid_argument);
}

TEST_CASE("game json round trip") {
    auto g = make_example15_game();
    auto j = to_json(g);
    auto g2 = fsg_from_json(j);
    CHECK(to_json(g2) == j);
    // and through text
    auto g3 = fsg_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(g3) == j);
}
