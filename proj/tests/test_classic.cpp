#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dsg/classic_examples.hpp"
#include "dsg/rng.hpp"

using namespace dsg;

TEST_CASE("grid membership decides the equilibrium set") {
    auto on3 = ex1_regime(std::pow(0.5, 1.0 / 3.0));
    REQUIRE(on3.n_periods.has_value());
    CHECK(*on3.n_periods == 3);
    CHECK(on3.set.kind == EquilibriumSet::Kind::Segment);
    CHECK(on3.set.points[0].p1 == 0.5);
    CHECK(on3.set.points[1].p2 == 0.5);

    auto off = ex1_regime(0.75);
    CHECK(!off.n_periods.has_value());
    CHECK(off.set.kind == EquilibriumSet::Kind::Singleton);
    CHECK(off.set.points[0].p1 == 0.5);
    CHECK(off.set.points[0].p2 == 0.0);

    auto on1 = ex1_regime(0.5);
    REQUIRE(on1.n_periods.has_value());
    CHECK(*on1.n_periods == 1);
}

TEST_CASE("the dichotomy over random discounts") {
    Rng rng(SeedStream{3, 0});
    int segments = 0;
    for (int k = 0; k < 200; ++k) {
        double delta = 0.9 + 0.1 * rng.uniform();
        auto reg = ex1_regime(delta);
        bool on_grid = reg.grid_distance <= 1e-9;
        CHECK(reg.n_periods.has_value() == on_grid);
        if (on_grid) ++segments;
    }
    CHECK(segments == 0);  // random draws never land on the knife edge
    for (long n = 7; n <= 12; ++n) {
        auto reg = ex1_regime(std::pow(0.5, 1.0 / static_cast<double>(n)));
        CHECK(reg.n_periods.has_value());
        CHECK(*reg.n_periods == n);
    }
}

TEST_CASE("split automaton passes the one-shot deviation check") {
    for (long n = 1; n <= 10; ++n) {
        double delta = std::pow(0.5, 1.0 / static_cast<double>(n));
        auto rep = ex1_spe_check(delta, n);
        CHECK(rep.pass);
        CHECK(rep.violations.empty());
        CHECK(rep.k3_conditional.p1 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.k3_conditional.p2 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.overall.p1 == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.overall.p2 == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("an overlong phase is caught at the handoff state") {
    double delta = std::pow(0.5, 1.0 / 4.0);
    auto rep = ex1_spe_check(delta, 4, 5);
    REQUIRE(!rep.pass);
    CHECK(rep.violations[0].where.find("k2") != std::string::npos);
    CHECK(rep.violations[0].player == 2);
    CHECK(rep.violations[0].gain > 0.0);
}

TEST_CASE("off-grid discounts are rejected by the automaton check") {
    CHECK_THROWS_AS(ex1_spe_check(0.8, 3), std::invalid_argument);
}

TEST_CASE("matching pennies has the unique mixed point") {
    Matrix2N a{std::vector<double>{1.0, -1.0}, std::vector<double>{-1.0, 1.0}};
    Matrix2N b{std::vector<double>{-1.0, 1.0}, std::vector<double>{1.0, -1.0}};
    auto res = bimatrix_support_enum(a, b);
    REQUIRE(res.equilibria.size() == 1);
    CHECK(res.equilibria[0].x[0] == doctest::Approx(0.5));
    CHECK(res.equilibria[0].y[0] == doctest::Approx(0.5));
    CHECK(res.degenerate_families.empty());
}

TEST_CASE("strict dominance leaves a single pure point") {
    Matrix2N a{std::vector<double>{5.0, 4.0}, std::vector<double>{1.0, 0.0}};
    Matrix2N b{std::vector<double>{5.0, 1.0}, std::vector<double>{4.0, 0.0}};
    auto res = bimatrix_support_enum(a, b);
    REQUIRE(res.equilibria.size() == 1);
    CHECK(res.equilibria[0].x[0] == 1.0);
    CHECK(res.equilibria[0].y[0] == 1.0);
    CHECK(!res.equilibria[0].degenerate_tie);
}

TEST_CASE("the matching-payoff bimatrix is one big equilibrium component") {
    const double r = 0.05;
    Matrix2N a{std::vector<double>{r, -r}, std::vector<double>{r, -r}};
    Matrix2N b{std::vector<double>{r, r}, std::vector<double>{-r, -r}};
    auto res = bimatrix_support_enum(a, b);
    CHECK(res.equilibria.size() == 4);  // all four pure profiles
    for (const auto& eq : res.equilibria) CHECK(eq.degenerate_tie);
    CHECK(!res.degenerate_families.empty());
}

TEST_CASE("stage analysis of the second example") {
    auto res = ex15_stage_nash(-1.0, -2.0);
    REQUIRE(res.equilibria.size() == 3);
    // the components: hold at (T,L), absorb at (B,M), or the quoted mixture
    bool saw_tl = false, saw_bm = false, saw_mix = false;
    for (const auto& eq : res.equilibria) {
        if (eq.x[0] == 1.0 && eq.y[0] == 1.0) saw_tl = true;
        if (eq.x[1] == 1.0 && eq.y[1] == 1.0) saw_bm = true;
        if (eq.x[0] > 0.0 && eq.x[0] < 1.0) {
            saw_mix = true;
            CHECK(eq.x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
            CHECK(eq.y[0] == doctest::Approx(0.0));
            CHECK(eq.y[1] == doctest::Approx(0.25).epsilon(1e-10));
            CHECK(eq.y[2] == doctest::Approx(0.75).epsilon(1e-10));
            CHECK(eq.u1 == doctest::Approx(-6.0).epsilon(1e-10));
            CHECK(eq.u2 == doctest::Approx(-5.0).epsilon(1e-10));
        }
    }
    CHECK(saw_tl);
    CHECK(saw_bm);
    CHECK(saw_mix);
    CHECK_THROWS_AS(ex15_stage_nash(10.0, -2.0), std::invalid_argument);
}

TEST_CASE("face equilibria survive the first column exactly") {
    for (double cont_b : {-1.0, -3.5, -6.5}) {
        auto eqs = ex15_face_equilibria(cont_b);
        REQUIRE(eqs.size() == 2);
        // (B, M)
        CHECK(eqs[0].x[1] == 1.0);
        CHECK(eqs[0].y[1] == 1.0);
        // the quoted mixture
        CHECK(eqs[1].x[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
        CHECK(eqs[1].y[1] == doctest::Approx(0.25).epsilon(1e-10));
        CHECK(eqs[1].y[2] == doctest::Approx(0.75).epsilon(1e-10));
    }
    CHECK(ex15_lm_indifference_x(-1.0) == doctest::Approx(0.5));
    CHECK(ex15_lm_indifference_x(-6.5) == doctest::Approx(10.0 / 14.5));
}

TEST_CASE("enumerated equilibria survive a brute-force grid probe") {
    Rng rng(SeedStream{21, 0});
    const int grid = 200;
    for (int trial = 0; trial < 40; ++trial) {
        Matrix2N a, b;
        double lo = 1e9, hi = -1e9;
        for (int row = 0; row < 2; ++row) {
            a[row].resize(3);
            b[row].resize(3);
            for (int col = 0; col < 3; ++col) {
                a[row][col] = std::floor(20.0 * rng.uniform()) - 10.0;
                b[row][col] = std::floor(20.0 * rng.uniform()) - 10.0;
                lo = std::min({lo, a[row][col], b[row][col]});
                hi = std::max({hi, a[row][col], b[row][col]});
            }
        }
        const double slack = 2.0 / grid * (hi - lo);
        auto res = bimatrix_support_enum(a, b);
        for (const auto& eq : res.equilibria) {
            // no grid deviation may improve either player beyond the slack
            double worst1 = -1e18, worst2 = -1e18;
            for (int gx = 0; gx <= grid; ++gx) {
                double x = static_cast<double>(gx) / grid;
                double dev = 0.0;
                for (int col = 0; col < 3; ++col)
                    dev += eq.y[col] * (x * a[0][col] + (1.0 - x) * a[1][col]);
                worst1 = std::max(worst1, dev - eq.u1);
            }
            for (int g1 = 0; g1 <= grid; ++g1)
                for (int g2 = 0; g2 + g1 <= grid; ++g2) {
                    double y0 = static_cast<double>(g1) / grid;
                    double y1 = static_cast<double>(g2) / grid;
                    double y2 = 1.0 - y0 - y1;
                    double dev = eq.x[0] * (y0 * b[0][0] + y1 * b[0][1] + y2 * b[0][2]) +
                                 eq.x[1] * (y0 * b[1][0] + y1 * b[1][1] + y2 * b[1][2]);
                    worst2 = std::max(worst2, dev - eq.u2);
                }
            CHECK(worst1 <= slack);
            CHECK(worst2 <= slack);
        }
    }
}

TEST_CASE("parametric family of the handoff state") {
    auto set = ex15_payoff_set(std::pow(0.5, 1.0 / 2.0));
    REQUIRE(set.m_grid.has_value());
    CHECK(*set.m_grid == 2);
    CHECK(set.k1_segment_included);
    REQUIRE(set.family_endpoints.size() == 2);
    CHECK(set.family_endpoints[0].p1 == 3.0);
    CHECK(set.family_endpoints[1].p1 == -6.0);

    auto off = ex15_payoff_set(0.8);
    CHECK(!off.m_grid.has_value());
    CHECK(!off.k1_segment_included);
}

TEST_CASE("family members evaluate exactly on the game") {
    auto g = make_example15_game();
    const int k2 = 1;
    for (double delta : {0.5, 0.8, 0.95}) {
        for (long n : {0L, 1L, 3L, 6L}) {
            // (T,L) for n stages at k2, then the absorbing stage equilibrium
            MarkovProfile prof;
            StationaryProfile tl;
            tl.act1.assign(g.n_states(), MixedAction{{1.0, 0.0}});
            tl.act2.assign(g.n_states(), MixedAction{{1.0, 0.0, 0.0}});
            prof.stages.assign(static_cast<std::size_t>(n), tl);

            for (int endpoint = 0; endpoint < 2; ++endpoint) {
                StationaryProfile tail = tl;
                if (endpoint == 0) {
                    tail.act1[k2] = MixedAction{{0.0, 1.0}};        // B
                    tail.act2[k2] = MixedAction{{0.0, 1.0, 0.0}};   // M
                } else {
                    tail.act1[k2] = MixedAction{{1.0 / 3.0, 2.0 / 3.0}};
                    tail.act2[k2] = MixedAction{{0.0, 0.25, 0.75}};
                }
                prof.tail = tail;
                auto v = eval_discounted_payoffs(g, prof, DiscountFactor::from_value(delta));
                double dn = std::pow(delta, static_cast<double>(n));
                PayoffPair target = endpoint == 0 ? PayoffPair{3.0, -2.0} : PayoffPair{-6.0, -5.0};
                CHECK(std::fabs(v[k2].p1 - ((1.0 - dn) * -1.0 + dn * target.p1)) <= 1e-12 * 30);
                CHECK(std::fabs(v[k2].p2 - ((1.0 - dn) * -1.0 + dn * target.p2)) <= 1e-12 * 30);
            }
        }
    }
}

namespace {

StationaryProfile ex1_profile(const FiniteStochasticGame& g, int k1_act, int k2_act,
                              std::pair<int, int> k3_cell) {
    StationaryProfile p;
    p.act1.resize(g.n_states());
    p.act2.resize(g.n_states());
    for (int s = 0; s < g.n_states(); ++s) {
        p.act1[s] = MixedAction{{1.0, 0.0}};
        p.act2[s] = MixedAction{{1.0, 0.0}};
    }
    p.act1[0].probs = {k1_act == 0 ? 1.0 : 0.0, k1_act == 0 ? 0.0 : 1.0};
    p.act2[1].probs = {k2_act == 0 ? 1.0 : 0.0, k2_act == 0 ? 0.0 : 1.0};
    p.act1[2].probs = {k3_cell.first == 0 ? 1.0 : 0.0, k3_cell.first == 0 ? 0.0 : 1.0};
    p.act2[2].probs = {k3_cell.second == 0 ? 1.0 : 0.0, k3_cell.second == 0 ? 0.0 : 1.0};
    return p;
}

}  // namespace

TEST_CASE("stationary verifier accepts the safe-door equilibrium") {
    auto g = make_example1_game();
    auto d = DiscountFactor::from_value(0.9);
    // top at k1, keep (T,L) forever at k3, left at k2
    auto prof = ex1_profile(g, 0, 0, {0, 0});
    auto values = eval_discounted_payoffs(g, prof, d);
    CHECK(values[0].p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(values[0].p2 == doctest::Approx(0.0).epsilon(1e-12));
    auto res = stationary_eq_verify(g, d, prof, values, 1e-9);
    CHECK(res.pass);
}

TEST_CASE("stationary verifier reduces to static best replies on one state") {
    FiniteStochasticGame g;
    g.state_ids = {"s"};
    g.actions1 = {{"T", "B"}};
    g.actions2 = {{"L", "R"}};
    // matching pennies, absorbing in place
    g.payoff1 = {{{1.0, -1.0}, {-1.0, 1.0}}};
    g.payoff2 = {{{-1.0, 1.0}, {1.0, -1.0}}};
    g.transition = {{{{{0, 1.0}}, {{0, 1.0}}}, {{{0, 1.0}}, {{0, 1.0}}}}};
    g.absorbing = {true};
    g.validate();
    StationaryProfile prof{{MixedAction{{0.5, 0.5}}}, {MixedAction{{0.5, 0.5}}}};
    auto res = stationary_eq_verify(g, DiscountFactor::from_value(0.6), prof, {{0.0, 0.0}}, 1e-9);
    CHECK(res.pass);
    // an unbalanced mixture is rejected through the best-reply block
    StationaryProfile bad{{MixedAction{{0.9, 0.1}}}, {MixedAction{{0.5, 0.5}}}};
    auto res2 = stationary_eq_verify(g, DiscountFactor::from_value(0.6), bad, {{0.0, 0.0}}, 1e-9);
    CHECK(!res2.pass);
    CHECK(res2.violated.find("best-reply(player 2") != std::string::npos);
}

TEST_CASE("stationary verifier names the broken constraint") {
    auto g = make_example1_game();
    auto d = DiscountFactor::from_value(0.9);
    // bottom at k1 with the myopic continuation: the safe door is strictly better
    auto prof = ex1_profile(g, 1, 0, {0, 0});
    auto values = eval_discounted_payoffs(g, prof, d);
    auto res = stationary_eq_verify(g, d, prof, values, 1e-9);
    REQUIRE(!res.pass);
    CHECK(res.violated == "best-reply(player 1, state k1, action T)");
    CHECK(res.margin > 0.0);

    // dimension mismatches are rejected, not reported
    CHECK_THROWS_AS(stationary_eq_verify(g, d, StationaryProfile{}, values, 1e-9),
                    std::invalid_argument);
}
