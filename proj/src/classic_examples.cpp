#include "dsg/classic_examples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

namespace {

// absorbing state with constant payoff pair, n1 x n2 action cells
void add_absorbing(FiniteStochasticGame& g, int s, double u1, double u2) {
    const std::size_t n1 = g.actions1[s].size(), n2 = g.actions2[s].size();
    g.absorbing[s] = true;
    g.transition[s].assign(n1, std::vector<std::vector<Transition>>(n2, {{s, 1.0}}));
    g.payoff1[s].assign(n1, std::vector<double>(n2, u1));
    g.payoff2[s].assign(n1, std::vector<double>(n2, u2));
}

}  // namespace

FiniteStochasticGame make_example1_game() {
    FiniteStochasticGame g;
    g.state_ids = {"k1", "k2", "k3", "(1/2,0)*", "(0,1/2)*", "(-1,-1)*", "(0,1)*"};
    const int k1 = 0, k2 = 1, k3 = 2, a_half0 = 3, a_0half = 4, a_mm = 5, a_01 = 6;
    const int n = 7;
    g.actions1.assign(n, {"T", "B"});
    g.actions2.assign(n, {"L", "R"});
    g.transition.assign(n, {});
    g.payoff1.assign(n, {});
    g.payoff2.assign(n, {});
    g.absorbing.assign(n, false);

    // k1: player 1 alone decides; T locks in (1/2,0)*, B hands play to k2
    g.transition[k1] = {{{{a_half0, 1.0}}, {{a_half0, 1.0}}}, {{{k2, 1.0}}, {{k2, 1.0}}}};
    g.payoff1[k1] = {{0.5, 0.5}, {0.5, 0.5}};
    g.payoff2[k1] = {{0.0, 0.0}, {0.5, 0.5}};
    // k2: player 2 alone decides; L locks in (0,1/2)*, R enters the bimatrix stage
    g.transition[k2] = {{{{a_0half, 1.0}}, {{k3, 1.0}}}, {{{a_0half, 1.0}}, {{k3, 1.0}}}};
    g.payoff1[k2] = {{0.5, 0.5}, {0.5, 0.5}};
    g.payoff2[k2] = {{0.5, 0.5}, {0.5, 0.5}};
    // k3: (T,L) repeats with payoff (1,0); everything else absorbs
    g.transition[k3] = {{{{k3, 1.0}}, {{a_mm, 1.0}}}, {{{a_mm, 1.0}}, {{a_01, 1.0}}}};
    g.payoff1[k3] = {{1.0, -1.0}, {-1.0, 0.0}};
    g.payoff2[k3] = {{0.0, -1.0}, {-1.0, 1.0}};

    add_absorbing(g, a_half0, 0.5, 0.0);
    add_absorbing(g, a_0half, 0.0, 0.5);
    add_absorbing(g, a_mm, -1.0, -1.0);
    add_absorbing(g, a_01, 0.0, 1.0);
    g.validate();
    return g;
}

FiniteStochasticGame make_example15_game() {
    FiniteStochasticGame g;
    g.state_ids = {"k1",       "k2",        "(1,1)*",   "(-30,-30)*", "(-12,-11)*",
                   "(-4,-7)*", "(-22,-12)*", "(3,-2)*", "(-9,-4)*"};
    const int k1 = 0, k2 = 1, a11 = 2, a30 = 3, a1211 = 4, a47 = 5, a2212 = 6, a32 = 7,
              a94 = 8;
    const int n = 9;
    g.actions1.assign(n, {"T", "B"});
    g.actions2.assign(n, {"L", "M", "R"});
    g.transition.assign(n, {});
    g.payoff1.assign(n, {});
    g.payoff2.assign(n, {});
    g.absorbing.assign(n, false);

    g.transition[k1] = {{{{a11, 1.0}}, {{a30, 1.0}}, {{a30, 1.0}}},
                        {{{k2, 1.0}}, {{a30, 1.0}}, {{a30, 1.0}}}};
    g.payoff1[k1] = {{1.0, -30.0, -30.0}, {-1.0, -30.0, -30.0}};
    g.payoff2[k1] = {{1.0, -30.0, -30.0}, {-1.0, -30.0, -30.0}};

    g.transition[k2] = {{{{k2, 1.0}}, {{a1211, 1.0}}, {{a47, 1.0}}},
                        {{{a2212, 1.0}}, {{a32, 1.0}}, {{a94, 1.0}}}};
    g.payoff1[k2] = {{-1.0, -12.0, -4.0}, {-22.0, 3.0, -9.0}};
    g.payoff2[k2] = {{-1.0, -11.0, -7.0}, {-12.0, -2.0, -4.0}};

    add_absorbing(g, a11, 1.0, 1.0);
    add_absorbing(g, a30, -30.0, -30.0);
    add_absorbing(g, a1211, -12.0, -11.0);
    add_absorbing(g, a47, -4.0, -7.0);
    add_absorbing(g, a2212, -22.0, -12.0);
    add_absorbing(g, a32, 3.0, -2.0);
    add_absorbing(g, a94, -9.0, -4.0);
    g.validate();
    return g;
}

Ex1Regime ex1_regime(double delta, double tol) {
    require(delta > 0.0 && delta < 1.0, "discount must lie in (0,1)");
    Ex1Regime out;
    const double n_real = std::log(0.5) / std::log(delta);
    const long n_round = std::max(1L, static_cast<long>(std::llround(n_real)));
    out.grid_distance = std::fabs(n_real - static_cast<double>(n_round));
    if (out.grid_distance <= tol) {
        out.n_periods = n_round;
        out.set.kind = EquilibriumSet::Kind::Segment;
        out.set.points = {{0.5, 0.0}, {0.5, 0.5}};
        out.set.note = "the split automaton exists; mixing at k1 sweeps the segment";
    } else {
        out.set.kind = EquilibriumSet::Kind::Singleton;
        out.set.points = {{0.5, 0.0}};
        out.set.note = "no horizon split reaches (1/2,1/2); player 1 locks in (1/2,0)";
    }
    return out;
}

SpeReport ex1_spe_check(double delta, long n, std::optional<long> phase_len) {
    require(delta > 0.0 && delta < 1.0, "discount must lie in (0,1)");
    require(n >= 1, "the split horizon must be positive");
    if (std::fabs(std::pow(delta, static_cast<double>(n)) - 0.5) > 1e-9)
        throw std::invalid_argument("delta^n must equal 1/2 for the split automaton");
    const long m = phase_len.value_or(n);
    require(m >= 1, "phase length must be positive");

    SpeReport rep;
    auto pow_d = [&](long k) { return std::pow(delta, static_cast<double>(k)); };
    // value of the bimatrix phase with j-1 stages already played
    auto v_k3 = [&](long j) -> PayoffPair {
        return {1.0 - pow_d(m + 1 - j), pow_d(m + 1 - j)};
    };
    const PayoffPair vk3 = v_k3(1);
    const PayoffPair vk2 = {(1.0 - delta) * 0.5 + delta * vk3.p1,
                            (1.0 - delta) * 0.5 + delta * vk3.p2};
    const PayoffPair vk1 = {(1.0 - delta) * 0.5 + delta * vk2.p1,
                            (1.0 - delta) * 0.5 + delta * vk2.p2};
    rep.k3_conditional = vk3;
    rep.overall = vk1;

    const double tol = 1e-12;
    auto check = [&](std::string where, int player, double deviation_payoff, double on_path) {
        double gain = deviation_payoff - on_path;
        if (gain > tol) rep.violations.push_back({std::move(where), player, gain});
    };
    // only the mover has a deviation at k1 and k2
    check("k1: player 1 locks in (1/2,0)*", 1, 0.5, vk1.p1);
    check("k2: player 2 locks in (0,1/2)*", 2, 0.5, vk2.p2);
    for (long j = 1; j <= m; ++j) {
        // a unilateral switch during the (T,L) phase absorbs at (-1,-1)*
        check("k3 phase " + std::to_string(j) + ": player 1 plays B", 1, -1.0, v_k3(j).p1);
        check("k3 phase " + std::to_string(j) + ": player 2 plays R", 2, -1.0, v_k3(j).p2);
    }
    // terminal stage (B,R): switching hits (-1,-1)* instead of (0,1)*
    check("k3 terminal: player 1 plays T", 1, -1.0, 0.0);
    check("k3 terminal: player 2 plays L", 2, -1.0, 1.0);
    rep.pass = rep.violations.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// bimatrix support enumeration

namespace {

double mix_col_value(const Matrix2N& m, double x, int j) {
    return x * m[0][j] + (1.0 - x) * m[1][j];
}

}  // namespace

BimatrixResult bimatrix_support_enum(const Matrix2N& a, const Matrix2N& b, double tol) {
    const int n = static_cast<int>(a[0].size());
    require(n >= 1 && n <= 8, "column count must lie in 1..8");
    for (const auto& m : {a, b})
        require(static_cast<int>(m[0].size()) == n && static_cast<int>(m[1].size()) == n,
                "payoff matrices must be 2 x n");

    BimatrixResult out;

    // pure x pure
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < n; ++j) {
            if (a[i][j] < a[1 - i][j] - tol) continue;
            bool best = true, tie = std::fabs(a[i][j] - a[1 - i][j]) <= tol;
            for (int jj = 0; jj < n && best; ++jj) {
                if (jj == j) continue;
                if (b[i][jj] > b[i][j] + tol) best = false;
                else if (b[i][jj] > b[i][j] - tol) tie = true;
            }
            if (!best) continue;
            BimatrixEq eq;
            eq.x = {i == 0 ? 1.0 : 0.0, i == 0 ? 0.0 : 1.0};
            eq.y.assign(n, 0.0);
            eq.y[j] = 1.0;
            eq.u1 = a[i][j];
            eq.u2 = b[i][j];
            eq.degenerate_tie = tie;
            eq.support_note = "pure";
            out.equilibria.push_back(std::move(eq));
        }
    }

    // mixed rows against a single column: needs a payoff tie between the rows
    for (int j = 0; j < n; ++j) {
        if (std::fabs(a[0][j] - a[1][j]) > tol) continue;
        out.degenerate_families.push_back(
            "rows tie against column " + std::to_string(j) +
            "; every row mixture keeping column " + std::to_string(j) +
            " a best reply is an equilibrium component");
    }
    // pure row against mixed columns: needs ties inside the row
    for (int i = 0; i < 2; ++i) {
        for (int j1 = 0; j1 < n; ++j1)
            for (int j2 = j1 + 1; j2 < n; ++j2) {
                if (std::fabs(b[i][j1] - b[i][j2]) > tol) continue;
                bool top = true;
                for (int jj = 0; jj < n; ++jj)
                    if (b[i][jj] > b[i][j1] + tol) top = false;
                if (!top) continue;
                out.degenerate_families.push_back(
                    "row " + std::to_string(i) + " ties columns " + std::to_string(j1) + "," +
                    std::to_string(j2) + "; column mixtures there form an equilibrium component");
            }
    }

    // both rows mixed against a column pair
    for (int j1 = 0; j1 < n; ++j1) {
        for (int j2 = j1 + 1; j2 < n; ++j2) {
            const double d0 = b[0][j1] - b[0][j2], d1 = b[1][j1] - b[1][j2];
            if (std::fabs(d0 - d1) <= tol) continue;  // covered by the tie families above
            const double x = d1 / (d1 - d0);
            if (!(x > tol && x < 1.0 - tol)) continue;
            const double e1 = a[0][j1] - a[1][j1], e2 = a[0][j2] - a[1][j2];
            if (std::fabs(e1 - e2) <= tol) continue;
            const double y1 = e2 / (e2 - e1);
            if (!(y1 > tol && y1 < 1.0 - tol)) continue;
            const double value2 = mix_col_value(b, x, j1);
            bool best = true, tie = false;
            for (int jj = 0; jj < n && best; ++jj) {
                if (jj == j1 || jj == j2) continue;
                double v = mix_col_value(b, x, jj);
                if (v > value2 + tol) best = false;
                else if (v > value2 - tol) tie = true;
            }
            if (!best) continue;
            BimatrixEq eq;
            eq.x = {x, 1.0 - x};
            eq.y.assign(n, 0.0);
            eq.y[j1] = y1;
            eq.y[j2] = 1.0 - y1;
            eq.u1 = x * (y1 * a[0][j1] + (1.0 - y1) * a[0][j2]) +
                    (1.0 - x) * (y1 * a[1][j1] + (1.0 - y1) * a[1][j2]);
            eq.u2 = value2;
            eq.degenerate_tie = tie;
            eq.support_note = "mixed over columns {" + std::to_string(j1) + "," +
                              std::to_string(j2) + "}";
            out.equilibria.push_back(std::move(eq));
        }
    }

    // supports of three or more columns force an extra indifference on x;
    // solutions only survive through ties, which create continua
    for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = j1 + 1; j2 < n; ++j2)
            for (int j3 = j2 + 1; j3 < n; ++j3) {
                const double d0 = b[0][j1] - b[0][j2], d1 = b[1][j1] - b[1][j2];
                const double f0 = b[0][j2] - b[0][j3], f1 = b[1][j2] - b[1][j3];
                if (std::fabs(d0 - d1) <= tol || std::fabs(f0 - f1) <= tol) continue;
                const double x12 = d1 / (d1 - d0), x23 = f1 / (f1 - f0);
                if (std::fabs(x12 - x23) > 1e-9) continue;
                if (!(x12 > tol && x12 < 1.0 - tol)) continue;
                out.degenerate_families.push_back(
                    "columns {" + std::to_string(j1) + "," + std::to_string(j2) + "," +
                    std::to_string(j3) + "} are simultaneously indifferent at x = " +
                    std::to_string(x12) + "; the row-indifferent column mixtures form a component");
            }

    return out;
}

double ex15_lm_indifference_x(double cont_b) { return 10.0 / (21.0 + cont_b); }

namespace {

Matrix2N ex15_a_matrix(double cont_a) {
    return {std::vector<double>{cont_a, -12.0, -4.0}, std::vector<double>{-22.0, 3.0, -9.0}};
}
Matrix2N ex15_b_matrix(double cont_b) {
    return {std::vector<double>{cont_b, -11.0, -7.0}, std::vector<double>{-12.0, -2.0, -4.0}};
}

}  // namespace

BimatrixResult ex15_stage_nash(double cont_a, double cont_b) {
    require(cont_a >= -10.0 && cont_a <= 3.0, "continuation value for player 1 out of [-10, 3]");
    require(cont_b >= -6.5 && cont_b <= -1.0, "continuation value for player 2 out of [-13/2, -1]");
    return bimatrix_support_enum(ex15_a_matrix(cont_a), ex15_b_matrix(cont_b));
}

std::vector<BimatrixEq> ex15_face_equilibria(double cont_b, double tol) {
    require(cont_b >= -6.5 && cont_b <= -1.0, "continuation value for player 2 out of [-13/2, -1]");
    // tail game on columns {M, R}
    Matrix2N a{std::vector<double>{-12.0, -4.0}, std::vector<double>{3.0, -9.0}};
    Matrix2N b{std::vector<double>{-11.0, -7.0}, std::vector<double>{-2.0, -4.0}};
    auto enumerated = bimatrix_support_enum(a, b, tol);
    std::vector<BimatrixEq> out;
    for (auto& eq : enumerated.equilibria) {
        // survive only if the first column does not tempt player 2
        const double l_value = eq.x[0] * cont_b + eq.x[1] * (-12.0);
        if (l_value > eq.u2 + tol) continue;
        BimatrixEq full = eq;
        full.y.assign(3, 0.0);
        full.y[1] = eq.y[0];
        full.y[2] = eq.y[1];
        out.push_back(std::move(full));
    }
    return out;
}

Ex15PayoffSet ex15_payoff_set(double delta, double tol) {
    require(delta > 0.0 && delta < 1.0, "discount must lie in (0,1)");
    Ex15PayoffSet out;
    out.delta = delta;
    out.family_endpoints = {{3.0, -2.0}, {-6.0, -5.0}};
    const double m_real = std::log(0.5) / std::log(delta);
    const long m_round = std::max(1L, static_cast<long>(std::llround(m_real)));
    out.grid_distance = std::fabs(m_real - static_cast<double>(m_round));
    if (out.grid_distance <= tol) {
        out.m_grid = m_round;
        out.k1_segment_included = true;
        out.k1_note = "{1} x [-1,1] is contained in the perfect equilibrium payoffs";
    } else {
        out.k1_segment_included = false;
        out.k1_note = "no equilibrium payoff has a player-2 coordinate inside (-1,1)";
    }
    return out;
}

VerifyResult stationary_eq_verify(const FiniteStochasticGame& game, DiscountFactor delta,
                                  const StationaryProfile& profile,
                                  const std::vector<PayoffPair>& payoffs, double tol) {
    game.validate();
    const int n = game.n_states();
    require(static_cast<int>(profile.act1.size()) == n &&
                static_cast<int>(profile.act2.size()) == n &&
                static_cast<int>(payoffs.size()) == n,
            "profile and payoff dimensions must match the game");
    const double d = delta.value();
    require(d < 1.0, "discount must be below 1");

    VerifyResult res;
    auto fail = [&](std::string what, double margin) {
        res.pass = false;
        res.violated = std::move(what);
        res.margin = margin;
        return res;
    };

    auto cell_value = [&](int s, std::size_t i, std::size_t j, int player) {
        double v = (1.0 - d) * (player == 1 ? game.payoff1[s][i][j] : game.payoff2[s][i][j]);
        for (const auto& br : game.transition[s][i][j])
            v += d * br.prob * (player == 1 ? payoffs[br.state].p1 : payoffs[br.state].p2);
        return v;
    };

    for (int s = 0; s < n; ++s) {
        const auto& x = profile.act1[s].probs;
        const auto& y = profile.act2[s].probs;
        if (x.size() != game.actions1[s].size() || y.size() != game.actions2[s].size())
            throw std::invalid_argument("mixture dimensions do not match the action sets");
        for (int player = 1; player <= 2; ++player) {
            const auto& probs = player == 1 ? x : y;
            double sum = 0.0;
            for (double p : probs) {
                if (p < -tol)
                    return fail("simplex(player " + std::to_string(player) + ", state " +
                                    game.state_ids[s] + "): negative weight",
                                p);
                sum += p;
            }
            if (std::fabs(sum - 1.0) > tol)
                return fail("simplex(player " + std::to_string(player) + ", state " +
                                game.state_ids[s] + "): weights sum to " + std::to_string(sum),
                            sum - 1.0);
        }
        // player 2 must not gain from any pure column, given player 1's mixture
        for (std::size_t j = 0; j < y.size(); ++j) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) v += x[i] * cell_value(s, i, j, 2);
            if (v > payoffs[s].p2 + tol)
                return fail("best-reply(player 2, state " + game.state_ids[s] + ", action " +
                                game.actions2[s][j] + ")",
                            v - payoffs[s].p2);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j) v += y[j] * cell_value(s, i, j, 1);
            if (v > payoffs[s].p1 + tol)
                return fail("best-reply(player 1, state " + game.state_ids[s] + ", action " +
                                game.actions1[s][i] + ")",
                            v - payoffs[s].p1);
        }
        for (int player = 1; player <= 2; ++player) {
            double v = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::size_t j = 0; j < y.size(); ++j)
                    v += x[i] * y[j] * cell_value(s, i, j, player);
            double target = player == 1 ? payoffs[s].p1 : payoffs[s].p2;
            if (std::fabs(v - target) > tol)
                return fail("consistency(player " + std::to_string(player) + ", state " +
                                game.state_ids[s] + ")",
                            v - target);
        }
    }
    res.pass = true;
    return res;
}

}  // namespace dsg
