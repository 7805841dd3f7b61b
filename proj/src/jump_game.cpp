#include "dsg/jump_game.hpp"

#include <cmath>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

void validate(const JumpGameParams& params) {
    require(params.alpha > 0.0 && params.alpha < 1.0, "alpha must lie in (0,1)");
    require(params.beta > 0.0 && params.beta < 1.0, "beta must lie in (0,1)");
}

namespace {

// value = B' / (A' + B' - A'B') = 1 / (1 + A'/B' - A') with A' = 1-s_alpha,
// B' = 1-s_beta, assembled from logs so the ratio survives underflow of A'.
double combine(double log_a_comp, double log_b_comp) {
    const double rho = std::exp(log_a_comp - log_b_comp);
    const double a_comp = std::exp(log_a_comp);
    // grouping the difference keeps g exactly 1 when the two sides cancel
    return 1.0 / (1.0 + (rho - a_comp));
}

}  // namespace

double profile_payoff(const JumpGameParams& params, DiscountFactor delta, long a, long b) {
    validate(params);
    require(a >= 0 && b >= 0, "threshold levels must be non-negative");
    MdpParams pa{params.alpha, 1.0}, pb{params.beta, 1.0};
    const double la = a == 0 ? 0.0 : log_one_minus_score(pa, delta, static_cast<double>(a));
    const double lb = b == 0 ? 0.0 : log_one_minus_score(pb, delta, static_cast<double>(b));
    return combine(la, lb);
}

GameSolution solve_game(const JumpGameParams& params, DiscountFactor delta) {
    validate(params);
    GameSolution out;
    out.v_alpha = mdp_value(MdpParams{params.alpha, 1.0}, delta);
    out.v_beta = mdp_value(MdpParams{params.beta, 1.0}, delta);
    out.a_sharp = out.v_alpha.argmax;
    out.b_sharp = out.v_beta.argmax;
    out.value = combine(out.v_alpha.log_one_minus, out.v_beta.log_one_minus);
    return out;
}

double b_coefficient(const JumpGameParams& params) {
    validate(params);
    return std::log(params.alpha) / std::log(params.beta) - 1.0;
}

double a_coefficient(const JumpGameParams& params) {
    validate(params);
    return std::log((1.0 - params.alpha) / (1.0 - params.beta)) / std::log(params.beta);
}

std::vector<JointLevelPoint> joint_delta_enumerate(const JumpGameParams& params, JointSet which,
                                                   int count, long level_cap) {
    validate(params);
    require(count >= 1, "need a positive point count");
    if (!(b_coefficient(params) < 0.25))
        throw std::invalid_argument(
            "joint enumeration requires ln(alpha)/ln(beta) - 1 < 1/4; the band can be skipped "
            "otherwise");

    const bool delta1 = which == JointSet::Delta1;
    MdpParams grid{delta1 ? params.alpha : params.beta, 1.0};   // side whose a* is integer
    MdpParams probe{delta1 ? params.beta : params.alpha, 1.0};  // side tested for the band

    std::vector<JointLevelPoint> out;
    for (long level = 0; level <= level_cap; ++level) {
        DiscountFactor d = delta_from_level(grid, level, 0.0);
        if (d.log_complement() > std::log1p(-probe.alpha)) continue;  // below the probe's alpha
        const double a_star = critical_threshold(probe, d);
        const double frac = a_star - std::floor(a_star);
        if (frac < 0.25 || frac > 0.75) continue;
        JointLevelPoint p;
        p.delta = d;
        p.which = which;
        const long nearest = static_cast<long>(std::llround(a_star));
        p.eta = 2.0 * (a_star - static_cast<double>(nearest));
        if (delta1) {
            p.a = level;
            p.b = nearest;
        } else {
            p.b = level;
            p.a = nearest;
        }
        out.push_back(p);
        if (static_cast<int>(out.size()) == count) return out;
    }
    throw std::runtime_error("joint enumeration exhausted the level cap of " +
                             std::to_string(level_cap) + " grid steps");
}

OscillationBounds oscillation_bounds(const JumpGameParams& params) {
    validate(params);
    const double alpha = params.alpha, beta = params.beta;
    OscillationBounds out;
    out.delta1_value_floor =
        1.0 / (1.0 + 2.0 * std::sqrt(std::sqrt(beta) * (1.0 - beta) / (1.0 - alpha)));
    out.delta2_value_ceiling =
        1.0 / (1.0 + 0.5 * std::sqrt((1.0 - beta) / (std::sqrt(alpha) * (1.0 - alpha))));
    return out;
}

ParameterChoice find_parameters(double epsilon, long n_cap) {
    require(epsilon > 0.0 && epsilon < 0.5, "epsilon must lie in (0, 1/2)");
    for (long n = 2; n <= n_cap; ++n) {
        JumpGameParams p{1.0 / static_cast<double>(n), 1.0 / static_cast<double>(n + 1)};
        const double b = b_coefficient(p);
        if (!(b < 0.25)) continue;
        auto bounds = oscillation_bounds(p);
        if (bounds.delta1_value_floor > 1.0 - epsilon && bounds.delta2_value_ceiling < epsilon)
            return {n, p.alpha, p.beta, bounds.delta1_value_floor, bounds.delta2_value_ceiling, b};
    }
    throw std::runtime_error("no parameter pair up to n = " + std::to_string(n_cap) +
                             " meets the requested bounds");
}

FiniteStochasticGame truncated_jump_game(const JumpGameParams& params, int level_cap) {
    validate(params);
    require(level_cap >= 2, "level cap too small");
    const int L = level_cap;
    const int n = 2 * (L + 1) + 2;
    const int lose = 2 * (L + 1);     // absorbing, payoff 0 to player 1
    const int win = 2 * (L + 1) + 1;  // absorbing, payoff 1 to player 1
    auto side1 = [&](int l) { return l; };
    auto side2 = [&](int l) { return L + 1 + l; };

    FiniteStochasticGame g;
    g.state_ids.resize(n);
    for (int l = 0; l <= L; ++l) {
        g.state_ids[side1(l)] = "p1l" + std::to_string(l);
        g.state_ids[side2(l)] = "p2l" + std::to_string(l);
    }
    g.state_ids[lose] = "0*";
    g.state_ids[win] = "1*";
    g.actions1.assign(n, {"-"});
    g.actions2.assign(n, {"-"});
    g.transition.assign(n, {});
    g.payoff1.assign(n, {});
    g.payoff2.assign(n, {});
    g.absorbing.assign(n, false);
    g.absorbing[lose] = g.absorbing[win] = true;

    auto constant_payoff = [&](int s, std::size_t n1, std::size_t n2, double u1) {
        g.payoff1[s].assign(n1, std::vector<double>(n2, u1));
        g.payoff2[s].assign(n1, std::vector<double>(n2, 1.0 - u1));
    };
    for (int l = 0; l <= L; ++l) {
        const int up1 = std::min(l + 1, L), up2 = up1;
        // player 1's side: payoff 0, player 1 moves
        int s = side1(l);
        g.actions1[s] = {"wait", "jump"};
        double miss = std::pow(params.alpha, static_cast<double>(l));
        g.transition[s] = {{{{side1(up1), params.alpha}, {side1(0), 1.0 - params.alpha}}},
                           {{{lose, miss}, {side2(0), 1.0 - miss}}}};
        constant_payoff(s, 2, 1, 0.0);
        // player 2's side: payoff 1, player 2 moves
        s = side2(l);
        g.actions2[s] = {"wait", "jump"};
        double miss2 = std::pow(params.beta, static_cast<double>(l));
        g.transition[s] = {{{{side2(up2), params.beta}, {side2(0), 1.0 - params.beta}},
                            {{win, miss2}, {side1(0), 1.0 - miss2}}}};
        constant_payoff(s, 1, 2, 1.0);
    }
    for (int abs_state : {lose, win}) {
        g.transition[abs_state] = {{{{abs_state, 1.0}}}};
        constant_payoff(abs_state, 1, 1, abs_state == win ? 1.0 : 0.0);
    }
    return g;
}

std::vector<Controller> truncated_jump_controllers(int level_cap) {
    const int L = level_cap;
    std::vector<Controller> c(2 * (L + 1) + 2, Controller::P1Max);
    for (int l = 0; l <= L; ++l) c[L + 1 + l] = Controller::P2Min;
    return c;
}

ZeroSumVi zerosum_vi_oracle(const JumpGameParams& params, DiscountFactor delta, int level_cap,
                            const ViConfig& cfg) {
    require(delta.value() <= 0.999, "the Bellman oracle is for moderate discounts only");
    auto g = truncated_jump_game(params, level_cap);
    auto vi = single_controller_vi(g, truncated_jump_controllers(level_cap), delta, cfg);
    const int L = level_cap;
    ZeroSumVi out;
    out.value = vi.value[L + 1];  // beta side, level 0: the initial state
    out.residual = vi.residual;
    out.iters = vi.iters;
    out.jump_level_1 = out.jump_level_2 = L + 1;
    for (int l = 0; l <= L; ++l)
        if (vi.policy[l] == 1) {
            out.jump_level_1 = l;
            break;
        }
    for (int l = 0; l <= L; ++l)
        if (vi.policy[L + 1 + l] == 1) {
            out.jump_level_2 = l;
            break;
        }
    auto near_cap = [L](long level) { return level > L - 5 && level <= L; };
    if (near_cap(out.jump_level_1) || near_cap(out.jump_level_2))
        throw std::runtime_error("level cap too small for the greedy thresholds");
    return out;
}

}  // namespace dsg
