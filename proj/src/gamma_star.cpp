#include "dsg/gamma_star.hpp"

#include <cmath>
#include <stdexcept>

#include "dsg/numeric.hpp"
#include "dsg/risk_chain.hpp"

namespace dsg {

HiddenStochasticGame build_gamma_star(double alpha, double beta) {
    require(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0,
            "chain parameters must lie in (0,1)");
    namespace st = gamma_star_state;
    namespace sg = gamma_star_signal;

    HiddenStochasticGame g;
    g.state_ids = {"(1,1)", "(1,0)", "(2,1)", "(2,0)", "1*", "0*"};
    g.signal_ids = {"s1", "s1'", "s2", "s2'", "s1*", "s0*"};
    g.actions1 = {"W", "J"};
    g.actions2 = {"W", "J"};
    const int n = g.n_states();
    g.transition.assign(n, std::vector<std::vector<std::vector<HsgBranch>>>(
                               2, std::vector<std::vector<HsgBranch>>(2)));
    g.payoff1.assign(n, std::vector<std::vector<double>>(2, std::vector<double>(2, 0.0)));
    g.payoff2 = g.payoff1;

    // payoffs depend only on the state: player 1 is paid on player 2's side
    auto set_payoff = [&](int s, double u1) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                g.payoff1[s][i][j] = u1;
                g.payoff2[s][i][j] = 1.0 - u1;
            }
    };
    set_payoff(st::s11, 0.0);
    set_payoff(st::s10, 0.0);
    set_payoff(st::s21, 1.0);
    set_payoff(st::s20, 1.0);
    set_payoff(st::win, 1.0);
    set_payoff(st::lose, 0.0);

    // player 1's states react to i only; player 2's to j only
    auto fill_side1 = [&](int s, std::vector<HsgBranch> wait, std::vector<HsgBranch> jump) {
        for (int j = 0; j < 2; ++j) {
            g.transition[s][0][j] = wait;
            g.transition[s][1][j] = jump;
        }
    };
    auto fill_side2 = [&](int s, std::vector<HsgBranch> wait, std::vector<HsgBranch> jump) {
        for (int i = 0; i < 2; ++i) {
            g.transition[s][i][0] = wait;
            g.transition[s][i][1] = jump;
        }
    };
    fill_side1(st::s11,
               {{st::s11, sg::s1, 1.0 - alpha},
                {st::s11, sg::s1p, alpha * alpha},
                {st::s10, sg::s1p, alpha * (1.0 - alpha)}},
               {{st::lose, sg::s0star, 1.0}});
    fill_side1(st::s10, {{st::s11, sg::s1, 1.0 - alpha}, {st::s10, sg::s1p, alpha}},
               {{st::s21, sg::s2, 1.0}});
    fill_side2(st::s21,
               {{st::s21, sg::s2, 1.0 - beta},
                {st::s21, sg::s2p, beta * beta},
                {st::s20, sg::s2p, beta * (1.0 - beta)}},
               {{st::win, sg::s1star, 1.0}});
    fill_side2(st::s20, {{st::s21, sg::s2, 1.0 - beta}, {st::s20, sg::s2p, beta}},
               {{st::s11, sg::s1, 1.0}});
    auto fill_absorbing = [&](int s, int sig) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g.transition[s][i][j] = {{s, sig, 1.0}};
    };
    fill_absorbing(st::win, sg::s1star);
    fill_absorbing(st::lose, sg::s0star);

    g.initial = {{st::s21, sg::s2, 1.0}};
    g.validate();
    return g;
}

HiddenStochasticGame rescale_embed(const HiddenStochasticGame& hsg, double r) {
    require(r >= 0.0 && r < 0.5, "rescale parameter must lie in [0, 1/2)");
    HiddenStochasticGame out = hsg;
    auto map = [r](double x) { return r + (1.0 - 2.0 * r) * x; };
    for (auto& per_state : out.payoff1)
        for (auto& row : per_state)
            for (double& u : row) u = map(u);
    for (auto& per_state : out.payoff2)
        for (auto& row : per_state)
            for (double& u : row) u = map(u);
    return out;
}

double simulate_gamma_star_payoff(double alpha, double beta, DiscountFactor delta,
                                  ThresholdProfile profile, Rng& rng, long t_cap) {
    namespace st = gamma_star_state;
    // true state plus the exact belief level on the owner's grid
    int state = st::s21;
    long level = 0;
    const double d = delta.value();
    double weight = 1.0 - d;  // (1-delta) delta^(t-1)
    double payoff = 0.0;
    for (long t = 1; t <= t_cap; ++t) {
        if (state == st::win) {
            payoff += weight / (1.0 - d);  // 1 at every remaining stage
            return payoff;
        }
        if (state == st::lose) return payoff;
        const bool side1 = state == st::s11 || state == st::s10;
        payoff += weight * (side1 ? 0.0 : 1.0);
        const double chain = side1 ? alpha : beta;
        const long threshold = side1 ? profile.a : profile.b;
        if (level >= threshold) {
            // jump: fails exactly when the true state is the high-risk one
            if (state == st::s11) state = st::lose;
            else if (state == st::s10) { state = st::s21; level = 0; }
            else if (state == st::s21) state = st::win;
            else { state = st::s11; level = 0; }
        } else {
            // wait: the public signal either reveals a reset or deepens the level
            double u = rng.uniform();
            if (state == st::s11 || state == st::s21) {
                if (u < 1.0 - chain) level = 0;            // reset signal
                else if (u < 1.0 - chain + chain * chain)  // stay high, deeper belief
                    ++level;
                else {  // drop to the low-risk state, deeper belief
                    ++level;
                    state = side1 ? st::s10 : st::s20;
                }
            } else {
                if (u < 1.0 - chain) {
                    level = 0;
                    state = side1 ? st::s11 : st::s21;
                } else {
                    ++level;
                }
            }
        }
        weight *= d;
    }
    return payoff;  // truncated tail below the 1e-12 horizon bound
}

Prop6Check gamma_star_value_check(double alpha, double beta, DiscountFactor delta,
                                  ThresholdProfile profile, long samples, SeedStream stream) {
    require(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0,
            "chain parameters must lie in (0,1)");
    require(profile.a >= 0 && profile.b >= 0, "thresholds must be non-negative");
    require(delta.value() <= 0.99, "simulation is for moderate discounts");
    require(samples >= 1 && samples <= 50'000'000, "sample count out of range");
    Prop6Check out;
    out.t_cap = trajectory_cap(delta);
    out.closed_form = profile_payoff(JumpGameParams{alpha, beta}, delta, profile.a, profile.b);
    out.mc = mc_mean(
        [&](Rng& rng) {
            return simulate_gamma_star_payoff(alpha, beta, delta, profile, rng, out.t_cap);
        },
        samples, stream);
    double denom = out.mc.stderr_ > 0.0 ? out.mc.stderr_ : 1e-15;
    out.z_score = (out.mc.mean - out.closed_form) / denom;
    return out;
}

}  // namespace dsg
