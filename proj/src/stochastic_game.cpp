#include "dsg/stochastic_game.hpp"

#include <cmath>
#include <stdexcept>

#include "dsg/linalg.hpp"
#include "dsg/numeric.hpp"

namespace dsg {

int FiniteStochasticGame::state_index(const std::string& id) const {
    for (int s = 0; s < n_states(); ++s)
        if (state_ids[s] == id) return s;
    throw std::invalid_argument("unknown state id: " + id);
}

void FiniteStochasticGame::validate(double tol) const {
    const int n = n_states();
    require(static_cast<int>(actions1.size()) == n && static_cast<int>(actions2.size()) == n &&
                static_cast<int>(transition.size()) == n && static_cast<int>(payoff1.size()) == n &&
                static_cast<int>(payoff2.size()) == n && static_cast<int>(absorbing.size()) == n,
            "game tables must all be indexed by the state list");
    for (int s = 0; s < n; ++s) {
        const auto n1 = actions1[s].size(), n2 = actions2[s].size();
        require(n1 >= 1 && n2 >= 1, "state " + state_ids[s] + " needs at least one action per player");
        require(transition[s].size() == n1 && payoff1[s].size() == n1 && payoff2[s].size() == n1,
                "action-1 dimension mismatch at state " + state_ids[s]);
        for (std::size_t i = 0; i < n1; ++i) {
            require(transition[s][i].size() == n2 && payoff1[s][i].size() == n2 &&
                        payoff2[s][i].size() == n2,
                    "action-2 dimension mismatch at state " + state_ids[s]);
            for (std::size_t j = 0; j < n2; ++j) {
                double sum = 0.0;
                for (const auto& br : transition[s][i][j]) {
                    require(br.prob >= 0.0, "negative transition probability at state " + state_ids[s]);
                    require(br.state >= 0 && br.state < n, "transition target out of range");
                    sum += br.prob;
                }
                require(std::fabs(sum - 1.0) <= tol,
                        "transition distribution at state " + state_ids[s] + " does not sum to 1");
                if (absorbing[s]) {
                    double self = 0.0;
                    for (const auto& br : transition[s][i][j])
                        if (br.state == s) self += br.prob;
                    require(std::fabs(self - 1.0) <= tol,
                            "absorbing state " + state_ids[s] + " must self-loop with probability 1");
                }
            }
        }
    }
}

void validate_profile(const FiniteStochasticGame& game, const StationaryProfile& profile) {
    const int n = game.n_states();
    require(static_cast<int>(profile.act1.size()) == n && static_cast<int>(profile.act2.size()) == n,
            "profile must assign an action pair to each state");
    for (int s = 0; s < n; ++s) {
        auto check = [&](const MixedAction& m, std::size_t n_actions, const char* who) {
            require(m.probs.size() == n_actions,
                    std::string(who) + " mixture size mismatch at state " + game.state_ids[s]);
            double sum = 0.0;
            for (double p : m.probs) {
                require(p >= -1e-12, "negative mixture weight");
                sum += p;
            }
            require(std::fabs(sum - 1.0) <= 1e-9, "mixture does not sum to 1");
        };
        check(profile.act1[s], game.actions1[s].size(), "player 1");
        check(profile.act2[s], game.actions2[s].size(), "player 2");
    }
}

namespace {

// Collapses the profile into the induced state-to-state kernel and per-player
// expected stage payoffs.
struct InducedChain {
    std::vector<std::vector<double>> p;  // dense row-stochastic
    std::vector<double> u1, u2;
};

InducedChain induce(const FiniteStochasticGame& game, const StationaryProfile& profile) {
    const int n = game.n_states();
    InducedChain out;
    out.p.assign(n, std::vector<double>(n, 0.0));
    out.u1.assign(n, 0.0);
    out.u2.assign(n, 0.0);
    for (int s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < game.actions1[s].size(); ++i) {
            double xi = profile.act1[s].probs[i];
            if (xi == 0.0) continue;
            for (std::size_t j = 0; j < game.actions2[s].size(); ++j) {
                double w = xi * profile.act2[s].probs[j];
                if (w == 0.0) continue;
                out.u1[s] += w * game.payoff1[s][i][j];
                out.u2[s] += w * game.payoff2[s][i][j];
                for (const auto& br : game.transition[s][i][j]) out.p[s][br.state] += w * br.prob;
            }
        }
    }
    return out;
}

std::vector<double> solve_fixed_point(const InducedChain& chain, const std::vector<double>& u,
                                      double delta) {
    const std::size_t n = chain.p.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) a[s][t] = (s == t ? 1.0 : 0.0) - delta * chain.p[s][t];
        b[s] = (1.0 - delta) * u[s];
    }
    auto v = solve_dense(a, b);
    // residual of v = (1-delta) u + delta P v
    double res = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        double rhs = (1.0 - delta) * u[s];
        for (std::size_t t = 0; t < n; ++t) rhs += delta * chain.p[s][t] * v[t];
        res = std::max(res, std::fabs(v[s] - rhs));
    }
    if (res > 1e-10) throw std::runtime_error("policy evaluation residual above 1e-10");
    return v;
}

}  // namespace

std::vector<PayoffPair> eval_discounted_payoffs(const FiniteStochasticGame& game,
                                                const StationaryProfile& profile,
                                                DiscountFactor delta) {
    require(delta.value() < 1.0, "discount factor must be below 1");
    game.validate();
    validate_profile(game, profile);
    auto chain = induce(game, profile);
    auto v1 = solve_fixed_point(chain, chain.u1, delta.value());
    auto v2 = solve_fixed_point(chain, chain.u2, delta.value());
    std::vector<PayoffPair> out(game.n_states());
    for (int s = 0; s < game.n_states(); ++s) out[s] = {v1[s], v2[s]};
    return out;
}

std::vector<PayoffPair> eval_discounted_payoffs(const FiniteStochasticGame& game,
                                                const MarkovProfile& profile,
                                                DiscountFactor delta) {
    auto values = eval_discounted_payoffs(game, profile.tail, delta);
    const double d = delta.value();
    // backward induction through the finite prefix
    for (std::size_t stage = profile.stages.size(); stage-- > 0;) {
        validate_profile(game, profile.stages[stage]);
        auto chain = induce(game, profile.stages[stage]);
        std::vector<PayoffPair> next(game.n_states());
        for (int s = 0; s < game.n_states(); ++s) {
            double c1 = 0.0, c2 = 0.0;
            for (int t = 0; t < game.n_states(); ++t) {
                c1 += chain.p[s][t] * values[t].p1;
                c2 += chain.p[s][t] * values[t].p2;
            }
            next[s] = {(1.0 - d) * chain.u1[s] + d * c1, (1.0 - d) * chain.u2[s] + d * c2};
        }
        values = std::move(next);
    }
    return values;
}

std::vector<PayoffPair> eval_truncated(const FiniteStochasticGame& game,
                                       const StationaryProfile& profile, DiscountFactor delta,
                                       long horizon) {
    require(horizon >= 0, "horizon must be non-negative");
    game.validate();
    validate_profile(game, profile);
    auto chain = induce(game, profile);
    const double d = delta.value();
    std::vector<PayoffPair> values(game.n_states());
    for (long step = 0; step < horizon; ++step) {
        std::vector<PayoffPair> next(game.n_states());
        for (int s = 0; s < game.n_states(); ++s) {
            double c1 = 0.0, c2 = 0.0;
            for (int t = 0; t < game.n_states(); ++t) {
                c1 += chain.p[s][t] * values[t].p1;
                c2 += chain.p[s][t] * values[t].p2;
            }
            next[s] = {(1.0 - d) * chain.u1[s] + d * c1, (1.0 - d) * chain.u2[s] + d * c2};
        }
        values = std::move(next);
    }
    return values;
}

}  // namespace dsg
