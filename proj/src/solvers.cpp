#include "dsg/solvers.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "dsg/numeric.hpp"

namespace dsg {

namespace {

// The non-controller's action must not matter in a controlled state.
void check_single_controller(const FiniteStochasticGame& game, int s, Controller who) {
    const bool p1 = who == Controller::P1Max;
    const std::size_t n_own = p1 ? game.actions1[s].size() : game.actions2[s].size();
    const std::size_t n_other = p1 ? game.actions2[s].size() : game.actions1[s].size();
    auto cell = [&](std::size_t own, std::size_t other) {
        std::size_t i = p1 ? own : other, j = p1 ? other : own;
        return std::make_tuple(game.payoff1[s][i][j], game.payoff2[s][i][j],
                               &game.transition[s][i][j]);
    };
    for (std::size_t own = 0; own < n_own; ++own) {
        auto [u1, u2, tr] = cell(own, 0);
        for (std::size_t other = 1; other < n_other; ++other) {
            auto [v1, v2, tr2] = cell(own, other);
            bool same = std::fabs(u1 - v1) <= 1e-12 && std::fabs(u2 - v2) <= 1e-12 &&
                        tr->size() == tr2->size();
            if (same)
                for (std::size_t k = 0; k < tr->size(); ++k)
                    if ((*tr)[k].state != (*tr2)[k].state ||
                        std::fabs((*tr)[k].prob - (*tr2)[k].prob) > 1e-12)
                        same = false;
            if (!same)
                throw std::invalid_argument("state " + game.state_ids[s] +
                                            " depends on the non-controlling player's action");
        }
    }
}

}  // namespace

ViResult single_controller_vi(const FiniteStochasticGame& game,
                              const std::vector<Controller>& controllers, DiscountFactor delta,
                              const ViConfig& cfg) {
    game.validate();
    require(controllers.size() == static_cast<std::size_t>(game.n_states()),
            "one controller annotation per state required");
    require(cfg.tol > 0.0 && cfg.max_iters >= 1, "bad value-iteration configuration");
    const double d = delta.value();
    require(!delta.deep() && delta.complement() >= 1e-6,
            "value iteration is restricted to moderate discounts; use the closed forms near 1");

    const int n = game.n_states();
    for (int s = 0; s < n; ++s) check_single_controller(game, s, controllers[s]);

    ViResult res;
    res.value.assign(n, 0.0);
    res.policy.assign(n, 0);
    std::vector<double> next(n, 0.0);
    const double stop = cfg.tol * (1.0 - d);
    for (res.iters = 1; res.iters <= cfg.max_iters; ++res.iters) {
        res.residual = 0.0;
        for (int s = 0; s < n; ++s) {
            const bool p1 = controllers[s] == Controller::P1Max;
            const std::size_t n_own = p1 ? game.actions1[s].size() : game.actions2[s].size();
            double best = p1 ? -std::numeric_limits<double>::infinity()
                             : std::numeric_limits<double>::infinity();
            int best_a = 0;
            for (std::size_t own = 0; own < n_own; ++own) {
                std::size_t i = p1 ? own : 0, j = p1 ? 0 : own;
                double q = (1.0 - d) * game.payoff1[s][i][j];
                for (const auto& br : game.transition[s][i][j]) q += d * br.prob * res.value[br.state];
                if ((p1 && q > best) || (!p1 && q < best)) {
                    best = q;
                    best_a = static_cast<int>(own);
                }
            }
            next[s] = best;
            res.policy[s] = best_a;
            res.residual = std::max(res.residual, std::fabs(best - res.value[s]));
        }
        res.value.swap(next);
        if (res.residual <= stop) return res;
    }
    throw std::runtime_error("value iteration did not reach the residual target");
}

ViResult mdp_value_iteration(const FiniteStochasticGame& game, DiscountFactor delta,
                             const ViConfig& cfg) {
    for (int s = 0; s < game.n_states(); ++s)
        require(game.actions2[s].size() == 1,
                "mdp_value_iteration expects a singleton action set for player 2");
    return single_controller_vi(game, std::vector<Controller>(game.n_states(), Controller::P1Max),
                                delta, cfg);
}

}  // namespace dsg
