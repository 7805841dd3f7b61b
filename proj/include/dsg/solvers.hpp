#pragma once

#include <vector>

#include "dsg/discount.hpp"
#include "dsg/stochastic_game.hpp"

namespace dsg {

struct ViConfig {
    double tol = 1e-12;
    long max_iters = 5'000'000;
};

enum class Controller { P1Max, P2Min };

struct ViResult {
    std::vector<double> value;   // player 1's payoff per state
    std::vector<int> policy;     // controller's greedy pure action per state
    double residual = 0.0;
    long iters = 0;
};

/// Value iteration for games in which every state is controlled by a single
/// player: the Bellman step is a plain max (P1Max) or min (P2Min) over that
/// player's actions, applied to player 1's payoff. States whose payoffs or
/// transitions depend non-trivially on the other player's action are
/// rejected. Iterates until the sup-norm residual is at most tol*(1-delta),
/// which bounds the value error by tol.
ViResult single_controller_vi(const FiniteStochasticGame& game,
                              const std::vector<Controller>& controllers, DiscountFactor delta,
                              const ViConfig& cfg = {});

/// Single-player special case: every state P1Max and player 2 restricted to a
/// singleton action everywhere.
ViResult mdp_value_iteration(const FiniteStochasticGame& game, DiscountFactor delta,
                             const ViConfig& cfg = {});

}  // namespace dsg
