#pragma once

#include "dsg/hidden_game.hpp"
#include "dsg/jump_game.hpp"
#include "dsg/rng.hpp"

namespace dsg {

/// Six-state hidden game that reproduces the jump game through public
/// signals: each side's risk level is the players' common belief, refreshed
/// by the signals, and only the owner's action moves it. Constant-sum with
/// player 1 paid 1 on player 2's side and in 1*.
///
/// States {(1,1),(1,0),(2,1),(2,0),1*,0*}, signals {s1,s1',s2,s2',s1*,s0*},
/// actions {W,J} x {W,J}, initial mass 1 on ((2,1), s2).
HiddenStochasticGame build_gamma_star(double alpha, double beta);

/// Indices into build_gamma_star's state list.
namespace gamma_star_state {
inline constexpr int s11 = 0, s10 = 1, s21 = 2, s20 = 3, win = 4, lose = 5;
}
namespace gamma_star_signal {
inline constexpr int s1 = 0, s1p = 1, s2 = 2, s2p = 3, s1star = 4, s0star = 5;
}

/// Affine payoff rescale x -> r + (1-2r)x applied to both players.
HiddenStochasticGame rescale_embed(const HiddenStochasticGame& hsg, double r);

struct ThresholdProfile {
    long a = 0;  // player 1 jumps when the belief risk is <= alpha^a
    long b = 0;
};

struct Prop6Check {
    McEstimate mc;
    double closed_form = 0.0;
    double z_score = 0.0;
    long t_cap = 0;
};

/// Simulates the hidden game under belief-threshold strategies (the belief
/// risk level is tracked exactly as an integer grid index) and compares the
/// discounted-payoff estimate with the closed-form threshold payoff.
Prop6Check gamma_star_value_check(double alpha, double beta, DiscountFactor delta,
                                  ThresholdProfile profile, long samples, SeedStream stream);

/// One simulated trajectory's normalized discounted payoff for player 1.
double simulate_gamma_star_payoff(double alpha, double beta, DiscountFactor delta,
                                  ThresholdProfile profile, Rng& rng, long t_cap);

}  // namespace dsg
