#pragma once

#include <vector>

#include "dsg/discount.hpp"
#include "dsg/solvers.hpp"
#include "dsg/threshold_mdp.hpp"

namespace dsg {

/// Constant-sum jump game: player 1 rides an alpha risk chain, player 2 a
/// beta chain; each waits for a low enough risk before jumping into the
/// opponent's half. Player 1's payoff is 1 while play sits on player 2's side.
struct JumpGameParams {
    double alpha;
    double beta;
};

void validate(const JumpGameParams& params);

/// Player 1's payoff of the threshold pair (a, b):
///   g(a,b) = (1 - s_beta(b)) / (1 - s_alpha(a) s_beta(b)).
double profile_payoff(const JumpGameParams& params, DiscountFactor delta, long a, long b);

struct GameSolution {
    long a_sharp = 0, b_sharp = 0;  // dominant thresholds
    double value = 0.0;
    MdpValue v_alpha, v_beta;
};

/// Dominant thresholds are the per-player score maximizers; the value is
/// (1 - v_beta) / (1 - v_alpha v_beta), assembled from the score complements
/// so it survives discounts arbitrarily close to 1.
GameSolution solve_game(const JumpGameParams& params, DiscountFactor delta);

/// Delta1: discounts aligned for player 1 (a*(alpha) integer) whose beta
/// threshold lands in the misaligned band; Delta2 with the roles swapped.
enum class JointSet { Delta1, Delta2 };

struct JointLevelPoint {
    long a = 0;          // alpha-side level
    long b = 0;          // beta-side level
    double eta = 0.0;    // misaligned side: 2 (a* - nearest level)
    DiscountFactor delta = DiscountFactor::from_value(0.0);
    JointSet which = JointSet::Delta1;
};

/// Walks the aligned side's grid in increasing delta and keeps the points
/// whose other-side threshold falls in the [1/4, 3/4] band; returns the first
/// `count` of them.
std::vector<JointLevelPoint> joint_delta_enumerate(const JumpGameParams& params, JointSet which,
                                                   int count, long level_cap = 2'000'000);

struct OscillationBounds {
    double delta1_value_floor = 0.0;    // limit floor of the value on Delta1
    double delta2_value_ceiling = 0.0;  // limit ceiling of the value on Delta2
};

OscillationBounds oscillation_bounds(const JumpGameParams& params);

/// ln(alpha)/ln(beta) - 1; the joint enumeration drifts by this much per grid
/// step and needs |.| < 1/4 so the band cannot be skipped.
double b_coefficient(const JumpGameParams& params);
/// ln((1-alpha)/(1-beta)) / ln(beta)
double a_coefficient(const JumpGameParams& params);

struct ParameterChoice {
    long n = 0;
    double alpha = 0.0, beta = 0.0;
    double value_floor = 0.0, value_ceiling = 0.0;
    double b_coeff = 0.0;
};

/// Smallest n >= 2 such that alpha = 1/n, beta = 1/(n+1) satisfy
/// b_coefficient < 1/4, floor > 1-epsilon and ceiling < epsilon (both strict).
ParameterChoice find_parameters(double epsilon, long n_cap = 1'000'000);

struct ZeroSumVi {
    double value = 0.0;
    long jump_level_1 = 0, jump_level_2 = 0;
    double residual = 0.0;
    long iters = 0;
};

/// Bellman oracle on the truncated two-sided level space; every state is
/// controlled by one player, so the stage operator is a plain max or min.
ZeroSumVi zerosum_vi_oracle(const JumpGameParams& params, DiscountFactor delta, int level_cap,
                            const ViConfig& cfg = {});

/// The truncated jump game as an explicit stochastic game (also used by the
/// belief-reduction cross checks). States: alpha side levels 0..L, beta side
/// levels 0..L, then the two absorbing outcomes.
FiniteStochasticGame truncated_jump_game(const JumpGameParams& params, int level_cap);
std::vector<Controller> truncated_jump_controllers(int level_cap);

}  // namespace dsg
