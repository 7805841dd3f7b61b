#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsg/gamma_star.hpp"
#include "dsg/hidden_game.hpp"
#include "dsg/jump_game.hpp"

namespace dsg {

struct Square {
    double center1 = 0.0, center2 = 0.0;
    double half_side = 0.0;
    double lo1() const { return center1 - half_side; }
    double hi1() const { return center1 + half_side; }
    double lo2() const { return center2 - half_side; }
    double hi2() const { return center2 + half_side; }
};

/// The 13-state hidden game: a first-period 2x2 meta choice between two
/// absorbing agreements and two embedded rescaled jump games (one per player
/// order), with the matching-payoff bimatrix (each player picks the other's
/// +-r) added at every stage.
struct FinalGame {
    double epsilon = 0.0, r = 0.0, alpha = 0.0, beta = 0.0;
    HiddenStochasticGame hsg;

    // state indices
    int k1 = 0;
    int g1_first = 1;  // G1:(1,1),(1,0),(2,1),(2,0) at g1_first..g1_first+3
    int g2_first = 5;
    int win = 9, lose = 10;  // shared 1*, 0*
    int eps_abs = 11, far_abs = 12;

    Square e1_square() const { return {epsilon, epsilon, r}; }
    Square e2_square() const { return {1.0 - epsilon, 1.0 - epsilon, r}; }
    JumpGameParams jump_params() const { return {alpha, beta}; }
};

/// Requires epsilon in (0, 5/12] and r in (0, epsilon/5). All stage payoffs
/// lie in [0,1] except the two first-period cells that route into an embedded
/// game, whose payoff is the +-r bimatrix alone.
FinalGame build_final_game(double epsilon, double r, double alpha, double beta);

/// State/signal permutations under which swap_players(final.hsg) reproduces
/// the game bit-exactly (the game is symmetric between the players).
std::vector<int> final_game_state_swap(const FinalGame& game);
std::vector<int> final_game_signal_swap(const FinalGame& game);

enum class Regime { E1, E2, Unclassified };

struct Certificate {
    std::string name;
    double margin = 0.0;  // strict inequality margin; must be positive to pass
    bool pass = false;
};

struct RegimeResult {
    Regime regime = Regime::Unclassified;
    std::optional<Square> square;
    double v_zero_sum = 0.0;  // value of the embedded jump game
    double v_delta = 0.0;     // r + (1-2r) v_zero_sum
    bool in_e1_domain = false, in_e2_domain = false;  // delta >= 1-2r resp. 1/(1+2r)
    double e1_margin = 0.0;  // (epsilon - 5r) - v, positive inside the E1 regime
    double e2_margin = 0.0;  // v - (epsilon + 5r)
    std::vector<Certificate> certificates;
};

/// Tags the discount by the two regime conditions and, when tagged, attaches
/// the first-period dominance certificates.
RegimeResult regime_classify(const FinalGame& game, DiscountFactor delta);

/// The strict inequalities that force every equilibrium to the regime's
/// first-period agreement: the two preconditions on delta*v_delta plus the
/// wait/jump payoff comparison at both endpoints of the opponent's mixing
/// weight (the comparison is affine in it).
std::vector<Certificate> first_stage_certificates(const FinalGame& game, DiscountFactor delta,
                                                  Regime regime);

struct PerturbedBounds {
    double eta = 0.0;
    Regime regime = Regime::Unclassified;
    Square bound;                       // payoff-set bound for the classified side
    Square e1_bound, e2_bound;          // both sides' bounds, for the gap check
    bool disjoint = false;              // max(E1 bound) < min(E2 bound)
    std::vector<Certificate> checks;
};

/// Bounds on the equilibrium payoffs after perturbing every payoff by at most
/// eta; requires eta in [0, r(epsilon-5r)/4) and a discount classified E1 or
/// E2. Throws with the failing inequality if a precondition does not hold.
PerturbedBounds perturbed_bounds(const FinalGame& game, DiscountFactor delta, double eta);

struct RegimeSearch {
    JointLevelPoint point;
    RegimeResult result;
    int points_walked = 0;  // enumerated points consumed, including the hit
    int match_index = 0;    // ordinal among certified matches (1-based)
};

/// Walks the joint enumeration that feeds the target regime (low values come
/// from the alpha-misaligned set, high values from the beta-misaligned set)
/// until `index` discounts are tagged with all certificates strictly
/// positive. Fails after walk_cap enumerated points.
RegimeSearch find_regime_point(const FinalGame& game, Regime target, int walk_cap = 200,
                               int index = 1);

}  // namespace dsg
