#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dsg/stochastic_game.hpp"

namespace dsg {

/// Seven-state game: player 1 can lock in (1/2,0) immediately, or hand play
/// to player 2, who can lock in (0,1/2) or enter the bimatrix stage whose
/// only path to (1/2,1/2) is an exact split of the discounted horizon.
FiniteStochasticGame make_example1_game();

/// Nine-state game whose k2 component forces every equilibrium into a
/// (T,L)-prefix followed by one of two absorbing one-shot equilibria.
FiniteStochasticGame make_example15_game();

struct EquilibriumSet {
    enum class Kind { Singleton, Segment, ParamFamily } kind = Kind::Singleton;
    // Singleton: points[0]; Segment: points = {end, end}
    std::vector<PayoffPair> points;
    // ParamFamily: (1-delta^N) base + delta^N endpoint, N in N u {inf}
    PayoffPair family_base{};
    std::vector<PayoffPair> family_endpoints;
    std::string note;
};

struct Ex1Regime {
    std::optional<long> n_periods;  // the N with delta^N = 1/2, when on the grid
    double grid_distance = 0.0;     // |N - round(N)| of the real solution
    EquilibriumSet set;
};

/// Equilibrium payoffs of the first example: the segment {1/2} x [0, 1/2]
/// exactly on the discount grid delta^N = 1/2, the singleton (1/2, 0) off it.
Ex1Regime ex1_regime(double delta, double tol = 1e-9);

struct Deviation {
    std::string where;
    int player = 0;
    double gain = 0.0;
};

struct SpeReport {
    bool pass = false;
    std::vector<Deviation> violations;
    PayoffPair k3_conditional{};
    PayoffPair overall{};
};

/// One-shot deviation check of the payoff-splitting automaton: enter the
/// bimatrix stage, play (T,L) for `phase_len` periods (defaults to n), then
/// (B,R). Exact closed-form payoff comparisons at every automaton state.
SpeReport ex1_spe_check(double delta, long n, std::optional<long> phase_len = std::nullopt);

// --- bimatrix support enumeration (2 x n) ---

using Matrix2N = std::array<std::vector<double>, 2>;

struct BimatrixEq {
    std::array<double, 2> x{};  // row mixture
    std::vector<double> y;      // column mixture
    double u1 = 0.0, u2 = 0.0;
    bool degenerate_tie = false;  // part of a payoff-tie continuum
    std::string support_note;
};

struct BimatrixResult {
    std::vector<BimatrixEq> equilibria;
    std::vector<std::string> degenerate_families;
};

/// Enumerates all support pairs, solves the indifference systems and filters
/// by feasibility and best replies. Payoff ties that create equilibrium
/// components are flagged, not dropped.
BimatrixResult bimatrix_support_enum(const Matrix2N& a, const Matrix2N& b, double tol = 1e-10);

/// Stage game of the k2 component with continuation values (cont_a, cont_b)
/// in the (T,L) cell; cont_a in [-10, 3] and cont_b in [-13/2, -1].
BimatrixResult ex15_stage_nash(double cont_a, double cont_b);

/// The indifference weight on T that would make player 2 mix columns 1 and
/// 2: 10 / (21 + cont_b).
double ex15_lm_indifference_x(double cont_b);

/// Equilibria of the stage game in which column 1 has weight zero, i.e. the
/// face analysis: the 2x2 tail game's equilibria that survive the deviation
/// to the first column. Exactly (B,M) and the (1/3, 2/3) x (0, 1/4, 3/4)
/// mixture for every admissible cont_b.
std::vector<BimatrixEq> ex15_face_equilibria(double cont_b, double tol = 1e-10);

struct Ex15PayoffSet {
    double delta = 0.0;
    PayoffPair family_base{-1.0, -1.0};
    std::vector<PayoffPair> family_endpoints;  // {(3,-2), (-6,-5)}
    std::optional<long> m_grid;                // M with delta^M = 1/2
    double grid_distance = 0.0;
    bool k1_segment_included = false;  // {1} x [-1, 1] inside the perfect set
    std::string k1_note;
};

Ex15PayoffSet ex15_payoff_set(double delta, double tol = 1e-9);

struct VerifyResult {
    bool pass = false;
    std::string violated;  // first violated constraint, named
    double margin = 0.0;
};

/// Checks the full stationary-equilibrium inequality system: simplex
/// constraints, per-state one-shot best replies against the candidate payoff
/// vector, and the two payoff-consistency equalities.
VerifyResult stationary_eq_verify(const FiniteStochasticGame& game, DiscountFactor delta,
                                  const StationaryProfile& profile,
                                  const std::vector<PayoffPair>& payoffs, double tol = 1e-9);

}  // namespace dsg
