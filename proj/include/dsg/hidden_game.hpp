#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsg/stochastic_game.hpp"

namespace dsg {

struct HsgBranch {
    int state = 0;
    int signal = 0;
    double prob = 0.0;
    bool operator==(const HsgBranch&) const = default;
};

/// Stochastic game in which the players observe a public signal about the
/// current state instead of the state itself. Action sets are global (the
/// players cannot condition a feasibility set on a state they do not see).
class HiddenStochasticGame {
  public:
    std::vector<std::string> state_ids, signal_ids;
    std::vector<std::string> actions1, actions2;
    std::vector<std::vector<std::vector<std::vector<HsgBranch>>>> transition;  // [s][i][j]
    std::vector<std::vector<std::vector<double>>> payoff1, payoff2;
    std::vector<HsgBranch> initial;  // distribution over (state, signal)

    int n_states() const { return static_cast<int>(state_ids.size()); }
    int n_signals() const { return static_cast<int>(signal_ids.size()); }
    int state_index(const std::string& id) const;
    int signal_index(const std::string& id) const;

    void validate(double tol = 1e-12) const;
};

/// Common posterior over states, kept sparse: only strictly positive atoms,
/// sorted by state index.
struct BeliefAtom {
    int state = 0;
    double prob = 0.0;
};

struct Belief {
    std::vector<BeliefAtom> support;

    static Belief point_mass(int state) { return Belief{{{state, 1.0}}}; }
    double prob_of(int state) const;
    void validate(double tol = 1e-12) const;
    bool approx_equal(const Belief& other, double tol) const;
};

struct BeliefUpdate {
    Belief posterior;
    double signal_prob = 0.0;
};

/// One step of the Bayes filter: the posterior over next states given that
/// `signal` was observed after the action pair (i, j), together with the
/// probability of that signal. Conditioning on a zero-probability signal is
/// an error.
BeliefUpdate belief_update(const HiddenStochasticGame& hsg, const Belief& prior, int i, int j,
                           int signal);

/// All (posterior, probability) branches of one step, signal branches with
/// equal posteriors not yet merged.
std::vector<std::pair<BeliefUpdate, int>> belief_branches(const HiddenStochasticGame& hsg,
                                                          const Belief& prior, int i, int j);

struct BeliefReduction {
    FiniteStochasticGame game;
    std::vector<Belief> beliefs;          // per reduced state
    std::vector<bool> frontier;           // true where depth truncation self-loops Wait-style
    std::vector<int> initial_states;      // reduced state per positive-probability initial signal
    std::vector<double> initial_probs;
};

/// Equivalent stochastic game over the beliefs reachable from the initial
/// signal(s) in at most `depth` steps. Posterior branches landing on the same
/// belief (componentwise within merge_tol) are aggregated; payoffs are
/// belief-averaged stage payoffs. Transitions that would leave the depth-d
/// set are redirected to the source belief and the state is marked frontier,
/// so the reduction is exact for any play that stays within depth steps.
BeliefReduction belief_game_reduce(const HiddenStochasticGame& hsg, int depth,
                                   double merge_tol = 1e-12, int state_cap = 20000);

struct PartitionResult {
    bool ok = false;
    std::vector<std::vector<int>> cells;  // each sorted; cells ordered by smallest member
    // failure witness when !ok
    int state_a = -1, state_b = -1;
    int act_i = -1, act_j = -1;
    int player = 0;
    std::string reason;
};

/// Finest partition of the states that the public signals always reveal
/// (union-find over the signal co-occurrence relation, including the initial
/// distribution), then checked for payoff equality within cells. A violation
/// is returned as a witness rather than thrown.
PartitionResult known_payoffs_partition(const HiddenStochasticGame& hsg);

/// Player-swapped copy: u1'(k,i,j) = u2(perm(k), j, i) and transitions with
/// the roles of the action arguments exchanged and states/signals renamed by
/// the given permutations.
HiddenStochasticGame swap_players(const HiddenStochasticGame& hsg,
                                  const std::vector<int>& state_perm,
                                  const std::vector<int>& signal_perm);

}  // namespace dsg
