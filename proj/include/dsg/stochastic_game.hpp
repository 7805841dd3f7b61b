#pragma once

#include <string>
#include <vector>

#include "dsg/discount.hpp"

namespace dsg {

struct PayoffPair {
    double p1 = 0.0;
    double p2 = 0.0;
};

struct Transition {
    int state = 0;
    double prob = 0.0;
    bool operator==(const Transition&) const = default;
};

/// Two-player stochastic game with finitely many states and per-state action
/// sets. Transitions are sparse branch lists; absorbing states must self-loop
/// with probability one under every action pair.
class FiniteStochasticGame {
  public:
    std::vector<std::string> state_ids;
    std::vector<std::vector<std::string>> actions1, actions2;  // per state
    // transition[s][i][j] -> branches; payoffs indexed the same way
    std::vector<std::vector<std::vector<std::vector<Transition>>>> transition;
    std::vector<std::vector<std::vector<double>>> payoff1, payoff2;
    std::vector<bool> absorbing;

    int n_states() const { return static_cast<int>(state_ids.size()); }
    int state_index(const std::string& id) const;

    /// Checks distribution sums (within 1e-12), non-negativity, dimension
    /// consistency and the absorbing self-loop property. Throws on violation.
    void validate(double tol = 1e-12) const;
};

/// One mixed action per state for one player.
struct MixedAction {
    std::vector<double> probs;
};

struct StationaryProfile {
    std::vector<MixedAction> act1, act2;  // indexed by state
};

/// Plays stages[0], stages[1], ... for the first stages.size() periods, then
/// the stationary tail forever.
struct MarkovProfile {
    std::vector<StationaryProfile> stages;
    StationaryProfile tail;
};

/// Normalized discounted payoff vector (1-delta) sum delta^(t-1) u_t from each
/// initial state, computed by solving the per-player linear fixed point
/// v = (1-delta) u + delta P v exactly. The residual of the returned solution
/// is checked against 1e-10.
std::vector<PayoffPair> eval_discounted_payoffs(const FiniteStochasticGame& game,
                                                const StationaryProfile& profile,
                                                DiscountFactor delta);

std::vector<PayoffPair> eval_discounted_payoffs(const FiniteStochasticGame& game,
                                                const MarkovProfile& profile,
                                                DiscountFactor delta);

/// Truncated-series oracle: (1-delta) sum_{t<=horizon} delta^(t-1) E[u_t],
/// evaluated by backward expectation propagation. Differs from the exact
/// value by at most delta^horizon times the payoff range.
std::vector<PayoffPair> eval_truncated(const FiniteStochasticGame& game,
                                       const StationaryProfile& profile,
                                       DiscountFactor delta, long horizon);

void validate_profile(const FiniteStochasticGame& game, const StationaryProfile& profile);

}  // namespace dsg
