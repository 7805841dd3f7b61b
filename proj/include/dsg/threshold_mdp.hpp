#pragma once

#include "dsg/discount.hpp"
#include "dsg/solvers.hpp"

namespace dsg {

/// Optimal-stopping problem on the risk chain: wait for the risk to fall to
/// alpha^a, then take the risky action; success pays `reward` forever.
struct MdpParams {
    double alpha;
    double reward = 1.0;
};

void validate(const MdpParams& params);

/// Payoff of the a-strategy (a may be real):
///   reward * (1-alpha^a)(1-alpha*delta) / (1-alpha + (1-delta) alpha^-a delta^-(a+1)).
double score(const MdpParams& params, DiscountFactor delta, double a);

/// ln(1 - s(a)) at reward 1, stable arbitrarily close to delta = 1.
double log_one_minus_score(const MdpParams& params, DiscountFactor delta, double a);

struct MdpValue {
    double value = 0.0;          // reward * s(argmax)
    long argmax = 0;             // smallest maximizing integer level
    double log_one_minus = 0.0;  // ln(1 - s(argmax)) at reward 1
};

/// max over integer levels of the score; scans 0..ceil(2 a*)+64, which
/// brackets the maximum because the score vanishes at both ends.
MdpValue mdp_value(const MdpParams& params, DiscountFactor delta);

/// a* with alpha^(a*) = sqrt((1-delta)/(1-alpha)); requires delta >= alpha.
double critical_threshold(const MdpParams& params, DiscountFactor delta);

/// The discount with 1-delta = (1-alpha) alpha^(2a+eta); eta = 0 gives the
/// grid on which a* is the integer a.
DiscountFactor delta_from_level(const MdpParams& params, long a, double eta);

enum class LevelSet { Delta1, Delta2, Neither };

struct LevelSetTag {
    LevelSet tag = LevelSet::Neither;
    long nearest_a = 0;
    double eta = 0.0;  // 2 (a* - nearest_a)
    double a_star = 0.0;
};

/// Delta1 when a* is within tol of an integer, Delta2 when frac(a*) lies in
/// [1/4, 3/4], Neither otherwise.
LevelSetTag level_set_classify(const MdpParams& params, DiscountFactor delta, double tol = 1e-9);

struct ScoreBounds {
    double lower_at_astar = 0.0;   // 1 - 2 delta^-(a*+1) sqrt((1-delta)/(1-alpha))
    double upper_at_astar = 0.0;   // 1 - 2 sqrt(.) + 3 (1-delta)/(1-alpha)
    double off_grid_upper = 0.0;   // 1 - alpha^-1/4 sqrt(.) + (.)(alpha + alpha^-1/2)
    double score_at_astar = 0.0;
};

/// Sandwich around s(a*) plus the off-grid ceiling; the returned values are
/// checked against the actual score before returning.
ScoreBounds score_bounds(const MdpParams& params, DiscountFactor delta);

/// (1 - v_{alpha,delta}) / sqrt(1-delta) at reward 1.
double asymptotic_ratio(const MdpParams& params, DiscountFactor delta);

struct MdpViResult {
    double value = 0.0;
    long jump_level = 0;  // smallest level where the greedy policy jumps
    double residual = 0.0;
    long iters = 0;
};

/// Independent Bellman oracle on the truncated level space {0..level_cap}
/// plus success/failure states. Moderate discounts only.
MdpViResult mdp_vi_oracle(const MdpParams& params, DiscountFactor delta, int level_cap,
                          const ViConfig& cfg = {});

}  // namespace dsg
