#pragma once

#include "dsg/discount.hpp"
#include "dsg/rng.hpp"

namespace dsg {

/// Markov chain on the risk grid {alpha^a}: from risk q the next state is
/// alpha*q with probability alpha and 1 otherwise. The chain sits at level 0
/// (q = 1) in period 1; T_a is the first period at level >= a, so T_0 = 1 and
/// the smallest possible value of T_a is a+1.
struct RiskChain {
    double alpha;
};

void validate(const RiskChain& chain);

/// ln E(delta^{T_a}); the closed form
///   E(delta^{T_a}) = (1 - alpha*delta) / (1 - alpha + (1-delta) alpha^-a delta^-(a+1))
/// evaluated through the complement x = 1-delta, with the exploding term kept
/// in log space.
double log_discounted_hit_factor(const RiskChain& chain, DiscountFactor delta, long a);

/// E(delta^{T_a}) by the closed form. Always in (0,1); may underflow to 0 for
/// extreme (delta, a).
double discounted_hit_factor(const RiskChain& chain, DiscountFactor delta, long a);

/// Independent route: m_0 = delta, m_a = alpha*delta*m_{a-1} / (1 - (1-alpha) m_{a-1}).
double discounted_hit_recursion(const RiskChain& chain, DiscountFactor delta, long a);

/// E(T_a): 1 for a = 0, then E(T_a) = E(T_{a-1})/alpha + 1.
double expected_hitting_time(const RiskChain& chain, long a);

/// Horizon after which discounted contributions drop below 1e-12.
long trajectory_cap(DiscountFactor delta);

/// Draws T_a from its exact law (run-length decomposition of the success
/// streaks), censoring trajectories that provably exceed t_cap. Returns
/// t_cap + 1 for a censored draw.
double sample_hitting_time(const RiskChain& chain, Rng& rng, long a, double t_cap);

struct HitFactorMc {
    McEstimate estimate;
    long t_cap = 0;
};

/// Monte Carlo for E(delta^{T_a}), truncated at trajectory_cap(delta) so the
/// truncation bias stays below 1e-12. Reproducible for a fixed stream.
HitFactorMc hit_factor_mc(const RiskChain& chain, DiscountFactor delta, long a, long samples,
                          SeedStream stream);

}  // namespace dsg
