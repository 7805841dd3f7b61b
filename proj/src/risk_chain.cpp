#include "dsg/risk_chain.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dsg/numeric.hpp"

namespace dsg {

void validate(const RiskChain& chain) {
    require(chain.alpha > 0.0 && chain.alpha < 1.0, "risk chain parameter must lie in (0,1)");
}

double log_discounted_hit_factor(const RiskChain& chain, DiscountFactor delta, long a) {
    validate(chain);
    require(a >= 0, "hitting level must be non-negative");
    require(delta.value() > 0.0 || delta.complement() < 1.0, "discount must be positive");
    const double alpha = chain.alpha;
    const double x = delta.complement();
    // (1-delta) alpha^-a delta^-(a+1), kept in logs so neither alpha^-a nor
    // delta^-(a+1) is ever formed
    const double log_w = delta.log_complement() - static_cast<double>(a) * std::log(alpha) -
                         static_cast<double>(a + 1) * delta.log_value();
    const double log_num = std::log((1.0 - alpha) + alpha * x);  // 1 - alpha*delta
    const double log_den = log_add(std::log1p(-alpha), log_w);
    return log_num - log_den;
}

double discounted_hit_factor(const RiskChain& chain, DiscountFactor delta, long a) {
    return std::exp(log_discounted_hit_factor(chain, delta, a));
}

double discounted_hit_recursion(const RiskChain& chain, DiscountFactor delta, long a) {
    validate(chain);
    require(a >= 0, "hitting level must be non-negative");
    const double alpha = chain.alpha;
    const double alpha_delta = alpha * (1.0 - delta.complement());
    double m = delta.value();
    for (long k = 1; k <= a; ++k) m = alpha_delta * m / (1.0 - (1.0 - alpha) * m);
    return m;
}

double expected_hitting_time(const RiskChain& chain, long a) {
    validate(chain);
    require(a >= 0, "hitting level must be non-negative");
    double e = 1.0;
    for (long k = 1; k <= a; ++k) e = e / chain.alpha + 1.0;
    return e;
}

long trajectory_cap(DiscountFactor delta) {
    double ld = delta.log_value();
    if (ld == 0.0) return 1L << 40;  // delta indistinguishable from 1 in this context
    double cap = std::ceil(std::log(1e-12) / ld);
    return std::max(2L, static_cast<long>(cap));
}

double sample_hitting_time(const RiskChain& chain, Rng& rng, long a, double t_cap) {
    const double alpha = chain.alpha;
    if (a == 0) return 1.0;
    // success-run decomposition: failed attempts are i.i.d. runs of length
    // G < a (G successes then a failure, G+1 periods each); the number of
    // failed attempts before the first run of length >= a is geometric with
    // parameter alpha^a. T_a = 1 + a + F + sum of the F conditional run lengths.
    const double p_hit = std::pow(alpha, static_cast<double>(a));
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double failures = std::floor(std::log(u) / std::log1p(-p_hit));
    double t = 1.0 + static_cast<double>(a) + failures;
    if (t > t_cap) return t_cap + 1.0;  // already too late, run lengths only add

    // thresholds for G | G < a: P(G <= g | G < a) = (1 - alpha^(g+1)) / (1 - alpha^a)
    std::vector<double> cond_cdf(static_cast<std::size_t>(a));
    double pa = 1.0 - p_hit;
    double apow = 1.0;
    for (long g = 0; g < a; ++g) {
        apow *= alpha;
        cond_cdf[static_cast<std::size_t>(g)] = (1.0 - apow) / pa;
    }
    for (double k = 0; k < failures; k += 1.0) {
        double v = rng.uniform();
        long g = 0;
        while (g + 1 < a && v >= cond_cdf[static_cast<std::size_t>(g)]) ++g;
        t += static_cast<double>(g);
        if (t > t_cap) return t_cap + 1.0;
    }
    return t;
}

HitFactorMc hit_factor_mc(const RiskChain& chain, DiscountFactor delta, long a, long samples,
                          SeedStream stream) {
    validate(chain);
    require(a >= 0, "hitting level must be non-negative");
    require(samples >= 1, "need at least one sample");
    HitFactorMc out;
    out.t_cap = std::max(trajectory_cap(delta), a + 2);
    const double cap = static_cast<double>(out.t_cap);
    const double log_delta = delta.log_value();
    out.estimate = mc_mean(
        [&](Rng& rng) {
            double t = sample_hitting_time(chain, rng, a, cap);
            return t > cap ? 0.0 : std::exp(t * log_delta);
        },
        samples, stream);
    return out;
}

}  // namespace dsg
