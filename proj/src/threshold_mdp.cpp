#include "dsg/threshold_mdp.hpp"

#include <cmath>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

void validate(const MdpParams& params) {
    require(params.alpha > 0.0 && params.alpha < 1.0, "alpha must lie in (0,1)");
    require(params.reward > 0.0, "reward must be positive");
}

double log_one_minus_score(const MdpParams& params, DiscountFactor delta, double a) {
    validate(params);
    require(a >= 0.0, "threshold level must be non-negative");
    const double alpha = params.alpha;
    const double lalpha = std::log(alpha);
    const double x = delta.complement();
    const double lx = delta.log_complement();
    const double ldelta = delta.log_value();
    // 1 - s = [w + alpha^a (1-alpha*delta) - alpha (1-delta)] / [(1-alpha) + w]
    // with w = (1-delta) alpha^-a delta^-(a+1); all three small terms kept in
    // logs (w always dominates alpha(1-delta), so the subtraction is benign).
    const double log_w = lx - a * lalpha - (a + 1.0) * ldelta;
    const double log_t2 = a * lalpha + std::log((1.0 - alpha) + alpha * x);
    const double log_pos = log_add(log_w, log_t2);
    const double log_neg = std::log(alpha) + lx;
    const double log_num = log_pos + std::log1p(-std::exp(log_neg - log_pos));
    const double log_den = log_add(std::log1p(-alpha), log_w);
    return log_num - log_den;
}

double score(const MdpParams& params, DiscountFactor delta, double a) {
    validate(params);
    require(a >= 0.0, "threshold level must be non-negative");
    if (a == 0.0) return 0.0;  // the jump from risk 1 never succeeds
    return params.reward * (1.0 - std::exp(log_one_minus_score(params, delta, a)));
}

double critical_threshold(const MdpParams& params, DiscountFactor delta) {
    validate(params);
    const double a_star =
        (delta.log_complement() - std::log1p(-params.alpha)) / (2.0 * std::log(params.alpha));
    if (a_star < -1e-9)
        throw std::invalid_argument("critical threshold needs delta >= alpha");
    return std::max(a_star, 0.0);
}

DiscountFactor delta_from_level(const MdpParams& params, long a, double eta) {
    validate(params);
    require(a >= 0, "level must be non-negative");
    require(eta >= -1.5 && eta <= 1.5, "eta must lie in [-3/2, 3/2]");
    const double e = 2.0 * static_cast<double>(a) + eta;
    require(e >= 0.0, "requested discount would fall below alpha");
    const double direct = (1.0 - params.alpha) * std::pow(params.alpha, e);
    if (direct >= std::numeric_limits<double>::min())
        return DiscountFactor::from_complement(direct);
    return DiscountFactor::from_log_complement(std::log1p(-params.alpha) +
                                               e * std::log(params.alpha));
}

LevelSetTag level_set_classify(const MdpParams& params, DiscountFactor delta, double tol) {
    LevelSetTag out;
    out.a_star = critical_threshold(params, delta);
    out.nearest_a = static_cast<long>(std::llround(out.a_star));
    out.eta = 2.0 * (out.a_star - static_cast<double>(out.nearest_a));
    const double frac = out.a_star - std::floor(out.a_star);
    if (std::fabs(out.a_star - static_cast<double>(out.nearest_a)) <= tol && out.nearest_a >= 0)
        out.tag = LevelSet::Delta1;
    else if (frac >= 0.25 && frac <= 0.75)
        out.tag = LevelSet::Delta2;
    else
        out.tag = LevelSet::Neither;
    return out;
}

MdpValue mdp_value(const MdpParams& params, DiscountFactor delta) {
    validate(params);
    MdpValue out;
    if (delta.complement() == 1.0) return out;  // delta = 0: nothing ever pays
    long a_max = 64;
    if (delta.log_complement() <= std::log1p(-params.alpha))
        a_max += static_cast<long>(std::ceil(2.0 * critical_threshold(params, delta)));
    out.argmax = 0;
    out.log_one_minus = 0.0;  // s(0) = 0
    for (long a = 1; a <= a_max; ++a) {
        double l = log_one_minus_score(params, delta, static_cast<double>(a));
        if (l < out.log_one_minus) {  // strictly better; ties keep the smaller level
            out.log_one_minus = l;
            out.argmax = a;
        }
    }
    double tail = log_one_minus_score(params, delta, static_cast<double>(a_max));
    if (!(tail > out.log_one_minus))
        throw std::logic_error("score scan did not bracket the maximum");
    out.value = params.reward * (1.0 - std::exp(out.log_one_minus));
    return out;
}

ScoreBounds score_bounds(const MdpParams& params, DiscountFactor delta) {
    validate(params);
    const double a_star = critical_threshold(params, delta);
    const double sq = std::exp(0.5 * (delta.log_complement() - std::log1p(-params.alpha)));
    const double ratio = sq * sq;  // (1-delta)/(1-alpha)
    const double dpow = std::exp(-(a_star + 1.0) * delta.log_value());  // delta^-(a*+1)

    ScoreBounds out;
    // complements of the three bounds (distance below 1)
    const double c_lower = 2.0 * dpow * sq;
    const double c_upper = 2.0 * sq - 3.0 * ratio;
    const double c_off = std::pow(params.alpha, -0.25) * sq -
                         ratio * (params.alpha + 1.0 / std::sqrt(params.alpha));
    out.lower_at_astar = 1.0 - c_lower;
    out.upper_at_astar = 1.0 - c_upper;
    out.off_grid_upper = 1.0 - c_off;

    const double c_score =
        a_star == 0.0 ? 1.0 : std::exp(log_one_minus_score(params, delta, a_star));
    out.score_at_astar = params.reward * (1.0 - c_score);

    const double slack = 1e-9;
    if (c_score > c_lower * (1.0 + slack) + 1e-15 || c_score < c_upper * (1.0 - slack) - 1e-15)
        throw std::logic_error("sandwich bounds failed around the critical threshold");
    return out;
}

double asymptotic_ratio(const MdpParams& params, DiscountFactor delta) {
    MdpParams unit{params.alpha, 1.0};
    auto v = mdp_value(unit, delta);
    return std::exp(v.log_one_minus - 0.5 * delta.log_complement());
}

MdpViResult mdp_vi_oracle(const MdpParams& params, DiscountFactor delta, int level_cap,
                          const ViConfig& cfg) {
    validate(params);
    require(level_cap >= 2, "level cap too small");
    require(delta.value() <= 0.999, "the Bellman oracle is for moderate discounts only");

    // states: levels 0..L, then success*, failure*
    FiniteStochasticGame g;
    const int L = level_cap;
    const int success = L + 1, failure = L + 2;
    const int n = L + 3;
    g.state_ids.resize(n);
    for (int l = 0; l <= L; ++l) g.state_ids[l] = "level" + std::to_string(l);
    g.state_ids[success] = "success*";
    g.state_ids[failure] = "failure*";
    g.actions1.assign(n, {"wait", "jump"});
    g.actions1[success] = {"-"};
    g.actions1[failure] = {"-"};
    g.actions2.assign(n, {"-"});
    g.absorbing.assign(n, false);
    g.absorbing[success] = g.absorbing[failure] = true;
    g.transition.assign(n, {});
    g.payoff1.assign(n, {});
    g.payoff2.assign(n, {});
    const double alpha = params.alpha;
    for (int l = 0; l <= L; ++l) {
        const int up = std::min(l + 1, L);  // waiting at the cap self-loops
        const double miss = std::pow(alpha, static_cast<double>(l));
        g.transition[l] = {{{{up, alpha}, {0, 1.0 - alpha}}},
                           {{{success, 1.0 - miss}, {failure, miss}}}};
        g.payoff1[l] = {{0.0}, {0.0}};
        g.payoff2[l] = {{0.0}, {0.0}};
    }
    for (int abs_state : {success, failure}) {
        g.transition[abs_state] = {{{{abs_state, 1.0}}}};
        g.payoff1[abs_state] = {{abs_state == success ? params.reward : 0.0}};
        g.payoff2[abs_state] = {{0.0}};
    }

    auto vi = mdp_value_iteration(g, delta, cfg);
    MdpViResult out;
    out.value = vi.value[0];
    out.residual = vi.residual;
    out.iters = vi.iters;
    out.jump_level = L + 1;
    for (int l = 0; l <= L; ++l)
        if (vi.policy[l] == 1) {
            out.jump_level = l;
            break;
        }
    // a greedy threshold close to the cap means the truncation may bind; a
    // policy that never jumps (possible at delta = 0, where everything ties)
    // is not a truncation artifact
    if (out.jump_level > L - 5 && out.jump_level <= L)
        throw std::runtime_error("level cap too small: greedy jump level reached " +
                                 std::to_string(out.jump_level) + " with cap " + std::to_string(L));
    return out;
}

}  // namespace dsg
