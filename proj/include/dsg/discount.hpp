#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

/// A discount factor delta in [0,1), stored by its complement x = 1 - delta.
///
/// The constructions studied here need discounts whose distance to 1 is as
/// small as (1-a)*a^(2k) for k in the hundreds, far below DBL_EPSILON and, for
/// the deepest grid points, below the smallest subnormal. The complement is
/// therefore carried twice: as a plain double (exact whenever representable,
/// 0 once it underflows) and as its natural log, which every formula near
/// delta = 1 is evaluated from.
class DiscountFactor {
  public:
    static DiscountFactor from_value(double delta) {
        require(delta >= 0.0 && delta < 1.0, "discount factor must lie in [0,1)");
        double x = 1.0 - delta;
        return DiscountFactor(x, std::log(x));
    }
    static DiscountFactor from_complement(double x) {
        require(x > 0.0 && x <= 1.0, "discount complement must lie in (0,1]");
        return DiscountFactor(x, std::log(x));
    }
    static DiscountFactor from_log_complement(double lx) {
        require(std::isfinite(lx) && lx <= 0.0, "log-complement must be finite and <= 0");
        return DiscountFactor(std::exp(lx), lx);
    }

    /// delta itself; rounds to 1.0 once the complement is below ~1e-16.
    double value() const { return 1.0 - complement_; }
    /// x = 1 - delta (0.0 only if the complement underflowed; see log_complement).
    double complement() const { return complement_; }
    double log_complement() const { return log_complement_; }
    /// ln(delta), computed as log1p(-x).
    double log_value() const { return std::log1p(-complement_); }
    /// delta^k without forming delta when delta is close to 1.
    double pow(double k) const {
        if (k == 0.0) return 1.0;
        return std::exp(k * log_value());
    }
    /// true when x = 1 - delta is no longer representable as a double
    bool deep() const { return complement_ == 0.0; }

    bool operator==(const DiscountFactor& o) const {
        return complement_ == o.complement_ && log_complement_ == o.log_complement_;
    }

  private:
    DiscountFactor(double x, double lx) : complement_(x), log_complement_(lx) {}
    double complement_;
    double log_complement_;
};

}  // namespace dsg
