#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsg {

// ln(e^a + e^b), stable for widely separated magnitudes.
inline double log_add(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// ln(e^a - e^b) for a > b.
inline double log_sub(double a, double b) {
    if (std::isinf(b) && b < 0) return a;
    if (b >= a) throw std::domain_error("log_sub: requires a > b");
    return a + std::log1p(-std::exp(b - a));
}

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// distance of x to the nearest integer
inline double int_distance(double x) {
    double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

}  // namespace dsg
