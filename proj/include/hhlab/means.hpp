#pragma once

/**
 * @file means.hpp
 * @brief Weighted power means and the two-argument geometric and
 *        logarithmic means.
 *
 * The weighted power mean of order r is
 *
 *     M_r(x, y; t) = ((1-t) x^r + t y^r)^(1/r),     r != 0
 *     M_0(x, y; t) = x^(1-t) y^t
 *     M_-inf = min(x, y),  M_+inf = max(x, y)
 *
 * and is nondecreasing in r. Everything here is evaluated through
 * logarithms so that x^r never has to be representable.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "hhlab/error.hpp"
#include "hhlab/numfmt.hpp"

namespace hhlab {

/// |r| below this routes power_mean to the geometric branch.
inline constexpr double kPowerZeroThreshold = 1e-8;

/// |p - q| <= this * max(p, q) routes log_mean to its series expansion.
inline constexpr double kLogMeanProximity = 1e-6;

/// Exponent of a power mean; an extended real. Zero is the geometric case.
class PowerParam {
public:
    constexpr PowerParam() = default;
    constexpr explicit PowerParam(double r) : r_(r) {}

    static constexpr PowerParam neg_infinity() { return PowerParam(-std::numeric_limits<double>::infinity()); }
    static constexpr PowerParam pos_infinity() { return PowerParam(std::numeric_limits<double>::infinity()); }

    constexpr double value() const { return r_; }
    bool is_finite() const { return std::isfinite(r_); }
    bool is_geometric() const { return std::abs(r_) < kPowerZeroThreshold; }

    std::string to_string() const { return format_real(r_); }

    /// Inverse of to_string(); "inf", "+inf" and "-inf" are the sentinels.
    static PowerParam parse(std::string_view text) {
        double v = parse_real(text);
        if (std::isnan(v)) throw UsageError("power parameter cannot be NaN");
        return PowerParam(v);
    }

    friend bool operator==(const PowerParam&, const PowerParam&) = default;

private:
    double r_ = 1.0;
};

namespace detail {

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(what) + " must be a positive finite real, got " + format_real(v));
}

// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
    if (a == -HUGE_VAL) return b;
    if (b == -HUGE_VAL) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace detail

/// Weighted power mean ((1-t) x^r + t y^r)^(1/r) with the geometric branch at
/// r = 0 and min / max at r = -inf / +inf.
inline double power_mean(double x, double y, double t, PowerParam r) {
    detail::require_positive(x, "power_mean: x");
    detail::require_positive(y, "power_mean: y");
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("power_mean: weight t must lie in [0, 1], got " + format_real(t));

    if (t == 0.0) return x;
    if (t == 1.0) return y;

    const double rv = r.value();
    if (rv == -HUGE_VAL) return std::min(x, y);
    if (rv == HUGE_VAL) return std::max(x, y);

    const double lx = std::log(x), ly = std::log(y);
    if (r.is_geometric()) return std::exp((1.0 - t) * lx + t * ly);

    const double a = rv * lx, b = rv * ly;
    double log_sum;
    if (std::abs(a) < 1.0 && std::abs(b) < 1.0) {
        // Near r = 0 the mean is 1 + O(r); expm1/log1p keep the O(r) part.
        log_sum = std::log1p((1.0 - t) * std::expm1(a) + t * std::expm1(b));
    } else {
        log_sum = detail::log_add_exp(std::log1p(-t) + a, std::log(t) + b);
    }
    return std::exp(log_sum / rv);
}

/// G(p, q) = sqrt(pq).
inline double geo_mean(double p, double q) {
    detail::require_positive(p, "geo_mean: p");
    detail::require_positive(q, "geo_mean: q");
    return std::sqrt(p) * std::sqrt(q);
}

/// L(p, q) = (p - q) / (ln p - ln q), with L(p, p) = p.
inline double log_mean(double p, double q) {
    detail::require_positive(p, "log_mean: p");
    detail::require_positive(q, "log_mean: q");
    if (std::abs(p - q) <= kLogMeanProximity * std::max(p, q)) {
        // L = m * u / atanh(u), u = (p - q) / (p + q)
        const double m = 0.5 * (p + q);
        const double u = (p - q) / (p + q);
        const double u2 = u * u;
        return m * (1.0 - u2 / 3.0 - 4.0 * u2 * u2 / 45.0);
    }
    const double lo = std::min(p, q), hi = std::max(p, q);
    if (hi <= 2.0 * lo) return (hi - lo) / std::log1p((hi - lo) / lo);
    return (p - q) / (std::log(p) - std::log(q));
}

}  // namespace hhlab
