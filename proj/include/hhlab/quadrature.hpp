#pragma once

/**
 * @file quadrature.hpp
 * @brief Globally adaptive Gauss-Kronrod (7/15) integration on finite
 *        intervals, and the closed-form integral of the tight family.
 *
 * Each panel is integrated with the 15-point Kronrod rule; the embedded
 * 7-point Gauss rule provides the local error estimate (QUADPACK scaling,
 * floored at the roundoff level of the panel). A panel is accepted when
 *
 *     err_panel <= max(tol * width / (hi - lo), roundoff_floor)
 *
 * The panel with the largest estimate is bisected next. The returned value
 * sums accepted panels in position order.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/means.hpp"
#include "hhlab/path.hpp"

namespace hhlab {

inline constexpr double kDefaultQuadTolerance = 1e-10;
inline constexpr std::size_t kDefaultMaxPanels = std::size_t{1} << 14;

struct QuadratureOptions {
    double tol = kDefaultQuadTolerance;  ///< absolute, spread per unit length
    std::size_t max_panels = kDefaultMaxPanels;
};

struct IntegralEstimate {
    double value = 0.0;
    double error_bound = 0.0;
    std::size_t subdivisions = 0;  ///< panels in the final partition
    bool converged = false;        ///< every panel accepted and error_bound <= tol
};

namespace detail {

// Kronrod abscissae (xgk[1], xgk[3], xgk[5] are the Gauss nodes) and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo, hi;
    double value;
    double error;
    double roundoff;

    bool operator<(const Panel& o) const {
        // max-heap on error, ties broken by position for determinism
        if (error != o.error) return error < o.error;
        return lo > o.lo;
    }
};

template <class F>
Panel kronrod15(F& g, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = g(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = g(center - dx);
        f2[j] = g(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

    const double len = std::abs(half);
    resk *= half;
    resabs *= len;
    resasc *= len;
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    err = std::max(err, roundoff);
    return Panel{lo, hi, resk, err, roundoff};
}

}  // namespace detail

/// Adaptive integral of g over [lo, hi]. Exceptions thrown by g propagate.
template <class F>
    requires std::invocable<F&, double>
IntegralEstimate integrate(F&& g, double lo, double hi, const QuadratureOptions& opt = {}) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("integrate: need finite lo < hi");
    if (!(opt.tol > 0.0)) throw DomainError("integrate: tolerance must be positive");
    if (opt.max_panels < 1) throw DomainError("integrate: max_panels must be at least 1");

    const double length = hi - lo;
    auto acceptable = [&](const detail::Panel& p) {
        return p.error <= std::max(opt.tol * (p.hi - p.lo) / length, p.roundoff);
    };

    std::vector<detail::Panel> done;
    std::priority_queue<detail::Panel> open;
    std::size_t panels = 1;

    auto file = [&](const detail::Panel& p) {
        if (acceptable(p)) done.push_back(p);
        else open.push(p);
    };
    file(detail::kronrod15(g, lo, hi));

    while (!open.empty() && panels < opt.max_panels) {
        const detail::Panel worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // no room left to bisect
            done.push_back(worst);
            continue;
        }
        file(detail::kronrod15(g, worst.lo, mid));
        file(detail::kronrod15(g, mid, worst.hi));
        ++panels;
    }
    const bool exhausted = !open.empty();
    while (!open.empty()) {
        done.push_back(open.top());
        open.pop();
    }

    std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    // Neumaier summation in position order
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const auto& p : done) {
        const double t = sum + p.value;
        comp += std::abs(sum) >= std::abs(p.value) ? (sum - t) + p.value : (p.value - t) + sum;
        sum = t;
        err += p.error;
    }
    IntegralEstimate out;
    out.value = sum + comp;
    out.error_bound = err;
    out.subdivisions = done.size();
    out.converged = !exhausted && err <= opt.tol;
    return out;
}

/// Integral mean of f along the path: the integral of path_eval(f, seg, t)
/// over t in [0, 1].
inline IntegralEstimate mean_integral(const FuncSpec& f, const PathSegment& seg, const QuadratureOptions& opt = {}) {
    return integrate([&](double t) { return path_eval(f, seg, t); }, 0.0, 1.0, opt);
}

/// Exact integral over t in [0, 1] of ((1-t) A + t B)^(1/r).
///
/// With q = (r + 1) / r the antiderivative gives
/// (B^q - A^q) / (q (B - A)) = A^q * expm1(q ln(B/A)) / (q ln(B/A)) / L(A, B),
/// which stays accurate as A -> B and as q -> 0.
inline double exact_tight_integral(double A, double B, PowerParam r) {
    detail::require_positive(A, "exact_tight_integral: A");
    detail::require_positive(B, "exact_tight_integral: B");
    const double rv = r.value();
    if (!r.is_finite() || rv == 0.0 || rv == -1.0)
        throw DomainError("exact_tight_integral: r must be finite and not 0 or -1");
    if (A == B) return std::exp(std::log(A) / rv);
    const double q = (rv + 1.0) / rv;
    const double z = q * (std::log(B) - std::log(A));
    const double phi1 = z == 0.0 ? 1.0 : std::expm1(z) / z;
    return std::exp(q * std::log(A)) * phi1 / log_mean(A, B);
}

}  // namespace hhlab
