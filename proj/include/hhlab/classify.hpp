#pragma once

/**
 * @file classify.hpp
 * @brief Grid-sampled membership tests for the phi-r-convex classes and a
 *        bisection estimate of the smallest admissible r.
 *
 * f is phi-r-convex on the segment when, for all u, v and t in [0, 1],
 *
 *     f(u + t k (v - u)) <= M_r(f(u), f(v); t)
 *
 * with k = cos(phi) in RealProjection mode and k = 1 in Parameter mode.
 * r = 1 is phi-convexity and r = 0 logarithmic phi-convexity. u and v range
 * over [a, b] (over [0, 1] for the tight family, whose coordinate is the path
 * parameter). A grid verdict is evidence on the sampled points only.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/means.hpp"
#include "hhlab/numfmt.hpp"
#include "hhlab/path.hpp"

namespace hhlab {

struct GridSpec {
    std::size_t u = 33;
    std::size_t v = 33;
    std::size_t t = 17;
    /// A point counts as violating when lhs - rhs > slack * max(1, |rhs|).
    double slack = 1e-12;

    std::string to_string() const {
        return std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(t);
    }

    /// Parses "U,V,T"; every size must be at least 2.
    static GridSpec parse(std::string_view text) {
        GridSpec g;
        std::size_t sizes[3];
        std::size_t start = 0;
        for (int i = 0; i < 3; ++i) {
            const std::size_t comma = text.find(',', start);
            if ((i < 2) == (comma == std::string_view::npos))
                throw UsageError("grid must be U,V,T, got '" + std::string(text) + "'");
            const std::string_view part = text.substr(start, i < 2 ? comma - start : text.npos);
            const double v = parse_real(part);
            if (v != std::floor(v) || v < 2 || v > 1e6)
                throw UsageError("grid sizes must be integers >= 2, got '" + std::string(part) + "'");
            sizes[i] = static_cast<std::size_t>(v);
            start = comma + 1;
        }
        g.u = sizes[0];
        g.v = sizes[1];
        g.t = sizes[2];
        return g;
    }
};

struct ConvexityWitness {
    double u = 0.0, v = 0.0, t = 0.0;
    double lhs = 0.0;  ///< f at the path point
    double rhs = 0.0;  ///< power mean of f(u), f(v)
    double margin() const { return lhs - rhs; }
};

struct ClassVerdict {
    PowerParam r;
    bool holds = true;          ///< no grid point exceeded the slack
    double worst_margin = 0.0;  ///< max over the grid of lhs - rhs
    ConvexityWitness witness;   ///< point attaining worst_margin
    GridSpec grid;
    /// Always "grid-certified": sampled evidence, not a proof.
    std::string qualifier = "grid-certified";
    /// Set when r < 0, where none of the integral bounds apply.
    bool outside_theorem_hypotheses = false;
};

namespace detail {

inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
    if (i + 1 == n) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

inline std::pair<double, double> class_domain(const FuncSpec& f, const PathSegment& seg) {
    if (f.is_tight()) return {0.0, 1.0};
    return {std::min(seg.a, seg.b), std::max(seg.a, seg.b)};
}

}  // namespace detail

/// lhs and rhs of the defining inequality at one (u, v, t).
inline ConvexityWitness convexity_margin_at(const FuncSpec& f, const PathSegment& seg, PowerParam r, double u,
                                            double v, double t) {
    const double k = seg.direction_factor();
    ConvexityWitness w{u, v, t, 0.0, 0.0};
    w.lhs = f.value_at(u + t * k * (v - u));
    w.rhs = power_mean(f.value_at(u), f.value_at(v), t, r);
    return w;
}

inline ClassVerdict check_phi_r_convex(const FuncSpec& f, const PathSegment& seg, PowerParam r,
                                       const GridSpec& grid = {}) {
    if (grid.u < 2 || grid.v < 2 || grid.t < 2) throw DomainError("grid sizes must be at least 2");
    const auto [lo, hi] = detail::class_domain(f, seg);
    const double k = seg.direction_factor();

    // f(u), f(v) are reused across the t loop
    std::vector<double> fu(grid.u), fv(grid.v);
    for (std::size_t i = 0; i < grid.u; ++i) fu[i] = f.value_at(detail::grid_point(lo, hi, i, grid.u));
    for (std::size_t j = 0; j < grid.v; ++j) fv[j] = f.value_at(detail::grid_point(lo, hi, j, grid.v));

    ClassVerdict out;
    out.r = r;
    out.grid = grid;
    out.outside_theorem_hypotheses = r.value() < 0.0;
    bool first = true;
    for (std::size_t i = 0; i < grid.u; ++i) {
        const double u = detail::grid_point(lo, hi, i, grid.u);
        for (std::size_t j = 0; j < grid.v; ++j) {
            const double v = detail::grid_point(lo, hi, j, grid.v);
            for (std::size_t l = 0; l < grid.t; ++l) {
                const double t = detail::grid_point(0.0, 1.0, l, grid.t);
                double lhs;
                try {
                    lhs = f.value_at(u + t * k * (v - u));
                } catch (const EvaluationError& e) {
                    throw EvaluationError(e.kind(), std::string(e.what()) + " (grid u = " + format_real(u) +
                                                        ", v = " + format_real(v) + ", t = " + format_real(t) + ")");
                }
                const double rhs = power_mean(fu[i], fv[j], t, r);
                const double m = lhs - rhs;
                // strict '>' keeps the lexicographically first (u, v, t) on ties
                if (first || m > out.worst_margin) {
                    out.worst_margin = m;
                    out.witness = ConvexityWitness{u, v, t, lhs, rhs};
                    first = false;
                }
                if (m > grid.slack * std::max(1.0, std::abs(rhs))) out.holds = false;
            }
        }
    }
    return out;
}

/// Result of the r-index scan. Sentinels mark the ends of the scan range.
struct RIndex {
    enum class Kind { Finite, BelowFloor, AboveCeiling };
    Kind kind = Kind::Finite;
    double value = 0.0;  ///< meaningful for Finite only

    std::string to_string() const {
        switch (kind) {
            case Kind::BelowFloor: return "below-floor";
            case Kind::AboveCeiling: return "above-ceiling";
            default: return format_real(value);
        }
    }
};

inline constexpr double kRScanFloor = -8.0;
inline constexpr double kRScanCeiling = 8.0;

/// Smallest r in [-8, 8] (to within `resolution`) at which the grid check
/// holds. r-convexity at r implies it at every larger r, so bisection on the
/// boundary between failing and holding r is sound.
inline RIndex r_convexity_index(const FuncSpec& f, const PathSegment& seg, const GridSpec& grid = {},
                                double resolution = 1e-3) {
    if (!(resolution > 0.0)) throw DomainError("resolution must be positive");
    auto holds = [&](double r) { return check_phi_r_convex(f, seg, PowerParam(r), grid).holds; };
    if (holds(kRScanFloor)) return {RIndex::Kind::BelowFloor, kRScanFloor};
    if (!holds(kRScanCeiling)) return {RIndex::Kind::AboveCeiling, kRScanCeiling};
    double fail = kRScanFloor, ok = kRScanCeiling;
    while (ok - fail > resolution) {
        const double mid = 0.5 * (fail + ok);
        (holds(mid) ? ok : fail) = mid;
    }
    return {RIndex::Kind::Finite, ok};
}

}  // namespace hhlab
