#pragma once

/**
 * @file path.hpp
 * @brief The path u + t e^{i phi}(v - u) as a real segment, plus the function
 *        families evaluated along it.
 *
 * Two readings of the displacement e^{i phi}(b - a) are offered:
 *
 *   RealProjection  d = cos(phi) (b - a); the path is a + t d on the real line.
 *                   phi = 0 gives the ordinary segment [a, b].
 *   Parameter       d = 1; the path is a + t for t in [0, 1].
 *
 * After the substitution x = a + t d every integral mean becomes an integral
 * over t in [0, 1] of g(t) = f(a + t d), so both readings feed the same
 * machinery. Endpoint bounds always use f(a) and f(b) at the original b.
 */

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/expr.hpp"
#include "hhlab/means.hpp"
#include "hhlab/numfmt.hpp"

namespace hhlab {

enum class PathMode { RealProjection, Parameter };

inline const char* to_string(PathMode m) { return m == PathMode::RealProjection ? "real" : "param"; }

inline PathMode parse_path_mode(std::string_view s) {
    if (s == "real") return PathMode::RealProjection;
    if (s == "param") return PathMode::Parameter;
    throw UsageError("unknown path mode '" + std::string(s) + "' (expected real or param)");
}

/// cos(phi) below this is treated as a collapsed segment.
inline constexpr double kDegenerateCos = 1e-12;

struct PathSegment {
    double a = 0.0;
    double b = 1.0;
    double phi = 0.0;
    PathMode mode = PathMode::RealProjection;
    double d = 1.0;  ///< effective displacement; the path is a + t d

    /// Point reached at parameter t.
    double point(double t) const { return a + t * d; }

    /// Factor applied to (v - u) when walking from u toward v.
    double direction_factor() const { return mode == PathMode::RealProjection ? std::cos(phi) : 1.0; }
};

inline PathSegment make_segment(double a, double b, double phi, PathMode mode = PathMode::RealProjection) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("segment endpoints must be finite");
    if (!(phi >= 0.0 && phi <= std::numbers::pi / 2))
        throw DomainError("phi must lie in [0, pi/2], got " + format_real(phi));
    PathSegment seg{a, b, phi, mode, 1.0};
    if (mode == PathMode::Parameter) return seg;
    if (!(a < b)) throw DomainError("segment requires a < b, got a = " + format_real(a) + ", b = " + format_real(b));
    const double c = std::cos(phi);
    if (c < kDegenerateCos) throw DomainError("degenerate segment: cos(phi) = 0 collapses [a, a + d]");
    seg.d = phi == 0.0 ? b - a : c * (b - a);
    return seg;
}

// Function families ---------------------------------------------------------

/// g(t) = ((1-t) A + t B)^(1/r): g^r is affine in the path parameter, so the
/// defining r-convexity inequality holds with equality.
struct TightFamily {
    double A = 1.0;
    double B = 1.0;
    PowerParam r{1.0};
};

/// f(x) = exp(alpha x + beta).
struct ExpAffine {
    double alpha = 0.0;
    double beta = 0.0;
};

/// f(x) = (c + m x)^p, requires c + m x > 0 where evaluated.
struct PowerAffine {
    double p = 1.0;
    double c = 1.0;
    double m = 0.0;
};

struct ExprFunction {
    ExprPtr ast;
};

class FuncSpec {
public:
    using Variant = std::variant<TightFamily, ExpAffine, PowerAffine, ExprFunction>;

    FuncSpec() : FuncSpec(PowerAffine{1.0, 1.0, 0.0}) {}

    FuncSpec(TightFamily f) : v_(f) {
        detail::require_positive(f.A, "tight family A");
        detail::require_positive(f.B, "tight family B");
        if (!f.r.is_finite() || f.r.value() == 0.0)
            throw DomainError("tight family needs a finite nonzero r");
        label_ = to_text();
    }
    FuncSpec(ExpAffine f) : v_(f) {
        if (!std::isfinite(f.alpha) || !std::isfinite(f.beta)) throw DomainError("expaffine parameters must be finite");
        label_ = to_text();
    }
    FuncSpec(PowerAffine f) : v_(f) {
        if (!std::isfinite(f.p) || !std::isfinite(f.c) || !std::isfinite(f.m))
            throw DomainError("poweraffine parameters must be finite");
        label_ = to_text();
    }
    FuncSpec(ExprFunction f) : v_(std::move(f)) {
        if (!std::get<ExprFunction>(v_).ast) throw DomainError("empty expression");
        label_ = to_text();
    }

    /// The constant function c, represented exactly as (c + 0 x)^1.
    static FuncSpec constant(double c) {
        detail::require_positive(c, "constant");
        return FuncSpec(PowerAffine{1.0, c, 0.0});
    }

    /// Parses `tight:A,B,r`, `expaffine:alpha,beta`, `poweraffine:p,c,m`,
    /// `const:c` or `expr:<expression>`.
    static FuncSpec parse(std::string_view text);

    const Variant& variant() const { return v_; }
    const std::string& label() const { return label_; }
    bool is_tight() const { return std::holds_alternative<TightFamily>(v_); }

    /// Canonical text form; parse(to_text()) reproduces the function exactly.
    std::string to_text() const;

    /// Value of the function at its own coordinate: x for the x-domain
    /// families, the path parameter for TightFamily. Must be positive.
    double value_at(double x) const;

    /// c f for c > 0, expressed in the same family where possible.
    FuncSpec scaled(double c) const;

private:
    Variant v_;
    std::string label_;
};

namespace detail {

inline double require_positive_value(double v, double x) {
    if (!(v > 0.0))
        throw EvaluationError(EvaluationError::Kind::NotPositive,
                              "function value " + format_real(v) + " at " + format_real(x) + " is not positive");
    if (!std::isfinite(v))
        throw EvaluationError(EvaluationError::Kind::Overflow, "function value overflows at " + format_real(x));
    return v;
}

inline std::vector<double> split_numbers(std::string_view body, std::size_t expected, std::string_view family) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = body.find(',', start);
        out.push_back(parse_real(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (out.size() != expected)
        throw UsageError(std::string(family) + " expects " + std::to_string(expected) + " comma-separated numbers");
    return out;
}

}  // namespace detail

inline FuncSpec FuncSpec::parse(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos)
        throw UsageError("function spec must look like family:params, got '" + std::string(text) + "'");
    const std::string_view family = text.substr(0, colon);
    const std::string_view body = text.substr(colon + 1);
    try {
        if (family == "tight") {
            auto n = detail::split_numbers(body, 3, family);
            return FuncSpec(TightFamily{n[0], n[1], PowerParam(n[2])});
        }
        if (family == "expaffine") {
            auto n = detail::split_numbers(body, 2, family);
            return FuncSpec(ExpAffine{n[0], n[1]});
        }
        if (family == "poweraffine") {
            auto n = detail::split_numbers(body, 3, family);
            return FuncSpec(PowerAffine{n[0], n[1], n[2]});
        }
        if (family == "const") {
            auto n = detail::split_numbers(body, 1, family);
            return FuncSpec::constant(n[0]);
        }
    } catch (const DomainError& e) {
        throw UsageError(std::string("invalid function spec '") + std::string(text) + "': " + e.what());
    }
    if (family == "expr") return FuncSpec(ExprFunction{parse_expr(body)});
    throw UsageError("unknown function family '" + std::string(family) +
                     "' (expected tight, expaffine, poweraffine, const or expr)");
}

inline std::string FuncSpec::to_text() const {
    struct {
        std::string operator()(const TightFamily& f) const {
            return "tight:" + format_real(f.A) + "," + format_real(f.B) + "," + f.r.to_string();
        }
        std::string operator()(const ExpAffine& f) const {
            return "expaffine:" + format_real(f.alpha) + "," + format_real(f.beta);
        }
        std::string operator()(const PowerAffine& f) const {
            return "poweraffine:" + format_real(f.p) + "," + format_real(f.c) + "," + format_real(f.m);
        }
        std::string operator()(const ExprFunction& f) const { return "expr:" + print_expr(*f.ast); }
    } visitor;
    return std::visit(visitor, v_);
}

inline double FuncSpec::value_at(double x) const {
    struct {
        double x;
        double operator()(const TightFamily& f) const {
            const double base = (1.0 - x) * f.A + x * f.B;
            if (!(base > 0.0))
                throw EvaluationError(EvaluationError::Kind::Domain,
                                      "tight family base is not positive at t = " + format_real(x));
            return std::exp(std::log(base) / f.r.value());
        }
        double operator()(const ExpAffine& f) const { return std::exp(f.alpha * x + f.beta); }
        double operator()(const PowerAffine& f) const {
            const double base = f.c + f.m * x;
            if (!(base > 0.0))
                throw EvaluationError(EvaluationError::Kind::Domain,
                                      "poweraffine base c + m x = " + format_real(base) + " is not positive at x = " +
                                          format_real(x));
            if (f.p == 1.0) return base;
            return std::pow(base, f.p);
        }
        double operator()(const ExprFunction& f) const { return eval_expr(*f.ast, x); }
    } visitor{x};
    return detail::require_positive_value(std::visit(visitor, v_), x);
}

inline FuncSpec FuncSpec::scaled(double c) const {
    detail::require_positive(c, "scale factor");
    struct {
        double c;
        FuncSpec operator()(const TightFamily& f) const {
            const double k = std::pow(c, f.r.value());
            return FuncSpec(TightFamily{f.A * k, f.B * k, f.r});
        }
        FuncSpec operator()(const ExpAffine& f) const { return FuncSpec(ExpAffine{f.alpha, f.beta + std::log(c)}); }
        FuncSpec operator()(const PowerAffine& f) const {
            if (f.p == 0.0)
                return FuncSpec(ExprFunction{ExprNode::constant(c)});
            const double k = std::pow(c, 1.0 / f.p);
            return FuncSpec(PowerAffine{f.p, f.c * k, f.m * k});
        }
        FuncSpec operator()(const ExprFunction& f) const {
            return FuncSpec(ExprFunction{ExprNode::binary(NodeKind::Mul, ExprNode::constant(c), f.ast)});
        }
    } visitor{c};
    return std::visit(visitor, v_);
}

/// g(t) = f(a + t d); the tight family is evaluated at t directly.
inline double path_eval(const FuncSpec& f, const PathSegment& seg, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("path parameter t must lie in [0, 1], got " + format_real(t));
    const double x = f.is_tight() ? t : seg.point(t);
    try {
        return f.value_at(x);
    } catch (const EvaluationError& e) {
        throw EvaluationError(e.kind(), std::string(e.what()) + " (path t = " + format_real(t) + ", x = " +
                                            format_real(x) + ", f = " + f.label() + ")");
    }
}

/// (f(a), f(b)) at the original endpoints; (A^(1/r), B^(1/r)) for the tight family.
inline std::pair<double, double> endpoint_values(const FuncSpec& f, const PathSegment& seg) {
    if (f.is_tight()) return {f.value_at(0.0), f.value_at(1.0)};
    return {f.value_at(seg.a), f.value_at(seg.b)};
}

}  // namespace hhlab
