#pragma once

/**
 * @file theorems.hpp
 * @brief One check per integral inequality. Each check computes both sides,
 *        the margin rhs - lhs, and a tolerance that budgets quadrature error.
 *
 * Notation used in the comments below: mean(h) is the integral over t in
 * [0, 1] of h along the path, fa = f(a), fb = f(b), ga = g(a), gb = g(b), and
 * P_r(f) = fa^r + fb^r.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/means.hpp"
#include "hhlab/numfmt.hpp"
#include "hhlab/path.hpp"
#include "hhlab/quadrature.hpp"

namespace hhlab {

enum class Status { Holds, Violated, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Holds: return "holds";
        case Status::Violated: return "violated";
        default: return "inconclusive";
    }
}

inline Status parse_status(std::string_view s) {
    if (s == "holds") return Status::Holds;
    if (s == "violated") return Status::Violated;
    if (s == "inconclusive") return Status::Inconclusive;
    throw UsageError("unknown status '" + std::string(s) + "'");
}

struct Tolerances {
    double atol = 1e-9;
    double rtol = 1e-9;
    QuadratureOptions quad{};
};

/// Everything a check consumed, echoed into its verdict.
struct CheckInputs {
    FuncSpec f;
    std::optional<FuncSpec> g;
    PathSegment seg;
    std::optional<PowerParam> r;
    std::optional<PowerParam> s;
};

struct Verdict {
    std::string check_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;     ///< rhs - lhs
    double tolerance = 0.0;  ///< atol + rtol |rhs| + quadrature error
    Status status = Status::Inconclusive;
    std::string regime;
    CheckInputs inputs;
};

/// Builds a verdict. `quad_error` is the combined quadrature error bound of
/// the terms entering lhs and rhs.
inline Verdict make_verdict(std::string id, double lhs, double rhs, double quad_error, const Tolerances& tol,
                            std::string regime, const CheckInputs& inputs) {
    Verdict v;
    v.check_id = std::move(id);
    v.lhs = lhs;
    v.rhs = rhs;
    v.margin = rhs - lhs;
    v.tolerance = tol.atol + tol.rtol * std::abs(rhs) + quad_error;
    if (v.margin >= -v.tolerance) v.status = Status::Holds;
    else if (std::abs(v.margin) > quad_error) v.status = Status::Violated;
    else v.status = Status::Inconclusive;
    v.regime = std::move(regime);
    v.inputs = inputs;
    return v;
}

enum class TheoremId {
    HH,
    Z3,
    Z4,
    Z4Corrected,
    T16,
    T160,
    C1,
    C2FirstPrinted,
    C2FirstReconstructed,
    C2Second,
    C3First,
    C3Second,
    RemarkFirstPrinted,
    RemarkSecond,
};

inline constexpr std::array<std::pair<TheoremId, std::string_view>, 14> kTheoremNames{{
    {TheoremId::HH, "hh"},
    {TheoremId::Z3, "z3"},
    {TheoremId::Z4, "z4"},
    {TheoremId::Z4Corrected, "z4-corrected"},
    {TheoremId::T16, "t16"},
    {TheoremId::T160, "t160"},
    {TheoremId::C1, "c1"},
    {TheoremId::C2FirstPrinted, "c2-first-printed"},
    {TheoremId::C2FirstReconstructed, "c2-first-reconstructed"},
    {TheoremId::C2Second, "c2-second"},
    {TheoremId::C3First, "c3-first"},
    {TheoremId::C3Second, "c3-second"},
    {TheoremId::RemarkFirstPrinted, "remark-first-printed"},
    {TheoremId::RemarkSecond, "remark-second"},
}};

inline std::string_view to_string(TheoremId id) {
    for (const auto& [k, name] : kTheoremNames)
        if (k == id) return name;
    return "?";
}

inline TheoremId parse_theorem_id(std::string_view name) {
    for (const auto& [k, n] : kTheoremNames)
        if (n == name) return k;
    throw UsageError("unknown theorem '" + std::string(name) + "'");
}

/// Whether the check reads a second function g.
inline bool needs_g(TheoremId id) {
    switch (id) {
        case TheoremId::T16:
        case TheoremId::T160:
        case TheoremId::C2FirstPrinted:
        case TheoremId::C2FirstReconstructed:
        case TheoremId::C2Second: return true;
        default: return false;
    }
}

/// Whether the check reads r (and s).
inline bool needs_r(TheoremId id) {
    switch (id) {
        case TheoremId::Z4:
        case TheoremId::Z4Corrected:
        case TheoremId::T16:
        case TheoremId::T160:
        case TheoremId::C3First:
        case TheoremId::C3Second: return true;
        default: return false;
    }
}

inline bool needs_s(TheoremId id) { return id == TheoremId::T16 || id == TheoremId::T160; }

namespace detail {

// (fa^r + fb^r)^(k/r) evaluated through logarithms.
inline double power_sum_root(double fa, double fb, double r, double k) {
    return std::exp(k * log_add_exp(r * std::log(fa), r * std::log(fb)) / r);
}

inline double require_positive_r(const std::optional<PowerParam>& r, const char* name) {
    if (!r) throw UsageError(std::string("this check needs --") + name);
    const double v = r->value();
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be a positive finite real, got " + r->to_string());
    return v;
}

inline const FuncSpec& require_g(const CheckInputs& in) {
    if (!in.g) throw UsageError("this check needs a second function (--func2)");
    return *in.g;
}

inline IntegralEstimate product_mean(const FuncSpec& f, const FuncSpec& g, const PathSegment& seg,
                                     const QuadratureOptions& opt) {
    return integrate([&](double t) { return path_eval(f, seg, t) * path_eval(g, seg, t); }, 0.0, 1.0, opt);
}

inline std::string value_note(std::string_view what, double v) {
    return std::string(what) + " = " + format_real(v);
}

}  // namespace detail

/// Classical Hermite-Hadamard: f((a+b)/2) <= mean(f) <= (f(a) + f(b)) / 2 on [a, b].
inline std::vector<Verdict> check_hh_classic(const FuncSpec& f, double a, double b, const Tolerances& tol = {}) {
    CheckInputs in{f, std::nullopt, make_segment(a, b, 0.0), std::nullopt, std::nullopt};
    const auto mean = mean_integral(f, in.seg, tol.quad);
    const double mid = path_eval(f, in.seg, 0.5);
    const auto [fa, fb] = endpoint_values(f, in.seg);
    const std::string regime = "classical interval [a, b]; both sides hold for convex f";
    return {make_verdict("hh-left", mid, mean.value, mean.error_bound, tol, regime, in),
            make_verdict("hh-right", mean.value, 0.5 * (fa + fb), mean.error_bound, tol, regime, in)};
}

struct ChainResult {
    /// f(mid), exp(mean ln f), mean G(f(x), f(a+b-x)), mean f, L(fa, fb), (fa+fb)/2
    std::array<double, 6> terms{};
    std::vector<Verdict> verdicts;  ///< z2-1 .. z2-5, one per adjacent pair
};

/// The log-convex refinement chain between the midpoint value and the
/// endpoint average, through the geometric and logarithmic means.
inline ChainResult check_chain_z2(const FuncSpec& f, double a, double b, const Tolerances& tol = {}) {
    CheckInputs in{f, std::nullopt, make_segment(a, b, 0.0), std::nullopt, std::nullopt};
    const PathSegment& seg = in.seg;

    const auto log_int = integrate([&](double t) { return std::log(path_eval(f, seg, t)); }, 0.0, 1.0, tol.quad);
    // x -> a + b - x is t -> 1 - t on the path
    const auto geo_int = integrate(
        [&](double t) { return geo_mean(path_eval(f, seg, t), path_eval(f, seg, 1.0 - t)); }, 0.0, 1.0, tol.quad);
    const auto mean = mean_integral(f, seg, tol.quad);
    const auto [fa, fb] = endpoint_values(f, seg);

    ChainResult out;
    out.terms[0] = path_eval(f, seg, 0.5);
    out.terms[1] = std::exp(log_int.value);
    out.terms[2] = geo_int.value;
    out.terms[3] = mean.value;
    out.terms[4] = log_mean(fa, fb);
    out.terms[5] = 0.5 * (fa + fb);

    const std::array<double, 6> err{0.0, out.terms[1] * std::expm1(log_int.error_bound), geo_int.error_bound,
                                    mean.error_bound, 0.0, 0.0};
    const std::string regime = "log-convex f on [a, b]";
    for (std::size_t i = 0; i < 5; ++i)
        out.verdicts.push_back(make_verdict("z2-" + std::to_string(i + 1), out.terms[i], out.terms[i + 1],
                                            err[i] + err[i + 1], tol, regime, in));
    return out;
}

/// f((2a + d)/2) <= mean(f) <= (f(a) + f(b)) / 2 along the path.
inline std::vector<Verdict> check_z3(const FuncSpec& f, const PathSegment& seg, const Tolerances& tol = {}) {
    CheckInputs in{f, std::nullopt, seg, std::nullopt, std::nullopt};
    const auto mean = mean_integral(f, seg, tol.quad);
    const double mid = path_eval(f, seg, 0.5);
    const auto [fa, fb] = endpoint_values(f, seg);
    const std::string regime = "phi-convex f; right side uses f(b) at the original endpoint b";
    return {make_verdict("z3-left", mid, mean.value, mean.error_bound, tol, regime, in),
            make_verdict("z3-right", mean.value, 0.5 * (fa + fb), mean.error_bound, tol, regime, in)};
}

enum class Z4Variant { Printed, Corrected };

/// mean(f) <= (r/(r+1))^(1/r) P_r(f)^(1/r)  (printed), or
/// mean(f) <= (r/(r+1)) P_r(f)^(1/r)        (corrected: the value the
/// Minkowski step yields once its outer exponent is kept).
inline Verdict check_z4(const FuncSpec& f, const PathSegment& seg, PowerParam r, Z4Variant variant,
                        const Tolerances& tol = {}) {
    CheckInputs in{f, std::nullopt, seg, r, std::nullopt};
    const double rv = detail::require_positive_r(in.r, "r");
    const auto mean = mean_integral(f, seg, tol.quad);
    const auto [fa, fb] = endpoint_values(f, seg);
    const double log_root = detail::log_add_exp(rv * std::log(fa), rv * std::log(fb)) / rv;
    const double log_coef = std::log(rv / (rv + 1.0));
    if (variant == Z4Variant::Printed) {
        const double rhs = std::exp(log_coef / rv + log_root);
        return make_verdict("z4", mean.value, rhs, mean.error_bound, tol,
                            "paper-variant consistent with Jensen for r >= 1; Minkowski step requires r <= 1", in);
    }
    const double rhs = std::exp(log_coef + log_root);
    return make_verdict("z4-corrected", mean.value, rhs, mean.error_bound, tol,
                        "corrected variant keeps the outer exponent of the Minkowski step; that step is valid for "
                        "1/r >= 1, i.e. r <= 1",
                        in);
}

/// 2 mean(fg) <= (r/(r+2)) P_r(f)^(2/r) + (s/(s+2)) P_s(g)^(2/s).
inline Verdict check_16(const FuncSpec& f, const FuncSpec& g, const PathSegment& seg, PowerParam r, PowerParam s,
                        const Tolerances& tol = {}) {
    CheckInputs in{f, g, seg, r, s};
    const double rv = detail::require_positive_r(in.r, "r");
    const double sv = detail::require_positive_r(in.s, "s");
    const auto prod = detail::product_mean(f, g, seg, tol.quad);
    const auto [fa, fb] = endpoint_values(f, seg);
    const auto [ga, gb] = endpoint_values(g, seg);
    const double rhs = rv / (rv + 2.0) * detail::power_sum_root(fa, fb, rv, 2.0) +
                       sv / (sv + 2.0) * detail::power_sum_root(ga, gb, sv, 2.0);
    return make_verdict("t16", 2.0 * prod.value, rhs, 2.0 * prod.error_bound, tol,
                        "Minkowski steps require exponent 2/r >= 1 and 2/s >= 1, i.e. r, s <= 2", in);
}

/// mean(fg) <= (rs/((r+2)(s+2)))^(1/2) P_r(f)^(2/r) P_s(g)^(2/s), as printed.
inline Verdict check_160(const FuncSpec& f, const FuncSpec& g, const PathSegment& seg, PowerParam r, PowerParam s,
                         const Tolerances& tol = {}) {
    CheckInputs in{f, g, seg, r, s};
    const double rv = detail::require_positive_r(in.r, "r");
    const double sv = detail::require_positive_r(in.s, "s");
    const auto prod = detail::product_mean(f, g, seg, tol.quad);
    const auto [fa, fb] = endpoint_values(f, seg);
    const auto [ga, gb] = endpoint_values(g, seg);
    const double coef = std::sqrt(rv * sv / ((rv + 2.0) * (sv + 2.0)));
    const double rhs = coef * detail::power_sum_root(fa, fb, rv, 2.0) * detail::power_sum_root(ga, gb, sv, 2.0);
    // The Cauchy-Schwarz and Minkowski steps deliver the exponents 1/r and 1/s.
    const double step_bound =
        coef * detail::power_sum_root(fa, fb, rv, 1.0) * detail::power_sum_root(ga, gb, sv, 1.0);
    return make_verdict("t160", prod.value, rhs, prod.error_bound, tol,
                        "Minkowski steps require r, s <= 2; printed exponents 2/r, 2/s make the right side "
                        "non-homogeneous; " +
                            detail::value_note("bound with exponents 1/r, 1/s", step_bound),
                        in);
}

enum class Corollary {
    C1,
    C2FirstPrinted,
    C2FirstReconstructed,
    C2Second,
    C3First,
    C3Second,
    RemarkFirstPrinted,
    RemarkSecond,
};

/// Corollaries and the closing remark. Printed forms are taken verbatim;
/// reconstructed forms substitute r = s = 1 into the product bounds.
/// `in.g` is read by the c2 forms, `in.r` by the c3 forms.
inline Verdict check_corollary(Corollary which, const CheckInputs& given, const Tolerances& tol = {}) {
    CheckInputs in = given;
    const FuncSpec& f = in.f;
    const PathSegment& seg = in.seg;
    const auto [fa, fb] = endpoint_values(f, seg);
    const double sf = fa + fb;

    switch (which) {
        case Corollary::C1: {
            in.g.reset();
            in.r.reset();
            in.s.reset();
            const auto mean = mean_integral(f, seg, tol.quad);
            return make_verdict("c1", mean.value, 0.5 * sf, mean.error_bound, tol, "z4 at r = 1", in);
        }
        case Corollary::C2FirstPrinted:
        case Corollary::C2FirstReconstructed:
        case Corollary::C2Second: {
            const FuncSpec& g = detail::require_g(in);
            in.r.reset();
            in.s.reset();
            const auto [ga, gb] = endpoint_values(g, seg);
            const double sg = ga + gb;
            const auto prod = detail::product_mean(f, g, seg, tol.quad);
            const double printed = (sf + sg) / 6.0;
            const double rebuilt = (sf * sf + sg * sg) / 6.0;
            if (which == Corollary::C2FirstPrinted)
                return make_verdict("c2-first-printed", prod.value, printed, prod.error_bound, tol,
                                    "printed form; r = s = 1 in t16 gives [(f(a)+f(b))^2 + (g(a)+g(b))^2]/6, " +
                                        detail::value_note("reconstructed rhs", rebuilt),
                                    in);
            if (which == Corollary::C2FirstReconstructed)
                return make_verdict("c2-first-reconstructed", prod.value, rebuilt, prod.error_bound, tol,
                                    "r = s = 1 substituted into t16; printed form ((f(a)+f(b)) + (g(a)+g(b)))/6 "
                                    "drops the squares, " +
                                        detail::value_note("printed rhs", printed),
                                    in);
            return make_verdict("c2-second", prod.value, sf * sf * sg * sg / 3.0, prod.error_bound, tol,
                                "printed form; coincides with t160 at r = s = 1", in);
        }
        case Corollary::C3First:
        case Corollary::C3Second: {
            const double rv = detail::require_positive_r(in.r, "r");
            in.g.reset();
            in.s.reset();
            const auto sq = detail::product_mean(f, f, seg, tol.quad);
            const double coef = rv / (rv + 2.0);
            if (which == Corollary::C3First)
                return make_verdict("c3-first", sq.value, coef * detail::power_sum_root(fa, fb, rv, 2.0),
                                    sq.error_bound, tol, "t16 with s = r and g = f", in);
            return make_verdict("c3-second", sq.value, coef * detail::power_sum_root(fa, fb, rv, 4.0), sq.error_bound,
                                tol, "printed form; coincides with t160 with s = r and g = f", in);
        }
        case Corollary::RemarkFirstPrinted: {
            in.g.reset();
            in.r.reset();
            in.s.reset();
            const auto mean = mean_integral(f, seg, tol.quad);
            return make_verdict("remark-first-printed", mean.value, (sf + 2.0) / 6.0, mean.error_bound, tol,
                                "printed form (g = 1 in c2 first); r = s = 1 in t16 gives [(f(a)+f(b))^2 + 4]/6, " +
                                    detail::value_note("reconstructed rhs", (sf * sf + 4.0) / 6.0),
                                in);
        }
        case Corollary::RemarkSecond: {
            in.g.reset();
            in.r.reset();
            in.s.reset();
            const auto mean = mean_integral(f, seg, tol.quad);
            return make_verdict("remark-second", mean.value, 4.0 * sf * sf / 3.0, mean.error_bound, tol,
                                "printed form; coincides with c2-second at g = 1", in);
        }
    }
    throw DomainError("unknown corollary");
}

/// Dispatches a named check. `hh` uses seg.a, seg.b on the plain interval.
inline std::vector<Verdict> run_theorem(TheoremId id, const CheckInputs& in, const Tolerances& tol = {}) {
    auto g = [&]() -> const FuncSpec& { return detail::require_g(in); };
    auto r = [&] {
        if (!in.r) throw UsageError("this check needs --r");
        return *in.r;
    };
    auto s = [&] {
        if (!in.s) throw UsageError("this check needs --s");
        return *in.s;
    };
    switch (id) {
        case TheoremId::HH: return check_hh_classic(in.f, in.seg.a, in.seg.b, tol);
        case TheoremId::Z3: return check_z3(in.f, in.seg, tol);
        case TheoremId::Z4: return {check_z4(in.f, in.seg, r(), Z4Variant::Printed, tol)};
        case TheoremId::Z4Corrected: return {check_z4(in.f, in.seg, r(), Z4Variant::Corrected, tol)};
        case TheoremId::T16: return {check_16(in.f, g(), in.seg, r(), s(), tol)};
        case TheoremId::T160: return {check_160(in.f, g(), in.seg, r(), s(), tol)};
        case TheoremId::C1: return {check_corollary(Corollary::C1, in, tol)};
        case TheoremId::C2FirstPrinted: return {check_corollary(Corollary::C2FirstPrinted, in, tol)};
        case TheoremId::C2FirstReconstructed: return {check_corollary(Corollary::C2FirstReconstructed, in, tol)};
        case TheoremId::C2Second: return {check_corollary(Corollary::C2Second, in, tol)};
        case TheoremId::C3First: return {check_corollary(Corollary::C3First, in, tol)};
        case TheoremId::C3Second: return {check_corollary(Corollary::C3Second, in, tol)};
        case TheoremId::RemarkFirstPrinted: return {check_corollary(Corollary::RemarkFirstPrinted, in, tol)};
        case TheoremId::RemarkSecond: return {check_corollary(Corollary::RemarkSecond, in, tol)};
    }
    throw DomainError("unknown theorem id");
}

}  // namespace hhlab
