#pragma once

/**
 * @file falsifier.hpp
 * @brief Seeded random search for inputs that violate a check.
 *
 * Every trial draws its parameters from its own generator, seeded from
 * (seed, trial index), so a trial can be replayed in isolation and the
 * result does not depend on evaluation order. Violations are sorted by
 * margin, the worst `max_records` are shrunk toward a reference point, and
 * the survivors are emitted as counterexample records.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hhlab/error.hpp"
#include "hhlab/numfmt.hpp"
#include "hhlab/path.hpp"
#include "hhlab/theorems.hpp"

namespace hhlab {

enum class Family { Tight, ExpAffine, PowerAffine, Constant };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::Tight: return "tight";
        case Family::ExpAffine: return "expaffine";
        case Family::PowerAffine: return "poweraffine";
        default: return "const";
    }
}

inline Family parse_family(std::string_view s) {
    if (s == "tight") return Family::Tight;
    if (s == "expaffine") return Family::ExpAffine;
    if (s == "poweraffine") return Family::PowerAffine;
    if (s == "const") return Family::Constant;
    throw UsageError("unknown family '" + std::string(s) + "'");
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    std::string to_string() const { return format_real(lo) + "," + format_real(hi); }
};

/// Search space. Scale parameters (A, B, c, const) are drawn log-uniformly,
/// everything else uniformly. The tight family takes its exponent from r
/// (for f) and s (for g), so it always satisfies the class hypothesis.
struct ParamSpace {
    std::vector<Family> families{Family::Tight};
    Range A{0.1, 10.0};
    Range B{0.1, 10.0};
    Range alpha{-2.0, 2.0};
    Range beta{-1.0, 1.0};
    Range p{1.0, 3.0};
    Range c{0.5, 2.0};
    Range m{0.0, 1.0};
    Range constant{0.5, 2.0};
    Range r{0.0, 1.0};
    Range s{0.0, 1.0};
    Range phi{0.0, 0.0};
    double a = 0.0;
    double b = 1.0;
    PathMode mode = PathMode::RealProjection;
    std::size_t max_records = 20;
    bool shrink = true;

    /// Applies one `key = value` setting.
    void set(std::string_view key, std::string_view value);

    /// Reads `key = value` lines; '#' starts a comment.
    static ParamSpace from_config(std::istream& in);

    /// Inline form: `key=value;key=value`.
    static ParamSpace from_inline(std::string_view text);

    /// Canonical `key = value` lines; from_config(to_config()) is identity.
    std::string to_config() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline Range parse_range(std::string_view key, std::string_view text) {
    const auto comma = text.find(',');
    Range r;
    if (comma == std::string_view::npos) {
        r.lo = r.hi = parse_real(text);
    } else {
        r.lo = parse_real(text.substr(0, comma));
        r.hi = parse_real(text.substr(comma + 1));
    }
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi)
        throw UsageError("range for '" + std::string(key) + "' must be finite lo,hi with lo <= hi");
    return r;
}

}  // namespace detail

inline void ParamSpace::set(std::string_view key_in, std::string_view value_in) {
    const std::string key = detail::trim(key_in);
    const std::string value = detail::trim(value_in);
    auto positive_range = [&](Range& dst) {
        dst = detail::parse_range(key, value);
        if (!(dst.lo > 0.0)) throw UsageError("range for '" + key + "' must be positive");
    };
    if (key == "families") {
        families.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) families.push_back(parse_family(detail::trim(item)));
        if (families.empty()) throw UsageError("families must not be empty");
    } else if (key == "A") positive_range(A);
    else if (key == "B") positive_range(B);
    else if (key == "c") positive_range(c);
    else if (key == "const") positive_range(constant);
    else if (key == "alpha") alpha = detail::parse_range(key, value);
    else if (key == "beta") beta = detail::parse_range(key, value);
    else if (key == "p") p = detail::parse_range(key, value);
    else if (key == "m") m = detail::parse_range(key, value);
    else if (key == "r") r = detail::parse_range(key, value);
    else if (key == "s") s = detail::parse_range(key, value);
    else if (key == "phi") phi = detail::parse_range(key, value);
    else if (key == "a") a = parse_real(value);
    else if (key == "b") b = parse_real(value);
    else if (key == "mode") mode = parse_path_mode(value);
    else if (key == "max_records") {
        const double v = parse_real(value);
        if (v < 1 || v != std::floor(v)) throw UsageError("max_records must be a positive integer");
        max_records = static_cast<std::size_t>(v);
    } else if (key == "shrink") {
        if (value == "true" || value == "1") shrink = true;
        else if (value == "false" || value == "0") shrink = false;
        else throw UsageError("shrink must be true or false");
    } else {
        throw UsageError("unknown parameter-space key '" + key + "'");
    }
}

inline ParamSpace ParamSpace::from_config(std::istream& in) {
    ParamSpace space;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (detail::trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected key = value");
        space.set(std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
    }
    return space;
}

inline ParamSpace ParamSpace::from_inline(std::string_view text) {
    std::string lines(text);
    std::replace(lines.begin(), lines.end(), ';', '\n');
    std::istringstream in(lines);
    return from_config(in);
}

inline std::string ParamSpace::to_config() const {
    std::string fams;
    for (std::size_t i = 0; i < families.size(); ++i) fams += (i ? "," : "") + std::string(hhlab::to_string(families[i]));
    std::string out;
    auto kv = [&](const char* k, const std::string& v) { out += std::string(k) + " = " + v + "\n"; };
    kv("families", fams);
    kv("A", A.to_string());
    kv("B", B.to_string());
    kv("alpha", alpha.to_string());
    kv("beta", beta.to_string());
    kv("p", p.to_string());
    kv("c", c.to_string());
    kv("m", m.to_string());
    kv("const", constant.to_string());
    kv("r", r.to_string());
    kv("s", s.to_string());
    kv("phi", phi.to_string());
    kv("a", format_real(a));
    kv("b", format_real(b));
    kv("mode", hhlab::to_string(mode));
    kv("max_records", std::to_string(max_records));
    kv("shrink", shrink ? "true" : "false");
    return out;
}

struct CounterexampleRecord {
    std::string theorem;   ///< name accepted by parse_theorem_id
    std::string check_id;  ///< id of the violated verdict
    CheckInputs inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial_index = 0;
};

struct FalsifyResult {
    std::vector<CounterexampleRecord> records;  ///< most negative margin first
    std::size_t trials = 0;
    std::size_t violations = 0;  ///< before truncation to max_records
    std::size_t skipped = 0;     ///< trials whose evaluation failed
};

namespace detail {

// Uniform draws in the open interval (0, 1) from the top 53 bits.
class TrialStream {
public:
    TrialStream(std::uint64_t seed, std::uint64_t trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
        gen_.seed(seq);
    }

    double unit() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(const Range& r) { return r.lo + (r.hi - r.lo) * unit(); }
    double log_uniform(const Range& r) {
        const double u = unit();
        if (r.lo == r.hi) return r.lo;
        return std::exp(std::log(r.lo) + (std::log(r.hi) - std::log(r.lo)) * u);
    }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(unit() * n)); }

private:
    std::mt19937_64 gen_;
};

struct FuncDraw {
    Family family = Family::Tight;
    double A = 1, B = 1, alpha = 0, beta = 0, p = 1, c = 1, m = 0, constant = 1;
};

struct TrialParams {
    FuncDraw f, g;
    double r = 1, s = 1, phi = 0;
};

inline FuncDraw draw_function(TrialStream& rng, const ParamSpace& sp) {
    FuncDraw d;
    d.family = sp.families[rng.index(sp.families.size())];
    // fixed draw order, whatever the family
    d.A = rng.log_uniform(sp.A);
    d.B = rng.log_uniform(sp.B);
    d.alpha = rng.uniform(sp.alpha);
    d.beta = rng.uniform(sp.beta);
    d.p = rng.uniform(sp.p);
    d.c = rng.log_uniform(sp.c);
    d.m = rng.uniform(sp.m);
    d.constant = rng.log_uniform(sp.constant);
    return d;
}

inline TrialParams draw_trial(const ParamSpace& sp, std::uint64_t seed, std::uint64_t trial) {
    TrialStream rng(seed, trial);
    TrialParams t;
    t.f = draw_function(rng, sp);
    t.g = draw_function(rng, sp);
    t.r = rng.uniform(sp.r);
    t.s = rng.uniform(sp.s);
    t.phi = rng.uniform(sp.phi);
    return t;
}

inline FuncSpec build_function(const FuncDraw& d, double exponent) {
    switch (d.family) {
        case Family::Tight: return FuncSpec(TightFamily{d.A, d.B, PowerParam(exponent)});
        case Family::ExpAffine: return FuncSpec(ExpAffine{d.alpha, d.beta});
        case Family::PowerAffine: return FuncSpec(PowerAffine{d.p, d.c, d.m});
        default: return FuncSpec::constant(d.constant);
    }
}

inline CheckInputs build_inputs(TheoremId id, const TrialParams& t, const ParamSpace& sp) {
    CheckInputs in;
    in.f = build_function(t.f, t.r);
    if (needs_g(id)) in.g = build_function(t.g, t.s);
    in.seg = make_segment(sp.a, sp.b, t.phi, sp.mode);
    if (needs_r(id)) in.r = PowerParam(t.r);
    if (needs_s(id)) in.s = PowerParam(t.s);
    return in;
}

inline std::string input_key(const CheckInputs& in) {
    auto power = [](const std::optional<PowerParam>& r) { return r ? r->to_string() : std::string("-"); };
    return in.f.to_text() + "|" + (in.g ? in.g->to_text() : "-") + "|" + format_real(in.seg.a) + "|" +
           format_real(in.seg.b) + "|" + format_real(in.seg.phi) + "|" + to_string(in.seg.mode) + "|" + power(in.r) +
           "|" + power(in.s);
}

// Most negative violated verdict of the check, if any.
inline std::optional<Verdict> worst_violation(TheoremId id, const CheckInputs& in, const Tolerances& tol) {
    std::optional<Verdict> worst;
    for (auto& v : run_theorem(id, in, tol))
        if (v.status == Status::Violated && (!worst || v.margin < worst->margin)) worst = std::move(v);
    return worst;
}

inline double clamp_to(const Range& r, double v) { return std::min(std::max(v, r.lo), r.hi); }

struct Coordinate {
    double* value;
    double reference;
};

inline std::vector<Coordinate> shrink_coordinates(TheoremId id, TrialParams& t, const ParamSpace& sp) {
    std::vector<Coordinate> out;
    auto add_function = [&](FuncDraw& d) {
        switch (d.family) {
            case Family::Tight:
                out.push_back({&d.A, clamp_to(sp.A, 1.0)});
                out.push_back({&d.B, clamp_to(sp.B, 1.0)});
                break;
            case Family::ExpAffine:
                out.push_back({&d.alpha, clamp_to(sp.alpha, 0.0)});
                out.push_back({&d.beta, clamp_to(sp.beta, 0.0)});
                break;
            case Family::PowerAffine:
                out.push_back({&d.p, clamp_to(sp.p, 1.0)});
                out.push_back({&d.c, clamp_to(sp.c, 1.0)});
                out.push_back({&d.m, clamp_to(sp.m, 0.0)});
                break;
            case Family::Constant: out.push_back({&d.constant, clamp_to(sp.constant, 1.0)}); break;
        }
    };
    add_function(t.f);
    if (needs_g(id)) add_function(t.g);
    const bool tight_r = t.f.family == Family::Tight;
    const bool tight_s = needs_g(id) && t.g.family == Family::Tight;
    if (needs_r(id) || tight_r) out.push_back({&t.r, 0.5 * (sp.r.lo + sp.r.hi)});
    if (needs_s(id) || tight_s) out.push_back({&t.s, 0.5 * (sp.s.lo + sp.s.hi)});
    out.push_back({&t.phi, sp.phi.lo});
    return out;
}

}  // namespace detail

/// Runs `budget` seeded trials of check `id` over `space`.
inline FalsifyResult falsify(TheoremId id, const ParamSpace& space, std::size_t budget, std::uint64_t seed,
                             const Tolerances& tol = {}) {
    if (budget < 1) throw UsageError("budget must be at least 1");
    if (space.families.empty()) throw UsageError("parameter space has no families");

    struct Hit {
        std::uint64_t trial;
        detail::TrialParams params;
        Verdict verdict;
    };
    std::vector<Hit> hits;
    FalsifyResult out;
    out.trials = budget;
    for (std::uint64_t trial = 0; trial < budget; ++trial) {
        const auto params = detail::draw_trial(space, seed, trial);
        try {
            const auto in = detail::build_inputs(id, params, space);
            if (auto v = detail::worst_violation(id, in, tol)) hits.push_back({trial, params, std::move(*v)});
        } catch (const Error&) {
            ++out.skipped;
        }
    }
    out.violations = hits.size();

    auto by_margin = [](const auto& x, const auto& y) {
        if (x.margin != y.margin) return x.margin < y.margin;
        return x.trial_index < y.trial_index;
    };
    std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
        if (x.verdict.margin != y.verdict.margin) return x.verdict.margin < y.verdict.margin;
        return x.trial < y.trial;
    });
    if (hits.size() > space.max_records) hits.resize(space.max_records);

    for (auto& hit : hits) {
        if (space.shrink) {
            // coordinate descent: halve the distance to the reference while
            // the check still fails
            for (int pass = 0; pass < 2; ++pass) {
                for (auto coord : detail::shrink_coordinates(id, hit.params, space)) {
                    for (int step = 0; step < 40; ++step) {
                        const double old = *coord.value;
                        const double next = coord.reference + 0.5 * (old - coord.reference);
                        if (next == old) break;
                        *coord.value = next;
                        std::optional<Verdict> v;
                        try {
                            v = detail::worst_violation(id, detail::build_inputs(id, hit.params, space), tol);
                        } catch (const Error&) {
                        }
                        if (!v) {
                            *coord.value = old;
                            break;
                        }
                        hit.verdict = std::move(*v);
                    }
                }
            }
        }
        CounterexampleRecord rec;
        rec.theorem = std::string(to_string(id));
        rec.check_id = hit.verdict.check_id;
        rec.inputs = hit.verdict.inputs;
        rec.lhs = hit.verdict.lhs;
        rec.rhs = hit.verdict.rhs;
        rec.margin = hit.verdict.margin;
        rec.tolerance = hit.verdict.tolerance;
        rec.seed = seed;
        rec.trial_index = hit.trial;
        out.records.push_back(std::move(rec));
    }
    std::sort(out.records.begin(), out.records.end(), by_margin);
    // shrinking often lands several trials on the same witness
    std::set<std::string> seen;
    std::erase_if(out.records,
                  [&](const CounterexampleRecord& r) { return !seen.insert(detail::input_key(r.inputs)).second; });
    return out;
}

}  // namespace hhlab
