#pragma once

/**
 * @file cli.hpp
 * @brief The `hhlab` command-line front end.
 *
 *     hhlab check    --theorem ID --func SPEC [--func2 SPEC] --a X --b X [--phi RAD]
 *                    [--mode real|param] [--r X] [--s X] [--tol X]
 *     hhlab chain    --func SPEC --a X --b X
 *     hhlab classify --func SPEC --a X --b X [--phi RAD] [--grid U,V,T] [--resolution X]
 *     hhlab falsify  --theorem ID --space FILE|INLINE --budget N --seed N
 *
 *     global: --out PATH, --format json|csv, --quiet
 *
 * Exit status: 0 everything holds (or nothing was found), 1 a violation or
 * counterexample was found, 2 usage or evaluation error.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hhlab/classify.hpp"
#include "hhlab/error.hpp"
#include "hhlab/falsifier.hpp"
#include "hhlab/path.hpp"
#include "hhlab/report.hpp"
#include "hhlab/theorems.hpp"

namespace hhlab {

namespace detail {

struct CliOptions {
    std::string out_path;
    std::string format = "json";
    bool quiet = false;

    std::string theorem;
    std::string func;
    std::string func2;
    double a = 0.0;
    double b = 1.0;
    double phi = 0.0;
    std::string mode = "real";
    std::string r;
    std::string s;
    double tol = kDefaultQuadTolerance;
    double atol = 1e-9;
    double rtol = 1e-9;
    std::size_t max_panels = kDefaultMaxPanels;

    std::string grid = "33,33,17";
    double resolution = 1e-3;

    std::string space;
    std::size_t budget = 1000;
    std::uint64_t seed = 0;
    bool expect_hold = false;
};

inline Tolerances tolerances_from(const CliOptions& o) {
    if (!(o.tol > 0.0) || !(o.atol >= 0.0) || !(o.rtol >= 0.0)) throw UsageError("tolerances must be nonnegative (--tol positive)");
    if (o.max_panels < 1) throw UsageError("--max-panels must be at least 1");
    Tolerances t;
    t.atol = o.atol;
    t.rtol = o.rtol;
    t.quad.tol = o.tol;
    t.quad.max_panels = o.max_panels;
    return t;
}

inline Json tolerances_json(const Tolerances& t) {
    Json j;
    j["atol"] = t.atol;
    j["rtol"] = t.rtol;
    j["quad_tol"] = t.quad.tol;
    j["max_panels"] = t.quad.max_panels;
    return j;
}

inline std::optional<PowerParam> optional_power(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return PowerParam::parse(text);
}

inline Json status_counts(const std::vector<Verdict>& vs) {
    std::size_t holds = 0, violated = 0, inconclusive = 0;
    for (const auto& v : vs) {
        if (v.status == Status::Holds) ++holds;
        else if (v.status == Status::Violated) ++violated;
        else ++inconclusive;
    }
    Json j;
    j["holds"] = holds;
    j["violated"] = violated;
    j["inconclusive"] = inconclusive;
    return j;
}

inline bool any_violated(const std::vector<Verdict>& vs) {
    for (const auto& v : vs)
        if (v.status == Status::Violated) return true;
    return false;
}

inline Verdict class_to_verdict(const ClassVerdict& cv, const std::string& id, const FuncSpec& f,
                                const PathSegment& seg) {
    Verdict v;
    v.check_id = id;
    v.lhs = cv.witness.lhs;
    v.rhs = cv.witness.rhs;
    v.margin = cv.witness.rhs - cv.witness.lhs;
    v.tolerance = cv.grid.slack * std::max(1.0, std::abs(cv.witness.rhs));
    v.status = cv.holds ? Status::Holds : Status::Violated;
    v.regime = cv.qualifier + " " + std::to_string(cv.grid.u) + "x" + std::to_string(cv.grid.v) + "x" +
               std::to_string(cv.grid.t) + "; worst point u = " + format_real(cv.witness.u) +
               ", v = " + format_real(cv.witness.v) + ", t = " + format_real(cv.witness.t);
    if (cv.outside_theorem_hypotheses) v.regime += "; r < 0 is outside theorem hypotheses";
    v.inputs = CheckInputs{f, std::nullopt, seg, cv.r, std::nullopt};
    return v;
}

inline void human_summary(std::ostream& os, const Report& rep) {
    for (const auto& v : rep.verdicts)
        os << v.check_id << ": " << to_string(v.status) << "  lhs = " << format_real(v.lhs)
           << "  rhs = " << format_real(v.rhs) << "  margin = " << format_real(v.margin) << '\n';
    for (const auto& r : rep.counterexamples)
        os << "counterexample " << r.check_id << " (trial " << r.trial_index << "): margin = " << format_real(r.margin)
           << "  f = " << r.inputs.f.to_text() << '\n';
}

}  // namespace detail

/// Runs the CLI on `args` (args[0] is the program name). The report goes to
/// --out when given, else to `out`; diagnostics go to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    detail::CliOptions o;
    CLI::App app{"Numerical checks of Hermite-Hadamard type inequalities", "hhlab"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", o.out_path, "Write the report to this path");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--quiet", o.quiet, "Suppress the human-readable summary");

    auto add_tolerances = [&](CLI::App* sub) {
        sub->add_option("--tol", o.tol, "Quadrature tolerance (absolute, per unit length)");
        sub->add_option("--atol", o.atol, "Absolute verdict tolerance");
        sub->add_option("--rtol", o.rtol, "Relative verdict tolerance");
        sub->add_option("--max-panels", o.max_panels, "Quadrature panel budget");
    };
    auto add_segment = [&](CLI::App* sub, bool with_path) {
        sub->add_option("--a", o.a, "Left endpoint")->required();
        sub->add_option("--b", o.b, "Right endpoint")->required();
        if (with_path) {
            sub->add_option("--phi", o.phi, "Path angle in radians, [0, pi/2]");
            sub->add_option("--mode", o.mode, "Path reading")->check(CLI::IsMember({"real", "param"}));
        }
    };

    auto* check = app.add_subcommand("check", "Evaluate one inequality");
    check->add_option("--theorem", o.theorem, "Inequality to check")->required();
    check->add_option("--func", o.func, "Function spec")->required();
    check->add_option("--func2", o.func2, "Second function spec");
    add_segment(check, true);
    check->add_option("--r", o.r, "Exponent r");
    check->add_option("--s", o.s, "Exponent s");
    add_tolerances(check);

    auto* chain = app.add_subcommand("chain", "Log-convex refinement chain on [a, b]");
    chain->add_option("--func", o.func, "Function spec")->required();
    add_segment(chain, false);
    add_tolerances(chain);

    auto* classify = app.add_subcommand("classify", "Grid convexity classes and r-convexity index");
    classify->add_option("--func", o.func, "Function spec")->required();
    add_segment(classify, true);
    classify->add_option("--grid", o.grid, "Grid sizes U,V,T");
    classify->add_option("--resolution", o.resolution, "Bisection resolution for the r index");
    classify->add_option("--r", o.r, "Additional exponent to test");

    auto* falsify_cmd = app.add_subcommand("falsify", "Seeded counterexample search");
    falsify_cmd->add_option("--theorem", o.theorem, "Inequality to attack")->required();
    falsify_cmd->add_option("--space", o.space, "Parameter space: config file or key=value;key=value")->required();
    falsify_cmd->add_option("--budget", o.budget, "Number of trials");
    falsify_cmd->add_option("--seed", o.seed, "Random seed");
    falsify_cmd->add_flag("--expect-hold", o.expect_hold, "Target is expected to hold");
    add_tolerances(falsify_cmd);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    Report rep;
    int code = 0;
    try {
        const Tolerances tol = detail::tolerances_from(o);
        Json params;
        rep.command_echo["argv"] = Json(std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end()));

        if (check->parsed()) {
            rep.command_echo["command"] = "check";
            const TheoremId id = parse_theorem_id(o.theorem);
            CheckInputs in;
            in.f = FuncSpec::parse(o.func);
            if (!o.func2.empty()) in.g = FuncSpec::parse(o.func2);
            in.seg = id == TheoremId::HH ? make_segment(o.a, o.b, 0.0)
                                         : make_segment(o.a, o.b, o.phi, parse_path_mode(o.mode));
            in.r = detail::optional_power(o.r);
            in.s = detail::optional_power(o.s);
            params["theorem"] = o.theorem;
            params["inputs"] = inputs_to_json(in);
            params["tolerances"] = detail::tolerances_json(tol);
            rep.verdicts = run_theorem(id, in, tol);
            rep.summary = detail::status_counts(rep.verdicts);
            code = detail::any_violated(rep.verdicts) ? 1 : 0;
        } else if (chain->parsed()) {
            rep.command_echo["command"] = "chain";
            const FuncSpec f = FuncSpec::parse(o.func);
            params["func"] = f.to_text();
            params["a"] = o.a;
            params["b"] = o.b;
            params["tolerances"] = detail::tolerances_json(tol);
            const auto res = check_chain_z2(f, o.a, o.b, tol);
            rep.verdicts = res.verdicts;
            rep.summary = detail::status_counts(rep.verdicts);
            rep.summary["terms"] = res.terms;
            code = detail::any_violated(rep.verdicts) ? 1 : 0;
        } else if (classify->parsed()) {
            rep.command_echo["command"] = "classify";
            const FuncSpec f = FuncSpec::parse(o.func);
            const PathSegment seg = make_segment(o.a, o.b, o.phi, parse_path_mode(o.mode));
            GridSpec grid = GridSpec::parse(o.grid);
            params["func"] = f.to_text();
            params["a"] = o.a;
            params["b"] = o.b;
            params["phi"] = o.phi;
            params["mode"] = to_string(seg.mode);
            params["grid"] = grid.to_string();
            params["grid_slack"] = grid.slack;
            params["resolution"] = o.resolution;
            rep.verdicts.push_back(
                detail::class_to_verdict(check_phi_r_convex(f, seg, PowerParam(0.0), grid), "log-phi-convex", f, seg));
            rep.verdicts.push_back(
                detail::class_to_verdict(check_phi_r_convex(f, seg, PowerParam(1.0), grid), "phi-convex", f, seg));
            if (auto r = detail::optional_power(o.r)) {
                params["r"] = detail::power_json(r);
                rep.verdicts.push_back(
                    detail::class_to_verdict(check_phi_r_convex(f, seg, *r, grid), "phi-r-convex", f, seg));
            }
            const RIndex idx = r_convexity_index(f, seg, grid, o.resolution);
            Json ri;
            ri["kind"] = idx.kind == RIndex::Kind::Finite      ? "finite"
                         : idx.kind == RIndex::Kind::BelowFloor ? "below-floor"
                                                                : "above-ceiling";
            ri["value"] = idx.kind == RIndex::Kind::Finite ? Json(idx.value) : Json(nullptr);
            ri["scan_range"] = {kRScanFloor, kRScanCeiling};
            rep.summary = detail::status_counts(rep.verdicts);
            rep.summary["r_index"] = ri;
        } else if (falsify_cmd->parsed()) {
            rep.command_echo["command"] = "falsify";
            const TheoremId id = parse_theorem_id(o.theorem);
            ParamSpace space;
            if (std::filesystem::is_regular_file(o.space)) {
                std::ifstream in(o.space);
                space = ParamSpace::from_config(in);
            } else {
                space = ParamSpace::from_inline(o.space);
            }
            params["theorem"] = o.theorem;
            params["space"] = space.to_config();
            params["budget"] = o.budget;
            params["seed"] = o.seed;
            params["expect_hold"] = o.expect_hold;
            params["tolerances"] = detail::tolerances_json(tol);
            const auto res = falsify(id, space, o.budget, o.seed, tol);
            rep.counterexamples = res.records;
            rep.summary["trials"] = res.trials;
            rep.summary["violations"] = res.violations;
            rep.summary["skipped"] = res.skipped;
            rep.summary["emitted"] = res.records.size();
            code = res.records.empty() ? 0 : 1;
        }
        rep.command_echo["parameters"] = params;
        rep.summary["exit_code"] = code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    std::ostringstream body;
    if (o.format == "csv") write_csv(body, rep);
    else body << report_to_json(rep).dump(2) << '\n';

    if (o.out_path.empty()) {
        out << body.str();
    } else {
        std::ofstream file(o.out_path);
        if (!file) {
            err << "error: cannot write " << o.out_path << '\n';
            return 2;
        }
        file << body.str();
        if (!o.quiet) detail::human_summary(out, rep);
    }
    return code;
}

}  // namespace hhlab
