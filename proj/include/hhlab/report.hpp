#pragma once

/**
 * @file report.hpp
 * @brief JSON and CSV serialization of verdicts and counterexample records.
 *
 * JSON report layout:
 *
 *     { "tool_version": "...",
 *       "command_echo": { "argv": [...], "command": "...", "parameters": {...} },
 *       "verdicts": [ {check_id, lhs, rhs, margin, tolerance, status, regime, inputs}, ... ],
 *       "counterexamples": [ {...}, ... ],
 *       "summary": { ... } }
 *
 * Doubles are written in shortest round-trip form, so parsing the report
 * recovers every value bit for bit. Function specs are echoed in their
 * canonical text form; non-finite exponents are written as "inf" / "-inf".
 */

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hhlab/falsifier.hpp"
#include "hhlab/numfmt.hpp"
#include "hhlab/path.hpp"
#include "hhlab/theorems.hpp"

namespace hhlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

inline Json power_json(const std::optional<PowerParam>& r) {
    if (!r) return nullptr;
    if (r->is_finite()) return r->value();
    return r->to_string();
}

inline std::optional<PowerParam> power_from_json(const Json& j) {
    if (j.is_null()) return std::nullopt;
    if (j.is_string()) return PowerParam::parse(j.get<std::string>());
    return PowerParam(j.get<double>());
}

}  // namespace detail

inline Json inputs_to_json(const CheckInputs& in) {
    Json j;
    j["f"] = in.f.to_text();
    j["g"] = in.g ? Json(in.g->to_text()) : Json(nullptr);
    j["a"] = in.seg.a;
    j["b"] = in.seg.b;
    j["phi"] = in.seg.phi;
    j["mode"] = to_string(in.seg.mode);
    j["r"] = detail::power_json(in.r);
    j["s"] = detail::power_json(in.s);
    return j;
}

inline CheckInputs inputs_from_json(const Json& j) {
    CheckInputs in;
    in.f = FuncSpec::parse(j.at("f").get<std::string>());
    if (!j.at("g").is_null()) in.g = FuncSpec::parse(j.at("g").get<std::string>());
    in.seg = make_segment(j.at("a").get<double>(), j.at("b").get<double>(), j.at("phi").get<double>(),
                          parse_path_mode(j.at("mode").get<std::string>()));
    in.r = detail::power_from_json(j.at("r"));
    in.s = detail::power_from_json(j.at("s"));
    return in;
}

inline Json verdict_to_json(const Verdict& v) {
    Json j;
    j["check_id"] = v.check_id;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["margin"] = v.margin;
    j["tolerance"] = v.tolerance;
    j["status"] = to_string(v.status);
    j["regime"] = v.regime;
    j["inputs"] = inputs_to_json(v.inputs);
    return j;
}

inline Verdict verdict_from_json(const Json& j) {
    Verdict v;
    v.check_id = j.at("check_id").get<std::string>();
    v.lhs = j.at("lhs").get<double>();
    v.rhs = j.at("rhs").get<double>();
    v.margin = j.at("margin").get<double>();
    v.tolerance = j.at("tolerance").get<double>();
    v.status = parse_status(j.at("status").get<std::string>());
    v.regime = j.at("regime").get<std::string>();
    v.inputs = inputs_from_json(j.at("inputs"));
    return v;
}

inline Json record_to_json(const CounterexampleRecord& r) {
    Json j;
    j["theorem"] = r.theorem;
    j["check_id"] = r.check_id;
    j["inputs"] = inputs_to_json(r.inputs);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["tolerance"] = r.tolerance;
    j["seed"] = r.seed;
    j["trial_index"] = r.trial_index;
    return j;
}

inline CounterexampleRecord record_from_json(const Json& j) {
    CounterexampleRecord r;
    r.theorem = j.at("theorem").get<std::string>();
    r.check_id = j.at("check_id").get<std::string>();
    r.inputs = inputs_from_json(j.at("inputs"));
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.margin = j.at("margin").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trial_index = j.at("trial_index").get<std::uint64_t>();
    return r;
}

struct Report {
    Json command_echo = Json::object();
    std::vector<Verdict> verdicts;
    std::vector<CounterexampleRecord> counterexamples;
    Json summary = Json::object();
};

inline Json report_to_json(const Report& rep) {
    Json j;
    j["tool_version"] = kToolVersion;
    j["command_echo"] = rep.command_echo;
    j["verdicts"] = Json::array();
    for (const auto& v : rep.verdicts) j["verdicts"].push_back(verdict_to_json(v));
    j["counterexamples"] = Json::array();
    for (const auto& r : rep.counterexamples) j["counterexamples"].push_back(record_to_json(r));
    j["summary"] = rep.summary;
    return j;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_power(const std::optional<PowerParam>& r) { return r ? r->to_string() : ""; }

inline std::string csv_inputs(const CheckInputs& in) {
    return csv_field(in.f.to_text()) + "," + (in.g ? csv_field(in.g->to_text()) : "") + "," + format_real(in.seg.a) +
           "," + format_real(in.seg.b) + "," + format_real(in.seg.phi) + "," + to_string(in.seg.mode) + "," +
           csv_power(in.r) + "," + csv_power(in.s);
}

}  // namespace detail

inline constexpr const char* kVerdictCsvHeader =
    "check_id,status,lhs,rhs,margin,tolerance,f,g,a,b,phi,mode,r,s,regime";
inline constexpr const char* kCounterexampleCsvHeader =
    "theorem,check_id,lhs,rhs,margin,tolerance,seed,trial_index,f,g,a,b,phi,mode,r,s";

/// Verdict table when the report has verdicts, otherwise the counterexample
/// table. Numbers carry 17 significant digits.
inline void write_csv(std::ostream& os, const Report& rep) {
    if (!rep.counterexamples.empty() || rep.verdicts.empty()) {
        os << kCounterexampleCsvHeader << '\n';
        for (const auto& r : rep.counterexamples)
            os << detail::csv_field(r.theorem) << ',' << detail::csv_field(r.check_id) << ',' << format_real(r.lhs)
               << ',' << format_real(r.rhs) << ',' << format_real(r.margin) << ',' << format_real(r.tolerance) << ','
               << r.seed << ',' << r.trial_index << ',' << detail::csv_inputs(r.inputs) << '\n';
        return;
    }
    os << kVerdictCsvHeader << '\n';
    for (const auto& v : rep.verdicts)
        os << detail::csv_field(v.check_id) << ',' << to_string(v.status) << ',' << format_real(v.lhs) << ','
           << format_real(v.rhs) << ',' << format_real(v.margin) << ',' << format_real(v.tolerance) << ','
           << detail::csv_inputs(v.inputs) << ',' << detail::csv_field(v.regime) << '\n';
}

}  // namespace hhlab
