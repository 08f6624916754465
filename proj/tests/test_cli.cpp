#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hhlab/cli.hpp"
#include "oracles.hpp"

using namespace hhlab;

namespace {

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "hhlab");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

Json load_golden(const std::string& name) {
    std::ifstream in(std::string(HHLAB_GOLDEN_DIR) + "/" + name);
    return Json::parse(in);
}

// Same keys in the same order, same strings, numbers to 1e-12 relative.
void expect_matches(const Json& got, const Json& want, const std::string& where = "$") {
    if (want.is_number() && got.is_number()) {
        const double g = got.get<double>(), w = want.get<double>();
        EXPECT_LE(std::abs(g - w), 1e-12 * std::max(1.0, std::abs(w))) << where;
        return;
    }
    ASSERT_EQ(got.type(), want.type()) << where;
    if (want.is_object()) {
        ASSERT_EQ(got.size(), want.size()) << where;
        auto gi = got.begin();
        for (auto wi = want.begin(); wi != want.end(); ++wi, ++gi) {
            ASSERT_EQ(gi.key(), wi.key()) << where;
            expect_matches(gi.value(), wi.value(), where + "." + wi.key());
        }
    } else if (want.is_array()) {
        ASSERT_EQ(got.size(), want.size()) << where;
        for (std::size_t i = 0; i < want.size(); ++i)
            expect_matches(got[i], want[i], where + "[" + std::to_string(i) + "]");
    } else {
        EXPECT_EQ(got, want) << where;
    }
}

std::vector<std::string> replay_args(const Json& verdict_inputs, const std::string& theorem) {
    const CheckInputs in = inputs_from_json(verdict_inputs);
    std::vector<std::string> args{"check", "--theorem", theorem, "--func", in.f.to_text(), "--a",
                                  format_real(in.seg.a), "--b", format_real(in.seg.b), "--phi",
                                  format_real(in.seg.phi), "--mode", to_string(in.seg.mode)};
    if (in.g) args.insert(args.end(), {"--func2", in.g->to_text()});
    if (in.r) args.insert(args.end(), {"--r", in.r->to_string()});
    if (in.s) args.insert(args.end(), {"--s", in.s->to_string()});
    return args;
}

}  // namespace

TEST(Cli, CorollaryEqualityExample) {
    const CliRun r = run({"check", "--theorem", "c1", "--func", "tight:1,2,1", "--a", "0", "--b", "1"});
    EXPECT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    ASSERT_EQ(j["verdicts"].size(), 1u);
    EXPECT_EQ(j["verdicts"][0]["status"], "holds");
    EXPECT_NEAR(j["verdicts"][0]["lhs"].get<double>(), 1.5, 1e-12);
    EXPECT_EQ(j["verdicts"][0]["rhs"].get<double>(), 1.5);
}

TEST(Cli, PrintedZ4ViolationExample) {
    const CliRun r = run({"check", "--theorem", "z4", "--func", "tight:1,2,0.5", "--a", "0", "--b", "1", "--r", "0.5"});
    EXPECT_EQ(r.code, 1);
    const Json v = Json::parse(r.out)["verdicts"][0];
    EXPECT_EQ(v["status"], "violated");
    EXPECT_NEAR(v["lhs"].get<double>(), 7.0 / 3.0, 1e-10);
    EXPECT_NEAR(v["rhs"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, ChainExample) {
    const CliRun r = run({"chain", "--func", "expaffine:1,0", "--a", "0", "--b", "1"});
    EXPECT_EQ(r.code, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["verdicts"].size(), 5u);
    const double e = std::exp(1.0);
    const double want[6] = {std::sqrt(e), std::sqrt(e), std::sqrt(e), e - 1, e - 1, (1 + e) / 2};
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(j["summary"]["terms"][i].get<double>(), want[i], 1e-8);
}

TEST(Cli, GoldenReports) {
    const std::pair<const char*, std::vector<std::string>> cases[] = {
        {"check_c1.json", {"check", "--theorem", "c1", "--func", "tight:1,2,1", "--a", "0", "--b", "1"}},
        {"check_z4.json",
         {"check", "--theorem", "z4", "--func", "tight:1,2,0.5", "--a", "0", "--b", "1", "--r", "0.5"}},
        {"chain_expaffine.json", {"chain", "--func", "expaffine:1,0", "--a", "0", "--b", "1"}},
        {"classify_poweraffine.json",
         {"classify", "--func", "poweraffine:2,1,1", "--a", "0", "--b", "1", "--r", "0.5"}},
        {"falsify_c2_printed.json",
         {"falsify", "--theorem", "c2-first-printed", "--space", "families=const;const=0.5,2", "--budget", "100",
          "--seed", "7"}},
    };
    for (const auto& [file, args] : cases) {
        SCOPED_TRACE(file);
        const CliRun r = run(args);
        ASSERT_NE(r.code, 2) << r.err;
        const Json got = Json::parse(r.out);
        expect_matches(got, load_golden(file));
        const auto keys = {"tool_version", "command_echo", "verdicts", "counterexamples", "summary"};
        ASSERT_EQ(got.size(), keys.size());
        auto it = got.begin();
        for (const char* k : keys) EXPECT_EQ((it++).key(), k);
        for (const auto& v : got["verdicts"]) {
            std::vector<std::string> fields;
            for (auto f = v.begin(); f != v.end(); ++f) fields.push_back(f.key());
            EXPECT_EQ(fields, (std::vector<std::string>{"check_id", "lhs", "rhs", "margin", "tolerance", "status",
                                                        "regime", "inputs"}));
        }
    }
}

TEST(Cli, CsvHasAFixedHeader) {
    const CliRun r = run({"check", "--theorem", "hh", "--func", "expr:x^2+1", "--a", "0", "--b", "1", "--format", "csv"});
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string header, row;
    std::getline(in, header);
    EXPECT_EQ(header, kVerdictCsvHeader);
    int rows = 0;
    while (std::getline(in, row)) {
        ++rows;
        EXPECT_EQ(row.rfind(rows == 1 ? "hh-left,holds," : "hh-right,holds,", 0), 0u) << row;
    }
    EXPECT_EQ(rows, 2);

    const CliRun f = run({"falsify", "--theorem", "z4", "--space", "r=0,1", "--budget", "50", "--seed", "1", "--format",
                       "csv"});
    EXPECT_EQ(f.code, 1);
    EXPECT_EQ(f.out.substr(0, f.out.find('\n')), kCounterexampleCsvHeader);
}

TEST(Cli, JsonReportReplaysThroughCheck) {
    const std::vector<std::vector<std::string>> cases = {
        {"check", "--theorem", "z3", "--func", "poweraffine:2,3,-1", "--a", "0", "--b", "2", "--phi", "1.2"},
        {"check", "--theorem", "t160", "--func", "const:0.001", "--func2", "const:0.001", "--a", "0", "--b", "1",
         "--r", "1", "--s", "1"},
        {"check", "--theorem", "z4-corrected", "--func", "expr:exp(x)+x", "--a", "0.5", "--b", "3", "--phi", "0.3",
         "--mode", "param", "--r", "0.75"},
        {"check", "--theorem", "c3-second", "--func", "expaffine:0.5,0.1", "--a", "-1", "--b", "1", "--r", "2"},
    };
    for (const auto& args : cases) {
        const CliRun first = run(args);
        ASSERT_NE(first.code, 2) << first.err;
        const Json report = Json::parse(first.out);
        const std::string theorem = report["command_echo"]["parameters"]["theorem"];
        for (const auto& v : report["verdicts"]) {
            const CliRun again = run(replay_args(v["inputs"], theorem));
            ASSERT_EQ(again.code, first.code) << again.err;
            const Json replay = Json::parse(again.out);
            bool seen = false;
            for (const auto& w : replay["verdicts"]) {
                if (w["check_id"] != v["check_id"]) continue;
                seen = true;
                EXPECT_EQ(w["status"], v["status"]);
                EXPECT_EQ(w["margin"].get<double>(), v["margin"].get<double>());
            }
            EXPECT_TRUE(seen);
        }
    }
}

TEST(Cli, SeventeenDigitRoundTrip) {
    oracle::Rng rng(61);
    auto wild = [&] {
        const double mag = std::pow(10.0, rng.uniform(-300, 300));
        return (rng.integer(0, 1) ? -1 : 1) * mag * rng.uniform(1, 10);
    };
    for (int i = 0; i < 100; ++i) {
        Verdict v;
        v.check_id = "z4";
        v.lhs = wild();
        v.rhs = wild();
        v.margin = v.rhs - v.lhs;
        v.tolerance = std::abs(wild());
        v.status = static_cast<Status>(rng.integer(0, 2));
        v.regime = "r, s <= 2; \"quoted\"";
        v.inputs.f = FuncSpec(TightFamily{std::abs(wild()), std::abs(wild()), PowerParam(wild())});
        v.inputs.g = FuncSpec(ExpAffine{wild(), wild()});
        v.inputs.seg = make_segment(-std::abs(wild()), std::abs(wild()), rng.uniform(0, 1.5));
        v.inputs.r = PowerParam(wild());
        v.inputs.s = rng.integer(0, 1) ? PowerParam(wild()) : PowerParam::neg_infinity();

        const Verdict back = verdict_from_json(Json::parse(verdict_to_json(v).dump()));
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back.lhs), std::bit_cast<std::uint64_t>(v.lhs));
        EXPECT_EQ(std::bit_cast<std::uint64_t>(back.rhs), std::bit_cast<std::uint64_t>(v.rhs));
        EXPECT_EQ(back.margin, v.margin);
        EXPECT_EQ(back.tolerance, v.tolerance);
        EXPECT_EQ(back.status, v.status);
        EXPECT_EQ(back.regime, v.regime);
        EXPECT_EQ(back.inputs.f.to_text(), v.inputs.f.to_text());
        EXPECT_EQ(back.inputs.g->to_text(), v.inputs.g->to_text());
        EXPECT_EQ(back.inputs.seg.a, v.inputs.seg.a);
        EXPECT_EQ(back.inputs.seg.b, v.inputs.seg.b);
        EXPECT_EQ(back.inputs.seg.phi, v.inputs.seg.phi);
        EXPECT_EQ(*back.inputs.r, *v.inputs.r);
        EXPECT_EQ(*back.inputs.s, *v.inputs.s);

        // the 17-digit text form used by CSV round-trips as well
        for (double x : {v.lhs, v.rhs, v.margin, v.tolerance})
            EXPECT_EQ(std::bit_cast<std::uint64_t>(parse_real(format_real(x))), std::bit_cast<std::uint64_t>(x));
    }
}

TEST(Cli, ExitCodesAndErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"check", "--theorem", "z4", "--func", "tight:1,2,1", "--a", "0", "--b", "1"}).code, 2);
    EXPECT_EQ(run({"check", "--theorem", "nope", "--func", "const:1", "--a", "0", "--b", "1"}).code, 2);
    EXPECT_EQ(run({"check", "--theorem", "hh", "--func", "const:1", "--a", "1", "--b", "0"}).code, 2);
    EXPECT_EQ(run({"check", "--theorem", "hh", "--func", "const:1", "--a", "0", "--b", "1", "--format", "xml"}).code,
              2);
    const CliRun syn = run({"check", "--theorem", "hh", "--func", "expr:2*", "--a", "0", "--b", "1"});
    EXPECT_EQ(syn.code, 2);
    EXPECT_NE(syn.err.find("offset 2"), std::string::npos) << syn.err;
    const CliRun ln = run({"check", "--theorem", "hh", "--func", "expr:ln(x)", "--a", "0", "--b", "1"});
    EXPECT_EQ(ln.code, 2);
    EXPECT_NE(ln.err.find("ln(x)"), std::string::npos) << ln.err;
    EXPECT_EQ(run({"falsify", "--theorem", "z3", "--space", "families=poweraffine", "--budget", "100", "--seed", "3",
                   "--expect-hold"})
                  .code,
              0);
    EXPECT_EQ(run({"classify", "--func", "expr:sqrt(x)", "--a", "1", "--b", "4"}).code, 0);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OutFileAndSpaceFile) {
    const auto dir = std::filesystem::temp_directory_path() / "hhlab_cli_test";
    std::filesystem::create_directories(dir);
    const auto space = dir / "space.cfg";
    std::ofstream(space) << "families = tight\nr = 0, 1\n";
    const auto report = dir / "report.json";
    const CliRun r = run({"falsify", "--theorem", "z4", "--space", space.string(), "--budget", "200", "--seed", "42",
                       "--out", report.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.out.empty());
    std::ifstream in(report);
    const Json j = Json::parse(in);
    EXPECT_FALSE(j["counterexamples"].empty());
    EXPECT_EQ(j["command_echo"]["parameters"]["seed"], 42);

    const CliRun quiet = run({"check", "--theorem", "c1", "--func", "const:2", "--a", "0", "--b", "1", "--out",
                           (dir / "c1.json").string(), "--quiet"});
    EXPECT_EQ(quiet.code, 0);
    EXPECT_TRUE(quiet.out.empty());
    std::filesystem::remove_all(dir);
}
