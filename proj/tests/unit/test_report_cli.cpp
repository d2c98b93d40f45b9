#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "hippoc/cli.hpp"
#include "hippoc/error.hpp"
#include "hippoc/pipeline.hpp"
#include "hippoc/report.hpp"

using namespace hippoc;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST(Report, RationalsAreStrings) {
    EXPECT_EQ(to_json(Rational(1, 8)), json("1/8"));
    RunReport r{.command = "bound"};
    r.results.push_back({{"bound", to_json(Rational(1, 8))}});
    const std::string s = emit_report(r, ReportFormat::Json);
    EXPECT_NE(s.find("\"1/8\""), std::string::npos);
    EXPECT_EQ(s.find("0.125"), std::string::npos);
}

TEST(Report, EmptyResultsAndRoundTrip) {
    RunReport r{.command = "test", .params = {{"d", "2"}, {"family", "cauchy"}}, .seeds = {5, 6}};
    const std::string s = emit_report(r, ReportFormat::Json);
    const json j = json::parse(s);
    EXPECT_TRUE(j.at("results").is_array());
    EXPECT_TRUE(j.at("results").empty());
    EXPECT_EQ(j.at("schema"), kReportSchema);
    EXPECT_EQ(run_report_from_json(j), r);

    r.results.push_back(to_json(cauchy_test(BitPrefix::from_string("1111" + std::string(28, '0')), 1, 2)));
    EXPECT_EQ(run_report_from_json(json::parse(emit_report(r, ReportFormat::Json))), r);
    EXPECT_THROW(run_report_from_json(json::object()), Error);
}

TEST(Report, TextIsFlattened) {
    RunReport r{.command = "bound"};
    r.results.push_back({{"bound", "384/5"}});
    const std::string s = emit_report(r, ReportFormat::Text);
    EXPECT_NE(s.find("results[0].bound = 384/5\n"), std::string::npos);
    EXPECT_NE(s.find("command = bound\n"), std::string::npos);
}

TEST(Cli, BoundExample) {
    const CliRun r = cli({"bound", "--family", "slln", "--p", "1/2", "--q1", "1/4", "--q2", "3/4", "--N", "11", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["results"][0]["bound"], "384/5");
}

TEST(Cli, GenThenTestFailIsExitZero) {
    const std::string path = temp_path("hippoc_cli_drift.txt");
    ASSERT_EQ(cli({"gen", "--source", "drifting-bias", "--p0", "1/8", "--p1", "7/8", "--n", "2048", "--out", path}).code, 0);
    const CliRun r = cli({"test", "--family", "cauchy", "--d", "2", "--bmax", "4", "--in", path});
    ASSERT_EQ(r.code, 0) << r.err;
    const json v = json::parse(r.out)["results"][0];
    EXPECT_EQ(v["outcome"], "FAIL");
    EXPECT_EQ(v["witness"]["pair"], json::array({2, 4}));
    std::filesystem::remove(path);
}

TEST(Cli, PackedGenExtractConvert) {
    const std::string path = temp_path("hippoc_cli_third.bin");
    ASSERT_EQ(cli({"gen", "--p", "1/3", "--n", "131072", "--seed", "9", "--format", "packed", "--out", path}).code, 0);
    const CliRun e = cli({"extract", "--functional", "theta", "--d", "1", "--bits", "4", "--budget", "5", "--in", path,
                       "--informat", "packed"});
    ASSERT_EQ(e.code, 0) << e.err;
    const json report = json::parse(e.out)["results"][0];
    const std::string prefix = report["certified_prefix"];
    EXPECT_EQ(std::string("0.0101").substr(0, prefix.size()), prefix);
    const CliRun c = cli({"convert", "--n", "3", "--kmax", "8", "--bmax", "6", "--in", path, "--informat", "packed"});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(json::parse(c.out)["results"][0]["declared_bound"], "1/4");
    std::filesystem::remove(path);
}

TEST(Cli, VerifyClaims) {
    CliRun r = cli({"verify", "--claim", "moments", "--n", "2", "--p", "1/2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["results"][0]["formula_value"], "1/2");
    r = cli({"verify", "--claim", "chebyshev", "--n", "4", "--p", "1/2", "--k", "2"});
    EXPECT_EQ(json::parse(r.out)["results"][0]["formula_value"], "1/8");
    r = cli({"verify", "--claim", "exact-union", "--p", "1/2", "--d", "1", "--bmax", "1"});
    EXPECT_EQ(json::parse(r.out)["results"][0]["value"], "1/8");
    r = cli({"verify", "--claim", "mc", "--family", "oracle", "--d", "1", "--bmax", "1", "--p", "1/2", "--trials", "1000",
             "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json m = json::parse(r.out)["results"][0];
    EXPECT_EQ(m["trials"], 1000);
    EXPECT_EQ(m["ci"]["method"], "wilson-score-99");
}

TEST(Cli, ErrorsAndUsage) {
    const CliRun err = cli({"verify", "--claim", "chebyshev", "--n", "4", "--p", "0", "--k", "2"});
    EXPECT_EQ(err.code, 1);
    EXPECT_NE(err.err.find("DegenerateP"), std::string::npos);
    EXPECT_EQ(cli({"verify", "--claim", "mc", "--family", "cauchy", "--p", "1/2", "--trials", "0"}).code, 1);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"test", "--family", "cauchy"}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Pipeline, Examples) {
    const RunReport third = run_pipeline(BernoulliSource{RealParam(Rational(1, 3)), 11}, PipelineOptions{6, 8, {}});
    const json r = third.results[0];
    EXPECT_TRUE(r["harness"]["all_certified_match"].get<bool>());
    EXPECT_EQ(third.seeds, std::vector<std::uint64_t>{11});

    const RunReport ones = run_pipeline(AdversarialSpec{"all-ones"}, PipelineOptions{5, 8, {}});
    EXPECT_EQ(ones.results[0]["passing_level"], 1);
    EXPECT_TRUE(ones.results[0]["undecided_extraction"].get<bool>());
    EXPECT_TRUE(ones.results[0]["harness"].is_null());

    try {
        run_pipeline(AdversarialSpec{"drifting-bias", Rational(1, 8), Rational(7, 8)}, PipelineOptions{4, 8, {}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoPassingLevel);
        EXPECT_NE(std::string(e.what()).find("witness pair"), std::string::npos);
    }
    // With a short limit the drift is still caught, and the failing verdicts carry witness pairs.
    try {
        run_pipeline(AdversarialSpec{"drifting-bias", Rational(1, 8), Rational(7, 8)}, PipelineOptions{4, 8, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoPassingLevel);
    }
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::string> args{"pipeline", "--p", "1/3", "--seed", "5", "--budget", "5", "--bits", "8"};
    const CliRun a = cli(args);
    setenv("HIPPOC_THREADS", "3", 1);
    const CliRun b = cli(args);
    unsetenv("HIPPOC_THREADS");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}
