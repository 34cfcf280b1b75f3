#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "orlicz/cli.hpp"
#include "orlicz/config.hpp"
#include "orlicz/errors.hpp"

using json = nlohmann::json;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "orlicz_lab");
    std::ostringstream out, err;
    int code = orlicz::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("orlicz_cli_test_" + name)).string();
}

} // namespace

TEST(Cli, IndicatorNormExample) {
    CliRun r = run({"indicator-norm", "--a", "1,4", "--n", "2", "--young", "power:q=2", "--phi", "power:p=4,n=2"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_EQ(j["command"], "indicator-norm");
    EXPECT_NEAR(j["results"]["value"].get<double>(), 1.0, 1e-6);
    EXPECT_TRUE(j["results"].contains("argmax_R"));
    EXPECT_TRUE(j["results"].contains("regime"));
    EXPECT_TRUE(j.contains("inputs_echo"));
    EXPECT_TRUE(j.contains("certificates_used"));
    EXPECT_FALSE(j.contains("timings"));
}

TEST(Cli, CertifyPhiMorrey) {
    CliRun r = run({"certify-phi", "--phi", "power:p=4,n=2"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    for (const char* c : {"C1", "C2", "C3"}) EXPECT_NEAR(j["results"][c].get<double>(), 1.0, 1e-12) << c;
}

TEST(Cli, CertifyPhiFailsForIncreasing) {
    CliRun r = run({"certify-phi", "--phi", "{\"kind\":\"power\",\"exponent\":1}"});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, MissingYoungIsUsageError) {
    CliRun r = run({"indicator-norm", "--a", "1,4", "--n", "2", "--phi", "power:p=4,n=2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("young"), std::string::npos);
}

TEST(Cli, SchemaErrorsNameTheField) {
    CliRun bad_key = run({"norm", "--f", "[{\"box\":[[0,1]],\"value\":1}]", "--young", "{\"kind\":\"power\",\"q\":2,\"zz\":1}",
                       "--phi", "power:p=2,n=1"});
    EXPECT_EQ(bad_key.code, 2);
    EXPECT_NE(bad_key.err.find("young"), std::string::npos);
    CliRun bad_kind = run({"norm", "--f", "[{\"box\":[[0,1]],\"value\":1}]", "--young", "power:q=2", "--phi", "nope:x=1"});
    EXPECT_EQ(bad_kind.code, 2);
    EXPECT_NE(bad_kind.err.find("phi"), std::string::npos);
    CliRun bad_json = run({"norm", "--f", "[{\"box\":", "--young", "power:q=2", "--phi", "power:p=2,n=1"});
    EXPECT_EQ(bad_json.code, 2);
    CliRun unknown = run({"frobnicate"});
    EXPECT_EQ(unknown.code, 2);
    CliRun no_command = run({});
    EXPECT_EQ(no_command.code, 2);
}

TEST(Cli, NormReportShape) {
    CliRun r = run({"norm", "--f", "[{\"box\":[[0,1]],\"value\":1}]", "--young", "power:q=1", "--phi", "power:p=2,n=1"});
    ASSERT_EQ(r.code, 0) << r.err;
    json res = json::parse(r.out)["results"];
    EXPECT_NEAR(res["value"].get<double>(), std::sqrt(0.5), 1e-8);
    for (const char* k : {"lo", "hi", "witness", "converged"}) EXPECT_TRUE(res.contains(k)) << k;
    EXPECT_TRUE(res["witness"].contains("center"));
    EXPECT_TRUE(res["witness"].contains("radius"));
}

TEST(Cli, WeakNormUnboundedCellFunction) {
    CliRun r = run({"weak-norm", "--f", "{\"n\":1,\"cells\":[{\"box\":[[0,\"inf\"]],\"value\":2}]}", "--young", "power:q=2",
                 "--phi", "constant:c=1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(json::parse(r.out)["results"]["value"].get<double>(), 2.0, 1e-8);
}

TEST(Cli, DeterministicReports) {
    std::vector<std::string> args{"op-norm", "--map", "{\"kind\":\"diag\",\"d\":[2,0.5]}", "--young", "power:q=2",
                                  "--phi", "power:p=4,n=2", "--count", "4", "--seed", "9"};
    CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST(Cli, TimingsOnlyWhenAsked) {
    CliRun r = run({"certify-phi", "--phi", "power:p=4,n=2", "--timings"});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(json::parse(r.out).contains("timings"));
}

TEST(Cli, OutputFile) {
    std::string path = temp_path("report.json");
    std::filesystem::remove(path);
    CliRun r = run({"certify-phi", "--phi", "power:p=4,n=2", "--output", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    json j = json::parse(f);
    EXPECT_EQ(j["command"], "certify-phi");
    std::filesystem::remove(path);
}

TEST(Cli, NecessityExitCodes) {
    CliRun ok = run({"certify-necessity", "--phi", "power:p=4,n=2", "--samples",
                  "[{\"x0\":[0,0],\"jacobian\":[[0,-1],[1,0]]},{\"x0\":[1,1],\"jacobian\":[[3,0],[0,0.3333333333333333]]}]",
                  "--band", "1.5"});
    EXPECT_EQ(ok.code, 0) << ok.err;
    CliRun bad = run({"certify-necessity", "--phi", "power:p=4,n=2", "--samples", "[{\"x0\":[0,0],\"jacobian\":[[0.5,0],[0,0.5]]}]",
                   "--band", "1.5"});
    EXPECT_EQ(bad.code, 1);
    json j = json::parse(bad.out);
    EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(Cli, SufficiencyAndAppendix) {
    CliRun s = run({"check-sufficiency", "--map", "{\"kind\":\"perm\",\"perm\":[1,0],\"signs\":[1,-1],\"b\":[0.5,0]}",
                 "--young", "power:q=2", "--phi", "power:p=4,n=2", "--count", "3", "--seed", "1"});
    EXPECT_EQ(s.code, 0) << s.err;
    CliRun a = run({"appendix", "--which", "a", "--f", "[{\"box\":[[0,1]],\"value\":0.25}]"});
    EXPECT_EQ(a.code, 0) << a.err;
    CliRun pre = run({"appendix", "--which", "a", "--f", "[{\"box\":[[0,1]],\"value\":0.75}]"});
    EXPECT_EQ(pre.code, 1);
    EXPECT_TRUE(json::parse(pre.out).contains("error"));
    CliRun b = run({"appendix", "--which", "b", "--f", "[{\"box\":[[0,1]],\"value\":1}]", "--young", "power:q=2", "--phi",
                 "oscillating:exponent=0"});
    EXPECT_EQ(b.code, 0) << b.err;
    CliRun which = run({"appendix", "--which", "c"});
    EXPECT_EQ(which.code, 2);
}

TEST(Cli, CertifyYoung) {
    EXPECT_EQ(run({"certify-young", "--young", "power:q=2"}).code, 0);
    EXPECT_EQ(run({"certify-young", "--young", "appendix-exp:n=2"}).code, 0);
    EXPECT_EQ(run({"certify-young", "--young", "power:q=0.5"}).code, 1);
}

TEST(Cli, SweepDilation) {
    CliRun r = run({"sweep", "--check", "dilation", "--phi", "power:p=4,n=2"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "c,lower,upper,phi_c");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        double c, lo, hi, pc;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &c, &lo, &hi, &pc), 4);
        EXPECT_NEAR(lo, pc, 1e-12 * pc);
        EXPECT_NEAR(hi, pc, 1e-12 * pc);
    }
    EXPECT_EQ(rows, 11);
}

TEST(Cli, SweepEmptyRangeAndCap) {
    CliRun empty = run({"sweep", "--check", "dilation", "--phi", "power:p=4,n=2", "--range", "c="});
    EXPECT_EQ(empty.code, 0) << empty.err;
    EXPECT_EQ(empty.out, "c,lower,upper,phi_c\n");
    CliRun capped = run({"sweep", "--check", "psi", "--range", "p=1:10:0.5", "--cap", "10"});
    EXPECT_EQ(capped.code, 2);
    CliRun bad_name = run({"sweep", "--check", "psi", "--range", "zz=1"});
    EXPECT_EQ(bad_name.code, 2);
}

TEST(Cli, SweepPsiMatchesWindow) {
    CliRun r = run({"sweep", "--check", "psi", "--range", "n=2,3", "--range", "p=1.3,2.5,7", "--range", "q=1", "--range", "k=1,2,3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(line.back(), '1') << line;
    }
    EXPECT_EQ(rows, 18);
}

TEST(Cli, ConfigShorthandAndFiles) {
    std::string path = temp_path("young.json");
    {
        std::ofstream f(path);
        f << R"({"kind":"power","q":3})";
    }
    auto Phi = orlicz::config::young_from_json(orlicz::config::load("@" + path, "young"));
    EXPECT_DOUBLE_EQ(Phi(2.0), 8.0);
    std::filesystem::remove(path);
    EXPECT_THROW(orlicz::config::load("@/nonexistent/file.json", "young"), orlicz::UsageError);
    EXPECT_EQ(orlicz::config::parse_list("1,2,3", "a"), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(orlicz::config::parse_range("0:1:0.5", "r"), (std::vector<double>{0, 0.5, 1}));
}

TEST(Cli, BinaryExitCodes) {
    std::string exe = ORLICZ_LAB_EXE;
    auto status = [&](const std::string& args) {
        int s = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    EXPECT_EQ(status("certify-phi --phi power:p=4,n=2"), 0);
    EXPECT_EQ(status("certify-phi --phi '{\"kind\":\"power\",\"exponent\":1}'"), 1);
    EXPECT_EQ(status("indicator-norm --a 1,4 --n 2 --phi power:p=4,n=2"), 2);
}
