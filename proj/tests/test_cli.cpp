#include <shearlab/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace shearlab;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(SHEARLAB_DATA_DIR) + "/" + name; }

} // namespace

TEST(Cli, ExitCodesFollowTheVerdict) {
    EXPECT_EQ(call({"demo", "t32"}).code, 0);
    EXPECT_EQ(call({"demo", "tn1", "--n", "2", "--m", "4"}).code, 0);
    EXPECT_EQ(call({"demo", "rg-linear"}).code, 0);
    EXPECT_EQ(call({"verify", "--in", data("t32_instance.json")}).code, 0);
    EXPECT_EQ(call({"verify", "--in", data("rg_collision_instance.json")}).code, 0);
    EXPECT_EQ(call({"verify", "--in", data("incoherent_labeling.json")}).code, 1);
    EXPECT_EQ(call({"oracle", "--in", data("t32_two_edges_diagram.json")}).code, 0);
    EXPECT_EQ(call({"oracle", "--in", data("wrong_expectation_diagram.json")}).code, 1);
    EXPECT_EQ(call({"chain", "--n", "4", "--k", "3", "--steps", "2"}).code, 0);
    EXPECT_EQ(call({"chain", "--merged-pools"}).code, 1);
    EXPECT_EQ(call({"eq", "singleton", "--fragment", "none", "--m", "3"}).code, 0);
    EXPECT_EQ(call({"roundtrip", "--count", "3", "--seed", "4"}).code, 0);
}

TEST(Cli, InputErrorsExitWithTwoAndNameTheField) {
    auto missing = call({"verify", "--in", data("malformed_instance.json")});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("$.instance.t"), std::string::npos) << missing.err;
    EXPECT_TRUE(missing.out.empty());
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
    EXPECT_EQ(call({"demo"}).code, 2);
    EXPECT_EQ(call({"demo", "t32", "--format", "yaml"}).code, 2);
    EXPECT_EQ(call({"demo", "tnk", "--n", "3", "--k", "3"}).code, 2);
    EXPECT_EQ(call({"demo", "t32", "--budget", "-4"}).code, 2);
    EXPECT_EQ(call({"search-circle", "dense", "--bounds", "1,x,3"}).code, 2);
    EXPECT_EQ(call({"eq", "dense", "--fragment", "all"}).code, 2);
    EXPECT_EQ(call({"eq", "sparse"}).code, 2);
    EXPECT_EQ(call({"chain", "--steps", "0"}).code, 2);
    EXPECT_EQ(call({"demo", "tn1", "--m", "0"}).code, 2);
    auto absent = call({"oracle", "--in", data("nope.json")});
    EXPECT_EQ(absent.code, 2);
    EXPECT_NE(absent.err.find("--in"), std::string::npos) << absent.err;
}

TEST(Cli, HelpIsNotAnError) {
    auto r = call({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("search-circle"), std::string::npos);
}

TEST(Cli, ReportsAreByteIdenticalAcrossRuns) {
    for (const auto& args : std::vector<std::vector<std::string>>{{"demo", "tnk", "--n", "4", "--k", "2"},
                                                                  {"search-circle", "dense", "--bounds", "2,0,8"},
                                                                  {"eq", "dense", "--m", "4"},
                                                                  {"roundtrip", "--count", "2", "--seed", "9"},
                                                                  {"demo", "t32", "--format", "text"}}) {
        auto a = call(args);
        auto b = call(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args.front();
        EXPECT_FALSE(a.out.empty());
    }
}

TEST(Cli, JsonReportCarriesTheEnvelope) {
    auto r = call({"demo", "t32", "--budget", "12"});
    json j = json::parse(r.out);
    EXPECT_EQ(j["schema"], kSchema);
    EXPECT_EQ(j["command"], "demo");
    EXPECT_EQ(j["budget"], 12);
    EXPECT_EQ(j["verdict"], "expected");
    EXPECT_EQ(j.begin().key(), "schema");
}

TEST(Cli, TextFormatIsLineOriented) {
    auto r = call({"chain", "--format", "text"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verdict: expected"), std::string::npos) << r.out.substr(0, 400);
    EXPECT_THROW(json::parse(r.out), json::parse_error);
}

TEST(Cli, OutWritesTheReportToAFile) {
    auto path = std::filesystem::temp_directory_path() / "shearlab_cli_out.json";
    std::filesystem::remove(path);
    auto r = call({"demo", "t32", "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(text, call({"demo", "t32"}).out);
    std::filesystem::remove(path);
    EXPECT_EQ(call({"demo", "t32", "--out", "/nonexistent-dir/x.json"}).code, 2);
}

TEST(Cli, BudgetFallsBackToTheEnvironment) {
    ::setenv("SHEARLAB_BUDGET", "7", 1);
    EXPECT_EQ(json::parse(call({"demo", "t32"}).out)["budget"], 7);
    EXPECT_EQ(json::parse(call({"demo", "t32", "--budget", "9"}).out)["budget"], 9);
    ::setenv("SHEARLAB_BUDGET", "lots", 1);
    auto bad = call({"demo", "t32"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("SHEARLAB_BUDGET"), std::string::npos);
    ::unsetenv("SHEARLAB_BUDGET");
    EXPECT_EQ(json::parse(call({"demo", "t32"}).out)["budget"], static_cast<int>(cli::kDefaultBudget));
}
