#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "pstt/schedule.hpp"

using namespace pstt;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string data = PSTT_TEST_DATA;
const std::string chip = data + "/chip0.json";

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> r;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) r.push_back(l);
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("pstt_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, CheckCorpusIsOkPerDeclaration) {
    auto r = invoke({"check", data + "/corpus.pstt", "--chip", chip});
    EXPECT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 20u);
    for (const auto& l : ls) EXPECT_EQ(l.substr(l.size() - 4), ": ok") << l;
}

TEST(Cli, CheckReportsEachFailure) {
    auto r = invoke({"check", data + "/ill_typed.pstt", "--chip", chip});
    EXPECT_EQ(r.code, 1);
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u);
    EXPECT_EQ(ls[0], "fine: ok");
    EXPECT_NE(ls[1].find("late: error at 2:"), std::string::npos) << ls[1];
    EXPECT_NE(ls[2].find("dropped: error"), std::string::npos) << ls[2];
}

TEST(Cli, InferFlagsSlackZero) {
    auto src = scratch("infer.pstt");
    std::ofstream(src) << "schedule s (u:^0 1, x:^-20 q1) : q1 = let * = u in H1(x)\n"
                          "schedule g (x:^-20 q1) : q1 = H1(x)\n";
    auto r = invoke({"infer", src.string(), "--chip", chip});
    EXPECT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 3u) << r.out;
    EXPECT_EQ(ls[0], "s: (u:^0 1, x:^-20 q1) : q1");
    EXPECT_NE(ls[1].find("slack-zero convention"), std::string::npos);
    EXPECT_EQ(ls[2], "g: (x:^-20 q1) : q1");
}

TEST(Cli, NormalizeContractsBetaRedex) {
    auto r = invoke({"normalize", data + "/equalities.pstt", "--chip", chip});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out)[0], "beta_unit_redex = H1(x)");
}

TEST(Cli, EqOnUnitBetaPair) {
    auto r = invoke({"eq", data + "/equalities.pstt", "--name", "beta_unit_redex", "--name", "beta_unit_reduct", "--chip",
                  chip});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out)[0], "Equal");
}

TEST(Cli, EqDistinguishesCalibrations) {
    auto r = invoke({"eq", data + "/equalities.pstt", "--name", "h1_first", "--name", "k1_first", "--chip", chip});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(lines(r.out)[0], "NotEqualBySemantics");
    EXPECT_NE(r.out.find("channel q1 at t=-20"), std::string::npos) << r.out;
}

TEST(Cli, EqNeedsMatchingJudgements) {
    auto r = invoke({"eq", data + "/equalities.pstt", "--name", "h1_first", "--name", "gates_swapped", "--chip", chip});
    EXPECT_EQ(r.code, 1);
    r = invoke({"eq", data + "/equalities.pstt", "--name", "h1_first", "--chip", chip});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, EmitThenRevalidateExternally) {
    auto out = scratch("cx.json");
    auto r = invoke({"emit", data + "/corpus.pstt", "--name", "cx_then_locals", "--chip", chip, "-o", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("ok"), std::string::npos) << r.out;

    std::ifstream in(data + "/corpus.pstt");
    std::stringstream ss;
    ss << in.rdbuf();
    const SourceFile f = parse(ss.str());
    const Judgement& j = f.find("cx_then_locals")->judgement;
    Schedule back = schedule_from_json(slurp(out));
    ValidationReport again = validate(back, j);
    EXPECT_TRUE(again.ok());
    EXPECT_EQ(to_string(again), r.out);
    EXPECT_EQ(slurp(out), to_json(emit(j, test::chip0_from_file())));
}

TEST(Cli, UnknownFlagPrintsUsage) {
    auto r = invoke({"check", data + "/corpus.pstt", "--chip", chip, "--frobnicate"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(invoke({}).code, 1);
}

TEST(Cli, MissingInputsAreUserErrors) {
    EXPECT_EQ(invoke({"check", data + "/nope.pstt", "--chip", chip}).code, 1);
    EXPECT_EQ(invoke({"check", data + "/corpus.pstt", "--chip", data + "/nope.json"}).code, 1);
    EXPECT_EQ(invoke({"emit", data + "/corpus.pstt", "--name", "nope", "--chip", chip}).code, 1);
    auto bad = scratch("bad.pstt");
    std::ofstream(bad) << "schedule broken (x:^0 q1) : q1 = H1(\n";
    auto r = invoke({"check", bad.string(), "--chip", chip});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST(Cli, SelfcheckIsDeterministic) {
    auto a = invoke({"selfcheck", "--chip", chip, "--seed", "3", "--cases", "8"});
    auto b = invoke({"selfcheck", "--chip", chip, "--seed", "3", "--cases", "8"});
    EXPECT_EQ(a.code, 0) << a.out;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out).size(), 11u) << a.out;
}

TEST(Cli, ColorOnlyWhenAsked) {
    ::setenv("PSTT_COLOR", "1", 1);
    auto r = invoke({"check", data + "/corpus.pstt", "--chip", chip});
    ::unsetenv("PSTT_COLOR");
    EXPECT_NE(r.out.find("\033[32m"), std::string::npos);
    EXPECT_EQ(invoke({"check", data + "/corpus.pstt", "--chip", chip}).out.find('\033'), std::string::npos);
}
