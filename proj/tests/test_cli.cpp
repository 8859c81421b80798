#include "uqsim/anova/anova.hpp"
#include "uqsim/cli/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace uqsim;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "uqsim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("uqsim_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        divider_ = (dir_ / "divider.cir").string();
        std::ofstream(divider_) << "* divider\n"
                                   "V1 in 0 dc 1\n"
                                   "R1 in out 1k\n"
                                   "R2 out 0 1k variation=uniform(-0.1,0.1) mode=relative\n";
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

    fs::path dir_;
    std::string divider_;
};

// One line "error: <category>: <message>".
void expect_error_line(const std::string& err, const std::string& category) {
    EXPECT_EQ(err.rfind("error: " + category + ": ", 0), 0u) << err;
    ASSERT_FALSE(err.empty());
    EXPECT_EQ(err.find('\n'), err.size() - 1) << err;
}

}  // namespace

TEST_F(Cli, DcWritesStats) {
    const auto r = invoke({"dc", "--netlist", divider_, "--order", "2", "--out", out("dc")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(fs::path(out("dc")) / "dc_stats.csv");
    EXPECT_EQ(csv.rfind("unknown,mean,std\n", 0), 0u);
    EXPECT_NE(csv.find("v(out),"), std::string::npos);
    EXPECT_TRUE(fs::exists(fs::path(out("dc")) / "dc_expansion.json"));
    const auto j = nlohmann::json::parse(slurp(fs::path(out("dc")) / "dc_expansion.json"));
    EXPECT_TRUE(j.is_object());
}

// Property: identical config and seed give byte-equal files.
TEST_F(Cli, McIsReproducible) {
    const std::vector<std::string> base{"mc", "--netlist", divider_, "--samples", "20000", "--seed", "7"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return invoke(a);
    };
    ASSERT_EQ(with({"--out", out("a"), "--threads", "1"}).code, 0);
    ASSERT_EQ(with({"--out", out("b"), "--threads", "3"}).code, 0);
    ASSERT_EQ(with({"--out", out("a"), "--threads", "1"}).code, 0);
    for (const char* f : {"mc_stats.csv", "mc_histogram.csv"}) {
        EXPECT_EQ(slurp(fs::path(out("a")) / f), slurp(fs::path(out("b")) / f)) << f;
    }
    EXPECT_EQ(slurp(fs::path(out("a")) / "mc_histogram.csv").rfind("bin_left,bin_right,count\n", 0), 0u);
    auto other = base;
    other[6] = "8";
    other.insert(other.end(), {"--out", out("c")});
    ASSERT_EQ(invoke(other).code, 0);
    EXPECT_NE(slurp(fs::path(out("a")) / "mc_stats.csv"), slurp(fs::path(out("c")) / "mc_stats.csv"));
}

TEST_F(Cli, AnovaReportCountsMatchSampleFormula) {
    const auto r = invoke({"anova", "--model", "builtin:opamp-like", "--order", "3", "--m", "3",
                           "--sigma", "0.01", "--out", out("anova")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(fs::path(out("anova")) / "anova_report.json"));
    const auto levels = j.at("level_counts").get<std::vector<std::uint64_t>>();
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0], 10u);
    EXPECT_EQ(j.at("N_samples").get<std::uint64_t>(), anova::sample_count(levels, 3));
    std::uint64_t terms = 1;
    for (auto n : levels) terms += n;
    EXPECT_EQ(j.at("term_count").get<std::uint64_t>(), terms);
    EXPECT_TRUE(fs::exists(fs::path(out("anova")) / "sensitivity.csv"));
}

TEST_F(Cli, MissingNetlistIsUserError) {
    const auto r = invoke({"dc", "--netlist", out("nope.cir"), "--out", out("x")});
    EXPECT_EQ(r.code, cli::kExitUser);
    expect_error_line(r.err, "input");
    EXPECT_FALSE(fs::exists(fs::path(out("x")) / "dc_stats.csv"));
}

TEST_F(Cli, ParseErrorCarriesLocation) {
    const std::string bad = out("bad.cir");
    std::ofstream(bad) << "V1 1 0 dc 1\nR1 1 0\n";
    const auto r = invoke({"dc", "--netlist", bad});
    EXPECT_EQ(r.code, cli::kExitUser);
    expect_error_line(r.err, "input");
    EXPECT_NE(r.err.find("bad.cir:2:"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrors) {
    auto r = invoke({});
    EXPECT_EQ(r.code, cli::kExitUser);
    expect_error_line(r.err, "usage");
    r = invoke({"dc", "--netlist", divider_, "--model", "builtin:divider"});
    EXPECT_EQ(r.code, cli::kExitUser);
    expect_error_line(r.err, "input");
    r = invoke({"dc", "--order", "two", "--netlist", divider_});
    EXPECT_EQ(r.code, cli::kExitUser);
}

TEST_F(Cli, NewtonFailureIsNumericError) {
    const auto r = invoke({"dc", "--model", "builtin:diode-rectifier", "--max-iterations", "1",
                           "--out", out("n")});
    EXPECT_EQ(r.code, cli::kExitNumeric) << r.out;
    expect_error_line(r.err, "numeric");
    EXPECT_FALSE(fs::exists(fs::path(out("n")) / "dc_stats.csv"));
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
    const std::string cfg = out("job.toml");
    std::ofstream(cfg) << "[dc]\nnetlist = \"" << divider_ << "\"\norder = 1\nout = \"" << out("cfg")
                       << "\"\n";
    auto r = invoke({"--config", cfg, "dc"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("order: 1"), std::string::npos) << r.out;
    r = invoke({"--config", cfg, "dc", "--order", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("order: 3"), std::string::npos) << r.out;
}

TEST_F(Cli, TransientAndHierarchicalFlow) {
    const std::string rc = out("rc.cir");
    std::ofstream(rc) << "V1 in 0 pulse(0 1 0 1u 1u 1 2)\n"
                         "R1 in out 1k variation=uniform(-0.1,0.1) mode=relative\n"
                         "C1 out 0 1u\n"
                         ".tran 1e-4 2e-3\n";
    auto r = invoke({"transient", "--netlist", rc, "--order", "2", "--out", out("t")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(fs::path(out("t")) / "transient_stats.csv"));

    r = invoke({"hier-extract", "--netlist", divider_, "--order", "3", "--out", out("h")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string surrogate = (fs::path(out("h")) / "surrogate.json").string();
    ASSERT_TRUE(fs::exists(surrogate));
    const std::string sys = out("sys.cir");
    std::ofstream(sys) << "V1 in 0 dc 2\n"
                          "R1 in out 1k variation=zeta(1,0.1) mode=relative\n"
                          "R2 out 0 1k\n";
    r = invoke({"hier-propagate", "--netlist", sys, "--surrogate", surrogate, "--order", "2",
                "--out", out("p")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(fs::path(out("p")) / "hier_stats.csv"));
    EXPECT_TRUE(fs::exists(fs::path(out("p")) / "zeta_bases.json"));
}
