#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fracvac/io.hpp"
#include "fracvac_cli/app.hpp"

namespace fs = std::filesystem;
using fracvac::cli::run;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fracvac_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int exec(std::vector<std::string> args) {
        args.insert(args.begin(), "fracvac");
        out_.str("");
        err_.str("");
        return run(args, out_, err_);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
    static nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }
    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

}  // namespace

TEST_F(Cli, FibonacciMeasureHasFibonacciRows) {
    ASSERT_EQ(exec({"spectrum", "--fibonacci", "--generation", "16", "--output-dir", path("s")}), 0) << err_.str();
    const auto m = fracvac::read_measure_csv(dir_ / "s" / "measure.csv");
    EXPECT_EQ(m.frequencies().size(), 987u);
}

TEST_F(Cli, TraceMapJson) {
    ASSERT_EQ(exec({"spectrum", "--trace-map", "--nA", "1.45", "--nB", "2.23", "--output-dir", path("s")}), 0);
    const auto j = load(dir_ / "s" / "trace_map.json");
    EXPECT_NEAR(j["alpha"].get<double>(), 0.898, 1e-3);
    EXPECT_NEAR(j["lambda"].get<double>(), 3.2, 0.05);
    EXPECT_TRUE(j.contains("eta"));
}

TEST_F(Cli, CantorDepthEightHas256Atoms) {
    ASSERT_EQ(exec({"spectrum", "--cantor", "--depth", "8", "--output-dir", path("c")}), 0);
    EXPECT_EQ(fracvac::read_measure_csv(dir_ / "c" / "measure.csv").frequencies().size(), 256u);
}

TEST_F(Cli, SpectrumNeedsExactlyOneSource) {
    EXPECT_EQ(exec({"spectrum", "--output-dir", path("s")}), 2);
    EXPECT_EQ(exec({"spectrum", "--fibonacci", "--cantor", "--output-dir", path("s")}), 2);
}

TEST_F(Cli, AnalyzePurePowerLaw) {
    std::ostringstream csv;
    csv << "t,y\n";
    for (int k = 0; k < 80; ++k) {
        const double t = std::pow(1.1, k);
        csv << fracvac::format_number(t) << ',' << fracvac::format_number(1.0 / (t * t)) << '\n';
    }
    write("pl.csv", csv.str());
    ASSERT_EQ(exec({"analyze", "--input", path("pl.csv"), "--column", "y", "--output-dir", path("a")}), 0)
        << err_.str();
    const auto j = load(dir_ / "a" / "fit.json");
    EXPECT_NEAR(j["gamma"].get<double>(), 2.0, 1e-12);
    EXPECT_TRUE(j["lambda_est"].is_null());
    for (const char* key : {"gamma", "lambda_est", "modulation", "window", "residual", "flags"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST_F(Cli, SchemaMismatchNamesColumn) {
    write("bad.csv", "t,y\n1,2\n2,3\n");
    EXPECT_EQ(exec({"analyze", "--input", path("bad.csv"), "--output-dir", path("a")}), 4);
    EXPECT_NE(err_.str().find("abs_u"), std::string::npos) << err_.str();
    EXPECT_EQ(exec({"analyze", "--input", path("bad.csv"), "--mode", "collapse", "--gamma", "1.5", "--lambda",
                    "1", "--output-dir", path("a")}),
              4);
    EXPECT_NE(err_.str().find("re_u"), std::string::npos) << err_.str();
}

TEST_F(Cli, ZeroCouplingLeavesEmitterExcited) {
    write("m.csv", "omega,weight\n-1,0.5\n0.3,1\n2,0.25\n");
    ASSERT_EQ(exec({"dynamics", "--measure", path("m.csv"), "--coupling", "0", "--t-max", "10", "--dt", "0.1",
                    "--output-dir", path("d")}),
              0)
        << err_.str();
    const auto tr = fracvac::read_amplitude_csv(dir_ / "d" / "amplitude.csv");
    ASSERT_EQ(tr.times.size(), 101u);
    const auto abs_u = fracvac::read_csv(dir_ / "d" / "amplitude.csv").numeric("abs_u");
    for (double a : abs_u) EXPECT_EQ(a, 1.0);
}

TEST_F(Cli, ExactAndVolterraAgree) {
    write("m.csv", "omega,weight\n-1,0.05\n-0.2,0.1\n0.3,0.08\n1.1,0.02\n");
    ASSERT_EQ(exec({"dynamics", "--measure", path("m.csv"), "--solver", "exact", "--t-max", "20", "--dt",
                    "0.01", "--output-dir", path("e")}),
              0);
    ASSERT_EQ(exec({"dynamics", "--measure", path("m.csv"), "--t-max", "20", "--dt", "0.01", "--output-dir",
                    path("v")}),
              0);
    const auto e = fracvac::read_amplitude_csv(dir_ / "e" / "amplitude.csv");
    const auto v = fracvac::read_amplitude_csv(dir_ / "v" / "amplitude.csv");
    EXPECT_EQ(e.solver, fracvac::SolverTag::exact_diag);
    EXPECT_EQ(v.solver, fracvac::SolverTag::volterra);
    for (std::size_t i = 0; i < e.times.size(); ++i) EXPECT_LT(std::abs(e.amplitude[i] - v.amplitude[i]), 1e-5);
}

TEST_F(Cli, ToyOutputsAndCollapseOfPoleSum) {
    const double lo = 1200.0, hi = lo * std::exp(2.0);
    ASSERT_EQ(exec({"toy", "--t-min", fracvac::format_number(lo), "--t-max", fracvac::format_number(hi),
                    "--points-per-decade", "4000", "--output-dir", path("toy")}),
              0)
        << err_.str();
    const auto header = fracvac::read_csv(dir_ / "toy" / "amplitude.csv").header;
    EXPECT_EQ(header, (std::vector<std::string>{"t", "re_u", "im_u", "abs_u", "valid_flag"}));
    EXPECT_EQ(fracvac::read_csv(dir_ / "toy" / "poles.csv").header,
              (std::vector<std::string>{"n", "re_s", "im_s", "residual"}));
    for (double f : fracvac::read_csv(dir_ / "toy" / "amplitude.csv").numeric("valid_flag")) EXPECT_EQ(f, 1.0);

    ASSERT_EQ(exec({"analyze", "--input", path("toy/amplitude.csv"), "--mode", "collapse", "--gamma", "1.5",
                    "--lambda", "1", "--output-dir", path("a")}),
              0)
        << err_.str();
    EXPECT_LT(load(dir_ / "a" / "collapse.json")["residual"].get<double>(), 1e-2);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(exec({"toy", "--alpha", "1.5"}), 2);
    EXPECT_NE(err_.str().find("--alpha"), std::string::npos);
    EXPECT_EQ(exec({"toy", "--A", "0", "--output-dir", path("t")}), 2);
    EXPECT_NE(err_.str().find("--A"), std::string::npos);
    EXPECT_EQ(exec({"reproduce-fig1"}), 2);
    EXPECT_NE(err_.str().find("--output-dir"), std::string::npos);
    EXPECT_EQ(exec({"reproduce-fig2"}), 2);
    EXPECT_EQ(exec({"no-such-command"}), 2);
    EXPECT_EQ(exec({"--help"}), 0);

    EXPECT_EQ(exec({"gamma-t", "--measure", path("missing.csv"), "--output-dir", path("g")}), 4);
    write("file", "x");
    EXPECT_EQ(exec({"spectrum", "--cantor", "--output-dir", path("file/sub")}), 4);

    write("big.csv", "omega,weight\n0,1e8\n");
    EXPECT_EQ(exec({"dynamics", "--measure", path("big.csv"), "--t-max", "10", "--dt", "1", "--output-dir",
                    path("nf")}),
              3);
    EXPECT_NE(err_.str().find("step-size collapse"), std::string::npos);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
    write("run.toml", "[spectrum]\nfibonacci = true\ngeneration = 10\noutput-dir = \"" + path("cfg") + "\"\n");
    ASSERT_EQ(exec({"--config", path("run.toml"), "spectrum"}), 0) << err_.str();
    EXPECT_EQ(fracvac::read_measure_csv(dir_ / "cfg" / "measure.csv").frequencies().size(), 55u);
    ASSERT_EQ(exec({"--config", path("run.toml"), "spectrum", "--generation", "12"}), 0) << err_.str();
    EXPECT_EQ(fracvac::read_measure_csv(dir_ / "cfg" / "measure.csv").frequencies().size(), 144u);
    write("bad.toml", "[spectrum]\ncantor = true\ndepth = 99\n");
    EXPECT_EQ(exec({"--config", path("bad.toml"), "spectrum"}), 2);
    EXPECT_NE(err_.str().find("depth"), std::string::npos) << err_.str();
}

TEST_F(Cli, Fig1OutputsAreDeterministic) {
    ASSERT_EQ(exec({"reproduce-fig1", "--output-dir", path("a")}), 0) << err_.str();
    ASSERT_EQ(exec({"reproduce-fig1", "--output-dir", path("b")}), 0);
    for (const char* f : {"fig1_rates.csv", "fig1_fit.json"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    const auto j = load(dir_ / "a" / "fig1_fit.json");
    EXPECT_GE(j["alpha"].get<double>(), 0.75);
    EXPECT_LE(j["alpha"].get<double>(), 0.85);
    EXPECT_EQ(fracvac::read_csv(dir_ / "a" / "fig1_rates.csv").header,
              (std::vector<std::string>{"t", "gamma_j15", "gamma_j17", "gamma_j19"}));
    for (const auto& e : fs::directory_iterator(dir_ / "a"))
        EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
}

TEST_F(Cli, Fig2SmallRun) {
    ASSERT_EQ(exec({"reproduce-fig2", "--output-dir", path("f"), "--long-t-max", "1000", "--long-dt", "0.25",
                    "--a0-fit-lo", "100", "--a0-fit-hi", "1000"}),
              0)
        << err_.str();
    const auto j = load(dir_ / "f" / "fig2_envelope.json");
    EXPECT_TRUE(j["ratio_monotone"].get<bool>());
    EXPECT_TRUE(j["beats"]["present"].get<bool>());
    EXPECT_NEAR(j["a0_fit"]["gamma"].get<double>(), 1.5, 0.015);
    for (const char* f : {"fig2_display.csv", "fig2_long.csv", "fig2_poles.csv"})
        EXPECT_TRUE(fs::exists(dir_ / "f" / f)) << f;
}
