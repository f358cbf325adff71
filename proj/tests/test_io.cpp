#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fracvac/error.hpp"
#include "fracvac/io.hpp"

using namespace fracvac;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "fracvac_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

void expect_close(double a, double b) { EXPECT_LE(std::abs(a - b), 1e-15 * std::abs(b)); }

}  // namespace

TEST(Csv, MeasureRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<double> om(100), w(100);
    for (auto& v : om) v = u(rng);
    std::sort(om.begin(), om.end());
    for (auto& v : w) v = std::abs(u(rng)) * 1e-7;
    const SpectralMeasure m(om, w);
    const auto p = scratch("measure.csv");
    write_measure_csv(p, m);
    const auto back = read_measure_csv(p);
    ASSERT_EQ(back.size(), m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        expect_close(back.frequencies()[k], om[k]);
        expect_close(back.weights()[k], w[k]);
    }
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "omega,weight");
}

TEST(Csv, RateAmplitudeAndPoleRoundTrip) {
    RateTrace r{{0.1, 1.0, 10.0}, {1.0 / 3, 2.0 / 7, 1e-300}, {0.0, 5.5, 1.0 / 9}};
    write_rate_csv(scratch("rate.csv"), r);
    const auto rb = read_rate_csv(scratch("rate.csv"));
    for (std::size_t i = 0; i < 3; ++i) {
        expect_close(rb.gamma[i], r.gamma[i]);
        expect_close(rb.cumulative[i], r.cumulative[i]);
    }

    AmplitudeTrace a{{0.0, 0.5}, {cplx(1, 0), cplx(std::sqrt(0.5), -1.0 / 3)}, SolverTag::exact_diag};
    write_amplitude_csv(scratch("amp.csv"), a);
    const auto ab = read_amplitude_csv(scratch("amp.csv"));
    EXPECT_EQ(ab.solver, SolverTag::exact_diag);
    expect_close(ab.amplitude[1].real(), a.amplitude[1].real());
    expect_close(ab.amplitude[1].imag(), a.amplitude[1].imag());

    PoleSet ps;
    ps.poles.push_back({-1, {}, cplx(-0.0095, -0.65), 1e-16, 0.0, 3, PoleStatus::converged, false});
    ps.poles.push_back({1, {}, cplx(-0.04, -1.4), 0.0, 0.0, 3, PoleStatus::wandered, false});
    write_poles_csv(scratch("poles.csv"), ps);
    const auto pb = read_poles_csv(scratch("poles.csv"));
    ASSERT_EQ(pb.poles.size(), 1u);  // only usable poles are exported
    EXPECT_EQ(pb.poles[0].n, -1);
    expect_close(pb.poles[0].s.imag(), -0.65);
}

TEST(Csv, FlaggedAmplitudeHeader) {
    AmplitudeTrace a{{1.0, 2.0}, {cplx(0.1, 0), cplx(0.2, 0)}, SolverTag::pole_sum};
    write_flagged_amplitude_csv(scratch("flag.csv"), a, {false, true});
    const auto t = read_csv(scratch("flag.csv"));
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "re_u", "im_u", "abs_u", "valid_flag"}));
    EXPECT_EQ(t.rows[1][4], "1");
    EXPECT_THROW(write_flagged_amplitude_csv(scratch("flag.csv"), a, {true}), InvalidArgument);
}

TEST(Csv, SchemaMismatchNamesColumn) {
    const auto p = scratch("bad.csv");
    write_file_atomic(p, "omega,w\n1,2\n");
    try {
        read_measure_csv(p);
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.column(), "weight");
        EXPECT_NE(std::string(e.what()).find("weight"), std::string::npos);
    }
    write_file_atomic(p, "omega,weight\n1,abc\n");
    EXPECT_THROW(read_measure_csv(p), SchemaError);
    write_file_atomic(p, "omega,weight\n1\n");
    EXPECT_THROW(read_measure_csv(p), IoError);
}

TEST(Files, AtomicWriteAndMissingFile) {
    const auto p = scratch("atomic.txt");
    write_file_atomic(p, "first");
    write_file_atomic(p, "second");
    std::ifstream in(p);
    std::string s;
    std::getline(in, s);
    EXPECT_EQ(s, "second");
    for (const auto& e : fs::directory_iterator(p.parent_path()))
        EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
    EXPECT_THROW(read_csv(scratch("does_not_exist.csv")), IoError);
    EXPECT_THROW(write_file_atomic("/nonexistent_dir_xyz/a.csv", "x"), IoError);
}

TEST(Numbers, SeventeenDigits) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_number(1.0 / 3)), 1.0 / 3);
}
