#pragma once

#include <filesystem>
#include <vector>

#include "fracvac/fracvac.hpp"

namespace fracvac::cli {

struct Fig1Config {
    std::vector<int> generations{15, 17, 19};
    double onsite = 0.7;  // +onsite on A sites, -onsite on B sites
    double hopping = 1.0;
    double t_min = 0.1;
    double t_max = 1e4;
    int points_per_decade = 300;
    FitWindow fit{1.0, 300.0};
    double lambda_lo = 1.3;
    double lambda_hi = 2.4;
    int onset_rank = 24;

    void validate() const;
};

struct Fig1Chain {
    int generation = 0;
    std::size_t modes = 0;
    RateTrace rate;
    double onset_time = 0.0;         // 1 / (distance to the onset_rank-th nearest mode)
    double max_deviation = 0.0;      // max |gamma / gamma_largest - 1| for t <= onset
    LogPeriodResult log_period;
};

struct Fig1Result {
    double omega_e = 0.0;            // median eigenvalue of the largest chain
    std::vector<double> times;
    std::vector<Fig1Chain> chains;   // ascending generation
    ScalingFit fit;                  // joint fit on the largest chain
    double alpha = 0.0;              // 1 + fitted exponent (gamma ~ t^{1-alpha})
};

Fig1Result reproduce_fig1(const Fig1Config& config);

struct Fig2Config {
    double C = 1.0;
    double alpha = 0.5;
    double lambda = 1.0;
    double Omega = 1.0;
    double display_dt = 0.05;
    double display_lo = 1.0;
    int display_periods = 5;         // window [lo, lo e^{periods lambda}]
    double long_dt = 0.125;
    double long_t_max = 1e4;
    FitWindow a0_fit{1e2, 1e4};
    int n_min = -60;
    int n_max = 3;
    int long_points_per_decade = 200;  // decimation of the long traces on output

    void validate() const;
    ToyModelParams params(double A) const;
    FitWindow display() const;
};

struct EnvelopeBin {
    double lo = 0.0;
    double hi = 0.0;
    double a0 = 0.0;                 // peak |U| in the bin
    double a1 = 0.0;
};

struct PoleBin {
    double lo = 0.0;
    double hi = 0.0;
    double volterra = 0.0;
    double asymptotic = 0.0;
    double exact = 0.0;

    double asymptotic_error() const { return asymptotic / volterra - 1.0; }
    double exact_error() const { return exact / volterra - 1.0; }
};

struct Fig2Result {
    AmplitudeTrace display_a0, display_a1;   // Volterra, display grid
    AmplitudeTrace long_a0, long_a1;         // Volterra, long grid
    PoleSet poles;                            // A = 1
    std::vector<EnvelopeBin> envelope;       // one bin per log period over the display window
    bool ratio_monotone = false;
    BeatReport beats;                         // A = 1 over the display window
    ScalingFit a0_fit;
    double t_valid = 0.0;                     // start of the pole-sum validity regime
    std::vector<PoleBin> pole_bins;          // per log period from t_valid
    double max_asymptotic_error = 0.0;
    double max_exact_error = 0.0;
};

Fig2Result reproduce_fig2(const Fig2Config& config);

/// fig1_rates.csv and fig1_fit.json.
void write_fig1(const std::filesystem::path& dir, const Fig1Config& config, const Fig1Result& r);
/// fig2_display.csv, fig2_long.csv, fig2_poles.csv and fig2_envelope.json.
void write_fig2(const std::filesystem::path& dir, const Fig2Config& config, const Fig2Result& r);

}  // namespace fracvac::cli
