#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracvac/dynamics.hpp"

namespace fracvac {

struct FitWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct ScalingFit {
    double exponent = 0.0;           // gamma = -slope of ln y against ln t
    double intercept = 0.0;
    std::optional<double> log_period;
    double modulation = 0.0;         // first-harmonic amplitude in ln y
    FitWindow window;
    double rms_residual = 0.0;
    std::size_t samples = 0;
    std::vector<std::string> flags;

    bool has_flag(const std::string& flag) const;
};

/// rms residual above which a fit is flagged "non_power_law".
inline constexpr double kPowerLawResidualLimit = 0.05;

/// Least-squares slope of ln y against ln t on the window.
ScalingFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                         FitWindow window);

/// ln y = c + s ln t + a cos(2 pi ln t / lambda) + b sin(2 pi ln t / lambda).
/// The modulation is sqrt(a^2 + b^2).
ScalingFit fit_log_periodic_power_law(const std::vector<double>& t,
                                      const std::vector<double>& y, FitWindow window,
                                      double log_period);

/// Same, with lambda chosen by a one-dimensional search on [lambda_lo, lambda_hi].
ScalingFit fit_log_periodic_power_law(const std::vector<double>& t,
                                      const std::vector<double>& y, FitWindow window,
                                      double lambda_lo, double lambda_hi);

struct LogPeriodResult {
    bool detected = false;
    double log_period = 0.0;     // refined estimate; 0 when not detected
    double peak_frequency = 0.0; // cycles per unit ln t
    double peak_power = 0.0;
    double noise_floor = 0.0;
    double modulation = 0.0;
    FitWindow window;
};

/// Peak-to-floor ratio required for a detection.
inline constexpr double kLogPeriodDetection = 3.0;

/// Detrends y t^gamma, resamples uniformly in u = ln t and locates the
/// dominant periodogram peak. Positive series are detrended in log space.
/// The window (default: whole trace) must span at least two decades.
LogPeriodResult extract_log_period(const std::vector<double>& t, const std::vector<double>& y,
                                   double gamma, std::optional<FitWindow> window = std::nullopt);

/// max over window of |U(beta t) - beta^-gamma U(t)| / max(max_window |U|, floor).
/// Values off the grid are obtained by cubic interpolation in ln t.
double scaling_collapse_residual(const AmplitudeTrace& trace, double beta, double gamma,
                                 FitWindow window);

inline constexpr double kCollapseFloor = 1e-30;

/// exp(-gamma t).
std::vector<double> wigner_weisskopf_reference(double gamma, const std::vector<double>& times);

/// Running maximum of |y| over a window of width `ln_width` in ln t.
std::vector<double> log_window_envelope(const std::vector<double>& t,
                                        const std::vector<double>& y, double ln_width);

struct PeakSeries {
    std::vector<double> t;
    std::vector<double> height;
};

/// Local maxima of |y| within [lo, hi].
PeakSeries local_peaks(const std::vector<double>& t, const std::vector<double>& y,
                       FitWindow window);

struct BeatReport {
    bool present = false;
    std::size_t peaks = 0;
    std::size_t rises = 0;  // successive peaks that grow by more than 1%
};

BeatReport detect_beats(const std::vector<double>& t, const std::vector<double>& y,
                        FitWindow window);

/// JSON object {gamma, lambda_est, modulation, window, residual, flags}.
std::string fit_report_json(const ScalingFit& fit);

}  // namespace fracvac
