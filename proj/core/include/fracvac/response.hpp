#pragma once

#include <functional>
#include <vector>

#include "fracvac/spectrum.hpp"

namespace fracvac {

struct EmitterConfig {
    double omega_e = 0.0;
    double coupling_scale = 1.0;  // multiplies every weight; must be >= 0
};

struct RateTrace {
    std::vector<double> times;
    std::vector<double> gamma;
    std::vector<double> cumulative;
};

/// Golden-rule rate 2t sum_k w_k sinc((omega_k - omega_e) t) and its running
/// integral in closed form.
RateTrace gamma_of_t(const SpectralMeasure& m, const EmitterConfig& e,
                     const std::vector<double>& times);

/// 1 - depletion; a sample is marked invalid once it drops below this.
inline constexpr double kPerturbativeValidity = 0.9;

struct ShortTimeSurvival {
    std::vector<double> survival;  // not clamped
    std::vector<bool> valid;
};

ShortTimeSurvival survival_short_time(const RateTrace& rate);

/// Piecewise-linear function on a non-decreasing grid. Repeated abscissae
/// encode jumps; zero outside [x.front(), x.back()].
struct SampledFunction {
    std::vector<double> x;
    std::vector<double> y;
};

using WaveletKernel = std::function<double(double)>;

double sinc_wavelet(double u);
double gaussian_wavelet(double u);

/// (1/a) integral s(x) w((x-b)/a) dx. The integral is split into panels no
/// wider than a/4 so oscillatory kernels are resolved.
double wavelet_transform(const SampledFunction& s, const WaveletKernel& w, double a, double b);

/// Integrated measure x -> N_{omega_u}(x) as a step function on [lo, hi].
SampledFunction integrated_measure_samples(const SpectralMeasure& m, double omega_u, double lo,
                                           double hi);

}  // namespace fracvac
