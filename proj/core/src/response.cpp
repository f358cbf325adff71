#include "fracvac/response.hpp"

#include <algorithm>
#include <cmath>

#include "fracvac/error.hpp"
#include "fracvac/special.hpp"

namespace fracvac {

RateTrace gamma_of_t(const SpectralMeasure& m, const EmitterConfig& e,
                     const std::vector<double>& times) {
    if (!(e.coupling_scale >= 0.0))
        throw InvalidArgument("gamma_of_t: coupling scale must be >= 0");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || !std::isfinite(times[i]))
            throw InvalidArgument("gamma_of_t: times must be positive and finite");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidArgument("gamma_of_t: times must be strictly ascending");
    }
    RateTrace r;
    r.times = times;
    r.gamma.assign(times.size(), 0.0);
    r.cumulative.assign(times.size(), 0.0);
    const auto& om = m.frequencies();
    const auto& w = m.weights();
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        double rate = 0.0, cum = 0.0;
        for (std::size_t k = 0; k < om.size(); ++k) {
            const double d = om[k] - e.omega_e;
            rate += w[k] * sinc(d * t);
            const double h = t * sinc(0.5 * d * t);
            cum += w[k] * h * h;
        }
        r.gamma[i] = 2.0 * t * e.coupling_scale * rate;
        r.cumulative[i] = e.coupling_scale * cum;
    }
    return r;
}

ShortTimeSurvival survival_short_time(const RateTrace& rate) {
    if (rate.cumulative.size() != rate.times.size())
        throw InvalidArgument("survival_short_time: cumulative integral missing");
    ShortTimeSurvival s;
    s.survival.resize(rate.cumulative.size());
    s.valid.resize(rate.cumulative.size());
    for (std::size_t i = 0; i < rate.cumulative.size(); ++i) {
        s.survival[i] = 1.0 - rate.cumulative[i];
        s.valid[i] = s.survival[i] >= kPerturbativeValidity;
    }
    return s;
}

double sinc_wavelet(double u) { return sinc(u); }

double gaussian_wavelet(double u) { return std::exp(-u * u); }

double wavelet_transform(const SampledFunction& s, const WaveletKernel& w, double a, double b) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("wavelet_transform: scale a must be > 0");
    if (s.x.size() != s.y.size()) throw InvalidArgument("wavelet_transform: sample size mismatch");
    for (std::size_t i = 1; i < s.x.size(); ++i)
        if (s.x[i] < s.x[i - 1]) throw InvalidArgument("wavelet_transform: abscissae must not decrease");
    const GaussRule g = gauss_legendre(4);
    const double panel = 0.25 * a;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
        const double x0 = s.x[i], x1 = s.x[i + 1];
        const double len = x1 - x0;
        if (!(len > 0.0)) continue;
        const double y0 = s.y[i], slope = (s.y[i + 1] - s.y[i]) / len;
        const auto panels = static_cast<long>(std::ceil(len / panel));
        const double h = len / static_cast<double>(panels);
        double seg = 0.0;
        for (long p = 0; p < panels; ++p) {
            const double c = x0 + (static_cast<double>(p) + 0.5) * h;
            double acc = 0.0;
            for (int q = 0; q < g.n; ++q) {
                const double x = c + 0.5 * h * g.x[q];
                acc += g.w[q] * (y0 + slope * (x - x0)) * w((x - b) / a);
            }
            seg += 0.5 * h * acc;
        }
        total += seg;
    }
    return total / a;
}

SampledFunction integrated_measure_samples(const SpectralMeasure& m, double omega_u, double lo,
                                           double hi) {
    if (!(lo < hi)) throw InvalidArgument("integrated_measure_samples: lo must be below hi");
    SampledFunction f;
    const double base = m.cumulative(omega_u);
    f.x.push_back(lo);
    f.y.push_back(m.cumulative(lo) - base);
    const auto& om = m.frequencies();
    auto it = std::upper_bound(om.begin(), om.end(), lo);
    while (it != om.end() && *it <= hi) {
        const double x = *it;
        f.x.push_back(x);
        f.y.push_back(f.y.back());
        f.x.push_back(x);
        f.y.push_back(m.cumulative(x) - base);
        it = std::upper_bound(it, om.end(), x);
    }
    f.x.push_back(hi);
    f.y.push_back(m.cumulative(hi) - base);
    return f;
}

}  // namespace fracvac
