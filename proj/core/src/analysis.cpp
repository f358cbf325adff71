#include "fracvac/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <json.hpp>

#include "fracvac/error.hpp"
#include "fracvac/special.hpp"
#include "spline.hpp"

namespace fracvac {

bool ScalingFit::has_flag(const std::string& flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

namespace {

struct LogSamples {
    std::vector<double> u;  // ln t
    std::vector<double> v;  // ln y
};

LogSamples log_samples(const std::vector<double>& t, const std::vector<double>& y, FitWindow w,
                       const char* who) {
    if (t.size() != y.size()) throw InvalidArgument(std::string(who) + ": t and y differ in length");
    if (!(w.lo > 0.0) || !(w.lo < w.hi))
        throw InvalidArgument(std::string(who) + ": window needs 0 < lo < hi");
    LogSamples s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < w.lo || t[i] > w.hi) continue;
        if (!(y[i] > 0.0))
            throw InvalidArgument(std::string(who) + ": nonpositive sample at t=" + std::to_string(t[i]));
        s.u.push_back(std::log(t[i]));
        s.v.push_back(std::log(y[i]));
    }
    if (s.u.size() < 20)
        throw InvalidArgument(std::string(who) + ": fewer than 20 samples in the fit window");
    return s;
}

struct LinearFit {
    Eigen::VectorXd coef;
    double rms;
};

// least squares on columns [1, u, cos(k u), sin(k u)] (the last two when k > 0)
LinearFit design_fit(const LogSamples& s, double k) {
    const Eigen::Index n = static_cast<Eigen::Index>(s.u.size());
    const Eigen::Index cols = k > 0.0 ? 4 : 2;
    Eigen::MatrixXd a(n, cols);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = s.u[static_cast<std::size_t>(i)];
        a(i, 0) = 1.0;
        a(i, 1) = u;
        if (cols == 4) {
            a(i, 2) = std::cos(k * u);
            a(i, 3) = std::sin(k * u);
        }
        rhs(i) = s.v[static_cast<std::size_t>(i)];
    }
    LinearFit f;
    f.coef = a.colPivHouseholderQr().solve(rhs);
    f.rms = std::sqrt((a * f.coef - rhs).squaredNorm() / static_cast<double>(n));
    return f;
}

ScalingFit from_linear(const LinearFit& f, FitWindow w, std::size_t n) {
    ScalingFit out;
    out.intercept = f.coef(0);
    out.exponent = -f.coef(1);
    out.window = w;
    out.rms_residual = f.rms;
    out.samples = n;
    if (f.coef.size() == 4) out.modulation = std::hypot(f.coef(2), f.coef(3));
    return out;
}

template <class F>
double golden_minimize(F&& f, double lo, double hi, int iterations = 80) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

ScalingFit fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                         FitWindow window) {
    const LogSamples s = log_samples(t, y, window, "fit_power_law");
    ScalingFit out = from_linear(design_fit(s, 0.0), window, s.u.size());
    if (out.rms_residual > kPowerLawResidualLimit) out.flags.push_back("non_power_law");
    return out;
}

ScalingFit fit_log_periodic_power_law(const std::vector<double>& t, const std::vector<double>& y,
                                      FitWindow window, double log_period) {
    if (!(log_period > 0.0)) throw InvalidArgument("fit_log_periodic_power_law: log period must be > 0");
    const LogSamples s = log_samples(t, y, window, "fit_log_periodic_power_law");
    ScalingFit out = from_linear(design_fit(s, 2.0 * kPi / log_period), window, s.u.size());
    out.log_period = log_period;
    if (std::log(window.hi / window.lo) < 1.5 * log_period) out.flags.push_back("window_too_short");
    if (out.rms_residual > kPowerLawResidualLimit) out.flags.push_back("non_power_law");
    return out;
}

ScalingFit fit_log_periodic_power_law(const std::vector<double>& t, const std::vector<double>& y,
                                      FitWindow window, double lambda_lo, double lambda_hi) {
    if (!(lambda_lo > 0.0) || !(lambda_lo < lambda_hi))
        throw InvalidArgument("fit_log_periodic_power_law: need 0 < lambda_lo < lambda_hi");
    const LogSamples s = log_samples(t, y, window, "fit_log_periodic_power_law");
    auto cost = [&](double lam) { return design_fit(s, 2.0 * kPi / lam).rms; };
    // coarse scan, then golden refinement around the best node
    const int nodes = 200;
    double best = lambda_lo, best_cost = cost(lambda_lo);
    const double step = (lambda_hi - lambda_lo) / nodes;
    for (int i = 1; i <= nodes; ++i) {
        const double lam = lambda_lo + i * step;
        const double c = cost(lam);
        if (c < best_cost) {
            best_cost = c;
            best = lam;
        }
    }
    const double lam = golden_minimize(cost, std::max(lambda_lo, best - step), std::min(lambda_hi, best + step));
    return fit_log_periodic_power_law(t, y, window, lam);
}

LogPeriodResult extract_log_period(const std::vector<double>& t, const std::vector<double>& y,
                                   double gamma, std::optional<FitWindow> window) {
    if (t.size() != y.size()) throw InvalidArgument("extract_log_period: t and y differ in length");
    FitWindow w = window.value_or(FitWindow{0.0, 0.0});
    if (!window) {
        w.lo = std::numeric_limits<double>::infinity();
        w.hi = 0.0;
        for (double v : t)
            if (v > 0.0) {
                w.lo = std::min(w.lo, v);
                w.hi = std::max(w.hi, v);
            }
    }
    if (!(w.lo > 0.0) || !(w.hi / w.lo >= 100.0 * (1.0 - 1e-12)))
        throw InvalidArgument("extract_log_period: window must span at least two decades");

    std::vector<double> u, z;
    bool positive = true;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= w.lo && t[i] <= w.hi && !(y[i] > 0.0)) positive = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < w.lo || t[i] > w.hi) continue;
        const double lu = std::log(t[i]);
        if (!u.empty() && !(lu > u.back())) continue;
        u.push_back(lu);
        z.push_back(positive ? std::log(y[i]) + gamma * lu : y[i] * std::pow(t[i], gamma));
    }
    if (u.size() < 20) throw InvalidArgument("extract_log_period: fewer than 20 samples in window");

    const detail::CubicSpline spline(u, z);
    const std::size_t m = std::clamp<std::size_t>(2 * u.size(), 256, 2048);
    const double u0 = u.front(), len = u.back() - u.front();
    const double du = len / static_cast<double>(m - 1);
    std::vector<double> uu(m), zz(m);
    for (std::size_t i = 0; i < m; ++i) {
        uu[i] = u0 + du * static_cast<double>(i);
        zz[i] = spline(uu[i]);
    }
    // remove mean and linear trend
    {
        double su = 0, sz = 0, suu = 0, suz = 0;
        for (std::size_t i = 0; i < m; ++i) {
            su += uu[i];
            sz += zz[i];
            suu += uu[i] * uu[i];
            suz += uu[i] * zz[i];
        }
        const double nn = static_cast<double>(m);
        const double slope = (nn * suz - su * sz) / (nn * suu - su * su);
        const double icpt = (sz - slope * su) / nn;
        for (std::size_t i = 0; i < m; ++i) zz[i] -= icpt + slope * uu[i];
    }
    std::vector<double> windowed(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(m - 1));
        windowed[i] = zz[i] * hann;
    }

    const int pad = 8;
    const double df = 1.0 / (len * pad);
    const double f_min = 1.5 / len, f_max = 0.5 / du;
    std::vector<double> freq, power;
    for (double f = f_min; f <= f_max; f += df) {
        double re = 0.0, im = 0.0;
        const double wv = 2.0 * kPi * f;
        for (std::size_t i = 0; i < m; ++i) {
            const double ph = wv * (uu[i] - u0);
            re += windowed[i] * std::cos(ph);
            im += windowed[i] * std::sin(ph);
        }
        freq.push_back(f);
        power.push_back(re * re + im * im);
    }
    LogPeriodResult r;
    r.window = w;
    if (freq.size() < 8) return r;

    const std::size_t ip = static_cast<std::size_t>(std::max_element(power.begin(), power.end()) - power.begin());
    std::vector<double> rest;
    for (std::size_t i = 0; i < freq.size(); ++i)
        if (std::abs(freq[i] - freq[ip]) > 2.0 / len) rest.push_back(power[i]);
    if (rest.empty()) return r;
    std::nth_element(rest.begin(), rest.begin() + static_cast<long>(rest.size() / 2), rest.end());
    r.noise_floor = rest[rest.size() / 2];
    r.peak_power = power[ip];
    r.peak_frequency = freq[ip];

    // variable projection: sinusoid plus line, frequency by golden search near the peak
    auto fit_at = [&](double f, double* amp) {
        LogSamples s{uu, zz};
        LinearFit lf = design_fit(s, 2.0 * kPi * f);
        if (amp) *amp = std::hypot(lf.coef(2), lf.coef(3));
        return lf.rms;
    };
    const double f_lo = std::max(f_min * 0.5, freq[ip] - 1.0 / len);
    const double f_hi = std::min(f_max, freq[ip] + 1.0 / len);
    const double f_best = golden_minimize([&](double f) { return fit_at(f, nullptr); }, f_lo, f_hi, 60);
    double amp = 0.0;
    fit_at(f_best, &amp);

    const double scale = positive ? 1.0 : [&] {
        double s = 0.0;
        for (double v : z) s += std::abs(v);
        return s / static_cast<double>(z.size());
    }();
    r.modulation = amp;
    r.detected = r.peak_power >= kLogPeriodDetection * r.noise_floor && amp > 1e-9 * std::max(scale, 1e-300);
    if (r.detected) r.log_period = 1.0 / f_best;
    return r;
}

double scaling_collapse_residual(const AmplitudeTrace& trace, double beta, double gamma,
                                 FitWindow window) {
    if (!(beta > 1.0)) throw InvalidArgument("scaling_collapse_residual: beta must be > 1");
    if (trace.times.size() != trace.amplitude.size())
        throw InvalidArgument("scaling_collapse_residual: malformed trace");
    if (!(window.lo > 0.0) || !(window.lo < window.hi))
        throw InvalidArgument("scaling_collapse_residual: window needs 0 < lo < hi");
    std::vector<double> u, re, im;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (!(trace.times[i] > 0.0)) continue;
        u.push_back(std::log(trace.times[i]));
        re.push_back(trace.amplitude[i].real());
        im.push_back(trace.amplitude[i].imag());
    }
    if (u.size() < 2) throw InvalidArgument("scaling_collapse_residual: trace too short");
    const double tol = 1e-12;
    if (std::log(window.lo) < u.front() - tol || std::log(beta * window.hi) > u.back() + tol)
        throw InvalidArgument("scaling_collapse_residual: trace does not cover [lo, beta*hi]");

    const detail::CubicSpline sre(u, re), sim(u, im);
    auto value_at = [&](double lu) {
        const auto it = std::lower_bound(u.begin(), u.end(), lu - tol);
        if (it != u.end() && std::abs(*it - lu) <= tol) {
            const auto k = static_cast<std::size_t>(it - u.begin());
            return cplx(re[k], im[k]);
        }
        return cplx(sre(lu), sim(lu));
    };
    const double factor = std::pow(beta, -gamma);
    const double lb = std::log(beta);
    double worst = 0.0, scale = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double t = std::exp(u[i]);
        if (t < window.lo * (1.0 - tol) || t > window.hi * (1.0 + tol)) continue;
        const cplx base(re[i], im[i]);
        worst = std::max(worst, std::abs(value_at(u[i] + lb) - factor * base));
        scale = std::max(scale, std::abs(base));
        ++used;
    }
    if (used == 0) throw InvalidArgument("scaling_collapse_residual: no samples in window");
    return worst / std::max(scale, kCollapseFloor);
}

std::vector<double> wigner_weisskopf_reference(double gamma, const std::vector<double>& times) {
    if (!(gamma >= 0.0)) throw InvalidArgument("wigner_weisskopf_reference: rate must be >= 0");
    std::vector<double> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = std::exp(-gamma * times[i]);
    return out;
}

std::vector<double> log_window_envelope(const std::vector<double>& t, const std::vector<double>& y,
                                        double ln_width) {
    if (t.size() != y.size()) throw InvalidArgument("log_window_envelope: t and y differ in length");
    if (!(ln_width > 0.0)) throw InvalidArgument("log_window_envelope: width must be > 0");
    const std::size_t n = t.size();
    std::vector<double> lt(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t[i] > 0.0)) throw InvalidArgument("log_window_envelope: times must be > 0");
        if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("log_window_envelope: times must increase");
        lt[i] = std::log(t[i]);
    }
    std::vector<double> out(n);
    std::deque<std::size_t> dq;  // indices with decreasing |y|
    std::size_t hi = 0, lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (hi < n && lt[hi] <= lt[i] + 0.5 * ln_width) {
            while (!dq.empty() && std::abs(y[dq.back()]) <= std::abs(y[hi])) dq.pop_back();
            dq.push_back(hi++);
        }
        while (lt[lo] < lt[i] - 0.5 * ln_width) ++lo;
        while (dq.front() < lo) dq.pop_front();
        out[i] = std::abs(y[dq.front()]);
    }
    return out;
}

PeakSeries local_peaks(const std::vector<double>& t, const std::vector<double>& y, FitWindow window) {
    if (t.size() != y.size()) throw InvalidArgument("local_peaks: t and y differ in length");
    PeakSeries p;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (t[i] < window.lo || t[i] > window.hi) continue;
        const double a = std::abs(y[i - 1]), b = std::abs(y[i]), c = std::abs(y[i + 1]);
        if (b >= a && b > c) {
            p.t.push_back(t[i]);
            p.height.push_back(b);
        }
    }
    return p;
}

BeatReport detect_beats(const std::vector<double>& t, const std::vector<double>& y, FitWindow window) {
    const PeakSeries p = local_peaks(t, y, window);
    BeatReport r;
    r.peaks = p.t.size();
    for (std::size_t k = 1; k < p.height.size(); ++k)
        if (p.height[k] > 1.01 * p.height[k - 1]) ++r.rises;
    r.present = r.rises > 0;
    return r;
}

std::string fit_report_json(const ScalingFit& fit) {
    nlohmann::ordered_json j;
    j["gamma"] = fit.exponent;
    j["lambda_est"] = fit.log_period ? nlohmann::ordered_json(*fit.log_period) : nlohmann::ordered_json(nullptr);
    j["modulation"] = fit.modulation;
    j["window"] = {fit.window.lo, fit.window.hi};
    j["residual"] = fit.rms_residual;
    j["flags"] = fit.flags;
    return j.dump(2);
}

}  // namespace fracvac
