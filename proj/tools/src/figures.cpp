#include "fracvac_cli/figures.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fracvac::cli {

namespace {

using json = nlohmann::ordered_json;

std::vector<double> positive_log_grid(double t_min, double t_max, int ppd) {
    auto g = geometric_grid(t_min, t_max, ppd);
    g.erase(g.begin());
    return g;
}

std::vector<double> magnitudes(const AmplitudeTrace& tr) {
    std::vector<double> m(tr.amplitude.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(tr.amplitude[i]);
    return m;
}

// drops the t = 0 sample that every Volterra trace starts with
void drop_origin(std::vector<double>& t, std::vector<double>& y) {
    if (!t.empty() && t.front() == 0.0) {
        t.erase(t.begin());
        y.erase(y.begin());
    }
}

double peak_in(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= lo && t[i] < hi) m = std::max(m, std::abs(y[i]));
    return m;
}

// first sample at or after each of a log-spaced set of targets
std::vector<std::size_t> log_decimation(const std::vector<double>& t, int ppd) {
    std::vector<std::size_t> idx;
    const auto first = std::upper_bound(t.begin(), t.end(), 0.0);
    if (first == t.end()) return idx;
    const double step = std::pow(10.0, 1.0 / ppd);
    for (double target = *first;; target *= step) {
        const auto it = std::lower_bound(first, t.end(), target);
        if (it == t.end()) break;
        const auto i = static_cast<std::size_t>(it - t.begin());
        if (idx.empty() || idx.back() != i) idx.push_back(i);
    }
    if (idx.back() != t.size() - 1) idx.push_back(t.size() - 1);
    return idx;
}

json window_json(FitWindow w) { return json::array({w.lo, w.hi}); }

}  // namespace

void Fig1Config::validate() const {
    if (generations.size() < 2) throw InvalidArgument("generations: need at least two chain lengths");
    for (std::size_t i = 0; i < generations.size(); ++i) {
        if (generations[i] < 3 || generations[i] > 24)
            throw InvalidArgument("generations: each generation must lie in [3, 24]");
        if (i > 0 && generations[i] <= generations[i - 1])
            throw InvalidArgument("generations: must be strictly ascending");
    }
    if (!std::isfinite(onsite)) throw InvalidArgument("onsite: must be finite");
    if (!(hopping > 0.0) || !std::isfinite(hopping)) throw InvalidArgument("hopping: must be > 0");
    if (!(t_min > 0.0) || !(t_max > t_min)) throw InvalidArgument("t-min/t-max: need 0 < t-min < t-max");
    if (points_per_decade < 10) throw InvalidArgument("points-per-decade: must be >= 10");
    if (!(fit.lo >= t_min) || !(fit.hi <= t_max) || !(fit.hi >= 100.0 * fit.lo))
        throw InvalidArgument("fit-lo/fit-hi: window must lie in [t-min, t-max] and span two decades");
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
        throw InvalidArgument("lambda-lo/lambda-hi: need 0 < lambda-lo < lambda-hi");
    if (onset_rank < 1) throw InvalidArgument("onset-rank: must be >= 1");
}

Fig1Result reproduce_fig1(const Fig1Config& config) {
    config.validate();
    std::vector<SpectralMeasure> measures;
    for (int j : config.generations) {
        const TightBindingChain chain{fibonacci_word(j), config.onsite, -config.onsite, config.hopping};
        const SpectralMeasure m = tb_spectrum(chain);
        measures.push_back(m.scaled(1.0 / static_cast<double>(m.frequencies().size())));
    }
    Fig1Result r;
    const auto& largest = measures.back().frequencies();
    r.omega_e = largest[largest.size() / 2];
    r.times = positive_log_grid(config.t_min, config.t_max, config.points_per_decade);

    for (std::size_t k = 0; k < measures.size(); ++k) {
        Fig1Chain c;
        c.generation = config.generations[k];
        c.modes = measures[k].frequencies().size();
        c.rate = gamma_of_t(measures[k], {r.omega_e, 1.0}, r.times);
        std::vector<double> d;
        for (double w : measures[k].frequencies()) d.push_back(std::abs(w - r.omega_e));
        std::sort(d.begin(), d.end());
        const auto rank = std::min(d.size(), static_cast<std::size_t>(config.onset_rank));
        c.onset_time = d[rank - 1] > 0.0 ? 1.0 / d[rank - 1] : config.t_max;
        r.chains.push_back(std::move(c));
    }
    const auto& ref = r.chains.back().rate.gamma;
    r.fit = fit_log_periodic_power_law(r.times, ref, config.fit, config.lambda_lo, config.lambda_hi);
    r.alpha = 1.0 + r.fit.exponent;
    for (auto& c : r.chains) {
        for (std::size_t i = 0; i < r.times.size() && r.times[i] <= c.onset_time; ++i)
            c.max_deviation = std::max(c.max_deviation, std::abs(c.rate.gamma[i] / ref[i] - 1.0));
        c.log_period = extract_log_period(r.times, c.rate.gamma, r.fit.exponent, config.fit);
    }
    return r;
}

void Fig2Config::validate() const {
    params(1.0).validate();
    if (!(display_dt > 0.0) || !(long_dt > 0.0)) throw InvalidArgument("display-dt/long-dt: must be > 0");
    if (!(display_lo > 0.0)) throw InvalidArgument("display-lo: must be > 0");
    if (display_periods < 2) throw InvalidArgument("display-periods: must be >= 2");
    if (!(a0_fit.lo > 0.0) || !(a0_fit.hi > a0_fit.lo) || !(a0_fit.hi <= long_t_max))
        throw InvalidArgument("a0-fit-lo/a0-fit-hi: need 0 < lo < hi <= long-t-max");
    if (!(long_t_max >= display().hi)) throw InvalidArgument("long-t-max: must cover the display window");
    if (n_min > n_max) throw InvalidArgument("n-min/n-max: need n-min <= n-max");
    if (long_points_per_decade < 1) throw InvalidArgument("long-points-per-decade: must be >= 1");
}

ToyModelParams Fig2Config::params(double A) const { return {C, alpha, A, Omega, lambda, 0.0, 0.0}; }

FitWindow Fig2Config::display() const {
    return {display_lo, display_lo * std::exp(display_periods * lambda)};
}

Fig2Result reproduce_fig2(const Fig2Config& config) {
    config.validate();
    const ToyModelParams p0 = config.params(0.0), p1 = config.params(1.0);
    const FitWindow disp = config.display();
    Fig2Result r;

    const auto gd = uniform_grid(disp.hi * (1.0 + 1e-9) + config.display_dt, config.display_dt);
    r.display_a0 = volterra_solve(toy_kernel(p0), gd);
    r.display_a1 = volterra_solve(toy_kernel(p1), gd);
    const auto m0 = magnitudes(r.display_a0), m1 = magnitudes(r.display_a1);
    double prev_ratio = 0.0;
    r.ratio_monotone = true;
    for (int k = 0; k < config.display_periods; ++k) {
        EnvelopeBin b;
        b.lo = disp.lo * std::exp(k * config.lambda);
        b.hi = disp.lo * std::exp((k + 1) * config.lambda);
        b.a0 = peak_in(gd, m0, b.lo, b.hi);
        b.a1 = peak_in(gd, m1, b.lo, b.hi);
        const double ratio = b.a1 / b.a0;
        if (k > 0 && !(ratio > prev_ratio)) r.ratio_monotone = false;
        prev_ratio = ratio;
        r.envelope.push_back(b);
    }
    {
        std::vector<double> t = gd, y = m1;
        drop_origin(t, y);
        r.beats = detect_beats(t, y, disp);
    }

    const auto gl = uniform_grid(config.long_t_max, config.long_dt);
    r.long_a0 = volterra_solve(toy_kernel(p0), gl);
    r.long_a1 = volterra_solve(toy_kernel(p1), gl);
    {
        std::vector<double> t = gl, y = magnitudes(r.long_a0);
        drop_origin(t, y);
        r.a0_fit = fit_power_law(t, y, config.a0_fit);
    }

    r.poles = find_poles(p1, config.n_min, config.n_max);
    r.t_valid = std::pow(kPoleSumValidity / p1.C, 1.0 / (2.0 - p1.alpha)) / std::abs(std::sin(r.poles.theta0));
    const auto ml = magnitudes(r.long_a1);
    for (int k = 0;; ++k) {
        PoleBin b;
        b.lo = r.t_valid * std::exp(k * config.lambda);
        b.hi = r.t_valid * std::exp((k + 1) * config.lambda);
        if (b.hi > gl.back()) break;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            if (gl[i] < b.lo || gl[i] >= b.hi) continue;
            b.volterra = std::max(b.volterra, ml[i]);
            b.asymptotic = std::max(b.asymptotic, std::abs(amplitude_pole_sum(p1, r.poles, gl[i]).value));
            b.exact = std::max(b.exact,
                               std::abs(amplitude_pole_sum(p1, r.poles, gl[i], ResidueMode::exact).value));
        }
        r.max_asymptotic_error = std::max(r.max_asymptotic_error, std::abs(b.asymptotic_error()));
        r.max_exact_error = std::max(r.max_exact_error, std::abs(b.exact_error()));
        r.pole_bins.push_back(b);
    }
    return r;
}

void write_fig1(const std::filesystem::path& dir, const Fig1Config& config, const Fig1Result& r) {
    std::ostringstream csv;
    csv << "t";
    for (const auto& c : r.chains) csv << ",gamma_j" << c.generation;
    csv << '\n';
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        csv << format_number(r.times[i]);
        for (const auto& c : r.chains) csv << ',' << format_number(c.rate.gamma[i]);
        csv << '\n';
    }
    write_file_atomic(dir / "fig1_rates.csv", csv.str());

    json j;
    j["omega_e"] = r.omega_e;
    j["onsite"] = config.onsite;
    j["hopping"] = config.hopping;
    j["alpha"] = r.alpha;
    j["fit"] = json::parse(fit_report_json(r.fit));
    json chains = json::array();
    for (const auto& c : r.chains) {
        json e;
        e["generation"] = c.generation;
        e["modes"] = c.modes;
        e["onset_time"] = c.onset_time;
        e["max_deviation_before_onset"] = c.max_deviation;
        e["log_period_detected"] = c.log_period.detected;
        e["log_period"] = c.log_period.log_period;
        e["peak_to_floor"] = c.log_period.noise_floor > 0.0 ? c.log_period.peak_power / c.log_period.noise_floor
                                                            : 0.0;
        chains.push_back(e);
    }
    j["chains"] = chains;
    write_file_atomic(dir / "fig1_fit.json", j.dump(2) + "\n");
}

void write_fig2(const std::filesystem::path& dir, const Fig2Config& config, const Fig2Result& r) {
    const ToyModelParams p0 = config.params(0.0), p1 = config.params(1.0);
    {
        std::ostringstream csv;
        csv << "t,re_u_a0,im_u_a0,abs_u_a0,re_u_a1,im_u_a1,abs_u_a1\n";
        for (std::size_t i = 0; i < r.display_a0.times.size(); ++i) {
            const cplx a = r.display_a0.amplitude[i], b = r.display_a1.amplitude[i];
            csv << format_number(r.display_a0.times[i]) << ',' << format_number(a.real()) << ','
                << format_number(a.imag()) << ',' << format_number(std::abs(a)) << ','
                << format_number(b.real()) << ',' << format_number(b.imag()) << ','
                << format_number(std::abs(b)) << '\n';
        }
        write_file_atomic(dir / "fig2_display.csv", csv.str());
    }
    {
        std::ostringstream csv;
        csv << "t,abs_u_a0,branchcut_a0,re_u_a1,abs_u_a1,re_u_a1_pole_sum,abs_u_a1_pole_sum,valid_flag\n";
        for (std::size_t i : log_decimation(r.long_a0.times, config.long_points_per_decade)) {
            const double t = r.long_a0.times[i];
            const auto ps = amplitude_pole_sum(p1, r.poles, t);
            csv << format_number(t) << ',' << format_number(std::abs(r.long_a0.amplitude[i])) << ','
                << format_number(amplitude_branchcut_A0(p0, t)) << ','
                << format_number(r.long_a1.amplitude[i].real()) << ','
                << format_number(std::abs(r.long_a1.amplitude[i])) << ',' << format_number(ps.value.real())
                << ',' << format_number(std::abs(ps.value)) << ',' << (ps.valid ? 1 : 0) << '\n';
        }
        write_file_atomic(dir / "fig2_long.csv", csv.str());
    }
    write_poles_csv(dir / "fig2_poles.csv", r.poles);

    json j;
    j["alpha"] = config.alpha;
    j["lambda"] = config.lambda;
    j["C"] = config.C;
    j["display_window"] = window_json(config.display());
    json bins = json::array();
    for (const auto& b : r.envelope)
        bins.push_back({{"window", window_json({b.lo, b.hi})}, {"peak_a0", b.a0}, {"peak_a1", b.a1},
                        {"ratio", b.a1 / b.a0}});
    j["envelope_bins"] = bins;
    j["ratio_monotone"] = r.ratio_monotone;
    j["beats"] = {{"present", r.beats.present}, {"peaks", r.beats.peaks}, {"rises", r.beats.rises}};
    j["a0_fit"] = json::parse(fit_report_json(r.a0_fit));
    j["theta0"] = r.poles.theta0;
    j["t_valid"] = r.t_valid;
    json pb = json::array();
    for (const auto& b : r.pole_bins)
        pb.push_back({{"window", window_json({b.lo, b.hi})},
                      {"peak_volterra", b.volterra},
                      {"peak_pole_sum", b.asymptotic},
                      {"peak_pole_sum_exact_residues", b.exact},
                      {"relative_error", b.asymptotic_error()},
                      {"relative_error_exact_residues", b.exact_error()}});
    j["pole_sum_bins"] = pb;
    j["max_relative_error"] = r.max_asymptotic_error;
    j["max_relative_error_exact_residues"] = r.max_exact_error;
    write_file_atomic(dir / "fig2_envelope.json", j.dump(2) + "\n");
}

}  // namespace fracvac::cli
