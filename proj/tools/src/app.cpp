#include "fracvac_cli/app.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "fracvac/fracvac.hpp"
#include "fracvac_cli/figures.hpp"

namespace fracvac::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const CLI::Validator kFinite(
    [](std::string& v) {
        try {
            if (std::isfinite(std::stod(v))) return std::string();
        } catch (const std::exception&) {
        }
        return "value " + v + " is not a finite number";
    },
    "FINITE");

const CLI::Validator kPositive(
    [](std::string& v) {
        try {
            const double x = std::stod(v);
            if (std::isfinite(x) && x > 0.0) return std::string();
        } catch (const std::exception&) {
        }
        return "value " + v + " must be a finite number > 0";
    },
    "POSITIVE");

const CLI::Validator kNonNegative(
    [](std::string& v) {
        try {
            const double x = std::stod(v);
            if (std::isfinite(x) && x >= 0.0) return std::string();
        } catch (const std::exception&) {
        }
        return "value " + v + " must be a finite number >= 0";
    },
    "NONNEGATIVE");

const CLI::Validator kOpenUnit(
    [](std::string& v) {
        try {
            const double x = std::stod(v);
            if (x > 0.0 && x < 1.0) return std::string();
        } catch (const std::exception&) {
        }
        return "value " + v + " must lie in (0, 1)";
    },
    "(0,1)");

struct ToyOptions {
    ToyModelParams p;

    void add(CLI::App* app, double default_A) {
        p.A = default_A;
        app->add_option("--C", p.C, "spectral prefactor")->check(kPositive)->capture_default_str();
        app->add_option("--alpha", p.alpha, "spectral exponent")->check(kOpenUnit)->capture_default_str();
        app->add_option("--A", p.A, "log-periodic modulation depth")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        app->add_option("--Omega", p.Omega, "reference frequency")->check(kPositive)->capture_default_str();
        app->add_option("--lambda", p.lambda, "log-period")->check(kPositive)->capture_default_str();
        app->add_option("--omega-u", p.omega_u, "band edge")->check(kFinite)->capture_default_str();
        app->add_option("--omega-e", p.omega_e, "emitter frequency")->check(kFinite)->capture_default_str();
    }
};

struct LogGridOptions {
    double t_min, t_max;
    int ppd;

    void add(CLI::App* app) {
        app->add_option("--t-min", t_min, "first time")->check(kPositive)->capture_default_str();
        app->add_option("--t-max", t_max, "last time")->check(kPositive)->capture_default_str();
        app->add_option("--points-per-decade", ppd, "log-grid density")
            ->check(CLI::Range(1, 100000))
            ->capture_default_str();
    }

    std::vector<double> grid() const {
        if (!(t_max > t_min)) throw InvalidArgument("--t-max must exceed --t-min");
        auto g = geometric_grid(t_min, t_max, ppd);
        g.erase(g.begin());
        return g;
    }
};

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

void require_file(const std::string& path, const std::string& key) {
    if (!fs::is_regular_file(path)) throw IoError(key + ": no such file " + path);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// spectrum ------------------------------------------------------------------

struct SpectrumCmd {
    bool fibonacci = false, cantor = false, trace_map = false;
    int generation = 16;
    double onsite_a = 1.0, onsite_b = -1.0, hopping = 1.0;
    int depth = 8;
    double omega_min = 0.0, omega_max = 1.0;
    std::optional<double> atom_weight;
    double n_a = 1.45, n_b = 2.23;
    std::string out_dir = ".";

    void add(CLI::App* app) {
        auto* f = app->add_flag("--fibonacci", fibonacci, "tight-binding chain on a Fibonacci word");
        auto* c = app->add_flag("--cantor", cantor, "middle-thirds Cantor measure");
        auto* t = app->add_flag("--trace-map", trace_map, "trace-map scaling constants");
        f->excludes(c)->excludes(t);
        c->excludes(t);
        app->add_option("--generation", generation, "Fibonacci generation j (N = F_j)")
            ->check(CLI::Range(1, 25))
            ->capture_default_str();
        app->add_option("--onsite-a", onsite_a, "on-site energy of A sites")->check(kFinite)->capture_default_str();
        app->add_option("--onsite-b", onsite_b, "on-site energy of B sites")->check(kFinite)->capture_default_str();
        app->add_option("--hopping", hopping, "nearest-neighbour hopping")->check(kPositive)->capture_default_str();
        app->add_option("--depth", depth, "Cantor depth")->check(CLI::Range(0, kMaxCantorDepth))->capture_default_str();
        app->add_option("--omega-min", omega_min, "Cantor support start")->check(kFinite)->capture_default_str();
        app->add_option("--omega-max", omega_max, "Cantor support end")->check(kFinite)->capture_default_str();
        app->add_option("--atom-weight", atom_weight, "Cantor atom weight (default 2^-depth)")->check(kPositive);
        app->add_option("--nA", n_a, "refractive index of layer A")->check(kPositive)->capture_default_str();
        app->add_option("--nB", n_b, "refractive index of layer B")->check(kPositive)->capture_default_str();
        app->add_option("--output-dir", out_dir, "output directory")->capture_default_str();
    }

    int exec(std::ostream& out) const {
        if (!fibonacci && !cantor && !trace_map)
            throw InvalidArgument("spectrum: choose one of --fibonacci, --cantor, --trace-map");
        if (cantor && !(omega_max > omega_min)) throw InvalidArgument("--omega-max must exceed --omega-min");
        const fs::path dir = prepare_dir(out_dir);
        if (trace_map) {
            const auto tm = trace_map_params(n_a, n_b);
            json j;
            j["n_a"] = tm.n_a;
            j["n_b"] = tm.n_b;
            j["cycle_length"] = tm.cycle_length;
            j["eta"] = tm.eta;
            j["exp_lambda"] = tm.exp_lambda;
            j["lambda"] = tm.lambda;
            j["alpha"] = tm.alpha;
            write_file_atomic(dir / "trace_map.json", json_text(j));
            out << "trace_map.json: eta=" << tm.eta << " lambda=" << tm.lambda << " alpha=" << tm.alpha << '\n';
            return kExitOk;
        }
        SpectralMeasure m;
        if (fibonacci) {
            m = tb_spectrum({fibonacci_word(generation), onsite_a, onsite_b, hopping});
        } else {
            m = cantor_measure({depth, omega_min, omega_max, atom_weight});
        }
        write_measure_csv(dir / "measure.csv", m);
        out << "measure.csv: " << m.frequencies().size() << " atoms\n";
        return kExitOk;
    }
};

// gamma-t -------------------------------------------------------------------

struct GammaTCmd {
    std::string measure;
    EmitterConfig emitter;
    LogGridOptions grid{0.01, 100.0, 50};
    std::string out_dir = ".";

    void add(CLI::App* app) {
        app->add_option("--measure", measure, "measure CSV (omega,weight)")->required();
        app->add_option("--omega-e", emitter.omega_e, "emitter frequency")->check(kFinite)->capture_default_str();
        app->add_option("--coupling", emitter.coupling_scale, "coupling scale")
            ->check(kNonNegative)
            ->capture_default_str();
        grid.add(app);
        app->add_option("--output-dir", out_dir, "output directory")->capture_default_str();
    }

    int exec(std::ostream& out) const {
        const auto times = grid.grid();
        require_file(measure, "--measure");
        const auto m = read_measure_csv(measure);
        const fs::path dir = prepare_dir(out_dir);
        const auto r = gamma_of_t(m, emitter, times);
        write_rate_csv(dir / "rate.csv", r);
        out << "rate.csv: " << r.times.size() << " samples\n";
        return kExitOk;
    }
};

// toy -----------------------------------------------------------------------

struct ToyCmd {
    ToyOptions toy;
    int n_min = -60, n_max = 3;
    bool seeds = false;
    std::string residues = "asymptotic";
    LogGridOptions grid{1.0, 1000.0, 100};
    std::string out_dir = ".";

    void add(CLI::App* app) {
        toy.add(app, 1.0);
        app->add_option("--n-min", n_min, "lowest pole index")->capture_default_str();
        app->add_option("--n-max", n_max, "highest pole index")->capture_default_str();
        app->add_flag("--seeds", seeds, "use unrefined seed poles");
        app->add_option("--residues", residues, "residue formula")
            ->check(CLI::IsMember({"asymptotic", "exact"}))
            ->capture_default_str();
        grid.add(app);
        app->add_option("--output-dir", out_dir, "output directory")->capture_default_str();
    }

    int exec(std::ostream& out) const {
        toy.p.validate();
        if (!toy.p.pole_regime())
            throw InvalidArgument("--A must exceed the pole-regime threshold " +
                                  format_number(toy.p.pole_regime_threshold()));
        if (toy.p.delta_omega() != 0.0) throw InvalidArgument("--omega-e must equal --omega-u");
        if (n_min > n_max) throw InvalidArgument("--n-min must not exceed --n-max");
        const auto times = grid.grid();
        const fs::path dir = prepare_dir(out_dir);

        const auto poles = find_poles(toy.p, n_min, n_max, seeds ? PoleMode::seeds : PoleMode::refined);
        const auto mode = residues == "exact" ? ResidueMode::exact : ResidueMode::asymptotic;
        const auto trace = amplitude_pole_sum_trace(toy.p, poles, times, mode);
        std::vector<bool> valid;
        for (double t : times) valid.push_back(pole_sum_valid(toy.p, t));
        write_poles_csv(dir / "poles.csv", poles);
        write_flagged_amplitude_csv(dir / "amplitude.csv", trace, valid);

        json j;
        j["theta0"] = poles.theta0;
        j["pole_regime_threshold"] = toy.p.pole_regime_threshold();
        j["branch_cut_negligible"] = toy.p.branch_cut_negligible();
        json counts;
        for (auto s : {PoleStatus::converged, PoleStatus::seed, PoleStatus::failed, PoleStatus::wandered}) {
            int n = 0;
            for (const auto& q : poles.poles) n += q.status == s;
            counts[to_string(s)] = n;
        }
        j["pole_status_counts"] = counts;
        j["residues"] = residues;
        write_file_atomic(dir / "toy.json", json_text(j));
        out << "poles.csv, amplitude.csv, toy.json: theta0=" << poles.theta0 << '\n';
        return kExitOk;
    }
};

// dynamics ------------------------------------------------------------------

struct DynamicsCmd {
    std::string solver = "volterra";
    std::string measure;
    bool use_toy = false;
    ToyOptions toy;
    double omega_e = 0.0, coupling = 1.0;
    double t_max = 50.0, dt = 0.01;
    std::string out_dir = ".";
    CLI::App* app_ = nullptr;

    void add(CLI::App* app) {
        app_ = app;
        app->add_option("--solver", solver, "exact or volterra")
            ->check(CLI::IsMember({"exact", "volterra"}))
            ->capture_default_str();
        auto* m = app->add_option("--measure", measure, "discrete measure CSV (omega,weight)");
        auto* t = app->add_flag("--toy", use_toy, "closed-form toy-model kernel");
        m->excludes(t);
        toy.add(app, 1.0);
        app->add_option("--coupling", coupling, "scale applied to the measure weights")
            ->check(kNonNegative)
            ->capture_default_str();
        app->add_option("--t-max", t_max, "final time")->check(kPositive)->capture_default_str();
        app->add_option("--dt", dt, "time step")->check(kPositive)->capture_default_str();
        app->add_option("--output-dir", out_dir, "output directory")->capture_default_str();
    }

    int exec(std::ostream& out) const {
        if (measure.empty() == !use_toy) throw InvalidArgument("dynamics: give exactly one of --measure, --toy");
        if (use_toy && solver == "exact") throw InvalidArgument("--solver exact needs a discrete --measure");
        if (t_max / dt > 2e6) throw InvalidArgument("--dt too small for --t-max (more than 2e6 steps)");
        const auto grid = uniform_grid(t_max, dt);
        AmplitudeTrace tr;
        if (use_toy) {
            toy.p.validate();
            const fs::path dir = prepare_dir(out_dir);
            tr = volterra_solve(toy_kernel(toy.p), grid);
            write_amplitude_csv(dir / "amplitude.csv", tr);
        } else {
            require_file(measure, "--measure");
            const DiscreteEmitterModel model{toy.p.omega_e, read_measure_csv(measure).scaled(coupling)};
            const fs::path dir = prepare_dir(out_dir);
            tr = solver == "exact" ? exact_diagonalization_amplitude(model, grid)
                                   : volterra_solve(build_kernel_from_measure(model), grid);
            write_amplitude_csv(dir / "amplitude.csv", tr);
        }
        out << "amplitude.csv: " << tr.times.size() << " samples, solver " << to_string(tr.solver) << '\n';
        return kExitOk;
    }
};

// analyze -------------------------------------------------------------------

struct AnalyzeCmd {
    std::string input;
    std::string mode = "power-law";
    std::string column = "abs_u";
    std::optional<double> window_lo, window_hi;
    std::optional<double> lambda;
    double lambda_lo = 0.5, lambda_hi = 5.0;
    std::optional<double> gamma;
    std::optional<double> beta;
    std::string out_dir = ".";

    void add(CLI::App* app) {
        app->add_option("--input", input, "input CSV with a t column")->required();
        app->add_option("--mode", mode, "analysis")
            ->check(CLI::IsMember({"power-law", "log-periodic", "log-period", "collapse"}))
            ->capture_default_str();
        app->add_option("--column", column, "value column")->capture_default_str();
        app->add_option("--window-lo", window_lo, "window start")->check(kPositive);
        app->add_option("--window-hi", window_hi, "window end")->check(kPositive);
        app->add_option("--lambda", lambda, "fixed log-period (log-periodic, collapse)")->check(kPositive);
        app->add_option("--lambda-lo", lambda_lo, "log-period search start")->check(kPositive)->capture_default_str();
        app->add_option("--lambda-hi", lambda_hi, "log-period search end")->check(kPositive)->capture_default_str();
        app->add_option("--gamma", gamma, "decay exponent (log-period, collapse)")->check(kFinite);
        app->add_option("--beta", beta, "scale factor for collapse (default e^lambda)")->check(kPositive);
        app->add_option("--output-dir", out_dir, "output directory")->capture_default_str();
    }

    FitWindow window(const std::vector<double>& t) const {
        double lo = 0.0, hi = 0.0;
        for (double x : t)
            if (x > 0.0) {
                if (lo == 0.0) lo = x;
                hi = x;
            }
        return {window_lo.value_or(lo), window_hi.value_or(hi)};
    }

    int exec(std::ostream& out) const {
        if (mode == "collapse" && !gamma) throw InvalidArgument("--gamma is required for --mode collapse");
        if (mode == "collapse" && !beta && !lambda)
            throw InvalidArgument("--beta or --lambda is required for --mode collapse");
        if (!(lambda_hi > lambda_lo)) throw InvalidArgument("--lambda-hi must exceed --lambda-lo");
        require_file(input, "--input");
        const CsvTable table = read_csv(input);
        const auto t = table.numeric("t");
        const fs::path dir = prepare_dir(out_dir);
        json j;
        std::string name;
        if (mode == "collapse") {
            const auto re = table.numeric("re_u"), im = table.numeric("im_u");
            AmplitudeTrace tr;
            tr.times = t;
            for (std::size_t i = 0; i < t.size(); ++i) tr.amplitude.emplace_back(re[i], im[i]);
            const double b = beta ? *beta : std::exp(*lambda);
            FitWindow w = window(t);
            if (!window_hi) w.hi /= b;
            j["beta"] = b;
            j["gamma"] = *gamma;
            j["window"] = {w.lo, w.hi};
            j["residual"] = scaling_collapse_residual(tr, b, *gamma, w);
            name = "collapse.json";
        } else {
            const auto y = table.numeric(column);
            const FitWindow w = window(t);
            if (mode == "power-law") {
                j = json::parse(fit_report_json(fit_power_law(t, y, w)));
                name = "fit.json";
            } else if (mode == "log-periodic") {
                const auto fit = lambda ? fit_log_periodic_power_law(t, y, w, *lambda)
                                        : fit_log_periodic_power_law(t, y, w, lambda_lo, lambda_hi);
                j = json::parse(fit_report_json(fit));
                name = "fit.json";
            } else {
                const double g = gamma ? *gamma : fit_power_law(t, y, w).exponent;
                const auto lp = extract_log_period(t, y, g, w);
                j["detected"] = lp.detected;
                j["log_period"] = lp.log_period;
                j["peak_frequency"] = lp.peak_frequency;
                j["peak_power"] = lp.peak_power;
                j["noise_floor"] = lp.noise_floor;
                j["modulation"] = lp.modulation;
                j["gamma"] = g;
                j["window"] = {lp.window.lo, lp.window.hi};
                name = "log_period.json";
            }
        }
        write_file_atomic(dir / name, json_text(j));
        out << json_text(j);
        return kExitOk;
    }
};

// reproduce -----------------------------------------------------------------

struct Fig1Cmd {
    Fig1Config config;
    std::string out_dir;

    void add(CLI::App* app) {
        app->add_option("--output-dir", out_dir, "output directory")->required();
        app->add_option("--generations", config.generations, "Fibonacci generations, ascending")
            ->delimiter(',')
            ->capture_default_str();
        app->add_option("--onsite", config.onsite, "on-site energy magnitude (+A, -B)")
            ->check(kFinite)
            ->capture_default_str();
        app->add_option("--hopping", config.hopping, "hopping")->check(kPositive)->capture_default_str();
        app->add_option("--t-min", config.t_min, "first time")->check(kPositive)->capture_default_str();
        app->add_option("--t-max", config.t_max, "last time")->check(kPositive)->capture_default_str();
        app->add_option("--points-per-decade", config.points_per_decade, "log-grid density")
            ->check(CLI::Range(10, 100000))
            ->capture_default_str();
        app->add_option("--fit-lo", config.fit.lo, "fit window start")->check(kPositive)->capture_default_str();
        app->add_option("--fit-hi", config.fit.hi, "fit window end")->check(kPositive)->capture_default_str();
        app->add_option("--lambda-lo", config.lambda_lo, "log-period search start")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--lambda-hi", config.lambda_hi, "log-period search end")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--onset-rank", config.onset_rank, "rank of the mode setting the finite-size onset")
            ->check(CLI::Range(1, 1000000))
            ->capture_default_str();
    }

    int exec(std::ostream& out) const {
        config.validate();
        const fs::path dir = prepare_dir(out_dir);
        const auto r = reproduce_fig1(config);
        write_fig1(dir, config, r);
        out << "fig1: alpha=" << r.alpha << " lambda_est=" << r.fit.log_period.value_or(0.0) << '\n';
        return kExitOk;
    }
};

struct Fig2Cmd {
    Fig2Config config;
    std::string out_dir;

    void add(CLI::App* app) {
        app->add_option("--output-dir", out_dir, "output directory")->required();
        app->add_option("--C", config.C, "spectral prefactor")->check(kPositive)->capture_default_str();
        app->add_option("--alpha", config.alpha, "spectral exponent")->check(kOpenUnit)->capture_default_str();
        app->add_option("--lambda", config.lambda, "log-period")->check(kPositive)->capture_default_str();
        app->add_option("--Omega", config.Omega, "reference frequency")->check(kPositive)->capture_default_str();
        app->add_option("--display-dt", config.display_dt, "step on the display window")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--display-lo", config.display_lo, "display window start")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--display-periods", config.display_periods, "display window length in log-periods")
            ->check(CLI::Range(2, 50))
            ->capture_default_str();
        app->add_option("--long-dt", config.long_dt, "step of the long-time solves")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--long-t-max", config.long_t_max, "end of the long-time solves")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--a0-fit-lo", config.a0_fit.lo, "A=0 exponent fit start")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--a0-fit-hi", config.a0_fit.hi, "A=0 exponent fit end")
            ->check(kPositive)
            ->capture_default_str();
        app->add_option("--n-min", config.n_min, "lowest pole index")->capture_default_str();
        app->add_option("--n-max", config.n_max, "highest pole index")->capture_default_str();
    }

    int exec(std::ostream& out) const {
        config.validate();
        if (config.long_t_max / config.long_dt > 4e5 || config.display().hi / config.display_dt > 4e5)
            throw InvalidArgument("--long-dt/--display-dt: more than 4e5 steps requested");
        const fs::path dir = prepare_dir(out_dir);
        const auto r = reproduce_fig2(config);
        write_fig2(dir, config, r);
        out << "fig2: ratio_monotone=" << r.ratio_monotone << " beats=" << r.beats.present
            << " a0_exponent=" << r.a0_fit.exponent << '\n';
        return kExitOk;
    }
};

int report(std::ostream& err, const std::string& kind, const std::exception& e, int code) {
    err << "fracvac: " << kind << ": " << e.what() << '\n';
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spontaneous emission in fractal vacua: spectra, dynamics and analysis", "fracvac"};
    app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
    app.require_subcommand(1);

    SpectrumCmd spectrum;
    GammaTCmd gamma_t;
    ToyCmd toy;
    DynamicsCmd dynamics;
    AnalyzeCmd analyze;
    Fig1Cmd fig1;
    Fig2Cmd fig2;
    auto* s_spectrum = app.add_subcommand("spectrum", "build a spectral measure or trace-map constants");
    auto* s_gamma = app.add_subcommand("gamma-t", "golden-rule rate of a discrete measure");
    auto* s_toy = app.add_subcommand("toy", "toy-model poles and pole-sum amplitude");
    auto* s_dyn = app.add_subcommand("dynamics", "emitter amplitude by exact diagonalization or Volterra");
    auto* s_an = app.add_subcommand("analyze", "power-law, log-period and scaling-collapse analysis");
    auto* s_f1 = app.add_subcommand("reproduce-fig1", "rate traces of Fibonacci chains with fit report");
    auto* s_f2 = app.add_subcommand("reproduce-fig2", "toy-model amplitudes for A = 0 and A = 1");
    spectrum.add(s_spectrum);
    gamma_t.add(s_gamma);
    toy.add(s_toy);
    dynamics.add(s_dyn);
    analyze.add(s_an);
    fig1.add(s_f1);
    fig2.add(s_f2);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "fracvac: config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (s_spectrum->parsed()) return spectrum.exec(out);
        if (s_gamma->parsed()) return gamma_t.exec(out);
        if (s_toy->parsed()) return toy.exec(out);
        if (s_dyn->parsed()) return dynamics.exec(out);
        if (s_an->parsed()) return analyze.exec(out);
        if (s_f1->parsed()) return fig1.exec(out);
        if (s_f2->parsed()) return fig2.exec(out);
    } catch (const InvalidArgument& e) {
        return report(err, "config error", e, kExitConfig);
    } catch (const std::out_of_range& e) {
        return report(err, "config error", e, kExitConfig);
    } catch (const NumericalFailure& e) {
        return report(err, "numerical failure", e, kExitNumerical);
    } catch (const IoError& e) {
        return report(err, "I/O error", e, kExitIo);
    } catch (const fs::filesystem_error& e) {
        return report(err, "I/O error", e, kExitIo);
    }
    return kExitConfig;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace fracvac::cli
