#include "fracvac/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracvac/error.hpp"

namespace fracvac {

namespace {

const cplx kI(0.0, 1.0);

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string("toy model: ") + name + " must be finite");
}

}  // namespace

void ToyModelParams::validate() const {
    require_finite(C, "C");
    require_finite(alpha, "alpha");
    require_finite(A, "A");
    require_finite(Omega, "Omega");
    require_finite(lambda, "lambda");
    require_finite(omega_u, "omega_u");
    require_finite(omega_e, "omega_e");
    if (!(C > 0.0)) throw InvalidArgument("toy model: C must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("toy model: alpha must lie in (0, 1)");
    if (!(A >= 0.0 && A <= 1.0)) throw InvalidArgument("toy model: A must lie in [0, 1]");
    if (!(Omega > 0.0)) throw InvalidArgument("toy model: Omega must be > 0");
    if (!(lambda > 0.0)) throw InvalidArgument("toy model: lambda must be > 0");
    if (2.0 * kPi / lambda > 150.0)
        throw InvalidArgument("toy model: lambda too small (2 pi / lambda must stay below 150)");
}

double ToyModelParams::b() const noexcept { return 2.0 * kPi / lambda; }

double ToyModelParams::pole_regime_threshold() const noexcept {
    return std::exp(-kPi * kPi / lambda) / std::sin(0.5 * kPi * alpha);
}

bool ToyModelParams::pole_regime() const noexcept { return A > pole_regime_threshold(); }

bool ToyModelParams::branch_cut_negligible() const noexcept {
    return std::exp(-2.0 * kPi * kPi / lambda) < 1e-3;
}

double ToyModelParams::theta0() const {
    if (!(A > 0.0)) throw InvalidArgument("toy model: theta0 needs A > 0");
    return lambda / (2.0 * kPi) * std::log(A * std::sin(0.5 * kPi * alpha));
}

double gamma_spectral(const ToyModelParams& p, double omega) {
    p.validate();
    const double x = std::abs(omega - p.omega_u);
    if (!(x > 0.0)) throw InvalidArgument("gamma_spectral: omega must differ from omega_u");
    return p.C / (kPi * std::pow(x, 1.0 - p.alpha)) *
           (1.0 + p.A * std::cos(p.b() * std::log(x / p.Omega)));
}

namespace {

// cosh(pi^2/lambda + i pi alpha/2) Gamma(alpha - i b)
cplx f_coefficient(const ToyModelParams& p) {
    return std::cosh(cplx(kPi * kPi / p.lambda, 0.5 * kPi * p.alpha)) * gamma(cplx(p.alpha, -p.b()));
}

}  // namespace

cplx phi_of_t(const ToyModelParams& p, double t) {
    p.validate();
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("phi_of_t: t must be > 0");
    double bracket = std::tgamma(p.alpha) * std::cos(0.5 * kPi * p.alpha);
    if (p.A != 0.0) {
        const cplx f = std::exp(kI * (p.b() * std::log(p.Omega * t))) * f_coefficient(p);
        bracket += p.A * f.real();
    }
    return (2.0 * p.C / kPi) * std::pow(t, -p.alpha) * bracket *
           std::exp(cplx(0.0, -p.omega_u * t));
}

namespace {

struct LaplaceParts {
    cplx z;
    cplx zpow;     // z^{alpha-1}
    cplx f;        // (z/Omega)^{ib} / sinh(pi^2/lambda - i pi alpha/2)
    cplx g;        // (z/Omega)^{-ib} / sinh(pi^2/lambda + i pi alpha/2)
    cplx bracket;  // csc + (A/2i)(f - g)
};

LaplaceParts laplace_parts(const ToyModelParams& p, cplx s) {
    p.validate();
    LaplaceParts r;
    r.z = s + kI * p.delta_omega();
    if (r.z.imag() == 0.0 && r.z.real() <= 0.0)
        throw InvalidArgument("phi_laplace: z lies on the branch cut (non-positive real axis)");
    const cplx lz = std::log(r.z);
    r.zpow = std::exp((p.alpha - 1.0) * lz);
    const double csc = 1.0 / std::sin(0.5 * kPi * p.alpha);
    r.bracket = csc;
    if (p.A != 0.0) {
        const cplx phase = kI * p.b() * (lz - std::log(p.Omega));
        r.f = std::exp(phase) / std::sinh(cplx(kPi * kPi / p.lambda, -0.5 * kPi * p.alpha));
        r.g = std::exp(-phase) / std::sinh(cplx(kPi * kPi / p.lambda, 0.5 * kPi * p.alpha));
        r.bracket += p.A / (2.0 * kI) * (r.f - r.g);
    }
    return r;
}

}  // namespace

cplx phi_laplace(const ToyModelParams& p, cplx s) {
    const LaplaceParts r = laplace_parts(p, s);
    return p.C * r.zpow * r.bracket;
}

cplx phi_laplace_derivative(const ToyModelParams& p, cplx s) {
    const LaplaceParts r = laplace_parts(p, s);
    cplx inner = (p.alpha - 1.0) * r.bracket;
    if (p.A != 0.0) inner += 0.5 * p.A * p.b() * (r.f + r.g);
    return p.C * r.zpow * inner / r.z;
}

std::string to_string(PoleStatus status) {
    switch (status) {
        case PoleStatus::converged: return "converged";
        case PoleStatus::seed: return "seed";
        case PoleStatus::failed: return "failed";
        case PoleStatus::wandered: return "wandered";
    }
    return "unknown";
}

cplx pole_seed(const ToyModelParams& p, int n) {
    const double mod = p.lambda * ((3.0 - p.alpha) / 4.0 + n);
    return -kI * p.Omega * std::exp(cplx(mod, p.theta0()));
}

namespace {

double root_residual(const ToyModelParams& p, cplx s) {
    return std::abs(s + phi_laplace(p, s)) / std::abs(s);
}

bool off_cut(cplx s) { return s.imag() < 0.0; }

void refine(const ToyModelParams& p, Pole& pole) {
    cplx s = pole.seed;
    cplx f = s + phi_laplace(p, s);
    pole.status = PoleStatus::failed;
    for (int it = 1; it <= 100; ++it) {
        pole.iterations = it;
        const cplx ds = f / (1.0 + phi_laplace_derivative(p, s));
        double step = 1.0;
        cplx s_new = s - ds, f_new{};
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            s_new = s - step * ds;
            if (off_cut(s_new)) {
                f_new = s_new + phi_laplace(p, s_new);
                if (std::abs(f_new) <= std::abs(f)) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (std::abs(ds) <= 1e-12 * std::abs(s)) pole.status = PoleStatus::converged;
            break;
        }
        s = s_new;
        f = f_new;
        if (std::abs(ds) <= 1e-13 * std::abs(s)) {
            pole.status = PoleStatus::converged;
            break;
        }
    }
    pole.s = s;
    pole.residual = root_residual(p, s);
    pole.residual_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                          std::abs(1.0 + phi_laplace_derivative(p, s));
    if (pole.status == PoleStatus::converged && pole.residual >= std::max(1e-10, pole.residual_floor))
        pole.status = PoleStatus::failed;
}

}  // namespace

PoleSet find_poles(const ToyModelParams& p, int n_min, int n_max, PoleMode mode) {
    p.validate();
    if (p.delta_omega() != 0.0)
        throw InvalidArgument("find_poles: only delta_omega = 0 is supported");
    if (!p.pole_regime())
        throw InvalidArgument("find_poles: A is below the pole-regime threshold " +
                              std::to_string(p.pole_regime_threshold()));
    if (n_min > n_max || n_max - n_min > 4000)
        throw InvalidArgument("find_poles: need n_min <= n_max and at most 4000 indices");

    PoleSet set;
    set.theta0 = p.theta0();
    const double rung0 = p.lambda * (3.0 - p.alpha) / 4.0;
    for (int n = n_min; n <= n_max; ++n) {
        Pole pole;
        pole.n = n;
        pole.seed = pole_seed(p, n);
        if (mode == PoleMode::seeds) {
            pole.s = pole.seed;
            pole.status = PoleStatus::seed;
            pole.residual = root_residual(p, pole.s);
        } else {
            refine(p, pole);
            const double rung = (std::log(std::abs(pole.s) / p.Omega) - rung0) / p.lambda;
            if (pole.status == PoleStatus::converged && std::lround(rung) != n)
                pole.status = PoleStatus::wandered;
        }
        pole.asymptotic = std::pow(std::abs(pole.s), 2.0 - p.alpha) < 1e-2 * p.C;
        set.poles.push_back(pole);
    }
    return set;
}

bool pole_sum_valid(const ToyModelParams& p, double t) {
    return p.C * std::pow(std::abs(std::sin(p.theta0())) * t, 2.0 - p.alpha) > kPoleSumValidity;
}

PoleSumValue amplitude_pole_sum(const ToyModelParams& p, const PoleSet& poles, double t,
                                ResidueMode mode) {
    p.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("amplitude_pole_sum: t must be >= 0");
    std::vector<const Pole*> usable;
    for (const auto& pole : poles.poles)
        if (pole.usable()) usable.push_back(&pole);
    if (usable.empty()) throw InvalidArgument("amplitude_pole_sum: no usable poles");
    std::sort(usable.begin(), usable.end(), [](const Pole* a, const Pole* b) { return a->n > b->n; });

    // top down: large poles cut by e^{Re s t}, small ones by the residue against the partial sum
    constexpr double kCut = 1e-16;
    PoleSumValue out;
    cplx sum{};
    std::vector<double> magnitudes;
    double last_term = 0.0;
    for (const Pole* pole : usable) {
        if (std::exp(pole->s.real() * t) <= kCut) continue;
        const cplx e = std::exp(pole->s * t);
        const cplx c = mode == ResidueMode::asymptotic
                           ? std::exp((2.0 - p.alpha) * std::log(pole->s)) * e
                           : e / (1.0 + phi_laplace_derivative(p, pole->s));
        last_term = std::abs(c);
        if (sum != cplx{} && last_term <= kCut * std::abs(sum)) continue;
        sum += c;
        magnitudes.push_back(last_term);
        ++out.terms_summed;
    }
    const double largest = magnitudes.empty() ? 0.0 : *std::max_element(magnitudes.begin(), magnitudes.end());
    for (double m : magnitudes)
        if (m >= 0.01 * largest) ++out.dominant_terms;
    const Pole* top = usable.front();
    const bool top_closed = std::exp(top->s.real() * t) <= kCut || top->n < poles.poles.back().n;
    const bool bottom_closed = last_term <= kCut * std::abs(sum);
    out.range_sufficient = top_closed && bottom_closed;
    if (mode == ResidueMode::asymptotic)
        out.value = -p.lambda * std::sin(0.5 * kPi * p.alpha) / (kPi * p.C) * sum.imag();
    else
        out.value = 2.0 * sum.real();
    out.valid = pole_sum_valid(p, t);
    return out;
}

AmplitudeTrace amplitude_pole_sum_trace(const ToyModelParams& p, const PoleSet& poles,
                                        const std::vector<double>& times, ResidueMode mode) {
    AmplitudeTrace tr;
    tr.solver = SolverTag::pole_sum;
    tr.times = times;
    tr.amplitude.reserve(times.size());
    for (double t : times) tr.amplitude.push_back(amplitude_pole_sum(p, poles, t, mode).value);
    return tr;
}

double amplitude_branchcut_A0(const ToyModelParams& p, double t) {
    p.validate();
    if (p.A != 0.0) throw InvalidArgument("amplitude_branchcut_A0: requires A = 0");
    if (!(t > 0.0)) throw InvalidArgument("amplitude_branchcut_A0: t must be > 0");
    return 1.0 / (p.C * std::pow(t, 2.0 - p.alpha));
}

MemoryKernel toy_kernel(const ToyModelParams& p) {
    p.validate();
    if (p.delta_omega() != 0.0)
        throw InvalidArgument("toy_kernel: only delta_omega = 0 is supported");
    const double pref = 2.0 * p.C / kPi;
    std::vector<PowerTerm> terms{
        {pref * std::tgamma(p.alpha) * std::cos(0.5 * kPi * p.alpha), cplx(p.alpha, 0.0)}};
    if (p.A != 0.0) {
        const cplx c = 0.5 * pref * p.A * f_coefficient(p) * std::exp(kI * (p.b() * std::log(p.Omega)));
        terms.push_back({c, cplx(p.alpha, -p.b())});
        terms.push_back({std::conj(c), cplx(p.alpha, p.b())});
    }
    return MemoryKernel::power_law(terms);
}

}  // namespace fracvac
