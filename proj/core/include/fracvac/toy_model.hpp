#pragma once

#include <string>
#include <vector>

#include "fracvac/dynamics.hpp"
#include "fracvac/special.hpp"

namespace fracvac {

struct ToyModelParams {
    double C = 1.0;
    double alpha = 0.5;
    double A = 1.0;
    double Omega = 1.0;
    double lambda = 1.0;
    double omega_u = 0.0;
    double omega_e = 0.0;

    /// Throws InvalidArgument naming the offending field.
    void validate() const;

    double delta_omega() const noexcept { return omega_e - omega_u; }
    /// 2 pi / lambda.
    double b() const noexcept;
    /// csc(pi alpha / 2) exp(-pi^2 / lambda).
    double pole_regime_threshold() const noexcept;
    bool pole_regime() const noexcept;
    /// exp(-2 pi^2 / lambda) < 1e-3.
    bool branch_cut_negligible() const noexcept;
    /// (lambda / 2 pi) ln(A sin(pi alpha / 2)).
    double theta0() const;
};

/// C / (pi |omega - omega_u|^{1-alpha}) [1 + A cos(b ln(|omega - omega_u| / Omega))].
double gamma_spectral(const ToyModelParams& p, double omega);

/// (2C/pi) e^{-i omega_u t} t^{-alpha} [Gamma(alpha) cos(pi alpha/2) + A Re F(t)],
/// F(t) = (Omega t)^{ib} cosh(pi^2/lambda + i pi alpha/2) Gamma(alpha - i b).
cplx phi_of_t(const ToyModelParams& p, double t);

/// Laplace transform of phi_of_t continued off the cut; z = s + i delta_omega
/// must not lie on the non-positive real axis.
cplx phi_laplace(const ToyModelParams& p, cplx s);

/// d/ds phi_laplace.
cplx phi_laplace_derivative(const ToyModelParams& p, cplx s);

enum class PoleStatus { converged, seed, failed, wandered };

std::string to_string(PoleStatus status);

struct Pole {
    int n = 0;
    cplx seed;
    cplx s;                 // lower half plane; the conjugate is implied
    double residual = 0.0;  // |s + phi_laplace(s)| / |s|
    double residual_floor = 0.0;  // rounding limit of residual, 64 eps |1 + phi_laplace'(s)|
    int iterations = 0;
    PoleStatus status = PoleStatus::seed;
    bool asymptotic = false;  // |s|^{2-alpha} < 0.01 C

    bool usable() const noexcept {
        return status == PoleStatus::converged || status == PoleStatus::seed;
    }
};

struct PoleSet {
    std::vector<Pole> poles;  // ascending n
    double theta0 = 0.0;
};

enum class PoleMode { refined, seeds };

/// Ladder seeds -i Omega exp(lambda((3-alpha)/4 + n) + i theta0).
cplx pole_seed(const ToyModelParams& p, int n);

/// Seeds for n_min..n_max, refined by damped Newton on s + phi_laplace(s)
/// unless mode == seeds. A refined pole that lands nearer another rung of the
/// ladder is marked wandered.
PoleSet find_poles(const ToyModelParams& p, int n_min, int n_max,
                   PoleMode mode = PoleMode::refined);

enum class ResidueMode { asymptotic, exact };

struct PoleSumValue {
    cplx value;
    bool valid = false;          // C (|sin theta0| t)^{2-alpha} > 10
    int terms_summed = 0;
    int dominant_terms = 0;      // terms within 1% of the largest
    bool range_sufficient = true;  // truncation satisfied at both ends of the index range
};

/// Long-time threshold on C (|sin theta0| t)^{2-alpha}.
inline constexpr double kPoleSumValidity = 10.0;

bool pole_sum_valid(const ToyModelParams& p, double t);

PoleSumValue amplitude_pole_sum(const ToyModelParams& p, const PoleSet& poles, double t,
                                ResidueMode mode = ResidueMode::asymptotic);

AmplitudeTrace amplitude_pole_sum_trace(const ToyModelParams& p, const PoleSet& poles,
                                        const std::vector<double>& times,
                                        ResidueMode mode = ResidueMode::asymptotic);

/// 1 / (C t^{2-alpha}); requires A = 0.
double amplitude_branchcut_A0(const ToyModelParams& p, double t);

/// Rotating-frame kernel e^{i omega_e t} phi_of_t as three power-law terms.
/// Requires delta_omega = 0.
MemoryKernel toy_kernel(const ToyModelParams& p);

}  // namespace fracvac
