#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracvac/special.hpp"
#include "fracvac/spectrum.hpp"

namespace fracvac {

enum class SolverTag { exact_diag, volterra, pole_sum, golden_rule };

std::string to_string(SolverTag tag);
SolverTag solver_from_string(const std::string& name);

/// Rotating-frame amplitude samples.
struct AmplitudeTrace {
    std::vector<double> times;
    std::vector<cplx> amplitude;
    SolverTag solver = SolverTag::volterra;

    std::vector<double> magnitude() const;
};

struct DiscreteEmitterModel {
    double omega_e = 0.0;
    SpectralMeasure measure;  // weights are |V_k|^2
};

/// sum_j |<e|psi_j>|^2 exp(-i (E_j - omega_e) t) from a dense eigensolve.
AmplitudeTrace exact_diagonalization_amplitude(const DiscreteEmitterModel& model,
                                               const std::vector<double>& times);

/// a t^{-mu}; requires Re mu < 1.
struct PowerTerm {
    cplx coeff;
    cplx mu;
};

/// Memory kernel K(t) = smooth(t) + sum_j a_j t^{-mu_j}.
class MemoryKernel {
public:
    using Fn = std::function<cplx(double)>;

    MemoryKernel() = default;

    /// Smooth kernel with an optional closed-form running integral
    /// int_0^t K. Without it only uniform grids are accepted.
    static MemoryKernel smooth(Fn k, Fn k_integral = {});
    static MemoryKernel power_law(std::vector<PowerTerm> terms);

    MemoryKernel& add_power_terms(const std::vector<PowerTerm>& terms);

    cplx operator()(double t) const;
    /// int_0^t K(t') dt'; requires the closed form for the smooth part.
    cplx integral(double t) const;

    bool has_smooth() const noexcept { return static_cast<bool>(smooth_); }
    bool has_smooth_integral() const noexcept { return static_cast<bool>(smooth_integral_); }
    const Fn& smooth_part() const noexcept { return smooth_; }
    const Fn& smooth_integral() const noexcept { return smooth_integral_; }
    const std::vector<PowerTerm>& power_terms() const noexcept { return terms_; }

private:
    Fn smooth_;
    Fn smooth_integral_;
    std::vector<PowerTerm> terms_;
};

/// K(t) = sum_k w_k exp(-i (omega_k - omega_e) t), with its integral.
MemoryKernel build_kernel_from_measure(const DiscreteEmitterModel& model);

/// K(t) = (gamma kappa / 2) exp(-kappa t).
MemoryKernel exponential_kernel(double gamma, double kappa);

/// 0, dt, 2 dt, ... up to t_max (last node >= t_max - dt/2).
std::vector<double> uniform_grid(double t_max, double dt);

/// 0 followed by geometric nodes t_first ... t_max.
std::vector<double> geometric_grid(double t_first, double t_max, int points_per_decade);

/// 0, geometric nodes from t_first until the spacing reaches h_max, then
/// uniform with step h_max up to t_max.
std::vector<double> hybrid_grid(double t_first, int points_per_decade, double h_max, double t_max);

/// Solves dU/dt = -int_0^t K(t-t') U(t') dt', U(0) = 1, in its integrated
/// form by product integration (exact for the power-law terms against a
/// linear interpolant, trapezoidal on the smooth part). `times` must start
/// at 0 and increase strictly.
AmplitudeTrace volterra_solve(const MemoryKernel& kernel, const std::vector<double>& times);

/// Bound on |U| above which the march is declared unstable.
inline constexpr double kVolterraBlowup = 1e3;

}  // namespace fracvac
