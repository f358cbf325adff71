#include "fracvac/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracvac/error.hpp"

namespace fracvac {

std::string to_string(SolverTag tag) {
    switch (tag) {
        case SolverTag::exact_diag: return "exact_diag";
        case SolverTag::volterra: return "volterra";
        case SolverTag::pole_sum: return "pole_sum";
        case SolverTag::golden_rule: return "golden_rule";
    }
    return "unknown";
}

SolverTag solver_from_string(const std::string& name) {
    if (name == "exact_diag") return SolverTag::exact_diag;
    if (name == "volterra") return SolverTag::volterra;
    if (name == "pole_sum") return SolverTag::pole_sum;
    if (name == "golden_rule") return SolverTag::golden_rule;
    throw InvalidArgument("unknown solver tag '" + name + "'");
}

std::vector<double> AmplitudeTrace::magnitude() const {
    std::vector<double> out(amplitude.size());
    for (std::size_t i = 0; i < amplitude.size(); ++i) out[i] = std::abs(amplitude[i]);
    return out;
}

namespace {

void check_times(const std::vector<double>& times, const char* who, bool from_zero) {
    if (times.empty()) throw InvalidArgument(std::string(who) + ": empty time grid");
    if (from_zero && times.front() != 0.0)
        throw InvalidArgument(std::string(who) + ": time grid must start at 0");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw InvalidArgument(std::string(who) + ": times must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidArgument(std::string(who) + ": times must increase strictly");
    }
}

}  // namespace

AmplitudeTrace exact_diagonalization_amplitude(const DiscreteEmitterModel& model,
                                               const std::vector<double>& times) {
    check_times(times, "exact_diagonalization_amplitude", false);
    const auto& om = model.measure.frequencies();
    const auto& w = model.measure.weights();
    const Eigen::Index n = static_cast<Eigen::Index>(om.size()) + 1;

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double v = std::sqrt(w[static_cast<std::size_t>(k - 1)]);
        h(0, k) = v;
        h(k, 0) = v;
        h(k, k) = om[static_cast<std::size_t>(k - 1)] - model.omega_e;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("exact diagonalization: eigensolver failed");

    const Eigen::VectorXd energy = solver.eigenvalues();
    Eigen::VectorXd overlap = solver.eigenvectors().row(0).transpose().cwiseAbs2();
    const double total = overlap.sum();
    if (std::abs(total - 1.0) > 1e-12)
        throw NumericalFailure("exact diagonalization: overlap weights sum to " +
                               std::to_string(total));

    AmplitudeTrace out;
    out.solver = SolverTag::exact_diag;
    out.times = times;
    out.amplitude.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        double re = 0.0, im = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double ph = energy[j] * times[i];
            re += overlap[j] * std::cos(ph);
            im -= overlap[j] * std::sin(ph);
        }
        out.amplitude[i] = {re, im};
    }
    return out;
}

MemoryKernel MemoryKernel::smooth(Fn k, Fn k_integral) {
    MemoryKernel m;
    m.smooth_ = std::move(k);
    m.smooth_integral_ = std::move(k_integral);
    return m;
}

MemoryKernel MemoryKernel::power_law(std::vector<PowerTerm> terms) {
    MemoryKernel m;
    m.add_power_terms(terms);
    return m;
}

MemoryKernel& MemoryKernel::add_power_terms(const std::vector<PowerTerm>& terms) {
    for (const auto& t : terms) {
        if (!(t.mu.real() < 1.0))
            throw InvalidArgument("memory kernel: power exponent with Re(mu) >= 1 is not integrable");
        terms_.push_back(t);
    }
    return *this;
}

cplx MemoryKernel::operator()(double t) const {
    cplx v = smooth_ ? smooth_(t) : cplx{};
    for (const auto& term : terms_) v += term.coeff * std::exp(-term.mu * std::log(t));
    return v;
}

cplx MemoryKernel::integral(double t) const {
    if (smooth_ && !smooth_integral_)
        throw InvalidArgument("memory kernel: no closed-form integral for the smooth part");
    cplx v = smooth_integral_ ? smooth_integral_(t) : cplx{};
    if (t > 0.0)
        for (const auto& term : terms_) {
            const cplx nu = 1.0 - term.mu;
            v += term.coeff / nu * std::exp(nu * std::log(t));
        }
    return v;
}

MemoryKernel build_kernel_from_measure(const DiscreteEmitterModel& model) {
    std::vector<double> delta = model.measure.frequencies();
    for (double& d : delta) d -= model.omega_e;
    const std::vector<double> w = model.measure.weights();
    auto k = [delta, w](double t) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < delta.size(); ++i) {
            re += w[i] * std::cos(delta[i] * t);
            im -= w[i] * std::sin(delta[i] * t);
        }
        return cplx(re, im);
    };
    // int_0^t e^{-i d s} ds = t e^{-i d t/2} sinc(d t/2)
    auto k1 = [delta, w](double t) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < delta.size(); ++i) {
            const double half = 0.5 * delta[i] * t;
            const double amp = w[i] * t * sinc(half);
            re += amp * std::cos(half);
            im -= amp * std::sin(half);
        }
        return cplx(re, im);
    };
    return MemoryKernel::smooth(k, k1);
}

MemoryKernel exponential_kernel(double gamma, double kappa) {
    if (!(gamma >= 0.0) || !(kappa > 0.0))
        throw InvalidArgument("exponential_kernel: need gamma >= 0 and kappa > 0");
    return MemoryKernel::smooth(
        [gamma, kappa](double t) { return cplx(0.5 * gamma * kappa * std::exp(-kappa * t), 0.0); },
        [gamma, kappa](double t) { return cplx(-0.5 * gamma * std::expm1(-kappa * t), 0.0); });
}

std::vector<double> uniform_grid(double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max > 0.0)) throw InvalidArgument("uniform_grid: need t_max > 0, dt > 0");
    const auto n = static_cast<std::size_t>(std::ceil(t_max / dt - 0.5));
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

std::vector<double> geometric_grid(double t_first, double t_max, int points_per_decade) {
    if (!(t_first > 0.0) || !(t_max > t_first) || points_per_decade < 1)
        throw InvalidArgument("geometric_grid: need 0 < t_first < t_max and points_per_decade >= 1");
    const auto k_max = static_cast<int>(std::ceil(points_per_decade * std::log10(t_max / t_first) - 1e-9));
    std::vector<double> t{0.0};
    for (int k = 0; k <= k_max; ++k)
        t.push_back(t_first * std::pow(10.0, static_cast<double>(k) / points_per_decade));
    return t;
}

std::vector<double> hybrid_grid(double t_first, int points_per_decade, double h_max, double t_max) {
    if (!(t_first > 0.0) || !(t_max > t_first) || points_per_decade < 1 || !(h_max > 0.0))
        throw InvalidArgument("hybrid_grid: invalid parameters");
    const double r = std::pow(10.0, 1.0 / points_per_decade);
    std::vector<double> t{0.0, t_first};
    while (t.back() < t_max && t.back() * (r - 1.0) < h_max) t.push_back(t.back() * r);
    const double base = t.back();
    for (std::size_t m = 1; base + static_cast<double>(m - 1) * h_max < t_max; ++m)
        t.push_back(base + static_cast<double>(m) * h_max);
    return t;
}

namespace {

struct IntervalWeights {
    cplx left;
    cplx right;
};

// Weights of int_{t_{j-1}}^{t_j} k1(t_n - s) U(s) ds on the two nodes, with
// p = t_n - t_j and q = t_n - t_{j-1}.
class WeightBuilder {
public:
    WeightBuilder(const MemoryKernel& kernel, bool smooth_closed_form)
        : kernel_(kernel), closed_(smooth_closed_form) {
        for (const auto& term : kernel.power_terms()) {
            const cplx nu = 1.0 - term.mu;
            terms_.push_back({term.coeff / nu, nu});
        }
    }

    IntervalWeights operator()(double p, double q) const {
        const double h = q - p;
        IntervalWeights w{{0.0, 0.0}, {0.0, 0.0}};
        if (kernel_.has_smooth() && closed_) {
            const auto& k1 = kernel_.smooth_integral();
            w.left += 0.5 * h * k1(q);
            w.right += 0.5 * h * (p > 0.0 ? k1(p) : cplx{});
        }
        for (const auto& term : terms_) {
            if (p < 4.0 * h) {
                const cplx nu1 = term.nu + 1.0, nu2 = term.nu + 2.0;
                const double lq = std::log(q);
                const cplx i0q = std::exp(nu1 * lq) / nu1, i1q = std::exp(nu2 * lq) / nu2;
                cplx i0 = i0q, i1 = i1q;
                if (p > 0.0) {
                    const double lp = std::log(p);
                    i0 -= std::exp(nu1 * lp) / nu1;
                    i1 -= std::exp(nu2 * lp) / nu2;
                }
                w.left += term.scale * (i1 - p * i0) / h;
                w.right += term.scale * (q * i0 - i1) / h;
            } else {
                const GaussRule g = gauss_legendre(p < 16.0 * h ? 8 : 4);
                cplx l{}, r{};
                for (int k = 0; k < g.n; ++k) {
                    const double x = 0.5 * (p + q) + 0.5 * h * g.x[k];
                    const cplx f = std::exp(term.nu * std::log(x)) * (0.5 * h * g.w[k]);
                    l += f * (x - p);
                    r += f * (q - x);
                }
                w.left += term.scale * l / h;
                w.right += term.scale * r / h;
            }
        }
        return w;
    }

private:
    struct Term {
        cplx scale;
        cplx nu;
    };
    const MemoryKernel& kernel_;
    bool closed_;
    std::vector<Term> terms_;
};

}  // namespace

AmplitudeTrace volterra_solve(const MemoryKernel& kernel, const std::vector<double>& times) {
    check_times(times, "volterra_solve", true);
    const std::size_t m = times.size();
    AmplitudeTrace out;
    out.solver = SolverTag::volterra;
    out.times = times;
    out.amplitude.assign(m, cplx(1.0, 0.0));
    if (m == 1) return out;

    // first node of the trailing uniform block
    const double h = times[m - 1] - times[m - 2];
    std::size_t ku = m - 2;
    while (ku > 0 && std::abs((times[ku] - times[ku - 1]) - h) <= 1e-9 * h) --ku;

    const bool closed = !kernel.has_smooth() || kernel.has_smooth_integral();
    if (!closed && ku != 0)
        throw InvalidArgument(
            "volterra_solve: a smooth kernel without closed-form integral needs a uniform grid");

    WeightBuilder weights(kernel, closed);

    // smooth k1 at lags L h for a uniform grid without closed form
    std::vector<cplx> k1_lag;
    if (!closed) {
        k1_lag.assign(m, cplx{});
        const GaussRule g = gauss_legendre(8);
        const auto& k = kernel.smooth_part();
        for (std::size_t l = 1; l < m; ++l) {
            cplx acc{};
            const double c = (static_cast<double>(l) - 0.5) * h;
            for (int q = 0; q < g.n; ++q) acc += g.w[q] * k(c + 0.5 * h * g.x[q]);
            k1_lag[l] = k1_lag[l - 1] + 0.5 * h * acc;
        }
    }

    // per-lag weights in the uniform block: interval with p = L h
    std::vector<IntervalWeights> lag(m - ku);
    for (std::size_t l = 0; l < lag.size(); ++l) {
        const double p = static_cast<double>(l) * h;
        lag[l] = weights(p, p + h);
        if (!closed) {
            lag[l].left += 0.5 * h * k1_lag[l + 1];
            lag[l].right += 0.5 * h * k1_lag[l];
        }
    }
    // node weights for interior uniform nodes: right end of lag L plus left end of lag L-1
    std::vector<double> node_re(lag.size(), 0.0), node_im(lag.size(), 0.0);
    for (std::size_t l = 1; l < lag.size(); ++l) {
        const cplx w = lag[l].right + lag[l - 1].left;
        node_re[l] = w.real();
        node_im[l] = w.imag();
    }

    std::vector<double> ure(m, 0.0), uim(m, 0.0);
    ure[0] = 1.0;
    for (std::size_t n = 1; n < m; ++n) {
        cplx acc{};
        cplx diag{};
        const std::size_t fresh_end = std::min(n, ku);
        for (std::size_t j = 1; j <= fresh_end; ++j) {
            const IntervalWeights w = weights(times[n] - times[j], times[n] - times[j - 1]);
            acc += w.left * cplx(ure[j - 1], uim[j - 1]);
            if (j < n) acc += w.right * cplx(ure[j], uim[j]);
            else diag += w.right;
        }
        if (n > ku) {
            // node ku: left end of interval ku+1 (lag n-ku-1)
            acc += lag[n - ku - 1].left * cplx(ure[ku], uim[ku]);
            double sre = 0.0, sim = 0.0;
            for (std::size_t i = ku + 1; i < n; ++i) {
                const std::size_t l = n - i;
                sre += node_re[l] * ure[i] - node_im[l] * uim[i];
                sim += node_re[l] * uim[i] + node_im[l] * ure[i];
            }
            acc += cplx(sre, sim);
            diag += lag[0].right;
        }
        const cplx u = (1.0 - acc) / (1.0 + diag);
        if (!std::isfinite(u.real()) || !std::isfinite(u.imag()) || std::abs(u) > kVolterraBlowup) {
            std::ostringstream msg;
            msg << "volterra_solve: march unstable at t=" << times[n]
                << " (step-size collapse; refine the grid)";
            throw NumericalFailure(msg.str());
        }
        ure[n] = u.real();
        uim[n] = u.imag();
        out.amplitude[n] = u;
    }
    return out;
}

}  // namespace fracvac
