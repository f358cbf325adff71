// Reference computations used only by the tests. None of these call into the
// library's closed forms.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// Piecewise 31-point Gauss-Kronrod of a complex integrand over [a, b].
inline cplx integrate(const std::function<cplx(double)>& f, double a, double b, int pieces) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    cplx total{};
    const double h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
        const double lo = a + k * h, hi = lo + h;
        const double re = GK::integrate([&](double x) { return f(x).real(); }, lo, hi, 3, 1e-13);
        const double im = GK::integrate([&](double x) { return f(x).imag(); }, lo, hi, 3, 1e-13);
        total += cplx(re, im);
    }
    return total;
}

struct Toy {
    double C = 1, alpha = 0.5, A = 1, Omega = 1, lambda = 1;
};

// integral over the real line of Gamma(omega) e^{-i omega t} for the
// log-periodic spectral function centred at zero; the integrand is even, so
// this is 2 int_0^inf Gamma(x) cos(x t) dx. Substituting y = x t, the part on
// [0, 1] is mapped by y = e^{-u} and the part on [1, inf) is rotated onto the
// rays y = 1 +- i s where e^{+-iy} decays.
inline double fourier_phi(const Toy& p, double t) {
    const double b = 2 * pi / p.lambda;
    // y^{alpha-1} (1 + A cos(b ln(y / (Omega t))))
    auto h = [&](cplx y) {
        return std::pow(y, p.alpha - 1.0) * (1.0 + p.A * std::cos(b * std::log(y / (p.Omega * t))));
    };
    const double u_max = 40.0 / p.alpha + 10.0;
    const cplx near = integrate(
        [&](double u) {
            const double y = std::exp(-u);
            return h(cplx(y, 0.0)) * std::cos(y) * y;
        },
        0.0, u_max, static_cast<int>(u_max * 2));
    const double s_max = 60.0;
    const cplx up = integrate(
        [&](double s) {
            const cplx y(1.0, s);
            return h(y) * std::exp(cplx(0, 1) * y) * cplx(0, 1);
        },
        0.0, s_max, 120);
    const cplx down = integrate(
        [&](double s) {
            const cplx y(1.0, -s);
            return h(y) * std::exp(cplx(0, -1) * y) * cplx(0, -1);
        },
        0.0, s_max, 120);
    return 2.0 * p.C / pi * std::pow(t, -p.alpha) * (near.real() + 0.5 * (up + down).real());
}

// int_0^inf phi(t) e^{-s t} dt by quadrature of a time-domain callable
// behaving like t^{-alpha} at the origin.
inline cplx laplace(const std::function<cplx(double)>& phi, cplx s) {
    // [0,1] with t = e^{-u}
    const cplx head = integrate(
        [&](double u) {
            const double t = std::exp(-u);
            return phi(t) * std::exp(-s * t) * t;
        },
        0.0, 90.0, 180);
    // [1, T] in pieces no longer than 0.5/|s|
    const double t_end = 1.0 + 45.0 / s.real();
    const double piece = std::min(1.0, 0.5 / std::abs(s));
    const int pieces = static_cast<int>(std::ceil((t_end - 1.0) / piece));
    const cplx tail = integrate([&](double t) { return phi(t) * std::exp(-s * t); }, 1.0, t_end, pieces);
    return head + tail;
}

// u'' + kappa u' + (gamma kappa / 2) u = 0, u(0) = 1, u'(0) = 0
inline cplx exponential_kernel_solution(double gamma, double kappa, double t) {
    const cplx disc = std::sqrt(cplx(kappa * kappa - 2.0 * gamma * kappa, 0.0));
    const cplx rp = 0.5 * (-kappa + disc), rm = 0.5 * (-kappa - disc);
    return (rp * std::exp(rm * t) - rm * std::exp(rp * t)) / (rp - rm);
}

// Stirling series with upward shift, an independent Gamma for tests.
struct GammaValue {
    double x, y, re, im;
};

// Gamma(x + iy) at 40 significant digits, rounded to 20
inline constexpr GammaValue kGammaTable[] = {
    {0.05, -31.4, 1.5128818720860630808e-22, -1.3343814122291193722e-22},
    {0.05, -6.28, -9.6475717811901181259e-6, 5.618172051912933157e-5},
    {0.05, -1.0, -1.0343830445630268343e-1, 5.1337412201277567247e-1},
    {0.05, 0.0, 1.9470085311255511756e+1, 0.0},
    {0.05, 0.5, -1.7738762765111603926e-1, -1.6097363972987888614},
    {0.05, 6.28, -9.6475717811901181259e-6, -5.618172051912933157e-5},
    {0.05, 18.8, -4.6403075116511274888e-14, -8.873419185757801369e-14},
    {0.25, -31.4, 2.0375121396196917626e-22, -3.4645994874052327098e-22},
    {0.25, -6.28, 1.2730439293154461206e-5, 8.1337226790909423503e-5},
    {0.25, -1.0, 9.9149758763453354353e-2, 5.1661774379288528727e-1},
    {0.25, 0.0, 3.6256099082219083119, 0.0},
    {0.25, 0.5, 5.1552449013506909704e-1, -1.3073259266318253913},
    {0.25, 6.28, 1.2730439293154461206e-5, -8.1337226790909423503e-5},
    {0.25, 18.8, -2.9389347411160730118e-14, -1.7764749341788571186e-13},
    {0.5, -31.4, 1.3081175149550368482e-22, -9.4240406031837697551e-22},
    {0.5, -6.28, 6.8432944004158668728e-5, 1.1088424928456418262e-4},
    {0.5, -1.0, 3.0069461726065581622e-1, 4.2496787943312381261e-1},
    {0.5, 0.0, 1.7724538509055160273, 0.0},
    {0.5, 0.5, 8.1816399954174739408e-1, -7.6331382871398261667e-1},
    {0.5, 6.28, 6.8432944004158668728e-5, -1.1088424928456418262e-4},
    {0.5, 18.8, 8.562579140225813336e-14, -3.6502333345450719576e-13},
    {0.75, -31.4, -5.6544907562537896944e-22, -2.180079543355625936e-21},
    {0.75, -6.28, 1.666220372335757972e-4, 1.215231883260634819e-4},
    {0.75, -1.0, 4.2668350976193150278e-1, 2.904404322116910814e-1},
    {0.75, 0.0, 1.2254167024651776451, 0.0},
    {0.75, 0.5, 8.3492996597374684817e-1, -4.0638188005813243326e-1},
    {0.75, 6.28, 1.666220372335757972e-4, -1.215231883260634819e-4},
    {0.75, 18.8, 4.5453076488873466909e-13, -6.3473486049060070224e-13},
    {0.95, -31.4, -2.4053272043923232249e-21, -3.7883312334588306915e-21},
    {0.95, -6.28, 2.8204892379283387929e-4, 9.5708919111142564567e-5},
    {0.95, -1.0, 4.867433568548715611e-1, 1.8125967352123498297e-1},
    {0.95, 0.0, 1.0314533171290322265, 0.0},
    {0.95, 0.5, 8.0807846507411284905e-1, -2.3303045919297154278e-1},
    {0.95, 6.28, 2.8204892379283387929e-4, -9.5708919111142564567e-5},
    {0.95, 18.8, 1.126927101188484683e-12, -8.3714597673037988023e-13},
    {1.7, -31.4, -5.884069170922230976e-20, 9.0920824135211993866e-21},
    {1.7, -6.28, 8.6746722388073895204e-4, -8.1284230970597438732e-4},
    {1.7, -1.0, 6.0298891846056774085e-1, -1.8401807362524210039e-1},
    {1.7, 0.0, 9.0863873285329044156e-1, 0.0},
    {1.7, 0.5, 8.1910503281500810041e-1, 9.5767017373585886697e-2},
    {1.7, 6.28, 8.6746722388073895204e-4, 8.1284230970597438732e-4},
    {1.7, 18.8, 1.1092224321426909515e-11, 6.1505967652927973699e-12},
    {-0.3, -31.4, 5.9538790968281904751e-23, -9.9778837604904101264e-24},
    {-0.3, -6.28, -2.0497820056657450925e-5, 2.1799942335335044823e-5},
    {-0.3, -1.0, -4.0392177937761844443e-1, 2.856089135341235667e-1},
    {-0.3, 0.0, -4.3268511088251927205, 0.0},
    {-0.3, 0.5, -1.4214424150245888109, -8.2620760951848627621e-1},
    {-0.3, 6.28, -2.0497820056657450925e-5, -2.1799942335335044823e-5},
    {-0.3, 18.8, -3.0981151498916926076e-14, -1.8050544392944024102e-14},
};

struct RandomMeasure {
    std::vector<double> omega;
    std::vector<double> weight;
};

// N modes uniform on [-bandwidth/2, bandwidth/2], weights uniform, scaled to total.
inline RandomMeasure random_measure(std::size_t n, double bandwidth, double total, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uw(0.0, 1.0);
    RandomMeasure m;
    for (std::size_t i = 0; i < n; ++i) m.omega.push_back(bandwidth * (uw(rng) - 0.5));
    std::sort(m.omega.begin(), m.omega.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m.weight.push_back(uw(rng));
        sum += m.weight.back();
    }
    for (double& w : m.weight) w *= total / sum;
    return m;
}

}  // namespace oracle
