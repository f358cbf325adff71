#pragma once

#include <array>
#include <complex>

namespace fracvac {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kGolden = 1.61803398874989484820458683436563812;

/// sin(x)/x with sinc(0) = 1; series for |x| < 1e-4.
double sinc(double x) noexcept;

/// Euler Gamma of a complex argument (shifted Stirling series, reflection for Re z < 1/2).
/// Relative error below 1e-13 for |Im z| <= 200.
cplx gamma(cplx z);

/// Principal-branch power exp(w log z).
cplx cpow(cplx z, cplx w);

/// Nodes and weights of Gauss-Legendre rules on [-1, 1].
struct GaussRule {
    const double* x;
    const double* w;
    int n;
};
GaussRule gauss_legendre(int n);  // n in {2, 4, 8}

}  // namespace fracvac
