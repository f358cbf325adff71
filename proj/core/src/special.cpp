#include "fracvac/special.hpp"

#include <cmath>

#include "fracvac/error.hpp"

namespace fracvac {

double sinc(double x) noexcept {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

namespace {

// Bernoulli coefficients B_2k / (2k (2k-1))
constexpr double kStirling[] = {1.0 / 12.0,      -1.0 / 360.0,         1.0 / 1260.0,
                                -1.0 / 1680.0,   1.0 / 1188.0,         -691.0 / 360360.0,
                                1.0 / 156.0,     -3617.0 / 122400.0};

// shifted Stirling series, Re z >= 0.5
cplx gamma_right(cplx z) {
    cplx shift = 1.0;
    while (z.real() < 14.0) {
        shift *= z;
        z += 1.0;
    }
    const cplx inv = 1.0 / z, inv2 = inv * inv;
    cplx series = 0.0, p = inv;
    for (double c : kStirling) {
        series += c * p;
        p *= inv2;
    }
    const cplx lg = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
    return std::exp(lg) / shift;
}

}  // namespace

cplx gamma(cplx z) {
    if (std::abs(z.imag()) > 200.0)
        throw InvalidArgument("gamma: |Im z| > 200 is outside the supported strip");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real()))
        throw InvalidArgument("gamma: pole at a non-positive integer");
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_right(1.0 - z));
    return gamma_right(z);
}

cplx cpow(cplx z, cplx w) {
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    return std::exp(w * std::log(z));
}

namespace {
constexpr double kX2[] = {-0.57735026918962576, 0.57735026918962576};
constexpr double kW2[] = {1.0, 1.0};
constexpr double kX4[] = {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626,
                          0.86113631159405258};
constexpr double kW4[] = {0.34785484513745386, 0.65214515486254614, 0.65214515486254614,
                          0.34785484513745386};
constexpr double kX8[] = {-0.96028985649753623, -0.79666647741362674, -0.52553240991632899,
                          -0.18343464249564980, 0.18343464249564980,  0.52553240991632899,
                          0.79666647741362674,  0.96028985649753623};
constexpr double kW8[] = {0.10122853629037626, 0.22238103445337447, 0.31370664587788729,
                          0.36268378337836198, 0.36268378337836198, 0.31370664587788729,
                          0.22238103445337447, 0.10122853629037626};
}  // namespace

GaussRule gauss_legendre(int n) {
    switch (n) {
        case 2: return {kX2, kW2, 2};
        case 4: return {kX4, kW4, 4};
        case 8: return {kX8, kW8, 8};
        default: throw InvalidArgument("gauss_legendre: supported orders are 2, 4, 8");
    }
}

}  // namespace fracvac
