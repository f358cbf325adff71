#include "fracvac/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracvac/error.hpp"

namespace fracvac {

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> off,
                                            int max_iterations_per_value) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return {};
    if (static_cast<int>(off.size()) != n - 1)
        throw InvalidArgument("tridiagonal_eigenvalues: off-diagonal must have n-1 entries");

    // e[i] couples rows i and i+1; e[n-1] is scratch
    std::vector<double> e(n, 0.0);
    std::copy(off.begin(), off.end(), e.begin());

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iterations_per_value)
                    throw NumericalFailure("tridiagonal eigensolver did not converge at index " +
                                           std::to_string(l));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    for (double v : d)
        if (!std::isfinite(v)) throw NumericalFailure("tridiagonal eigensolver produced a non-finite value");
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace fracvac
