#pragma once

#include <algorithm>
#include <vector>

#include "fracvac/error.hpp"

namespace fracvac::detail {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw InvalidArgument("spline: need at least two points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw InvalidArgument("spline: abscissae must increase");
        m_.assign(n, 0.0);
        if (n == 2) return;
        std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        for (std::size_t i = 1; i < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        m_[n - 1] = r[n - 1] / b[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    }

    double operator()(double x) const {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
        i = std::clamp<std::size_t>(i, 1, x_.size() - 1);
        const double h = x_[i] - x_[i - 1];
        const double A = (x_[i] - x) / h, B = (x - x_[i - 1]) / h;
        return A * y_[i - 1] + B * y_[i] +
               ((A * A * A - A) * m_[i - 1] + (B * B * B - B) * m_[i]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

}  // namespace fracvac::detail
