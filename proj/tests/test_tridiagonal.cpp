#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "fracvac/error.hpp"
#include "fracvac/special.hpp"
#include "fracvac/tridiagonal.hpp"

TEST(Tridiagonal, UniformChainCosineFormula) {
    for (int n : {1, 2, 7, 100, 611}) {
        const auto ev = fracvac::tridiagonal_eigenvalues(std::vector<double>(n, 0.0),
                                                         std::vector<double>(n - 1, 1.0));
        ASSERT_EQ(static_cast<int>(ev.size()), n);
        std::vector<double> ref;
        for (int m = 1; m <= n; ++m) ref.push_back(-2.0 * std::cos(fracvac::kPi * m / (n + 1)));
        std::sort(ref.begin(), ref.end());
        for (int i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-12);
    }
}

TEST(Tridiagonal, RandomMatricesAgreeWithDenseSolver) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial * 9;
        std::vector<double> d(n), e(n - 1);
        for (auto& v : d) v = g(rng);
        for (auto& v : e) v = g(rng);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = d[i];
        for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
        const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
        const auto ev = fracvac::tridiagonal_eigenvalues(d, e);
        for (int i = 0; i < n; ++i) EXPECT_NEAR(ev[i], ref[i], 1e-11);
    }
}

TEST(Tridiagonal, ReportsFailingIndex) {
    std::vector<double> d{1, 2, 3, 4}, e{1, 1, 1};
    try {
        fracvac::tridiagonal_eigenvalues(d, e, 0);
        FAIL() << "expected non-convergence";
    } catch (const fracvac::NumericalFailure& err) {
        EXPECT_NE(std::string(err.what()).find("index 0"), std::string::npos);
    }
}

TEST(Tridiagonal, RejectsShapeMismatch) {
    EXPECT_THROW(fracvac::tridiagonal_eigenvalues({1, 2}, {1, 2}), fracvac::InvalidArgument);
    EXPECT_TRUE(fracvac::tridiagonal_eigenvalues({}, {}).empty());
}
