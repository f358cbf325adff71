#pragma once

#include <vector>

namespace fracvac {

/// Eigenvalues of a real symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `diag` has n entries, `off` has n-1 (sub-diagonal).
/// Returns eigenvalues sorted ascending. Throws NumericalFailure naming the
/// eigenvalue index that failed to converge.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off,
                                            int max_iterations_per_value = 60);

}  // namespace fracvac
