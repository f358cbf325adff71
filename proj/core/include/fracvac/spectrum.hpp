#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fracvac {

/// Largest supported Fibonacci generation (F_40 = 102334155 letters).
inline constexpr int kMaxFibonacciGeneration = 40;

/// F_1 = F_2 = 1.
std::uint64_t fibonacci_number(int j);

struct FibonacciWord {
    int generation = 1;
    std::string letters;

    std::size_t count(char letter) const;
};

/// S_1 = "B", S_2 = "A", S_j = S_{j-2} S_{j-1}. Throws std::out_of_range for
/// j < 1 or j > kMaxFibonacciGeneration.
FibonacciWord fibonacci_word(int j);

struct TightBindingChain {
    FibonacciWord word;
    double onsite_a = 1.0;
    double onsite_b = -1.0;
    double hopping = 1.0;
};

/// Atoms (frequency, weight). Frequencies sorted ascending, weights >= 0.
class SpectralMeasure {
public:
    SpectralMeasure() = default;
    /// Validates ordering and weights; throws InvalidArgument otherwise.
    SpectralMeasure(std::vector<double> frequencies, std::vector<double> weights);

    /// Unit weights.
    static SpectralMeasure uniform(std::vector<double> frequencies);

    const std::vector<double>& frequencies() const noexcept { return omega_; }
    const std::vector<double>& weights() const noexcept { return weight_; }
    std::size_t size() const noexcept { return omega_.size(); }
    bool empty() const noexcept { return omega_.empty(); }
    double total_weight() const noexcept;

    /// mu(x) = sum of weights with omega_k <= x.
    double cumulative(double x) const;
    /// Same measure, every weight multiplied by `factor` (>= 0).
    SpectralMeasure scaled(double factor) const;
    /// Measure with one extra atom.
    SpectralMeasure with_atom(double omega, double weight) const;

private:
    std::vector<double> omega_;
    std::vector<double> weight_;
    std::vector<double> prefix_;  // prefix_[k] = sum_{i<k} weight_i
};

/// All eigenvalues of the open chain, unit weights.
SpectralMeasure tb_spectrum(const TightBindingChain& chain);

struct CantorMeasureSpec {
    int depth = 1;
    double omega_min = 0.0;
    double omega_max = 1.0;
    /// Defaults to 2^-depth (unit total weight).
    std::optional<double> atom_weight;
};

/// Largest supported Cantor depth.
inline constexpr int kMaxCantorDepth = 26;

/// 2^depth atoms at the left endpoints of the depth-level triadic intervals.
SpectralMeasure cantor_measure(const CantorMeasureSpec& spec);

struct TraceMapParams {
    double n_a = 1.0;
    double n_b = 1.0;
    int cycle_length = 6;
    double eta = 1.0;
    double exp_lambda = 1.0;
    double lambda = 0.0;
    double alpha = 1.0;
};

/// Linearized 6-cycle of the Fibonacci trace map. Only cycle_length 6 is
/// supported; anything else throws InvalidArgument.
TraceMapParams trace_map_params(double n_a, double n_b, int cycle_length = 6);

/// Reduced fixed-point frequency omega_n d / (2 pi c) = (2n+1)/4.
double fixed_point_frequency(int n);

/// Signed weight of atoms in (omega_u, omega]; antisymmetric in its arguments.
double integrated_measure(const SpectralMeasure& m, double omega_u, double omega);

}  // namespace fracvac
