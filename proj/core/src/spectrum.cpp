#include "fracvac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracvac/error.hpp"
#include "fracvac/special.hpp"
#include "fracvac/tridiagonal.hpp"

namespace fracvac {

std::uint64_t fibonacci_number(int j) {
    if (j < 1 || j > 90) throw std::out_of_range("fibonacci_number: index out of range");
    std::uint64_t a = 1, b = 1;
    for (int i = 2; i < j; ++i) {
        const std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    return b;
}

std::size_t FibonacciWord::count(char letter) const {
    return static_cast<std::size_t>(std::count(letters.begin(), letters.end(), letter));
}

FibonacciWord fibonacci_word(int j) {
    if (j < 1 || j > kMaxFibonacciGeneration)
        throw std::out_of_range("fibonacci_word: generation must lie in [1, " +
                                std::to_string(kMaxFibonacciGeneration) + "], got " +
                                std::to_string(j));
    std::string prev = "B", cur = "A";
    if (j == 1) return {1, prev};
    cur.reserve(fibonacci_number(j));
    for (int i = 3; i <= j; ++i) {
        std::string next;
        next.reserve(prev.size() + cur.size());
        next.append(prev).append(cur);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {j, cur};
}

SpectralMeasure::SpectralMeasure(std::vector<double> frequencies, std::vector<double> weights)
    : omega_(std::move(frequencies)), weight_(std::move(weights)) {
    if (omega_.size() != weight_.size())
        throw InvalidArgument("SpectralMeasure: frequencies and weights differ in length");
    for (std::size_t k = 0; k < omega_.size(); ++k) {
        if (!std::isfinite(omega_[k]) || !std::isfinite(weight_[k]))
            throw InvalidArgument("SpectralMeasure: non-finite entry at row " + std::to_string(k));
        if (weight_[k] < 0.0)
            throw InvalidArgument("SpectralMeasure: negative weight at row " + std::to_string(k));
        if (k > 0 && omega_[k] < omega_[k - 1])
            throw InvalidArgument("SpectralMeasure: frequencies not ascending at row " +
                                  std::to_string(k));
    }
    prefix_.assign(omega_.size() + 1, 0.0);
    for (std::size_t k = 0; k < omega_.size(); ++k) prefix_[k + 1] = prefix_[k] + weight_[k];
}

SpectralMeasure SpectralMeasure::uniform(std::vector<double> frequencies) {
    std::vector<double> w(frequencies.size(), 1.0);
    return SpectralMeasure(std::move(frequencies), std::move(w));
}

double SpectralMeasure::total_weight() const noexcept {
    return prefix_.empty() ? 0.0 : prefix_.back();
}

double SpectralMeasure::cumulative(double x) const {
    if (omega_.empty()) return 0.0;
    const auto it = std::upper_bound(omega_.begin(), omega_.end(), x);
    return prefix_[static_cast<std::size_t>(it - omega_.begin())];
}

SpectralMeasure SpectralMeasure::scaled(double factor) const {
    if (!(factor >= 0.0)) throw InvalidArgument("SpectralMeasure::scaled: factor must be >= 0");
    std::vector<double> w = weight_;
    for (double& v : w) v *= factor;
    return SpectralMeasure(omega_, std::move(w));
}

SpectralMeasure SpectralMeasure::with_atom(double omega, double weight) const {
    std::vector<double> o = omega_, w = weight_;
    const auto pos = std::upper_bound(o.begin(), o.end(), omega) - o.begin();
    o.insert(o.begin() + pos, omega);
    w.insert(w.begin() + pos, weight);
    return SpectralMeasure(std::move(o), std::move(w));
}

SpectralMeasure tb_spectrum(const TightBindingChain& chain) {
    const auto& s = chain.word.letters;
    if (s.empty()) throw InvalidArgument("tb_spectrum: chain length must be >= 1");
    std::vector<double> diag(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 'A') diag[i] = chain.onsite_a;
        else if (s[i] == 'B') diag[i] = chain.onsite_b;
        else throw InvalidArgument("tb_spectrum: letters must be A or B");
    }
    std::vector<double> off(s.size() - 1, chain.hopping);
    return SpectralMeasure::uniform(tridiagonal_eigenvalues(std::move(diag), std::move(off)));
}

SpectralMeasure cantor_measure(const CantorMeasureSpec& spec) {
    if (spec.depth < 1 || spec.depth > kMaxCantorDepth)
        throw InvalidArgument("cantor_measure: depth must lie in [1, " +
                              std::to_string(kMaxCantorDepth) + "]");
    if (!(spec.omega_min < spec.omega_max))
        throw InvalidArgument("cantor_measure: omega_min must be below omega_max");
    const std::uint64_t count = std::uint64_t{1} << spec.depth;
    const double w = spec.atom_weight ? *spec.atom_weight : 1.0 / static_cast<double>(count);
    if (!(w > 0.0)) throw InvalidArgument("cantor_measure: atom weight must be positive");

    std::uint64_t scale = 1;
    for (int i = 0; i < spec.depth; ++i) scale *= 3;
    const double span = spec.omega_max - spec.omega_min;

    std::vector<double> omega(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        // binary digits of k become ternary digits {0, 2}
        std::uint64_t x = 0, pow3 = 1;
        for (int bit = 0; bit < spec.depth; ++bit) {
            if ((k >> bit) & 1u) x += 2 * pow3;
            pow3 *= 3;
        }
        omega[k] = spec.omega_min + span * (static_cast<double>(x) / static_cast<double>(scale));
    }
    return SpectralMeasure(std::move(omega), std::vector<double>(count, w));
}

TraceMapParams trace_map_params(double n_a, double n_b, int cycle_length) {
    if (!(n_a > 0.0) || !(n_b > 0.0))
        throw InvalidArgument("trace_map_params: refractive indices must be positive");
    if (cycle_length != 6)
        throw InvalidArgument("trace_map_params: only the 6-cycle is supported");
    TraceMapParams p;
    p.n_a = n_a;
    p.n_b = n_b;
    p.cycle_length = cycle_length;
    p.eta = 0.5 * (n_a / n_b + n_b / n_a);
    const double e2 = p.eta * p.eta;
    const double e4 = e2 * e2;
    p.exp_lambda = 1.0 + 8.0 * e4 + 4.0 * e2 * std::sqrt(1.0 + 4.0 * e4);
    p.lambda = std::log(p.exp_lambda);
    p.alpha = cycle_length * std::log(kGolden) / p.lambda;
    return p;
}

double fixed_point_frequency(int n) {
    if (n < 0) throw InvalidArgument("fixed_point_frequency: n must be >= 0");
    return (2.0 * n + 1.0) / 4.0;
}

double integrated_measure(const SpectralMeasure& m, double omega_u, double omega) {
    return m.cumulative(omega) - m.cumulative(omega_u);
}

}  // namespace fracvac
