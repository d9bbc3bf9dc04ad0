#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmab/random.hpp"

namespace rmab {

// Row-major square transition kernel. Construction only checks shape; use
// validate() / require_valid() for the probabilistic and structural checks.
class StochasticMatrix {
public:
    StochasticMatrix() = default;
    explicit StochasticMatrix(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    double operator()(std::size_t from, std::size_t to) const { return data_[from * n_ + to]; }
    std::span<const double> row(std::size_t from) const {
        return {data_.data() + from * n_, n_};
    }
    std::vector<std::vector<double>> rows() const;

    friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

enum class ChainStatus { Ok, RowNotStochastic, Reducible, Periodic };

inline constexpr double kRowSumTolerance = 1e-12;

ChainStatus validate(const StochasticMatrix& p);

// Throws Error with the matching kind unless validate(p) == Ok.
void require_valid(const StochasticMatrix& p);

struct SecondEigenvalue {
    double modulus = 0.0;  // second largest |eigenvalue|, the default reading of lambda
    double largest_real = 0.0;  // largest real part once a single unit eigenvalue is removed
};

SecondEigenvalue second_eigenvalue(const StochasticMatrix& p);
double second_eigenvalue_modulus(const StochasticMatrix& p);

std::vector<double> stationary_distribution(const StochasticMatrix& p);

// M[x][y] = expected slots to first reach y from x; M[y][y] = 0.
std::vector<std::vector<double>> mean_hitting_times(const StochasticMatrix& p);

// sqrt of the second eigenvalue of the multiplicative reversiblization P P*,
// together with the gap 1 - that value. Equals |lambda_2| on reversible chains.
struct SymmetrizedSpectrum {
    double second_singular = 0.0;
    double gap = 1.0;
};

SymmetrizedSpectrum symmetrized_spectrum(const StochasticMatrix& p);

struct ChainAnalysis {
    std::vector<double> stationary;
    double second_eigenvalue_modulus = 0.0;
    double second_eigenvalue_real = 0.0;
    double symmetrized_gap = 1.0;
    std::vector<std::vector<double>> hitting;

    // max over x != y of hitting[x][y]; zero for a single-state chain.
    double max_hitting_time() const;
};

ChainAnalysis analyze(const StochasticMatrix& p);

// Inverse CDF over the row in index order.
std::size_t sample_next(const StochasticMatrix& p, std::size_t x, double uniform_draw);
std::size_t sample_next(const StochasticMatrix& p, std::size_t x, RandomStream& rng);

// Inverse CDF over an arbitrary probability vector.
std::size_t sample_index(std::span<const double> probabilities, double uniform_draw);

} // namespace rmab
