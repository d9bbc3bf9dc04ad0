#include "rmab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <queue>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rmab/error.hpp"

namespace rmab {

namespace {

Eigen::MatrixXd to_eigen(const StochasticMatrix& p) {
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = p(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return m;
}

// BFS levels from state 0 over positive entries; -1 marks unreachable.
std::vector<long> bfs_levels(const StochasticMatrix& p, bool reverse) {
    const std::size_t n = p.size();
    std::vector<long> level(n, -1);
    std::queue<std::size_t> frontier;
    level[0] = 0;
    frontier.push(0);
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v = 0; v < n; ++v) {
            const double w = reverse ? p(v, u) : p(u, v);
            if (w > 0.0 && level[v] < 0) {
                level[v] = level[u] + 1;
                frontier.push(v);
            }
        }
    }
    return level;
}

} // namespace

StochasticMatrix::StochasticMatrix(const std::vector<std::vector<double>>& rows)
    : n_(rows.size()) {
    if (n_ == 0)
        throw Error(ErrorKind::InvalidConfig, "transition matrix must have at least one state");
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_)
            throw Error(ErrorKind::InvalidConfig, "transition matrix must be square");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

std::vector<std::vector<double>> StochasticMatrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        auto rr = row(r);
        out[r].assign(rr.begin(), rr.end());
    }
    return out;
}

ChainStatus validate(const StochasticMatrix& p) {
    const std::size_t n = p.size();
    if (n == 0) return ChainStatus::RowNotStochastic;
    for (std::size_t r = 0; r < n; ++r) {
        double sum = 0.0;
        for (double v : p.row(r)) {
            if (!(v >= 0.0 && v <= 1.0)) return ChainStatus::RowNotStochastic;
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) return ChainStatus::RowNotStochastic;
    }

    const auto forward = bfs_levels(p, false);
    const auto backward = bfs_levels(p, true);
    for (std::size_t v = 0; v < n; ++v)
        if (forward[v] < 0 || backward[v] < 0) return ChainStatus::Reducible;

    // Period of an irreducible chain = gcd of level[u] + 1 - level[v] over edges u -> v.
    long period = 0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (p(u, v) > 0.0)
                period = std::gcd(period, std::abs(forward[u] + 1 - forward[v]));
    if (period != 1) return ChainStatus::Periodic;
    return ChainStatus::Ok;
}

void require_valid(const StochasticMatrix& p) {
    switch (validate(p)) {
    case ChainStatus::Ok: return;
    case ChainStatus::RowNotStochastic:
        throw Error(ErrorKind::RowNotStochastic, "a row is not a probability vector");
    case ChainStatus::Reducible:
        throw Error(ErrorKind::Reducible, "chain is not irreducible");
    case ChainStatus::Periodic:
        throw Error(ErrorKind::Periodic, "chain is periodic");
    }
}

std::vector<double> stationary_distribution(const StochasticMatrix& p) {
    require_valid(p);
    const auto n = static_cast<Eigen::Index>(p.size());
    const Eigen::MatrixXd m = to_eigen(p);

    // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
    Eigen::MatrixXd a = m.transpose() - Eigen::MatrixXd::Identity(n, n);
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    const Eigen::VectorXd pi = a.fullPivLu().solve(b);

    const double residual = (pi.transpose() * m - pi.transpose()).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-12 || pi.minCoeff() <= 0.0)
        throw Error(ErrorKind::NumericalFailure, "stationary solve residual too large");
    return {pi.data(), pi.data() + n};
}

SecondEigenvalue second_eigenvalue(const StochasticMatrix& p) {
    require_valid(p);
    if (p.size() == 1) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(p), false);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::NumericalFailure, "eigenvalue solver did not converge");

    std::vector<std::complex<double>> values(solver.eigenvalues().begin(),
                                             solver.eigenvalues().end());
    // Drop the eigenvalue closest to 1 (the Perron root).
    auto unit = std::min_element(values.begin(), values.end(), [](auto a, auto b) {
        return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    values.erase(unit);

    SecondEigenvalue out;
    out.modulus = 0.0;
    out.largest_real = -1.0;
    for (const auto& v : values) {
        out.modulus = std::max(out.modulus, std::abs(v));
        out.largest_real = std::max(out.largest_real, v.real());
    }
    return out;
}

double second_eigenvalue_modulus(const StochasticMatrix& p) {
    return second_eigenvalue(p).modulus;
}

SymmetrizedSpectrum symmetrized_spectrum(const StochasticMatrix& p) {
    const auto pi = stationary_distribution(p);
    if (p.size() == 1) return {};
    const auto n = static_cast<Eigen::Index>(p.size());
    const Eigen::MatrixXd m = to_eigen(p);

    // D^{1/2} P D^{-1/2} has singular values equal to sqrt(eig(P P*)).
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = 0; y < n; ++y)
            s(x, y) = std::sqrt(pi[x]) * m(x, y) / std::sqrt(pi[y]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
    const auto& sv = svd.singularValues();  // sorted descending, sv(0) == 1
    SymmetrizedSpectrum out;
    out.second_singular = sv(1);
    out.gap = 1.0 - sv(1);
    return out;
}

std::vector<std::vector<double>> mean_hitting_times(const StochasticMatrix& p) {
    require_valid(p);
    const std::size_t n = p.size();
    std::vector<std::vector<double>> hit(n, std::vector<double>(n, 0.0));
    if (n == 1) return hit;

    const auto k = static_cast<Eigen::Index>(n - 1);
    for (std::size_t target = 0; target < n; ++target) {
        // (I - Q) m = 1 with Q the kernel restricted to states other than target.
        std::vector<std::size_t> others;
        for (std::size_t z = 0; z < n; ++z)
            if (z != target) others.push_back(z);
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k);
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < k; ++c)
                a(r, c) -= p(others[r], others[c]);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
        const Eigen::VectorXd m = a.fullPivLu().solve(ones);
        const double residual = (a * m - ones).cwiseAbs().maxCoeff();
        if (!std::isfinite(residual) || residual > 1e-10)
            throw Error(ErrorKind::NumericalFailure, "hitting-time solve residual too large");
        for (Eigen::Index r = 0; r < k; ++r) hit[others[r]][target] = m(r);
    }
    return hit;
}

double ChainAnalysis::max_hitting_time() const {
    double best = 0.0;
    for (std::size_t x = 0; x < hitting.size(); ++x)
        for (std::size_t y = 0; y < hitting.size(); ++y)
            if (x != y) best = std::max(best, hitting[x][y]);
    return best;
}

ChainAnalysis analyze(const StochasticMatrix& p) {
    ChainAnalysis a;
    a.stationary = stationary_distribution(p);
    const auto ev = second_eigenvalue(p);
    a.second_eigenvalue_modulus = ev.modulus;
    a.second_eigenvalue_real = ev.largest_real;
    a.symmetrized_gap = symmetrized_spectrum(p).gap;
    a.hitting = mean_hitting_times(p);
    return a;
}

std::size_t sample_index(std::span<const double> probabilities, double uniform_draw) {
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t y = 0; y < probabilities.size(); ++y) {
        if (probabilities[y] <= 0.0) continue;
        last_positive = y;
        cumulative += probabilities[y];
        if (uniform_draw < cumulative) return y;
    }
    // Rounding left the row sum a hair below the draw.
    return last_positive;
}

std::size_t sample_next(const StochasticMatrix& p, std::size_t x, double uniform_draw) {
    return sample_index(p.row(x), uniform_draw);
}

std::size_t sample_next(const StochasticMatrix& p, std::size_t x, RandomStream& rng) {
    return sample_next(p, x, rng.uniform());
}

} // namespace rmab
