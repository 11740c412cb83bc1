#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/matmap.hpp"

namespace isoembed::testing {

/// σ_k by enumerating every bitmask of the index set.
template <typename T>
T sigma_bitmask(int k, const std::vector<T>& x) {
    const std::size_t n = x.size();
    T total(0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        T prod(1);
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= x[i];
        total += prod;
    }
    return total;
}

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi, int max_den) {
    std::uniform_int_distribution<int> num(lo * max_den, hi * max_den);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ();
}

/// SPD matrix with eigenvalues drawn log-uniformly from [lo, hi].
inline SymMatrix random_spd(std::mt19937_64& rng, int n, double lo = 1e-2, double hi = 1e2) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = std::exp(u(rng));
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    return SymMatrix(q * lambda.asDiagonal() * q.transpose());
}

/// Matrix in T_n drawn by rejection: uniform spectrum in (0, 1], random basis.
inline SymMatrix random_cone_member(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(1e-3, 1.0);
    while (true) {
        Eigen::VectorXd mu(n);
        for (int i = 0; i < n; ++i) mu(i) = u(rng);
        if (mu.sum() - 2.0 * mu.maxCoeff() <= 1e-3) continue;
        const Eigen::MatrixXd q = random_orthogonal(rng, n);
        return SymMatrix(q * mu.asDiagonal() * q.transpose());
    }
}

} // namespace isoembed::testing
