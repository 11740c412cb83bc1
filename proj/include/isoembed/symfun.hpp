#pragma once

// Multi-index combinatorics and elementary symmetric functions.
//
// The numeric routines are templates over the scalar type so the same code
// runs in double precision and in exact rational arithmetic.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "isoembed/errors.hpp"

namespace isoembed {

class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    /// ‖γ‖ = Σ γᵢ
    int norm() const noexcept;
    /// γ* = max γᵢ (0 for the empty index)
    int max_entry() const noexcept;
    /// γ! = Π γᵢ!
    std::uint64_t factorial() const;

    /// Same index with entry i removed.
    MultiIndex deleted(std::size_t i) const;

    auto operator<=>(const MultiIndex&) const = default;

  private:
    std::vector<int> entries_;
};

std::uint64_t factorial(int k);

/// k!/γ! computed exactly. Requires ‖γ‖ = k and k ≤ 20.
std::uint64_t multinomial(int k, const MultiIndex& gamma);

/// All multi-indices of length n with ‖γ‖ = total, lexicographically descending.
std::vector<MultiIndex> multi_indices(std::size_t n, int total);

/// x with coordinate i deleted.
template <typename T>
std::vector<T> delete_coordinate(std::span<const T> x, std::size_t i) {
    std::vector<T> out;
    out.reserve(x.empty() ? 0 : x.size() - 1);
    for (std::size_t j = 0; j < x.size(); ++j)
        if (j != i) out.push_back(x[j]);
    return out;
}

/// σ_{k,n}(x): sum over all k-subsets of the product of their entries.
template <typename T>
T sigma(int k, std::span<const T> x) {
    if (k < 0) throw PreconditionError("sigma: k must be nonnegative");
    const auto n = static_cast<int>(x.size());
    if (k == 0) return T(1);
    if (k > n) return T(0);

    // walk the k-subsets in lexicographic order
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    T total(0);
    while (true) {
        T prod(1);
        for (int i : idx) prod *= x[static_cast<std::size_t>(i)];
        total += prod;
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return total;
}

template <typename T>
T sigma(int k, const std::vector<T>& x) {
    return sigma<T>(k, std::span<const T>(x));
}

/// (σ_{0,n}, ..., σ_{n,n}) as the coefficients of Π (t + xᵢ), highest power of t first.
template <typename T>
std::vector<T> sigma_all(std::span<const T> x) {
    std::vector<T> coeffs{T(1)};
    coeffs.reserve(x.size() + 1);
    for (const T& xi : x) {
        coeffs.push_back(T(0));
        for (std::size_t k = coeffs.size() - 1; k > 0; --k) coeffs[k] += xi * coeffs[k - 1];
    }
    return coeffs;
}

template <typename T>
std::vector<T> sigma_all(const std::vector<T>& x) {
    return sigma_all<T>(std::span<const T>(x));
}

/// (Σᵢ σ_{k,n−1}(xᵢ), (n−k)·σ_{k,n}(x)); the two agree for 0 ≤ k ≤ n.
template <typename T>
std::pair<T, T> identity_sum_sides(int k, std::span<const T> x) {
    const auto n = static_cast<int>(x.size());
    if (k < 0 || k > n) throw PreconditionError("identity_sum_sides: need 0 <= k <= n");
    T lhs(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto xi = delete_coordinate(x, i);
        lhs += sigma<T>(k, std::span<const T>(xi));
    }
    return {lhs, T(n - k) * sigma<T>(k, x)};
}

/// (3(Σxᵢ²)(Σxᵢ), (Σxᵢ)³ + 2Σxᵢ³) for x with positive entries; left ≤ right.
template <typename T>
std::pair<T, T> sums_inequality_sides(std::span<const T> x) {
    T s1(0), s2(0), s3(0);
    for (const T& xi : x) {
        if (!(xi > T(0))) throw PreconditionError("sums_inequality_sides: entries must be positive");
        s1 += xi;
        s2 += xi * xi;
        s3 += xi * xi * xi;
    }
    return {T(3) * s2 * s1, s1 * s1 * s1 + T(2) * s3};
}

/// ((k+1)σ_{k+1,n}(γ), (σ_{1,n}(γ) − k)σ_{k,n}(γ)), exact in integers.
std::pair<std::int64_t, std::int64_t> gamma_inequality_sides(int k, const MultiIndex& gamma);

} // namespace isoembed
