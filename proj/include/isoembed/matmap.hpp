#pragma once

// The map Φ(A) = tr(A)·A − A² on symmetric matrices, its range T_n and its
// inverse, together with the determinant identities behind injectivity.

#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "isoembed/errors.hpp"
#include "isoembed/symfun.hpp"

namespace isoembed {

using Rational = boost::multiprecision::cpp_rational;

/// Real symmetric matrix with its eigendecomposition computed once at
/// construction. Only the upper triangle of the input is read.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& m);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(std::span<const double> d);
    static SymMatrix diagonal(std::initializer_list<double> d);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    /// Eigenvalues sorted in descending order.
    const Eigen::VectorXd& eigenvalues() const noexcept { return evals_; }
    /// Orthogonal matrix whose columns pair with eigenvalues().
    const Eigen::MatrixXd& eigenvectors() const noexcept { return evecs_; }

    double trace() const { return m_.trace(); }
    /// ‖A‖ = (Σ λᵢ²)^{1/2}
    double norm() const { return evals_.norm(); }
    bool is_spd() const { return evals_.size() > 0 && evals_(evals_.size() - 1) > 0.0; }

  private:
    Eigen::MatrixXd m_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXd evecs_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

struct ConeReport {
    bool is_spd = false;
    double eps_gap = 0.0; ///< ε(B) = minᵢ (σ₁(μ) − 2μᵢ)
    Eigen::VectorXd eigenvalues;

    bool member() const noexcept { return is_spd && eps_gap > 0.0; }
};

/// ε(B) for a spectrum μ.
double eps_gap(std::span<const double> mu);

SymMatrix phi(const SymMatrix& a);
ConeReport cone_report(const SymMatrix& b);

/// Φ'(A)C = tr(A)C + tr(C)A − (AC + CA)
Eigen::MatrixXd phi_linearized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);
/// Solves Φ'(A)C = rhs for symmetric C. Φ'(A) is invertible for SPD A.
Eigen::MatrixXd solve_phi_linearized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs);

enum class PhiInverseMethod { Auto, ClosedForm, Newton };

struct PhiInverseOptions {
    double tol = 1e-13;
    int max_iterations = 100;
    PhiInverseMethod method = PhiInverseMethod::Auto;
};

/// λ with λᵢ(Σλ − λᵢ) = μᵢ, the spectrum of Φ⁻¹ for a spectrum μ in T_n.
Eigen::VectorXd phi_inverse_spectrum(const Eigen::VectorXd& mu, const PhiInverseOptions& opts = {});

/// Unique SPD A with Φ(A) = B. Closed form for n = 3 under Auto, damped
/// Newton on the eigenvalue system otherwise.
SymMatrix phi_inverse(const SymMatrix& b, const PhiInverseOptions& opts = {});
SymMatrix phi_inverse(const SymMatrix& b, double tol);

/// (‖A‖, (n/2)·‖Φ(A)‖·ε(Φ(A))^{−1/2})
std::pair<double, double> norm_bound_sides(const SymMatrix& a);

/// ((tr A)³ − tr A³, (3/2)[(tr A)² − tr A²]·tr A) for SPD A.
std::pair<double, double> chi_inequality_sides(const SymMatrix& a);

/// F_n(s, x): s − xᵢ on the diagonal, xᵢ elsewhere in row i.
template <typename T>
std::vector<std::vector<T>> fn_matrix(const T& s, std::span<const T> x) {
    const std::size_t n = x.size();
    std::vector<std::vector<T>> m(n, std::vector<T>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j) ? T(s - x[i]) : x[i];
    return m;
}

/// G_n(x) = F_n(σ₁(x), x)
template <typename T>
std::vector<std::vector<T>> gn_matrix(std::span<const T> x) {
    T s(0);
    for (const T& xi : x) s += xi;
    return fn_matrix<T>(s, x);
}

/// Fraction-free (Bareiss) determinant; exact over integers and rationals.
template <typename T>
T bareiss_determinant(std::vector<std::vector<T>> m) {
    const std::size_t n = m.size();
    if (n == 0) return T(1);
    T sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == T(0)) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == T(0)) ++p;
            if (p == n) return T(0);
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/// det G_n(x) by LU elimination with partial pivoting. Requires n ≥ 3.
double det_Gn_direct(std::span<const double> x);

/// a_{γ,n} for every ‖γ‖ = n, keyed by γ. Requires 3 ≤ n ≤ 8.
std::map<MultiIndex, Rational> det_Gn_coefficients(int n);

/// b_{γ,k,n} = 2^{k−1}(k−2)(n−k)!/γ! · σ_{k,n}(γ)
Rational det_Gn_b_coefficient(const MultiIndex& gamma, int k, int n);

/// (det F_n(s, x), sⁿ − σ₁sⁿ⁻¹ + Σ_{k≥3} (−2)^{k−1}(k−2)σ_k s^{n−k}); n ≥ 3.
std::pair<double, double> fn_poly_sides(double s, std::span<const double> x);

/// Polynomial side of fn_poly_sides in any exact scalar type.
template <typename T>
T fn_polynomial(const T& s, std::span<const T> x) {
    const int n = static_cast<int>(x.size());
    const auto sig = sigma_all<T>(x);
    auto spow = [&](int e) {
        T p(1);
        for (int i = 0; i < e; ++i) p *= s;
        return p;
    };
    T total = spow(n) - sig[1] * spow(n - 1);
    for (int k = 3; k <= n; ++k) {
        T coeff(1);
        for (int i = 0; i < k - 1; ++i) coeff *= T(-2);
        total += coeff * T(k - 2) * sig[static_cast<std::size_t>(k)] * spow(n - k);
    }
    return total;
}

} // namespace isoembed
