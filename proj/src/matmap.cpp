#include "isoembed/matmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace isoembed {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 1) throw PreconditionError("SymMatrix: need a square matrix");
    m_ = m.selfadjointView<Eigen::Upper>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
    // Eigen sorts ascending
    evals_ = es.eigenvalues().reverse();
    evecs_ = es.eigenvectors().rowwise().reverse();
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    return SymMatrix(Eigen::MatrixXd(v.asDiagonal()));
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() + b.matrix()); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() - b.matrix()); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.matrix()); }

double eps_gap(std::span<const double> mu) {
    if (mu.empty()) return 0.0;
    const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
    return total - 2.0 * *std::max_element(mu.begin(), mu.end());
}

SymMatrix phi(const SymMatrix& a) {
    const auto& m = a.matrix();
    return SymMatrix(m.trace() * m - m * m);
}

ConeReport cone_report(const SymMatrix& b) {
    ConeReport r;
    r.eigenvalues = b.eigenvalues();
    r.is_spd = b.is_spd();
    r.eps_gap = eps_gap(std::span<const double>(r.eigenvalues.data(), static_cast<std::size_t>(r.eigenvalues.size())));
    return r;
}

Eigen::MatrixXd phi_linearized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
    return a.trace() * c + c.trace() * a - (a * c + c * a);
}

Eigen::MatrixXd solve_phi_linearized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs) {
    const auto n = a.rows();
    const auto m = n * (n + 1) / 2;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> slots;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) slots.emplace_back(i, j);

    Eigen::MatrixXd op(m, m);
    for (Eigen::Index col = 0; col < m; ++col) {
        Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
        const auto [i, j] = slots[static_cast<std::size_t>(col)];
        basis(i, j) = 1.0;
        basis(j, i) = 1.0;
        const Eigen::MatrixXd image = phi_linearized(a, basis);
        for (Eigen::Index row = 0; row < m; ++row) {
            const auto [p, q] = slots[static_cast<std::size_t>(row)];
            op(row, col) = image(p, q);
        }
    }
    Eigen::VectorXd b(m);
    for (Eigen::Index row = 0; row < m; ++row) {
        const auto [p, q] = slots[static_cast<std::size_t>(row)];
        b(row) = 0.5 * (rhs(p, q) + rhs(q, p));
    }
    const Eigen::VectorXd coeffs = op.partialPivLu().solve(b);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index col = 0; col < m; ++col) {
        const auto [i, j] = slots[static_cast<std::size_t>(col)];
        c(i, j) = coeffs(col);
        c(j, i) = coeffs(col);
    }
    return c;
}

namespace {

Eigen::VectorXd closed_form_spectrum(const Eigen::VectorXd& mu) {
    const double total = mu.sum();
    const Eigen::VectorXd gaps = (total - 2.0 * mu.array()).matrix();
    const double root = std::sqrt(gaps.prod());
    return (root / (std::sqrt(2.0) * gaps.array())).matrix();
}

Eigen::VectorXd spectrum_residual(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu) {
    const double s = lambda.sum();
    return (lambda.array() * (s - lambda.array()) - mu.array()).matrix();
}

// Damped Newton on λᵢ(Σλ − λᵢ) = μᵢ from the given start; false on stall.
bool newton_polish(Eigen::VectorXd& lambda, const Eigen::VectorXd& mu, const PhiInverseOptions& opts, double& rnorm) {
    const auto n = mu.size();
    const double scale = mu.norm();
    Eigen::VectorXd r = spectrum_residual(lambda, mu);
    rnorm = r.norm();
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (rnorm <= opts.tol * scale) return true;
        const double s = lambda.sum();
        Eigen::MatrixXd jac = lambda.replicate(1, n);
        jac.diagonal().array() += s - 2.0 * lambda.array();
        const Eigen::VectorXd step = jac.partialPivLu().solve(-r);

        double t = 1.0;
        Eigen::VectorXd trial;
        double trial_norm = rnorm;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
            trial = lambda + t * step;
            if ((trial.array() <= 0.0).any()) continue;
            trial_norm = spectrum_residual(trial, mu).norm();
            if (trial_norm < rnorm || trial_norm <= opts.tol * scale) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        lambda = trial;
        r = spectrum_residual(lambda, mu);
        rnorm = r.norm();
    }
    return rnorm <= opts.tol * scale;
}

// Each λᵢ is a root of λ(s − λ) = μᵢ with s = Σλ; at most the largest takes
// the upper root. Solve the scalar equation Σλᵢ(s) = s for s by bracketing.
Eigen::VectorXd secular_seed(const Eigen::VectorXd& mu) {
    const auto n = mu.size();
    Eigen::Index top = 0;
    mu.maxCoeff(&top);
    auto roots = [&](double s, bool upper) {
        Eigen::VectorXd l(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = std::sqrt(std::max(0.0, s * s - 4.0 * mu(i)));
            l(i) = (upper && i == top) ? 0.5 * (s + d) : 2.0 * mu(i) / (s + d);
        }
        return l;
    };
    const double s0 = 2.0 * std::sqrt(mu(top));
    const bool upper = roots(s0, false).sum() - s0 < 0.0;
    auto f = [&](double s) { return roots(s, upper).sum() - s; };
    double hi = 2.0 * s0;
    for (int i = 0; i < 200 && (upper ? f(hi) <= 0.0 : f(hi) >= 0.0); ++i) hi *= 2.0;
    boost::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, s0, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return roots(0.5 * (a + b), upper);
}

Eigen::VectorXd newton_spectrum(const Eigen::VectorXd& mu, const PhiInverseOptions& opts) {
    const double total = mu.sum();
    const double nd = static_cast<double>(mu.size());

    // for scalar μ this is already the exact solution
    Eigen::VectorXd lambda = (mu.array() / (nd - 1.0)).sqrt().matrix();
    lambda *= std::sqrt(nd * total / (nd - 1.0)) / lambda.sum();
    double rnorm = 0.0;
    if (newton_polish(lambda, mu, opts, rnorm)) return lambda;

    // widely spread spectra can trap the damped iteration; restart from the
    // scalar reduction
    lambda = secular_seed(mu);
    if (newton_polish(lambda, mu, opts, rnorm)) return lambda;
    throw ConvergenceError("phi_inverse: Newton iteration did not converge", rnorm);
}

} // namespace

Eigen::VectorXd phi_inverse_spectrum(const Eigen::VectorXd& mu, const PhiInverseOptions& opts) {
    const auto n = mu.size();
    if (n < 2) throw PreconditionError("phi_inverse: dimension must be at least 2");
    const double gap = eps_gap(std::span<const double>(mu.data(), static_cast<std::size_t>(n)));
    if (!(mu.minCoeff() > 0.0) || !(gap > 0.0))
        throw DomainError("phi_inverse: spectrum outside T_n (eps gap " + std::to_string(gap) + ")");

    bool closed = false;
    switch (opts.method) {
    case PhiInverseMethod::Auto: closed = (n == 3); break;
    case PhiInverseMethod::ClosedForm:
        if (n != 3) throw PreconditionError("phi_inverse: closed form exists only for n = 3");
        closed = true;
        break;
    case PhiInverseMethod::Newton: closed = false; break;
    }
    return closed ? closed_form_spectrum(mu) : newton_spectrum(mu, opts);
}

SymMatrix phi_inverse(const SymMatrix& b, const PhiInverseOptions& opts) {
    const Eigen::VectorXd lambda = phi_inverse_spectrum(b.eigenvalues(), opts);
    const auto& q = b.eigenvectors();
    return SymMatrix(q * lambda.asDiagonal() * q.transpose());
}

SymMatrix phi_inverse(const SymMatrix& b, double tol) {
    PhiInverseOptions opts;
    opts.tol = tol;
    return phi_inverse(b, opts);
}

std::pair<double, double> norm_bound_sides(const SymMatrix& a) {
    if (!a.is_spd()) throw PreconditionError("norm_bound_sides: matrix must be SPD");
    const auto b = phi(a);
    const auto gap = cone_report(b).eps_gap;
    const double n = a.dim();
    return {a.norm(), 0.5 * n * b.norm() / std::sqrt(gap)};
}

std::pair<double, double> chi_inequality_sides(const SymMatrix& a) {
    if (!a.is_spd()) throw PreconditionError("chi_inequality_sides: matrix must be SPD");
    const auto& m = a.matrix();
    const double t1 = m.trace();
    const Eigen::MatrixXd m2 = m * m;
    const double t2 = m2.trace();
    const double t3 = (m2 * m).trace();
    return {t1 * t1 * t1 - t3, 1.5 * (t1 * t1 - t2) * t1};
}

double det_Gn_direct(std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n < 3) throw PreconditionError("det_Gn_direct: need n >= 3");
    const auto rows = gn_matrix<double>(x);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m.partialPivLu().determinant();
}

namespace {

Rational sigma_of_index(int k, const MultiIndex& gamma) {
    std::vector<Rational> g(gamma.entries().begin(), gamma.entries().end());
    return sigma<Rational>(k, std::span<const Rational>(g));
}

} // namespace

Rational det_Gn_b_coefficient(const MultiIndex& gamma, int k, int n) {
    if (k < 2 || k > n) throw PreconditionError("det_Gn_b_coefficient: need 2 <= k <= n");
    Rational coeff(boost::multiprecision::cpp_int(1) << (k - 1));
    coeff *= (k - 2);
    coeff *= Rational(factorial(n - k));
    coeff /= Rational(gamma.factorial());
    return coeff * sigma_of_index(k, gamma);
}

std::map<MultiIndex, Rational> det_Gn_coefficients(int n) {
    if (n < 3 || n > 8) throw PreconditionError("det_Gn_coefficients: need 3 <= n <= 8");
    std::map<MultiIndex, Rational> out;
    for (const auto& gamma : multi_indices(static_cast<std::size_t>(n), n)) {
        Rational a(0);
        for (int k = 3; k <= n; ++k) {
            const Rational b = det_Gn_b_coefficient(gamma, k, n);
            a += (k % 2 == 1) ? b : Rational(-b); // (−1)^{k−1}
        }
        out.emplace(gamma, a);
    }
    return out;
}

std::pair<double, double> fn_poly_sides(double s, std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n < 3) throw PreconditionError("fn_poly_sides: need n >= 3");
    const auto rows = fn_matrix<double>(s, x);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return {m.partialPivLu().determinant(), fn_polynomial<double>(s, x)};
}

} // namespace isoembed
