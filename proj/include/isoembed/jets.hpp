#pragma once

// Truncated multivariate Taylor expansions ("jets") in up to three chart
// variables. A jet of order p stores c_γ = ∂^γ f / γ! for every |γ| ≤ p.

#include <array>
#include <cstddef>
#include <span>

#include "isoembed/errors.hpp"

namespace isoembed {

inline constexpr int kMaxJetOrder = 5;
inline constexpr int kMaxJetVars = 3;
inline constexpr std::size_t kMaxJetCoeffs = 56; // monomials of degree ≤ 5 in 3 variables

/// Exponent triple of a monomial; unused variables carry exponent 0.
using Exponent = std::array<int, kMaxJetVars>;

/// Number of monomials of degree ≤ order in three variables.
constexpr std::size_t jet_size(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) * (order + 3) / 6);
}

/// Graded ordering: all monomials of degree d precede those of degree d + 1.
std::size_t monomial_index(const Exponent& e);
const Exponent& monomial_exponent(std::size_t index);

class Jet {
  public:
    Jet() : Jet(0, 1) {}
    Jet(int order, int nvars);

    static Jet constant(double value, int order, int nvars);
    /// Coordinate function x_var expanded at a point where it takes `value`.
    static Jet variable(double value, int var, int order, int nvars);

    int order() const noexcept { return order_; }
    int nvars() const noexcept { return nvars_; }
    std::size_t size() const noexcept { return jet_size(order_); }

    double value() const noexcept { return c_[0]; }
    double coeff(const Exponent& e) const;
    void set_coeff(const Exponent& e, double v);
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }

    /// ∂^γ f at the expansion point (= γ! · c_γ).
    double partial(const Exponent& e) const;
    /// ∂f/∂x_var as a jet of one lower order.
    Jet derivative(int var) const;
    Jet truncated(int order) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator/=(const Jet& o);
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }
    Jet& operator*=(double s);
    Jet& operator/=(double s) { return *this *= 1.0 / s; }

    Jet operator-() const;

    /// Σ_k d_k (f − f(0))^k, i.e. composition with a univariate function whose
    /// scaled Taylor coefficients d_k = g^{(k)}(f(0))/k! are supplied.
    Jet compose(std::span<const double> scaled_derivs) const;

  private:
    int order_;
    int nvars_;
    std::array<double, kMaxJetCoeffs> c_{};
};

// Binary operations on jets of different orders truncate to the lower order;
// the variable counts must agree.
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, int p);
Jet pow(const Jet& a, double p);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

} // namespace isoembed
