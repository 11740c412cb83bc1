#include "isoembed/jets.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace isoembed {

namespace {

struct Triple {
    std::uint8_t a, b, out;
};

struct Tables {
    std::array<Exponent, kMaxJetCoeffs> exponents{};
    std::array<int, 6 * 6 * 6> index{};
    std::array<int, kMaxJetCoeffs> degree{};
    // product terms per variable count, sorted by output degree
    std::array<std::vector<Triple>, kMaxJetVars + 1> products;
    // products[nv] prefix length covering outputs of degree ≤ p
    std::array<std::array<std::size_t, kMaxJetOrder + 1>, kMaxJetVars + 1> product_count{};

    Tables() {
        index.fill(-1);
        std::size_t k = 0;
        for (int d = 0; d <= kMaxJetOrder; ++d)
            for (int i = d; i >= 0; --i)
                for (int j = d - i; j >= 0; --j) {
                    const int l = d - i - j;
                    exponents[k] = {i, j, l};
                    degree[k] = d;
                    index[static_cast<std::size_t>(i * 36 + j * 6 + l)] = static_cast<int>(k);
                    ++k;
                }
        for (int nv = 1; nv <= kMaxJetVars; ++nv) {
            auto uses_only = [&](std::size_t m) {
                for (int v = nv; v < kMaxJetVars; ++v)
                    if (exponents[m][static_cast<std::size_t>(v)] != 0) return false;
                return true;
            };
            auto& list = products[static_cast<std::size_t>(nv)];
            for (std::size_t a = 0; a < kMaxJetCoeffs; ++a) {
                if (!uses_only(a)) continue;
                for (std::size_t b = 0; b < kMaxJetCoeffs; ++b) {
                    if (!uses_only(b) || degree[a] + degree[b] > kMaxJetOrder) continue;
                    Exponent e{};
                    for (std::size_t v = 0; v < kMaxJetVars; ++v) e[v] = exponents[a][v] + exponents[b][v];
                    const int out = index[static_cast<std::size_t>(e[0] * 36 + e[1] * 6 + e[2])];
                    list.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                    static_cast<std::uint8_t>(out)});
                }
            }
            std::stable_sort(list.begin(), list.end(),
                             [&](const Triple& x, const Triple& y) { return degree[x.out] < degree[y.out]; });
            for (int p = 0; p <= kMaxJetOrder; ++p)
                product_count[static_cast<std::size_t>(nv)][static_cast<std::size_t>(p)] = static_cast<std::size_t>(
                    std::count_if(list.begin(), list.end(), [&](const Triple& t) { return degree[t.out] <= p; }));
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

void check_vars(const Jet& a, const Jet& b) {
    if (a.nvars() != b.nvars()) throw PreconditionError("jet arithmetic: variable counts differ");
}

double binomial_real(double p, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (p - i) / (i + 1);
    return r;
}

} // namespace

std::size_t monomial_index(const Exponent& e) {
    for (int v : e)
        if (v < 0 || v > kMaxJetOrder) throw PreconditionError("monomial_index: exponent out of range");
    if (e[0] + e[1] + e[2] > kMaxJetOrder) throw PreconditionError("monomial_index: degree exceeds jet order cap");
    return static_cast<std::size_t>(tables().index[static_cast<std::size_t>(e[0] * 36 + e[1] * 6 + e[2])]);
}

const Exponent& monomial_exponent(std::size_t index) { return tables().exponents.at(index); }

Jet::Jet(int order, int nvars) : order_(order), nvars_(nvars) {
    if (order < 0 || order > kMaxJetOrder) throw PreconditionError("Jet: order must lie in [0, 5]");
    if (nvars < 1 || nvars > kMaxJetVars) throw PreconditionError("Jet: variable count must lie in [1, 3]");
}

Jet Jet::constant(double value, int order, int nvars) {
    Jet j(order, nvars);
    j.c_[0] = value;
    return j;
}

Jet Jet::variable(double value, int var, int order, int nvars) {
    if (var < 0 || var >= nvars) throw PreconditionError("Jet::variable: index out of range");
    Jet j = constant(value, order, nvars);
    if (order >= 1) {
        Exponent e{};
        e[static_cast<std::size_t>(var)] = 1;
        j.c_[monomial_index(e)] = 1.0;
    }
    return j;
}

double Jet::coeff(const Exponent& e) const {
    for (int v = nvars_; v < kMaxJetVars; ++v)
        if (e[static_cast<std::size_t>(v)] != 0) return 0.0;
    if (e[0] + e[1] + e[2] > order_) return 0.0;
    return c_[monomial_index(e)];
}

void Jet::set_coeff(const Exponent& e, double v) {
    for (int i = nvars_; i < kMaxJetVars; ++i)
        if (e[static_cast<std::size_t>(i)] != 0) throw PreconditionError("Jet::set_coeff: variable out of range");
    if (e[0] + e[1] + e[2] > order_) throw PreconditionError("Jet::set_coeff: degree exceeds jet order");
    c_[monomial_index(e)] = v;
}

double Jet::partial(const Exponent& e) const {
    double f = 1.0;
    for (int v : e)
        for (int i = 2; i <= v; ++i) f *= i;
    return f * coeff(e);
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw PreconditionError("Jet::derivative: index out of range");
    if (order_ == 0) return Jet::constant(0.0, 0, nvars_);
    Jet d(order_ - 1, nvars_);
    const auto& t = tables();
    for (std::size_t k = 0; k < d.size(); ++k) {
        Exponent e = t.exponents[k];
        const int up = ++e[static_cast<std::size_t>(var)];
        d.c_[k] = up * c_[monomial_index(e)];
    }
    return d;
}

Jet Jet::truncated(int order) const {
    if (order > order_) throw PreconditionError("Jet::truncated: cannot raise order");
    Jet r(order, nvars_);
    std::copy_n(c_.begin(), r.size(), r.c_.begin());
    return r;
}

Jet& Jet::operator+=(const Jet& o) {
    check_vars(*this, o);
    order_ = std::min(order_, o.order_);
    for (std::size_t k = 0; k < size(); ++k) c_[k] += o.c_[k];
    std::fill(c_.begin() + static_cast<std::ptrdiff_t>(size()), c_.end(), 0.0);
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_vars(*this, o);
    order_ = std::min(order_, o.order_);
    for (std::size_t k = 0; k < size(); ++k) c_[k] -= o.c_[k];
    std::fill(c_.begin() + static_cast<std::ptrdiff_t>(size()), c_.end(), 0.0);
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
}

Jet& Jet::operator/=(const Jet& o) {
    *this = *this * reciprocal(o);
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (std::size_t k = 0; k < size(); ++k) c_[k] *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r(*this);
    r *= -1.0;
    return r;
}

Jet Jet::compose(std::span<const double> d) const {
    if (d.size() < static_cast<std::size_t>(order_) + 1)
        throw PreconditionError("Jet::compose: need order + 1 derivative coefficients");
    Jet h(*this);
    h.c_[0] = 0.0;
    Jet r = Jet::constant(d[static_cast<std::size_t>(order_)], order_, nvars_);
    for (int k = order_ - 1; k >= 0; --k) {
        r = r * h;
        r.c_[0] += d[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
    check_vars(a, b);
    const int order = std::min(a.order(), b.order());
    Jet r(order, a.nvars());
    const auto& t = tables();
    const auto nv = static_cast<std::size_t>(a.nvars());
    const auto& list = t.products[nv];
    const std::size_t count = t.product_count[nv][static_cast<std::size_t>(order)];
    for (std::size_t i = 0; i < count; ++i) {
        const Triple& tr = list[i];
        r[tr.out] += a[tr.a] * b[tr.b];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) *= s; }

Jet reciprocal(const Jet& a) {
    const double c = a.value();
    if (c == 0.0) throw DomainError("jet division: constant term is zero");
    std::array<double, kMaxJetOrder + 1> d{};
    double p = 1.0 / c;
    for (int k = 0; k <= a.order(); ++k) {
        d[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
        p /= c;
    }
    return a.compose(d);
}

Jet pow(const Jet& a, double p) {
    const double c = a.value();
    if (!(c > 0.0)) throw DomainError("jet pow: constant term must be positive");
    std::array<double, kMaxJetOrder + 1> d{};
    for (int k = 0; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = binomial_real(p, k) * std::pow(c, p - k);
    return a.compose(d);
}

Jet sqrt(const Jet& a) {
    if (!(a.value() > 0.0)) throw DomainError("jet sqrt: constant term must be positive");
    return pow(a, 0.5);
}

Jet pow(const Jet& a, int p) {
    if (p < 0) return reciprocal(pow(a, -p));
    Jet r = Jet::constant(1.0, a.order(), a.nvars());
    Jet base = a;
    while (p > 0) {
        if (p & 1) r = r * base;
        p >>= 1;
        if (p) base = base * base;
    }
    return r;
}

Jet exp(const Jet& a) {
    std::array<double, kMaxJetOrder + 1> d{};
    double v = std::exp(a.value());
    for (int k = 0; k <= a.order(); ++k) {
        d[static_cast<std::size_t>(k)] = v;
        v /= (k + 1);
    }
    return a.compose(d);
}

Jet log(const Jet& a) {
    const double c = a.value();
    if (!(c > 0.0)) throw DomainError("jet log: constant term must be positive");
    std::array<double, kMaxJetOrder + 1> d{};
    d[0] = std::log(c);
    for (int k = 1; k <= a.order(); ++k) d[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) / (k * std::pow(c, k));
    return a.compose(d);
}

Jet sin(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    std::array<double, kMaxJetOrder + 1> d{};
    const std::array<double, 4> cycle{s, c, -s, -c};
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 1) f *= k;
        d[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)] / f;
    }
    return a.compose(d);
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    std::array<double, kMaxJetOrder + 1> d{};
    const std::array<double, 4> cycle{c, -s, -c, s};
    double f = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 1) f *= k;
        d[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)] / f;
    }
    return a.compose(d);
}

} // namespace isoembed
