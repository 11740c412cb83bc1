#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "isoembed/jets.hpp"

using namespace isoembed;

namespace {

using Field = std::function<Jet(const Jet&, const Jet&, const Jet&)>;

Jet eval_at(const Field& f, const std::array<double, 3>& p, int order) {
    return f(Jet::variable(p[0], 0, order, 3), Jet::variable(p[1], 1, order, 3), Jet::variable(p[2], 2, order, 3));
}

// Largest deviation between ∂^{γ+e_v} f and the centred difference of ∂^γ f in
// direction v, over every γ with |γ| < order.
double fd_error(const Field& f, const std::array<double, 3>& p, int order, double h) {
    const Jet center = eval_at(f, p, order);
    double worst = 0.0;
    for (int v = 0; v < 3; ++v) {
        auto plus = p, minus = p;
        plus[static_cast<std::size_t>(v)] += h;
        minus[static_cast<std::size_t>(v)] -= h;
        const Jet jp = eval_at(f, plus, order - 1);
        const Jet jm = eval_at(f, minus, order - 1);
        for (std::size_t k = 0; k < jet_size(order - 1); ++k) {
            Exponent e = monomial_exponent(k);
            const double fd = (jp.partial(e) - jm.partial(e)) / (2 * h);
            ++e[static_cast<std::size_t>(v)];
            worst = std::max(worst, std::abs(center.partial(e) - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    return worst;
}

Jet random_jet(std::mt19937_64& rng, int order, int nvars) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Jet j(order, nvars);
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& e = monomial_exponent(k);
        bool used = true;
        for (int v = nvars; v < 3; ++v) used = used && e[static_cast<std::size_t>(v)] == 0;
        if (used) j[k] = u(rng);
    }
    return j;
}

} // namespace

TEST_CASE("lifting coordinates and constants") {
    const Jet x = Jet::variable(2.0, 0, 2, 1);
    CHECK(x.value() == 2.0);
    CHECK(x.coeff({1, 0, 0}) == 1.0);
    CHECK(x.coeff({2, 0, 0}) == 0.0);

    const Jet c = Jet::constant(5.0, 4, 3);
    CHECK(c.value() == 5.0);
    for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] == 0.0);

    const Jet xy = Jet::variable(1.0, 0, 2, 2) * Jet::variable(1.0, 1, 2, 2);
    CHECK(xy.value() == 1.0);
    CHECK(xy.coeff({1, 0, 0}) == 1.0);
    CHECK(xy.coeff({0, 1, 0}) == 1.0);
    CHECK(xy.coeff({1, 1, 0}) == 1.0);
    CHECK(xy.coeff({2, 0, 0}) == 0.0);

    CHECK_THROWS_AS(Jet::variable(0.0, 2, 2, 2), PreconditionError);
    CHECK_THROWS_AS(Jet(6, 3), PreconditionError);
}

TEST_CASE("series arithmetic examples") {
    const Jet dx = Jet::variable(0.0, 0, 3, 1);
    const Jet one_minus_sq = (1.0 + dx.truncated(2)) * (1.0 - dx.truncated(2));
    CHECK(one_minus_sq.coeff({0, 0, 0}) == 1.0);
    CHECK(one_minus_sq.coeff({1, 0, 0}) == 0.0);
    CHECK(one_minus_sq.coeff({2, 0, 0}) == -1.0);

    const Jet geo = 1.0 / (1.0 + dx);
    CHECK(geo.coeff({0, 0, 0}) == doctest::Approx(1.0));
    CHECK(geo.coeff({1, 0, 0}) == doctest::Approx(-1.0));
    CHECK(geo.coeff({2, 0, 0}) == doctest::Approx(1.0));
    CHECK(geo.coeff({3, 0, 0}) == doctest::Approx(-1.0));

    const Jet root = sqrt(1.0 + dx.truncated(2));
    CHECK(root.coeff({0, 0, 0}) == doctest::Approx(1.0));
    CHECK(root.coeff({1, 0, 0}) == doctest::Approx(0.5));
    CHECK(root.coeff({2, 0, 0}) == doctest::Approx(-0.125));

    CHECK_THROWS_AS(1.0 / dx, DomainError);
    CHECK_THROWS_AS(sqrt(dx - 1.0), DomainError);
    CHECK_THROWS_AS(Jet::variable(0, 0, 2, 1) * Jet::variable(0, 0, 2, 2), PreconditionError);
}

TEST_CASE("integer powers agree with repeated products") {
    std::mt19937_64 rng(3);
    Jet a = random_jet(rng, 5, 3);
    a[0] = 1.5;
    CHECK(pow(a, 3)[10] == doctest::Approx((a * a * a)[10]));
    const Jet inv2 = pow(a, -2);
    const Jet id = inv2 * a * a;
    CHECK(id.value() == doctest::Approx(1.0));
    for (std::size_t k = 1; k < id.size(); ++k) CHECK(std::abs(id[k]) <= 1e-12);
    const Jet half = pow(a, 0.5);
    const Jet back = half * half;
    for (std::size_t k = 0; k < back.size(); ++k) CHECK(back[k] == doctest::Approx(a[k]).epsilon(1e-12));
}

TEST_CASE("derivative lowers the order and shifts coefficients") {
    const Jet x = Jet::variable(0.3, 0, 4, 2);
    const Jet y = Jet::variable(-0.2, 1, 4, 2);
    const Jet f = x * x * y;
    const Jet fx = f.derivative(0);
    CHECK(fx.order() == 3);
    CHECK(fx.value() == doctest::Approx(2 * 0.3 * -0.2));
    CHECK(fx.partial({1, 1, 0}) == doctest::Approx(2.0));
    CHECK(f.partial({2, 1, 0}) == doctest::Approx(2.0));
}

TEST_CASE("jet coefficients match centred differences with second-order convergence") {
    const std::vector<Field> family{
        [](const Jet& x, const Jet& y, const Jet& z) { return exp(x) * sin(y) / sqrt(1.0 + z * z); },
        [](const Jet& x, const Jet& y, const Jet& z) { return log(2.0 + x * y) * cos(z - x); },
        [](const Jet& x, const Jet& y, const Jet& z) { return pow(1.0 + x * x + y * y + z * z, -2) * (x - 2.0 * z); },
        [](const Jet& x, const Jet& y, const Jet& z) { return pow(3.0 + x + y * z, 0.75); },
    };
    const std::array<double, 3> p{0.31, -0.47, 0.22};
    for (const auto& f : family) {
        const double e1 = fd_error(f, p, 5, 1e-3);
        const double e2 = fd_error(f, p, 5, 5e-4);
        CHECK(e1 <= 1e-4);
        // second-order: halving h divides the error by about four
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("arithmetic is commutative and associative to rounding") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int nv = 1 + trial % 3;
        const int order = 1 + trial % 5;
        const Jet a = random_jet(rng, order, nv), b = random_jet(rng, order, nv), c = random_jet(rng, order, nv);
        const Jet ab = a * b, ba = b * a;
        const Jet l = (a * b) * c, r = a * (b * c);
        const Jet s1 = (a + b) + c, s2 = a + (b + c);
        for (std::size_t k = 0; k < a.size(); ++k) {
            REQUIRE(std::abs(ab[k] - ba[k]) <= 1e-14);
            REQUIRE(std::abs(l[k] - r[k]) <= 1e-14);
            REQUIRE(std::abs(s1[k] - s2[k]) <= 1e-14);
        }
    }
}

TEST_CASE("mixed orders truncate to the lower one") {
    const Jet a = Jet::variable(1.0, 0, 5, 1);
    const Jet b = Jet::variable(2.0, 0, 2, 1);
    CHECK((a * b).order() == 2);
    CHECK((a + b).order() == 2);
    CHECK((a * b).coeff({2, 0, 0}) == doctest::Approx(1.0));
}
