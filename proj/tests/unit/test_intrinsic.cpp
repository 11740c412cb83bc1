#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "isoembed/intrinsic.hpp"

using namespace isoembed;

namespace {

std::vector<Jet> coords(const std::vector<double>& y, int order) {
    std::vector<Jet> out;
    for (std::size_t i = 0; i < y.size(); ++i)
        out.push_back(Jet::variable(y[i], static_cast<int>(i), order, static_cast<int>(y.size())));
    return out;
}

// g = e^{2f} δ
MetricJet conformal(const std::vector<double>& y, const std::function<Jet(const std::vector<Jet>&)>& f,
                    int order = 4) {
    const int n = static_cast<int>(y.size());
    const Jet w = exp(2.0 * f(coords(y, order)));
    MetricJet mj{JetMatrix(n, Jet::constant(0.0, order, n))};
    for (int i = 0; i < n; ++i) mj.g(i, i) = w;
    return mj;
}

MetricJet round_sphere(const std::vector<double>& y, double r) {
    return conformal(y, [r](const std::vector<Jet>& x) {
        Jet s = Jet::constant(1.0, x[0].order(), x[0].nvars());
        for (const auto& c : x) s += c * c;
        return std::log(2.0 * r) - log(s);
    });
}

Eigen::MatrixXd sphere_metric(const ChartPoint& p, double r) {
    double s = 1.0;
    for (double c : p.coords) s += c * c;
    const int n = p.dim();
    return Eigen::MatrixXd::Identity(n, n) * (4.0 * r * r / (s * s));
}

// Scalar curvature of e^{2f}δ with f = a·y + b|y|², evaluated in closed form.
double conformal_scalar(const std::vector<double>& y, const std::vector<double>& a, double b) {
    const double n = static_cast<double>(y.size());
    double f = 0.0, grad2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        f += a[i] * y[i] + b * y[i] * y[i];
        const double gi = a[i] + 2 * b * y[i];
        grad2 += gi * gi;
    }
    return -std::exp(-2 * f) * (2 * (n - 1) * 2 * b * n + (n - 2) * (n - 1) * grad2);
}

} // namespace

TEST_CASE("round S^3 curvature") {
    for (const auto& y : {std::vector<double>{0.0, 0.0, 0.0}, {0.3, -0.7, 1.1}, {1.5, 0.2, -0.4}}) {
        const MetricJet mj = round_sphere(y, 1.0);
        const CurvatureState cs = curvature(mj);
        CHECK(cs.scalar == doctest::Approx(6.0).epsilon(1e-12));
        CHECK(std::abs(cs.laplacian_scalar) <= 1e-10);
        const Eigen::MatrixXd g = mj.g.value();
        CHECK((cs.ricci.matrix() - 2.0 * g).cwiseAbs().maxCoeff() <= 1e-10 * g.maxCoeff());
        CHECK(cs.sectional_min == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cs.sectional_max == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cs.ricci_norm == doctest::Approx(std::sqrt(12.0)).epsilon(1e-10));
        CHECK(bianchi_residual(cs) <= 1e-10 * g.maxCoeff() * g.maxCoeff());
        // R_ijkl = g_ik g_jl − g_il g_jk
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        CHECK(cs.riemann_at(i, j, k, l) ==
                              doctest::Approx(g(i, k) * g(j, l) - g(i, l) * g(j, k)).epsilon(1e-10));
    }
}

TEST_CASE("flat metric has no curvature") {
    MetricJet mj{JetMatrix(3, Jet::constant(0.0, 4, 3))};
    for (int i = 0; i < 3; ++i) mj.g(i, i) = Jet::constant(1.0, 4, 3);
    const CurvatureState cs = curvature(mj);
    CHECK(max_abs(cs.riemann) == 0.0);
    CHECK(cs.scalar == 0.0);
    CHECK(cs.laplacian_scalar == 0.0);
    CHECK(cs.sectional_min == 0.0);
    CHECK(cs.sectional_max == 0.0);

    MetricJet low{JetMatrix(3, Jet::constant(0.0, 2, 3))};
    for (int i = 0; i < 3; ++i) low.g(i, i) = Jet::constant(1.0, 2, 3);
    CHECK(std::isnan(curvature(low).laplacian_scalar));
}

TEST_CASE("non-SPD metric is rejected") {
    MetricJet mj{JetMatrix(2, Jet::constant(0.0, 4, 2))};
    mj.g(0, 0) = Jet::constant(1.0, 4, 2);
    mj.g(1, 1) = Jet::constant(-1.0, 4, 2);
    CHECK_THROWS_AS(curvature(mj), DomainError);
}

TEST_CASE("conformal metrics match the closed-form scalar curvature and its Laplacian") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int n = 2; n <= 3; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> a(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
            for (auto& v : a) v = u(rng);
            for (auto& v : y) v = u(rng);
            const double b = u(rng);
            const MetricJet mj = conformal(y, [&](const std::vector<Jet>& x) {
                Jet f = Jet::constant(0.0, x[0].order(), n);
                for (int i = 0; i < n; ++i) f += a[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] +
                                                 b * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
                return f;
            });
            const CurvatureState cs = curvature(mj);
            CHECK(cs.scalar == doctest::Approx(conformal_scalar(y, a, b)).epsilon(1e-11));
            CHECK(bianchi_residual(cs) <= 1e-11);

            // Δ_g R = e^{−2f}(ΔR + (n − 2)∇f·∇R) by centred differences
            const double h = 1e-3;
            double f0 = 0.0, lap = 0.0, cross = 0.0;
            for (int i = 0; i < n; ++i) f0 += a[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] +
                                              b * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            const double r0 = conformal_scalar(y, a, b);
            for (int i = 0; i < n; ++i) {
                auto yp = y, ym = y;
                yp[static_cast<std::size_t>(i)] += h;
                ym[static_cast<std::size_t>(i)] -= h;
                const double rp = conformal_scalar(yp, a, b), rm = conformal_scalar(ym, a, b);
                lap += (rp - 2 * r0 + rm) / (h * h);
                cross += (a[static_cast<std::size_t>(i)] + 2 * b * y[static_cast<std::size_t>(i)]) * (rp - rm) / (2 * h);
            }
            const double expected = std::exp(-2 * f0) * (lap + (n - 2) * cross);
            CHECK(cs.laplacian_scalar == doctest::Approx(expected).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("sectional extremes: exact operator vs sampled planes") {
    // a metric with distinct curvature-operator eigenvalues
    const std::vector<double> y{0.2, -0.1, 0.3};
    MetricJet mj{JetMatrix(3, Jet::constant(0.0, 4, 3))};
    const auto x = coords(y, 4);
    mj.g(0, 0) = exp(0.8 * x[1] * x[1]);
    mj.g(1, 1) = 1.0 + 0.5 * x[2] * x[2] + 0.2 * x[0];
    mj.g(2, 2) = exp(-0.6 * x[0] * x[0] + 0.3 * x[1]);
    mj.g(0, 1) = mj.g(1, 0) = 0.1 * x[0] * x[2];
    mj.g(1, 2) = mj.g(2, 1) = 0.05 * sin(x[1]);
    const CurvatureState cs = curvature(mj);
    const auto exact = sectional_extremes(cs, mj);
    CHECK(exact.certified);
    CHECK(exact.min < exact.max - 1e-3);
    const auto sampled = sectional_extremes_sampled(cs, mj, 400, 5);
    CHECK_FALSE(sampled.certified);
    CHECK(sampled.min == doctest::Approx(exact.min).epsilon(1e-6).scale(1.0));
    CHECK(sampled.max == doctest::Approx(exact.max).epsilon(1e-6).scale(1.0));
    // no random plane goes outside the certified range
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    const Eigen::MatrixXd g = mj.g.value();
    for (int t = 0; t < 200; ++t) {
        Eigen::VectorXd a(3), b(3);
        for (int i = 0; i < 3; ++i) {
            a(i) = nd(rng);
            b(i) = nd(rng);
        }
        const double k = sectional_curvature(cs, g, a, b);
        CHECK(k >= exact.min - 1e-12);
        CHECK(k <= exact.max + 1e-12);
    }
    // Ricci eigenvalues are sums of sectional curvatures in the adapted frame
    const Eigen::MatrixXd e = orthonormal_frame(g);
    const Eigen::MatrixXd ric_frame = e.transpose() * cs.ricci.matrix() * e;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ric_frame);
    const Eigen::MatrixXd w = e * es.eigenvectors();
    for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 3; ++j)
            if (j != i) sum += sectional_curvature(cs, g, w.col(i), w.col(j));
        CHECK(es.eigenvalues()(i) == doctest::Approx(sum).epsilon(1e-10));
    }
}

TEST_CASE("two-dimensional sectional curvature is Gaussian curvature") {
    const MetricJet mj = round_sphere({0.4, -0.9}, 2.0);
    const CurvatureState cs = curvature(mj);
    CHECK(cs.sectional_min == doctest::Approx(0.25));
    CHECK(cs.sectional_max == doctest::Approx(0.25));
    CHECK(cs.scalar == doctest::Approx(0.5));
}

TEST_CASE("scaling laws on the round sphere") {
    const std::vector<double> y{0.3, 0.5, -0.2};
    const double c = 1.7;
    const CurvatureState base = curvature(round_sphere(y, 1.0));
    const CurvatureState scaled = curvature(round_sphere(y, c));
    CHECK(scaled.scalar == doctest::Approx(base.scalar / (c * c)).epsilon(1e-10));
    CHECK(std::abs(scaled.laplacian_scalar) <= 1e-10);
    CHECK(scaled.sectional_min == doctest::Approx(1.0 / (c * c)).epsilon(1e-10));
}

TEST_CASE("covariant antisymmetrization") {
    const std::vector<double> y{0.3, -0.4, 0.6};
    const MetricJet mj = round_sphere(y, 1.0);
    // metric compatibility
    CHECK(max_abs(covariant_antisym(mj, mj.g.truncated(1))) <= 1e-13);
    // T = g + 0.1·x₁·e₁⊗e₁ has T_{11;2} − T_{12;1} picking up ∂₁ mismatch
    JetMatrix t = mj.g.truncated(1);
    t(0, 0) += 0.1 * Jet::variable(y[0], 0, 1, 3);
    CHECK(max_abs(covariant_antisym(mj, t)) > 1e-3);
}

TEST_CASE("geodesic diameter of round spheres") {
    const auto s3 = build_geodesic_graph([](const ChartPoint& p) { return sphere_metric(p, 1.0); }, 3, 17, 1.8);
    const DiameterEstimate d3 = diameter(s3);
    CHECK(d3.landmarks == 64);
    CHECK(d3.value >= M_PI);
    CHECK(d3.value <= 1.10 * M_PI);

    const auto s2 = build_geodesic_graph([](const ChartPoint& p) { return sphere_metric(p, 2.0); }, 2, 17, 1.8);
    const double d2 = diameter(s2).value;
    CHECK(d2 >= 2.0 * M_PI);
    CHECK(d2 <= 1.10 * 2.0 * M_PI);

    const double c = 1.3;
    const auto s2c = build_geodesic_graph([c](const ChartPoint& p) { return sphere_metric(p, 2.0 * c); }, 2, 17, 1.8);
    CHECK(diameter(s2c).value == doctest::Approx(c * d2).epsilon(1e-12));
}

TEST_CASE("diameter does not grow under refinement") {
    auto metric = [](const ChartPoint& p) { return sphere_metric(p, 1.0); };
    const double coarse = diameter(build_geodesic_graph(metric, 2, 9, 1.8)).value;
    const double fine = diameter(build_geodesic_graph(metric, 2, 17, 1.8)).value;
    CHECK(fine <= coarse + 1e-12);
}

TEST_CASE("disconnected graph is an error") {
    GeodesicGraph gg;
    gg.dim = 1;
    gg.resolution = 3;
    gg.nodes = {ChartPoint{Chart::North, {0.0}}, ChartPoint{Chart::North, {1.0}}};
    CHECK_THROWS_AS(diameter(gg), DomainError);
}
