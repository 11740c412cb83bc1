#include "isoembed/surfaces.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "isoembed/symfun.hpp"

namespace isoembed {

namespace {

constexpr int kEmbedOrder = 5;

Jet dot(const std::vector<Jet>& a, const std::vector<Jet>& b) {
    Jet s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Jet det3(const Jet& a, const Jet& b, const Jet& c, const Jet& d, const Jet& e, const Jet& f, const Jet& g,
         const Jet& h, const Jet& i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

// Unit normal to the tangent vectors `e` (n of them in R^{n+1}), oriented by X·N > 0.
std::vector<Jet> unit_normal(const std::vector<std::vector<Jet>>& e, const std::vector<Jet>& x) {
    const std::size_t n = e.size();
    std::vector<Jet> nrm;
    if (n == 2) {
        nrm = {e[0][1] * e[1][2] - e[0][2] * e[1][1], e[0][2] * e[1][0] - e[0][0] * e[1][2],
               e[0][0] * e[1][1] - e[0][1] * e[1][0]};
    } else if (n == 3) {
        for (std::size_t a = 0; a < 4; ++a) {
            std::size_t c[3];
            for (std::size_t k = 0, m = 0; k < 4; ++k)
                if (k != a) c[m++] = k;
            Jet m = det3(e[0][c[0]], e[0][c[1]], e[0][c[2]], e[1][c[0]], e[1][c[1]], e[1][c[2]], e[2][c[0]],
                         e[2][c[1]], e[2][c[2]]);
            nrm.push_back(a % 2 == 0 ? m : -m);
        }
    } else {
        throw PreconditionError("surfaces: dimension must be 2 or 3");
    }
    const Jet len = sqrt(dot(nrm, nrm));
    double side = 0.0;
    for (std::size_t a = 0; a < nrm.size(); ++a) side += nrm[a].value() * x[a].value();
    const double sign = side >= 0.0 ? 1.0 : -1.0;
    const Jet scale = sign / len;
    for (auto& c : nrm) c = c * scale;
    return nrm;
}

void check_chart(const ChartPoint& p, int dim) {
    if (p.dim() != dim) throw PreconditionError("evaluate: chart point has the wrong dimension");
    if (p.radius() > kDefaultChartRadius * (1.0 + 1e-12))
        throw PreconditionError("evaluate: chart point outside the chart radius");
}

std::vector<Jet> embedding(const Family& f, const ChartPoint& p, int order = kEmbedOrder) {
    const auto xhat = sphere_point_jets(p, order);
    std::vector<Jet> x;
    switch (f.kind) {
    case Family::Kind::RoundSphere:
        for (const auto& c : xhat) x.push_back(f.radius * c);
        break;
    case Family::Kind::Ellipsoid:
        for (std::size_t i = 0; i < xhat.size(); ++i) x.push_back(f.axes[i] * xhat[i]);
        break;
    case Family::Kind::RadialGraph: {
        const Jet u = f.profile.evaluate(xhat);
        if (!(u.value() > 0.0)) throw DomainError("evaluate: radial profile u is not positive at the point");
        const Jet rho = reciprocal(u);
        for (const auto& c : xhat) x.push_back(rho * c);
        break;
    }
    }
    return x;
}

// Fills X, N, rho and the embedding-derived g, χ.
SurfacePoint from_embedding(const Family& f, const ChartPoint& p, int order) {
    if (order < 2 || order > kEmbedOrder) throw PreconditionError("evaluate: embedding order must lie in [2, 5]");
    validate(f);
    check_chart(p, f.dim);
    const int n = f.dim;
    SurfacePoint sp;
    sp.point = p;
    sp.dim = n;
    sp.X = embedding(f, p, order);
    std::vector<std::vector<Jet>> e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (const auto& c : sp.X) e[static_cast<std::size_t>(i)].push_back(c.derivative(i));
    sp.N = unit_normal(e, sp.X);
    sp.metric.g = JetMatrix(n, Jet::constant(0.0, order - 1, n));
    sp.chi = JetMatrix(n, Jet::constant(0.0, order - 2, n));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const Jet gij = dot(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
            sp.metric.g(i, j) = sp.metric.g(j, i) = gij;
            std::vector<Jet> xij;
            for (const auto& c : e[static_cast<std::size_t>(i)]) xij.push_back(c.derivative(j));
            const Jet chij = -dot(xij, sp.N);
            sp.chi(i, j) = sp.chi(j, i) = chij;
        }
    }
    sp.rho = 0.5 * dot(sp.X, sp.X);
    return sp;
}

} // namespace

Jet RadialProfile::evaluate(const std::vector<Jet>& xhat) const {
    Jet u = Jet::constant(constant + shift, xhat[0].order(), xhat[0].nvars());
    for (std::size_t i = 0; i < linear.size(); ++i) u += linear[i] * xhat[i];
    if (gauge_weight != 0.0) {
        Jet q = Jet::constant(0.0, xhat[0].order(), xhat[0].nvars());
        for (std::size_t i = 0; i < gauge_axes.size(); ++i) q += xhat[i] * xhat[i] / (gauge_axes[i] * gauge_axes[i]);
        u += gauge_weight * sqrt(q);
    }
    return u;
}

double RadialProfile::evaluate(const std::vector<double>& xhat) const {
    double u = constant + shift;
    for (std::size_t i = 0; i < linear.size(); ++i) u += linear[i] * xhat[i];
    if (gauge_weight != 0.0) {
        double q = 0.0;
        for (std::size_t i = 0; i < gauge_axes.size(); ++i) q += xhat[i] * xhat[i] / (gauge_axes[i] * gauge_axes[i]);
        u += gauge_weight * std::sqrt(q);
    }
    return u;
}

Family Family::round_sphere(int dim, double radius) {
    Family f;
    f.kind = Kind::RoundSphere;
    f.dim = dim;
    f.radius = radius;
    validate(f);
    return f;
}

Family Family::ellipsoid(std::vector<double> axes) {
    Family f;
    f.kind = Kind::Ellipsoid;
    f.dim = static_cast<int>(axes.size()) - 1;
    f.axes = std::move(axes);
    validate(f);
    return f;
}

Family Family::radial_graph(int dim, RadialProfile profile) {
    Family f;
    f.kind = Kind::RadialGraph;
    f.dim = dim;
    f.profile = std::move(profile);
    validate(f);
    return f;
}

std::string Family::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
    case Kind::RoundSphere:
        os << "round_sphere(n=" << dim << ", r=" << radius << ")";
        break;
    case Kind::Ellipsoid:
        os << "ellipsoid(";
        for (std::size_t i = 0; i < axes.size(); ++i) os << (i ? ", " : "") << axes[i];
        os << ")";
        break;
    case Kind::RadialGraph:
        os << "radial_graph(n=" << dim << ", c=" << profile.constant;
        if (!profile.linear.empty()) {
            os << ", b=(";
            for (std::size_t i = 0; i < profile.linear.size(); ++i) os << (i ? ", " : "") << profile.linear[i];
            os << ")";
        }
        if (profile.gauge_weight != 0.0) {
            os << ", w=" << profile.gauge_weight << ", a=(";
            for (std::size_t i = 0; i < profile.gauge_axes.size(); ++i) os << (i ? ", " : "") << profile.gauge_axes[i];
            os << ")";
        }
        os << ", eps=" << profile.shift << ")";
        break;
    }
    return os.str();
}

void validate(const Family& f) {
    if (f.dim < 2 || f.dim > 3) throw PreconditionError("family dimension must be 2 or 3");
    const std::size_t m = static_cast<std::size_t>(f.dim + 1);
    switch (f.kind) {
    case Family::Kind::RoundSphere:
        if (!(f.radius > 0.0)) throw PreconditionError("round sphere radius must be positive");
        break;
    case Family::Kind::Ellipsoid:
        if (f.axes.size() != m) throw PreconditionError("ellipsoid needs n + 1 semi-axes");
        for (double a : f.axes)
            if (!(a > 0.0)) throw PreconditionError("ellipsoid semi-axes must be positive");
        break;
    case Family::Kind::RadialGraph: {
        const auto& p = f.profile;
        if (!p.linear.empty() && p.linear.size() != m) throw PreconditionError("radial profile: linear term needs n + 1 entries");
        if (p.gauge_weight != 0.0 && p.gauge_axes.size() != m)
            throw PreconditionError("radial profile: gauge term needs n + 1 axes");
        for (double a : p.gauge_axes)
            if (!(a > 0.0)) throw PreconditionError("radial profile: gauge axes must be positive");
        if (p.constant < 0.0 || p.gauge_weight < 0.0 || p.shift < 0.0)
            throw PreconditionError("radial profile: constant, gauge weight and shift must be nonnegative");
        // u > 0 on the sphere: the linear term is at worst −|b|
        double lin = 0.0;
        for (double b : p.linear) lin += b * b;
        double gmin = 0.0;
        if (p.gauge_weight > 0.0) {
            double amax = 0.0;
            for (double a : p.gauge_axes) amax = std::max(amax, a);
            gmin = p.gauge_weight / amax;
        }
        if (!(p.constant + p.shift + gmin - std::sqrt(lin) > 0.0))
            throw PreconditionError("radial profile: u must be positive on the sphere");
        break;
    }
    }
}

Family epsilon_family(const Family& base, double eps) {
    if (base.kind != Family::Kind::RadialGraph) throw PreconditionError("epsilon_family: base must be a radial graph");
    if (!(eps > 0.0)) throw PreconditionError("epsilon_family: eps must be positive");
    Family f = base;
    f.profile.shift += eps;
    validate(f);
    return f;
}

SurfacePoint evaluate_embedded(const Family& family, const ChartPoint& p, int order) {
    return from_embedding(family, p, order);
}

SurfacePoint evaluate(const Family& family, const ChartPoint& p, int order) {
    SurfacePoint sp = from_embedding(family, p, order);
    if (family.kind != Family::Kind::RadialGraph) return sp;

    // graph formulas over the round metric γ = e^{2φ}δ, φ = log 2 − log(1 + |y|²)
    const int n = family.dim;
    const auto xhat = sphere_point_jets(p, order);
    const Jet u = family.profile.evaluate(xhat);
    const Jet rho = reciprocal(u);
    Jet s = Jet::constant(1.0, order, n);
    std::vector<Jet> y;
    for (int i = 0; i < n; ++i) {
        y.push_back(Jet::variable(p.coords[static_cast<std::size_t>(i)], i, order, n));
        s += y.back() * y.back();
    }
    const Jet gam = 4.0 / (s * s); // γ_ii
    std::vector<Jet> dphi;          // ∂_k φ
    for (int k = 0; k < n; ++k) dphi.push_back(-2.0 * y[static_cast<std::size_t>(k)] / s);

    std::vector<Jet> du, drho;
    for (int i = 0; i < n; ++i) {
        du.push_back(u.derivative(i));
        drho.push_back(rho.derivative(i));
    }
    Jet grad2 = du[0] * du[0];
    for (int i = 1; i < n; ++i) grad2 += du[static_cast<std::size_t>(i)] * du[static_cast<std::size_t>(i)];
    grad2 = grad2 / gam;
    const Jet denom = u * sqrt(u * u + grad2);

    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            Jet gij = drho[ui] * drho[uj];
            if (i == j) gij += rho * rho * gam;
            sp.metric.g(i, j) = sp.metric.g(j, i) = gij;

            // Hess_γ u = ∂_i∂_j u − Γ^k_ij ∂_k u with Γ^k_ij = δ_ik φ_j + δ_jk φ_i − δ_ij φ_k
            Jet hess = du[ui].derivative(j) - dphi[uj] * du[ui] - dphi[ui] * du[uj];
            if (i == j)
                for (int k = 0; k < n; ++k) hess += dphi[static_cast<std::size_t>(k)] * du[static_cast<std::size_t>(k)];
            if (i == j) hess += u * gam;
            const Jet chij = hess / denom;
            sp.chi(i, j) = sp.chi(j, i) = chij;
        }
    }
    return sp;
}

Eigen::VectorXd SurfacePoint::position() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(X.size()));
    for (std::size_t i = 0; i < X.size(); ++i) v(static_cast<Eigen::Index>(i)) = X[i].value();
    return v;
}

Eigen::VectorXd SurfacePoint::normal() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(N.size()));
    for (std::size_t i = 0; i < N.size(); ++i) v(static_cast<Eigen::Index>(i)) = N[i].value();
    return v;
}

double SurfacePoint::support() const { return position().dot(normal()); }

double SurfacePoint::mean_curvature() const {
    return metric.g.value().llt().solve(chi.value()).trace();
}

double SurfacePoint::scalar_extrinsic() const {
    const Eigen::MatrixXd s = metric.g.value().llt().solve(chi.value());
    const double h = s.trace();
    return h * h - (s * s).trace();
}

Eigen::VectorXd SurfacePoint::principal_curvatures() const {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(chi.value(), metric.g.value());
    return es.eigenvalues();
}

double SurfacePoint::chi_norm2() const {
    const Eigen::MatrixXd s = metric.g.value().llt().solve(chi.value());
    return (s * s).trace();
}

Eigen::MatrixXd metric_at(const Family& family, const ChartPoint& p) {
    check_chart(p, family.dim);
    const auto x = embedding(family, p, 1);
    const int n = family.dim;
    Eigen::MatrixXd e(static_cast<Eigen::Index>(x.size()), n);
    for (std::size_t a = 0; a < x.size(); ++a)
        for (int i = 0; i < n; ++i) e(static_cast<Eigen::Index>(a), i) = x[a].partial(i == 0 ? Exponent{1, 0, 0} : i == 1 ? Exponent{0, 1, 0} : Exponent{0, 0, 1});
    return e.transpose() * e;
}

double gauss_residual(const SurfacePoint& sp) {
    const CurvatureState cs = curvature(sp.metric);
    const Eigen::MatrixXd c = sp.chi.value();
    const int n = sp.dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(cs.riemann_at(i, j, k, l) - (c(i, k) * c(j, l) - c(i, l) * c(j, k))));
    return worst;
}

double codazzi_residual(const SurfacePoint& sp) { return max_abs(covariant_antisym(sp.metric, sp.chi)); }

double isometry_residual(const SurfacePoint& sp) {
    double worst = 0.0;
    for (int i = 0; i < sp.dim; ++i)
        for (int j = 0; j < sp.dim; ++j) {
            double s = 0.0;
            for (const auto& c : sp.X) s += c.derivative(i).value() * c.derivative(j).value();
            worst = std::max(worst, std::abs(s - sp.metric.g(i, j).value()));
        }
    return worst;
}

double normal_residual(const SurfacePoint& sp) {
    const Christoffel gam = christoffel(sp.metric);
    const int n = sp.dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (std::size_t a = 0; a < sp.X.size(); ++a) {
                double v = sp.X[a].derivative(i).derivative(j).value();
                for (int k = 0; k < n; ++k) v -= gam.value(k, i, j) * sp.X[a].derivative(k).value();
                v += sp.chi(i, j).value() * sp.N[a].value();
                worst = std::max(worst, std::abs(v));
            }
    return worst;
}

SupportResiduals support_identities(const SurfacePoint& sp) {
    const int n = sp.dim;
    const Christoffel gam = christoffel(sp.metric);
    const Eigen::MatrixXd g = sp.metric.g.value();
    const Eigen::MatrixXd chi = sp.chi.value();
    const double xn = sp.support();

    Eigen::VectorXd grad(n);
    for (int k = 0; k < n; ++k) grad(k) = sp.rho.derivative(k).value();
    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = sp.rho.derivative(i).derivative(j).value();
            for (int k = 0; k < n; ++k) v -= gam.value(k, i, j) * grad(k);
            hess(i, j) = v;
        }

    SupportResiduals out;
    out.hessian = (hess - g + xn * chi).cwiseAbs().maxCoeff();
    out.gradient = std::abs(2.0 * sp.rho.value() - grad.dot(g.llt().solve(grad)) - xn * xn);

    const Eigen::MatrixXd w = g - hess;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()), g);
    out.lambda = es.eigenvalues();
    const std::vector<double> lam(out.lambda.data(), out.lambda.data() + n);
    const double s1 = sigma<double>(1, lam), s2 = sigma<double>(2, lam);
    out.gamma2 = s1 > 0.0 && s2 > 0.0;
    const double r = curvature(sp.metric).scalar;
    if (r > 0.0 && s2 >= 0.0)
        out.elliptic = std::abs(std::sqrt(s2) - xn * std::sqrt(r / 2.0));
    else
        out.elliptic = std::numeric_limits<double>::quiet_NaN();
    return out;
}

ChartPoint chart_coords(const std::vector<double>& xhat, Chart chart) {
    const std::size_t n = xhat.size() - 1;
    const double last = xhat[n];
    const double den = chart == Chart::North ? 1.0 + last : 1.0 - last;
    if (den <= 0.0) throw DomainError("chart_coords: point is the pole not covered by this chart");
    ChartPoint p{chart, {}};
    for (std::size_t i = 0; i < n; ++i) p.coords.push_back(xhat[i] / den);
    return p;
}

ChartPoint locate(const Family& family, const Eigen::VectorXd& target, Chart chart) {
    Eigen::VectorXd d = target;
    if (family.kind == Family::Kind::Ellipsoid)
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) /= family.axes[static_cast<std::size_t>(i)];
    d.normalize();
    return chart_coords(std::vector<double>(d.data(), d.data() + d.size()), chart);
}

std::vector<ChartPoint> random_chart_points(int dim, std::size_t count, std::uint64_t seed, double radius) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    std::vector<ChartPoint> out;
    for (std::size_t k = 0; k < count; ++k) {
        ChartPoint p{k % 2 == 0 ? Chart::North : Chart::South, {}};
        double norm = 0.0;
        for (int i = 0; i < dim; ++i) {
            p.coords.push_back(nd(rng));
            norm += p.coords.back() * p.coords.back();
        }
        const double r = radius * std::pow(ud(rng), 1.0 / dim) / std::sqrt(norm);
        for (double& c : p.coords) c *= r;
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace isoembed
