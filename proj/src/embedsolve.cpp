#include "isoembed/embedsolve.hpp"

#include <cmath>
#include <map>

namespace isoembed {

namespace {

Eigen::MatrixXd sym(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// F with Fᵀ g F = I
Eigen::MatrixXd frame_for(const Eigen::MatrixXd& g, FrameChoice choice) {
    if (choice == FrameChoice::Cholesky) return orthonormal_frame(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("metric is not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

Exponent unit(int k) {
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(k)] = 1;
    return e;
}

} // namespace

IntrinsicField intrinsic_field(const Family& family, const std::vector<ChartPoint>& points) {
    if (family.dim != 3) throw PreconditionError("intrinsic_field: only n = 3 is supported");
    IntrinsicField field;
    field.dim = family.dim;
    for (const auto& p : points) {
        const SurfacePoint sp = evaluate(family, p, 4);
        field.points.push_back({p, sp.metric, ricci_jets(sp.metric)});
    }
    return field;
}

IntrinsicField perturb_ricci(const IntrinsicField& field, double amount) {
    IntrinsicField out = field;
    for (auto& fp : out.points) fp.ricci(0, 0) += amount * fp.metric.g(0, 0).truncated(fp.ricci.order());
    return out;
}

ChiPoint solve_point(const MetricJet& metric, const JetMatrix& ricci, std::size_t index, FrameChoice frame,
                     const PhiInverseOptions& opts) {
    const int n = metric.dim();
    if (ricci.dim() != n) throw PreconditionError("solve_point: Ricci and metric dimensions differ");
    const Eigen::MatrixXd g = metric.g.value();
    const Eigen::MatrixXd ric = sym(ricci.value());
    const Eigen::MatrixXd f = frame_for(g, frame);
    const Eigen::MatrixXd m = f.inverse();
    const SymMatrix b(sym(f.transpose() * ric * f));
    const ConeReport cone = cone_report(b);
    if (!cone.member())
        throw EmbeddabilityObstruction("Ricci tensor outside the cone T_n at point " + std::to_string(index) +
                                           " (eps_gap " + std::to_string(cone.eps_gap) + ")",
                                       index, cone.eps_gap);
    const SymMatrix a = phi_inverse(b, opts);
    const Eigen::MatrixXd& am = a.matrix();

    ChiPoint out;
    out.eps_gap = cone.eps_gap;
    out.residual = (phi(a).matrix() - b.matrix()).cwiseAbs().maxCoeff() / std::max(1.0, b.matrix().cwiseAbs().maxCoeff());
    const Eigen::MatrixXd chi = sym(m.transpose() * am * m);

    const int nv = metric.g(0, 0).nvars();
    const int order = (metric.order() >= 1 && ricci.order() >= 1) ? 1 : 0;
    out.chi = JetMatrix(n, Jet::constant(0.0, order, nv));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.chi(i, j)[0] = chi(i, j);
    if (order == 0) return out;

    const Eigen::MatrixXd gi = g.inverse();
    for (int k = 0; k < nv; ++k) {
        const Eigen::MatrixXd dg = metric.g.partial(k);
        const Eigen::MatrixXd dric = ricci.partial(k);
        // ∂_g of tr_g(χ)χ − χ g⁻¹ χ along dg
        const Eigen::MatrixXd dpsi_g = -(gi * dg * gi * chi).trace() * chi + chi * gi * dg * gi * chi;
        const Eigen::MatrixXd rhs = sym(dric - dpsi_g);
        const Eigen::MatrixXd cf = solve_phi_linearized(am, sym(f.transpose() * rhs * f));
        const Eigen::MatrixXd dchi = sym(m.transpose() * cf * m);
        const std::size_t slot = monomial_index(unit(k));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.chi(i, j)[slot] = dchi(i, j);
    }
    return out;
}

ChiField solve_contracted_gauss(const IntrinsicField& field, FrameChoice frame, const PhiInverseOptions& opts) {
    ChiField out;
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        const auto& fp = field.points[i];
        out.points.push_back(solve_point(fp.metric, fp.ricci, i, frame, opts));
        out.max_residual = std::max(out.max_residual, out.points.back().residual);
    }
    return out;
}

EmbeddabilityVerdict embeddability_check(const IntrinsicField& field, const ChiField& chi, double threshold) {
    if (field.dim != 3) throw PreconditionError("embeddability_check: requires n = 3");
    if (chi.points.size() != field.points.size()) throw PreconditionError("embeddability_check: field sizes differ");
    if (!(threshold > 0.0)) throw PreconditionError("embeddability_check: threshold must be positive");
    EmbeddabilityVerdict v;
    v.threshold = threshold;
    for (std::size_t i = 0; i < field.points.size(); ++i) {
        const double r = max_abs(covariant_antisym(field.points[i].metric, chi.points[i].chi));
        v.residuals.push_back(r);
        if (r > v.max_residual) {
            v.max_residual = r;
            v.argmax = i;
        }
    }
    v.embeddable = v.max_residual <= threshold;
    return v;
}

std::vector<Family> calibration_families() {
    return {Family::round_sphere(3, 1.0), Family::ellipsoid({1.0, 1.3, 0.8, 1.1}),
            Family::ellipsoid({1.1, 0.9, 1.2, 1.0})};
}

double calibrate_codazzi_threshold(const std::vector<Family>& families, const std::vector<ChartPoint>& points) {
    double worst = 0.0;
    for (const auto& f : families) {
        const IntrinsicField field = intrinsic_field(f, points);
        const ChiField chi = solve_contracted_gauss(field);
        for (std::size_t i = 0; i < field.points.size(); ++i)
            worst = std::max(worst, max_abs(covariant_antisym(field.points[i].metric, chi.points[i].chi)));
    }
    return std::max(10.0 * worst, 1e-10);
}

// ---------------------------------------------------------------------------

FrameSource family_source(const Family& family, Chart chart, ChiSource chi, double ricci_perturbation) {
    return [family, chart, chi, ricci_perturbation](const std::vector<double>& y) {
        const ChartPoint p{chart, y};
        const SurfacePoint sp = evaluate(family, p, chi == ChiSource::Embedded ? 2 : 3);
        const int n = sp.dim;
        const Christoffel gam = christoffel(sp.metric);
        FrameCoefficients c;
        c.g = sp.metric.g.value();
        c.gamma.resize(static_cast<std::size_t>(n * n * n));
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) c.gamma[static_cast<std::size_t>((k * n + i) * n + j)] = gam.value(k, i, j);
        if (chi == ChiSource::Embedded) {
            c.chi = sp.chi.value();
        } else {
            JetMatrix ric = ricci_jets(sp.metric);
            ric(0, 0) += ricci_perturbation * sp.metric.g(0, 0).truncated(ric.order());
            c.chi = solve_point(MetricJet{sp.metric.g.truncated(0)}, ric.truncated(0)).chi.value();
        }
        return c;
    };
}

FrameState seed_frame(const Eigen::MatrixXd& g) {
    const int n = static_cast<int>(g.rows());
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DomainError("seed_frame: metric is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    FrameState s;
    s.X = Eigen::VectorXd::Zero(n + 1);
    s.E = Eigen::MatrixXd::Zero(n + 1, n);
    s.E.topRows(n) = l.transpose();
    s.N = Eigen::VectorXd::Zero(n + 1);
    s.N(n) = 1.0;
    return s;
}

namespace {

struct Deriv {
    Eigen::VectorXd X;
    Eigen::MatrixXd E;
    Eigen::VectorXd N;
};

Deriv frame_rhs(const FrameCoefficients& c, const FrameState& s, int a) {
    const int n = static_cast<int>(c.g.rows());
    Deriv d;
    d.X = s.E.col(a);
    d.E = Eigen::MatrixXd::Zero(s.E.rows(), n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) d.E.col(j) += c.gamma[static_cast<std::size_t>((k * n + a) * n + j)] * s.E.col(k);
        d.E.col(j) -= c.chi(a, j) * s.N;
    }
    const Eigen::VectorXd mixed = c.g.llt().solve(c.chi.col(a)); // χ_a^j
    d.N = s.E * mixed;
    return d;
}

FrameState advance(const FrameState& s, const Deriv& d, double h) {
    return {s.X + h * d.X, s.E + h * d.E, s.N + h * d.N};
}

// RK4 with the end-point coefficients returned for reuse by the next step.
FrameState rk4(const FrameSource& src, const FrameState& s, const FrameCoefficients& c0, std::vector<double> y,
               int axis, double h, FrameCoefficients& c1) {
    auto& ya = y[static_cast<std::size_t>(axis)];
    const double y0 = ya;
    ya = y0 + 0.5 * h;
    const FrameCoefficients cm = src(y);
    ya = y0 + h;
    c1 = src(y);
    const Deriv k1 = frame_rhs(c0, s, axis);
    const Deriv k2 = frame_rhs(cm, advance(s, k1, 0.5 * h), axis);
    const Deriv k3 = frame_rhs(cm, advance(s, k2, 0.5 * h), axis);
    const Deriv k4 = frame_rhs(c1, advance(s, k3, h), axis);
    return {s.X + h / 6.0 * (k1.X + 2.0 * k2.X + 2.0 * k3.X + k4.X),
            s.E + h / 6.0 * (k1.E + 2.0 * k2.E + 2.0 * k3.E + k4.E),
            s.N + h / 6.0 * (k1.N + 2.0 * k2.N + 2.0 * k3.N + k4.N)};
}

double drift(const FrameState& s, const Eigen::MatrixXd& g) {
    const double iso = (s.E.transpose() * s.E - g).cwiseAbs().maxCoeff();
    const double orth = (s.E.transpose() * s.N).cwiseAbs().maxCoeff();
    return std::max({iso, orth, std::abs(s.N.norm() - 1.0)});
}

struct Filled {
    FrameState state;
    FrameCoefficients coeffs;
};

std::vector<std::optional<Filled>> fill(const FrameSource& src, const PathPlan& plan, const FrameState& seed,
                                        const FrameCoefficients& c_center, const std::vector<int>& axes, int substeps,
                                        double& isometry) {
    const int n = static_cast<int>(plan.center.size());
    const int m = plan.half_width;
    const int side = 2 * m + 1;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(side);
    auto flat = [&](const std::vector<int>& idx) {
        std::size_t f = 0;
        for (int i = 0; i < n; ++i) f = f * static_cast<std::size_t>(side) + static_cast<std::size_t>(idx[static_cast<std::size_t>(i)] + m);
        return f;
    };
    auto coords = [&](const std::vector<int>& idx) {
        std::vector<double> y = plan.center;
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += plan.spacing * idx[static_cast<std::size_t>(i)];
        return y;
    };
    const double h = plan.spacing / substeps;

    std::vector<std::optional<Filled>> nodes(total);
    std::vector<std::vector<int>> filled{std::vector<int>(static_cast<std::size_t>(n), 0)};
    nodes[flat(filled[0])] = Filled{seed, c_center};
    isometry = std::max(isometry, drift(seed, c_center.g));

    for (int a : axes) {
        const auto sources = filled;
        for (const auto& start : sources) {
            for (int dir : {1, -1}) {
                std::vector<int> idx = start;
                Filled cur = *nodes[flat(idx)];
                for (int k = 1; k <= m; ++k) {
                    std::vector<double> y = coords(idx);
                    for (int s = 0; s < substeps; ++s) {
                        FrameCoefficients c1;
                        cur.state = rk4(src, cur.state, cur.coeffs, y, a, dir * h, c1);
                        cur.coeffs = std::move(c1);
                        y[static_cast<std::size_t>(a)] += dir * h;
                    }
                    idx[static_cast<std::size_t>(a)] += dir;
                    const double dr = drift(cur.state, cur.coeffs.g);
                    if (dr > 1e-3) throw DomainError("reconstruct: frame drift exceeds 1e-3; chi inconsistent with g?");
                    isometry = std::max(isometry, dr);
                    nodes[flat(idx)] = cur;
                    filled.push_back(idx);
                }
            }
        }
    }
    return nodes;
}

} // namespace

FrameState rk4_step(const FrameSource& src, const FrameState& s, std::vector<double> y, int axis, double h) {
    FrameCoefficients c1;
    return rk4(src, s, src(y), std::move(y), axis, h, c1);
}

Reconstruction reconstruct(const FrameSource& src, const PathPlan& plan, std::optional<FrameState> seed) {
    const int n = static_cast<int>(plan.center.size());
    if (n != 3) throw PreconditionError("reconstruct: requires n = 3");
    if (plan.half_width < 1 || !(plan.spacing > 0.0) || !(plan.step > 0.0))
        throw PreconditionError("reconstruct: invalid path plan");
    const int substeps = std::max(1, static_cast<int>(std::lround(plan.spacing / plan.step)));
    const FrameCoefficients c_center = src(plan.center);
    const FrameState s0 = seed ? *seed : seed_frame(c_center.g);
    if (drift(s0, c_center.g) > 1e-12) throw PreconditionError("reconstruct: seed frame does not match the metric");

    Reconstruction rec;
    rec.substeps = substeps;
    std::vector<int> asc(static_cast<std::size_t>(n)), desc(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        asc[static_cast<std::size_t>(i)] = i;
        desc[static_cast<std::size_t>(i)] = n - 1 - i;
    }
    double iso = 0.0, iso_rev = 0.0;
    const auto forward = fill(src, plan, s0, c_center, asc, substeps, iso);
    const auto backward = fill(src, plan, s0, c_center, desc, substeps, iso_rev);
    rec.isometry_residual = iso;

    const int m = plan.half_width;
    const int side = 2 * m + 1;
    for (std::size_t f = 0; f < forward.size(); ++f) {
        std::vector<double> y = plan.center;
        std::size_t rem = f;
        for (int i = n - 1; i >= 0; --i) {
            y[static_cast<std::size_t>(i)] += plan.spacing * (static_cast<int>(rem % static_cast<std::size_t>(side)) - m);
            rem /= static_cast<std::size_t>(side);
        }
        rec.coords.push_back(std::move(y));
        rec.X.push_back(forward[f]->state.X);
        rec.X_reversed.push_back(backward[f]->state.X);
        rec.frames.push_back(forward[f]->state);
        rec.holonomy_residual = std::max(rec.holonomy_residual, (forward[f]->state.X - backward[f]->state.X).norm());
    }
    return rec;
}

RigidAlignment align_rigid(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
    if (a.size() != b.size() || a.empty()) throw PreconditionError("align_rigid: clouds must be nonempty and matched");
    const Eigen::Index d = a[0].size();
    Eigen::VectorXd ma = Eigen::VectorXd::Zero(d), mb = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(a.size());
    mb /= static_cast<double>(b.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < a.size(); ++i) h += (a[i] - ma) * (b[i] - mb).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RigidAlignment out;
    out.Q = svd.matrixV() * svd.matrixU().transpose();
    out.t = mb - out.Q * ma;
    const auto& sv = svd.singularValues();
    out.unstable = sv(d - 1) <= 1e-12 * std::max(sv(0), 1e-300);
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (out.Q * a[i] + out.t - b[i]).squaredNorm();
    out.rms = std::sqrt(ss / static_cast<double>(a.size()));
    return out;
}

} // namespace isoembed
