#include "isoembed/intrinsic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>

namespace isoembed {

namespace {

std::size_t idx3(int n, int a, int b, int c) { return static_cast<std::size_t>((a * n + b) * n + c); }
std::size_t idx4(int n, int a, int b, int c, int d) {
    return static_cast<std::size_t>(((a * n + b) * n + c) * n + d);
}

} // namespace

int JetMatrix::order() const {
    int o = kMaxJetOrder;
    for (const auto& j : data_) o = std::min(o, j.order());
    return data_.empty() ? 0 : o;
}

Eigen::MatrixXd JetMatrix::value() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
}

Eigen::MatrixXd JetMatrix::partial(int var) const {
    Exponent e{0, 0, 0};
    e[static_cast<std::size_t>(var)] = 1;
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).partial(e);
    return m;
}

JetMatrix JetMatrix::truncated(int order) const {
    JetMatrix out = *this;
    for (auto& j : out.data_) j = j.truncated(order);
    return out;
}

void validate_metric(const MetricJet& mj) {
    const int n = mj.dim();
    if (n < 1 || n > kMaxJetVars) throw PreconditionError("metric dimension must lie in [1, 3]");
    const Eigen::MatrixXd g = mj.g.value();
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("metric is not symmetric");
    if (Eigen::LLT<Eigen::MatrixXd>(g).info() != Eigen::Success) throw DomainError("metric is not positive definite");
}

JetMatrix inverse(const JetMatrix& m) {
    const int n = m.dim();
    JetMatrix out(n, m(0, 0));
    if (n == 1) {
        out(0, 0) = reciprocal(m(0, 0));
        return out;
    }
    if (n == 2) {
        const Jet det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const Jet inv = reciprocal(det);
        out(0, 0) = m(1, 1) * inv;
        out(1, 1) = m(0, 0) * inv;
        out(0, 1) = -m(0, 1) * inv;
        out(1, 0) = -m(1, 0) * inv;
        return out;
    }
    if (n != 3) throw PreconditionError("inverse: dimension must lie in [1, 3]");
    auto cof = [&](int i, int j) {
        const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    };
    const Jet det = m(0, 0) * cof(0, 0) + m(0, 1) * cof(0, 1) + m(0, 2) * cof(0, 2);
    const Jet inv = reciprocal(det);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(j, i) = cof(i, j) * inv;
    return out;
}

Christoffel christoffel(const MetricJet& mj) {
    validate_metric(mj);
    const int n = mj.dim();
    const int p = mj.order();
    if (p < 1) throw PreconditionError("christoffel: metric jet must carry first derivatives");
    const JetMatrix ginv = inverse(mj.g).truncated(p - 1);
    // dg[(a, i, j)] = ∂_a g_ij
    std::vector<Jet> dg;
    dg.reserve(static_cast<std::size_t>(n * n * n));
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dg.push_back(mj.g(i, j).derivative(a));

    Christoffel out;
    out.n = n;
    out.data.assign(static_cast<std::size_t>(n * n * n), Jet::constant(0.0, p - 1, n));
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                Jet s = Jet::constant(0.0, p - 1, n);
                for (int l = 0; l < n; ++l) {
                    const Jet first = dg[idx3(n, i, j, l)] + dg[idx3(n, j, i, l)] - dg[idx3(n, l, i, j)];
                    s += ginv(k, l) * first;
                }
                s *= 0.5;
                out.data[idx3(n, k, i, j)] = s;
                out.data[idx3(n, k, j, i)] = s;
            }
        }
    }
    return out;
}

namespace {

// R^l_{ijk} = ∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik, indexed [l][i][j][k].
std::vector<Jet> riemann_up(const Christoffel& gam, int p) {
    const int n = gam.n;
    std::vector<Jet> out(static_cast<std::size_t>(n * n * n * n), Jet::constant(0.0, p - 2, n));
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    Jet s = gam(l, j, k).derivative(i) - gam(l, i, k).derivative(j);
                    for (int m = 0; m < n; ++m) s += gam(l, i, m) * gam(m, j, k) - gam(l, j, m) * gam(m, i, k);
                    out[idx4(n, l, i, j, k)] = s;
                    out[idx4(n, l, j, i, k)] = -s;
                }
            }
        }
    }
    return out;
}

} // namespace

std::vector<Jet> riemann_jets(const MetricJet& mj) {
    const int p = mj.order();
    if (p < 2) throw PreconditionError("riemann_jets: metric jet must carry second derivatives");
    const int n = mj.dim();
    const auto up = riemann_up(christoffel(mj), p);
    const JetMatrix g = mj.g.truncated(p - 2);
    std::vector<Jet> out(static_cast<std::size_t>(n * n * n * n), Jet::constant(0.0, p - 2, n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Jet s = Jet::constant(0.0, p - 2, n);
                    for (int m = 0; m < n; ++m) s += g(k, m) * up[idx4(n, m, i, j, l)];
                    out[idx4(n, i, j, k, l)] = s;
                }
    return out;
}

JetMatrix ricci_jets(const MetricJet& mj) {
    const int p = mj.order();
    if (p < 2) throw PreconditionError("ricci_jets: metric jet must carry second derivatives");
    const int n = mj.dim();
    const auto up = riemann_up(christoffel(mj), p);
    JetMatrix ric(n, Jet::constant(0.0, p - 2, n));
    for (int j = 0; j < n; ++j)
        for (int l = j; l < n; ++l) {
            Jet s = Jet::constant(0.0, p - 2, n);
            for (int i = 0; i < n; ++i) s += up[idx4(n, i, i, j, l)];
            ric(j, l) = s;
            ric(l, j) = s;
        }
    return ric;
}

CurvatureState curvature(const MetricJet& mj) {
    validate_metric(mj);
    const int n = mj.dim();
    const int p = mj.order();
    if (p < 2) throw PreconditionError("curvature: metric jet must carry second derivatives");

    const Christoffel gam = christoffel(mj);
    const auto up = riemann_up(gam, p);
    const JetMatrix ginv = inverse(mj.g);
    const Eigen::MatrixXd g = mj.g.value();

    CurvatureState cs;
    cs.dim = n;
    cs.riemann.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m) s += g(k, m) * up[idx4(n, m, i, j, l)].value();
                    cs.riemann[idx4(n, i, j, k, l)] = s;
                }

    JetMatrix ric(n, Jet::constant(0.0, p - 2, n));
    Jet scal = Jet::constant(0.0, p - 2, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            Jet s = Jet::constant(0.0, p - 2, n);
            for (int i = 0; i < n; ++i) s += up[idx4(n, i, i, j, l)];
            ric(j, l) = s;
            scal += ginv(j, l) * s;
        }
    Eigen::MatrixXd rv = ric.value();
    cs.ricci = SymMatrix(0.5 * (rv + rv.transpose()));
    cs.scalar = scal.value();

    const Eigen::MatrixXd gi = ginv.value();
    const Eigen::MatrixXd mixed = gi * cs.ricci.matrix();
    cs.ricci_norm = std::sqrt(std::max(0.0, (mixed * mixed).trace()));

    if (p >= 4) {
        // ΔR = g^{ij}(∂_i∂_j R − Γ^k_ij ∂_k R)
        double lap = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Exponent e{0, 0, 0};
                ++e[static_cast<std::size_t>(i)];
                ++e[static_cast<std::size_t>(j)];
                double term = scal.partial(e);
                for (int k = 0; k < n; ++k) {
                    Exponent ek{0, 0, 0};
                    ek[static_cast<std::size_t>(k)] = 1;
                    term -= gam.value(k, i, j) * scal.partial(ek);
                }
                lap += gi(i, j) * term;
            }
        cs.laplacian_scalar = lap;
    }

    if (n >= 2) {
        const auto ext = sectional_extremes(cs, mj);
        cs.sectional_min = ext.min;
        cs.sectional_max = ext.max;
    }
    return cs;
}

double bianchi_residual(const CurvatureState& cs) {
    const int n = cs.dim;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(cs.riemann_at(i, j, k, l) + cs.riemann_at(j, k, i, l) +
                                                     cs.riemann_at(k, i, j, l)));
    return worst;
}

double sectional_curvature(const CurvatureState& cs, const Eigen::MatrixXd& g, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) {
    const int n = cs.dim;
    double num = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) num += cs.riemann_at(i, j, k, l) * u(i) * v(j) * u(k) * v(l);
    const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
    const double area2 = uu * vv - uv * uv;
    if (area2 <= 0.0) throw PreconditionError("sectional_curvature: vectors are linearly dependent");
    return num / area2;
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DomainError("orthonormal_frame: metric is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    return l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

namespace {

// R̂_abcd in a g-orthonormal frame.
std::vector<double> frame_riemann(const CurvatureState& cs, const Eigen::MatrixXd& e) {
    const int n = cs.dim;
    std::vector<double> out(static_cast<std::size_t>(n * n * n * n), 0.0);
    // contract one index at a time
    std::vector<double> t = cs.riemann;
    for (int slot = 0; slot < 4; ++slot) {
        std::vector<double> next(t.size(), 0.0);
        for (std::size_t flat = 0; flat < t.size(); ++flat) {
            int id[4];
            std::size_t rem = flat;
            for (int s = 3; s >= 0; --s) {
                id[s] = static_cast<int>(rem % static_cast<std::size_t>(n));
                rem /= static_cast<std::size_t>(n);
            }
            double s = 0.0;
            const int a = id[slot];
            for (int m = 0; m < n; ++m) {
                int jd[4] = {id[0], id[1], id[2], id[3]};
                jd[slot] = m;
                s += e(m, a) * t[idx4(n, jd[0], jd[1], jd[2], jd[3])];
            }
            next[flat] = s;
        }
        t = std::move(next);
    }
    out = std::move(t);
    return out;
}

} // namespace

SectionalExtremes sectional_extremes_sampled(const CurvatureState& cs, const MetricJet& mj, int samples,
                                             std::uint64_t seed) {
    const int n = cs.dim;
    if (n < 2) throw PreconditionError("sectional_extremes: dimension must be at least 2");
    const Eigen::MatrixXd g = mj.g.value();
    const Eigen::MatrixXd e = orthonormal_frame(g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto k_of = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return sectional_curvature(cs, g, e * a, e * b);
    };
    auto random_vec = [&]() {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = nd(rng);
        return v;
    };
    SectionalExtremes out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), false};
    Eigen::VectorXd best_min_u, best_min_v, best_max_u, best_max_v;
    for (int s = 0; s < std::max(samples, 1); ++s) {
        Eigen::VectorXd u = random_vec(), v = random_vec();
        if ((u.norm() * v.norm() - std::abs(u.dot(v))) < 1e-8) continue;
        const double k = k_of(u, v);
        if (k < out.min) {
            out.min = k;
            best_min_u = u;
            best_min_v = v;
        }
        if (k > out.max) {
            out.max = k;
            best_max_u = u;
            best_max_v = v;
        }
    }
    // coordinate-wise pattern search starting from the best samples
    auto refine = [&](Eigen::VectorXd u, Eigen::VectorXd v, double sign) {
        double best = sign * k_of(u, v);
        for (double step = 0.25; step > 1e-7; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (int c = 0; c < 2 * n; ++c) {
                    for (double d : {step, -step}) {
                        Eigen::VectorXd u2 = u, v2 = v;
                        if (c < n) u2(c) += d;
                        else v2(c - n) += d;
                        u2.normalize();
                        v2 -= v2.dot(u2) * u2;
                        if (v2.norm() < 1e-8) continue;
                        v2.normalize();
                        const double k = sign * k_of(u2, v2);
                        if (k < best - 1e-15) {
                            best = k;
                            u = u2;
                            v = v2;
                            improved = true;
                        }
                    }
                }
            }
        }
        return sign * best;
    };
    if (best_min_u.size() > 0) out.min = std::min(out.min, refine(best_min_u, best_min_v, 1.0));
    if (best_max_u.size() > 0) out.max = std::max(out.max, refine(best_max_u, best_max_v, -1.0));
    return out;
}

SectionalExtremes sectional_extremes(const CurvatureState& cs, const MetricJet& mj, int samples,
                                     std::uint64_t seed) {
    const int n = cs.dim;
    if (n < 2) throw PreconditionError("sectional_extremes: dimension must be at least 2");
    if (n > 3) return sectional_extremes_sampled(cs, mj, samples > 0 ? samples : 2000, seed);
    const Eigen::MatrixXd e = orthonormal_frame(mj.g.value());
    const auto r = frame_riemann(cs, e);
    if (n == 2) {
        const double k = r[idx4(2, 0, 1, 0, 1)];
        return {k, k, true};
    }
    // curvature operator on Λ²: basis e1∧e2, e1∧e3, e2∧e3. In dimension 3 every
    // 2-vector is decomposable, so its eigenvalues are the extreme curvatures.
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    Eigen::Matrix3d q;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            q(a, b) = r[idx4(3, pairs[a][0], pairs[a][1], pairs[b][0], pairs[b][1])];
    q = 0.5 * (q + q.transpose()).eval();
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(q).eigenvalues();
    return {ev(0), ev(2), true};
}

std::vector<double> covariant_antisym(const MetricJet& mj, const JetMatrix& t) {
    return covariant_antisym(christoffel(mj), t);
}

std::vector<double> covariant_antisym(const Christoffel& gamma, const JetMatrix& t) {
    const int n = gamma.n;
    if (t.dim() != n) throw PreconditionError("covariant_antisym: tensor and metric dimensions differ");
    if (t.order() < 1) throw PreconditionError("covariant_antisym: tensor must carry first derivatives");
    // D[(i, j, k)] = T_{ij;k}
    std::vector<double> d(static_cast<std::size_t>(n * n * n), 0.0);
    std::vector<Eigen::MatrixXd> dt;
    for (int k = 0; k < n; ++k) dt.push_back(t.partial(k));
    const Eigen::MatrixXd tv = t.value();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = dt[static_cast<std::size_t>(k)](i, j);
                for (int m = 0; m < n; ++m) s -= gamma.value(m, k, i) * tv(m, j) + gamma.value(m, k, j) * tv(i, m);
                d[idx3(n, i, j, k)] = s;
            }
    std::vector<double> out(d.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out[idx3(n, i, j, k)] = d[idx3(n, i, j, k)] - d[idx3(n, i, k, j)];
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// ---------------------------------------------------------------------------

namespace {

struct GaussRule {
    std::vector<double> nodes;   // on [0, 1]
    std::vector<double> weights; // sum to 1
};

GaussRule gauss_rule(int q) {
    if (q < 1 || q > 16) throw PreconditionError("quadrature_nodes must lie in [1, 16]");
    GaussRule r;
    for (int i = 1; i <= q; ++i) {
        // Newton on the Legendre polynomial starting from the Chebyshev guess
        double x = std::cos(M_PI * (i - 0.25) / (q + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= q; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (q == 1) p0 = 1.0;
            dp = q * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes.push_back(0.5 * (1.0 - x));
        r.weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
    }
    return r;
}

double segment_length(const ChartMetric& metric, const ChartPoint& a, const std::vector<double>& b,
                      const GaussRule& rule) {
    const int n = a.dim();
    Eigen::VectorXd delta(n);
    for (int i = 0; i < n; ++i) delta(i) = b[static_cast<std::size_t>(i)] - a.coords[static_cast<std::size_t>(i)];
    double len = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        ChartPoint p{a.chart, a.coords};
        for (int i = 0; i < n; ++i) p.coords[static_cast<std::size_t>(i)] += rule.nodes[q] * delta(i);
        const Eigen::MatrixXd g = metric(p);
        len += rule.weights[q] * std::sqrt(std::max(0.0, delta.dot(g * delta)));
    }
    return len;
}

} // namespace

GeodesicGraph build_geodesic_graph(const ChartMetric& metric, int dim, int resolution, double chart_radius,
                                   const GraphOptions& opts) {
    if (dim < 1 || dim > kMaxJetVars) throw PreconditionError("build_geodesic_graph: dimension must lie in [1, 3]");
    if (resolution < 3) throw PreconditionError("build_geodesic_graph: resolution must be at least 3");
    if (chart_radius <= 1.0) throw PreconditionError("build_geodesic_graph: chart radius must exceed 1");
    const GaussRule rule = gauss_rule(opts.quadrature_nodes);
    const double h = 2.0 * chart_radius / (resolution - 1);

    GeodesicGraph gg;
    gg.dim = dim;
    gg.resolution = resolution;
    gg.chart_radius = chart_radius;

    auto lattice_index = [&](const std::vector<double>& y) {
        std::vector<int> k;
        for (double c : y) k.push_back(static_cast<int>(std::lround((c + chart_radius) / h)));
        return k;
    };

    std::map<std::vector<int>, std::uint32_t> lookup[2];
    for (Chart c : {Chart::North, Chart::South}) {
        for (auto& p : chart_grid(c, dim, resolution, chart_radius)) {
            lookup[static_cast<int>(c)][lattice_index(p.coords)] = static_cast<std::uint32_t>(gg.nodes.size());
            gg.nodes.push_back(std::move(p));
        }
    }

    // half of the stencil offsets (lexicographically positive) to visit each edge once
    std::vector<std::vector<int>> offsets;
    {
        std::vector<int> o(static_cast<std::size_t>(dim), -1);
        while (true) {
            const auto first = std::find_if(o.begin(), o.end(), [](int v) { return v != 0; });
            if (first != o.end() && *first > 0) offsets.push_back(o);
            int pos = dim - 1;
            while (pos >= 0 && ++o[static_cast<std::size_t>(pos)] == 2) o[static_cast<std::size_t>(pos--)] = -1;
            if (pos < 0) break;
        }
    }

    for (std::uint32_t a = 0; a < gg.nodes.size(); ++a) {
        const ChartPoint& p = gg.nodes[a];
        const auto& table = lookup[static_cast<int>(p.chart)];
        const auto base = lattice_index(p.coords);
        for (const auto& o : offsets) {
            auto k = base;
            for (int i = 0; i < dim; ++i) k[static_cast<std::size_t>(i)] += o[static_cast<std::size_t>(i)];
            const auto it = table.find(k);
            if (it == table.end()) continue;
            gg.edges.push_back({a, it->second, segment_length(metric, p, gg.nodes[it->second].coords, rule)});
        }
    }

    // overlap edges: a south node seen in north coordinates, joined to the
    // north lattice nodes within one stencil diagonal
    const double reach = h * std::sqrt(static_cast<double>(dim)) * (1.0 + 1e-9);
    const auto& north = lookup[static_cast<int>(Chart::North)];
    for (std::uint32_t a = 0; a < gg.nodes.size(); ++a) {
        const ChartPoint& p = gg.nodes[a];
        if (p.chart != Chart::South || p.radius() * chart_radius <= 1.0) continue;
        const ChartPoint q = chart_transition(p);
        const auto base = lattice_index(q.coords);
        std::vector<int> o(static_cast<std::size_t>(dim), -2);
        while (true) {
            auto k = base;
            for (int i = 0; i < dim; ++i) k[static_cast<std::size_t>(i)] += o[static_cast<std::size_t>(i)];
            const auto it = north.find(k);
            if (it != north.end()) {
                const auto& target = gg.nodes[it->second].coords;
                double d2 = 0.0;
                for (int i = 0; i < dim; ++i) {
                    const double d = target[static_cast<std::size_t>(i)] - q.coords[static_cast<std::size_t>(i)];
                    d2 += d * d;
                }
                if (std::sqrt(d2) <= reach) gg.edges.push_back({a, it->second, segment_length(metric, q, target, rule)});
            }
            int pos = dim - 1;
            while (pos >= 0 && ++o[static_cast<std::size_t>(pos)] == 3) o[static_cast<std::size_t>(pos--)] = -2;
            if (pos < 0) break;
        }
    }
    for (const auto& e : gg.edges)
        if (!(e.length > 0.0)) throw DomainError("build_geodesic_graph: nonpositive edge length");
    return gg;
}

namespace {

std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency(const GeodesicGraph& gg) {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(gg.nodes.size());
    for (const auto& e : gg.edges) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }
    return adj;
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj,
                             std::size_t source) {
    std::vector<double> dist(adj.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.emplace(0.0, static_cast<std::uint32_t>(source));
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist;
}

} // namespace

std::vector<double> shortest_paths(const GeodesicGraph& gg, std::size_t source) {
    if (source >= gg.nodes.size()) throw PreconditionError("shortest_paths: source out of range");
    return dijkstra(adjacency(gg), source);
}

DiameterEstimate diameter(const GeodesicGraph& gg) {
    if (gg.nodes.empty()) throw PreconditionError("diameter: empty graph");
    const auto adj = adjacency(gg);
    DiameterEstimate out;
    out.resolution = gg.resolution;
    out.nodes = gg.nodes.size();
    out.edges = gg.edges.size();

    auto eccentricity = [&](const std::vector<double>& dist) {
        double m = 0.0;
        for (double d : dist) {
            if (!std::isfinite(d)) throw DomainError("diameter: geodesic graph is disconnected");
            m = std::max(m, d);
        }
        return m;
    };

    if (gg.resolution <= 9) {
        for (std::size_t s = 0; s < gg.nodes.size(); ++s) out.value = std::max(out.value, eccentricity(dijkstra(adj, s)));
        out.landmarks = gg.nodes.size();
        return out;
    }

    // farthest-point landmarks seeded with the two chart centres
    std::vector<std::size_t> seeds;
    for (Chart c : {Chart::North, Chart::South}) {
        std::size_t best = gg.nodes.size();
        double r = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < gg.nodes.size(); ++i)
            if (gg.nodes[i].chart == c && gg.nodes[i].radius() < r) {
                r = gg.nodes[i].radius();
                best = i;
            }
        if (best < gg.nodes.size()) seeds.push_back(best);
    }
    const std::size_t target = std::min<std::size_t>(64, gg.nodes.size());
    std::vector<double> nearest(gg.nodes.size(), std::numeric_limits<double>::infinity());
    std::vector<bool> used(gg.nodes.size(), false);
    std::size_t count = 0;
    auto visit = [&](std::size_t s) {
        used[s] = true;
        ++count;
        const auto dist = dijkstra(adj, s);
        out.value = std::max(out.value, eccentricity(dist));
        for (std::size_t i = 0; i < dist.size(); ++i) nearest[i] = std::min(nearest[i], dist[i]);
    };
    for (std::size_t s : seeds)
        if (!used[s] && count < target) visit(s);
    while (count < target) {
        std::size_t far = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < nearest.size(); ++i)
            if (!used[i] && nearest[i] > best) {
                best = nearest[i];
                far = i;
            }
        visit(far);
    }
    out.landmarks = count;
    return out;
}

} // namespace isoembed
