#pragma once

// Intrinsic geometry from metric jets: Christoffel symbols, curvature,
// ΔR, sectional-curvature extremes, covariant derivatives of symmetric
// 2-tensors, and a graph estimate of the geodesic diameter.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/charts.hpp"
#include "isoembed/jets.hpp"
#include "isoembed/matmap.hpp"

namespace isoembed {

/// n × n grid of jets stored row-major; used for g, χ, Ricci.
class JetMatrix {
  public:
    JetMatrix() = default;
    JetMatrix(int n, const Jet& fill) : n_(n), data_(static_cast<std::size_t>(n * n), fill) {}

    int dim() const noexcept { return n_; }
    int order() const;
    Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
    const Jet& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }

    Eigen::MatrixXd value() const;
    /// ∂_var of every entry, as plain matrix.
    Eigen::MatrixXd partial(int var) const;
    JetMatrix truncated(int order) const;

  private:
    int n_ = 0;
    std::vector<Jet> data_;
};

/// Metric coefficients g_ij with their derivatives at one chart point.
struct MetricJet {
    JetMatrix g;

    int dim() const noexcept { return g.dim(); }
    int order() const { return g.order(); }
};

/// Throws DomainError unless g is symmetric positive definite at the point.
void validate_metric(const MetricJet& mj);

JetMatrix inverse(const JetMatrix& m);

/// Γ^k_ij, indexed [k][i][j], as jets of one order below the metric.
struct Christoffel {
    int n = 0;
    std::vector<Jet> data;

    const Jet& operator()(int k, int i, int j) const {
        return data[static_cast<std::size_t>((k * n + i) * n + j)];
    }
    double value(int k, int i, int j) const { return (*this)(k, i, j).value(); }
};

Christoffel christoffel(const MetricJet& mj);

/// R_ijkl = g(R(∂_i, ∂_j)∂_l, ∂_k), so the unit sphere has
/// R_ijkl = g_ik g_jl − g_il g_jk. Jets are two orders below the metric.
std::vector<Jet> riemann_jets(const MetricJet& mj);

/// Ricci tensor R_jl = R^i_{ijl} as jets two orders below the metric.
JetMatrix ricci_jets(const MetricJet& mj);

struct CurvatureState {
    int dim = 0;
    std::vector<double> riemann; ///< R_ijkl flattened ((i·n + j)·n + k)·n + l
    SymMatrix ricci;
    double scalar = 0.0;
    /// ΔR; NaN when the metric jet has order < 4.
    double laplacian_scalar = std::numeric_limits<double>::quiet_NaN();
    double sectional_min = 0.0;
    double sectional_max = 0.0;
    double ricci_norm = 0.0; ///< (R_ij R^ij)^{1/2}

    double riemann_at(int i, int j, int k, int l) const {
        return riemann[static_cast<std::size_t>(((i * dim + j) * dim + k) * dim + l)];
    }
};

CurvatureState curvature(const MetricJet& mj);

/// Largest violation of R_ijkl + R_jkil + R_kijl = 0 (first Bianchi identity).
double bianchi_residual(const CurvatureState& cs);

/// K(u, v) for tangent vectors in coordinates (need not be orthonormal).
double sectional_curvature(const CurvatureState& cs, const Eigen::MatrixXd& g, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v);

struct SectionalExtremes {
    double min = 0.0;
    double max = 0.0;
    bool certified = false; ///< exact (curvature operator) rather than sampled
};

/// Exact for n ≤ 3 via the curvature operator on 2-vectors; otherwise
/// random planes followed by coordinate-wise local refinement.
SectionalExtremes sectional_extremes(const CurvatureState& cs, const MetricJet& mj, int samples = 0,
                                     std::uint64_t seed = 0);

/// The sampled estimate alone (used as a cross-check of the exact path).
SectionalExtremes sectional_extremes_sampled(const CurvatureState& cs, const MetricJet& mj, int samples,
                                             std::uint64_t seed);

/// g-orthonormal frame: columns e_a with eᵀ g e = I (e = L^{-T}, g = L Lᵀ).
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g);

/// T_{ij;k} − T_{ik;j} at the point, flattened (i·n + j)·n + k.
/// T must carry at least first derivatives.
std::vector<double> covariant_antisym(const MetricJet& mj, const JetMatrix& t);
std::vector<double> covariant_antisym(const Christoffel& gamma, const JetMatrix& t);

double max_abs(const std::vector<double>& v);

// ---------------------------------------------------------------------------
// Geodesic diameter

/// Metric coefficients at an arbitrary chart point.
using ChartMetric = std::function<Eigen::MatrixXd(const ChartPoint&)>;

struct GeodesicEdge {
    std::uint32_t a, b;
    double length;
};

struct GeodesicGraph {
    int dim = 0;
    int resolution = 0;
    double chart_radius = 0.0;
    std::vector<ChartPoint> nodes;
    std::vector<GeodesicEdge> edges;
};

struct GraphOptions {
    /// Gauss–Legendre nodes per edge for the length integral (1 = midpoint rule).
    int quadrature_nodes = 1;
};

/// Lattice graph over both stereographic charts with the full
/// (3^n − 1)-neighbour stencil, plus edges linking south nodes in the overlap
/// to nearby north nodes. Edge length is the length of the coordinate segment.
GeodesicGraph build_geodesic_graph(const ChartMetric& metric, int dim, int resolution, double chart_radius,
                                   const GraphOptions& opts = {});

struct DiameterEstimate {
    double value = 0.0;
    int resolution = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t landmarks = 0;
};

/// Single-source shortest path lengths from `source`.
std::vector<double> shortest_paths(const GeodesicGraph& gg, std::size_t source);

/// Max eccentricity over landmarks: every node when resolution ≤ 9, else 64
/// farthest-point samples seeded at the chart centres.
DiameterEstimate diameter(const GeodesicGraph& gg);

} // namespace isoembed
