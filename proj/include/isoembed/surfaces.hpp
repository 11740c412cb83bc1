#pragma once

// Closed convex hypersurfaces in R^{n+1} (n = 2, 3) parametrized over the
// stereographic charts, with their fundamental forms as jets.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/charts.hpp"
#include "isoembed/intrinsic.hpp"

namespace isoembed {

/// u(x̂) = constant + shift + linear·x̂ + gauge_weight·|x̂ ./ gauge_axes| on the
/// unit sphere. Each term has uγ + Hess u ≥ 0, so the graph X = x̂/u is convex
/// wherever u > 0. The gauge term alone is the ellipsoid with those semi-axes.
struct RadialProfile {
    double constant = 0.0;
    std::vector<double> linear;     ///< length n + 1 or empty
    std::vector<double> gauge_axes; ///< length n + 1 or empty
    double gauge_weight = 0.0;
    double shift = 0.0; ///< ε of the approximating family

    Jet evaluate(const std::vector<Jet>& xhat) const;
    double evaluate(const std::vector<double>& xhat) const;
};

struct Family {
    enum class Kind { RoundSphere, Ellipsoid, RadialGraph };

    Kind kind = Kind::RoundSphere;
    int dim = 3;
    double radius = 1.0;       ///< RoundSphere
    std::vector<double> axes;  ///< Ellipsoid, n + 1 semi-axes
    RadialProfile profile;     ///< RadialGraph

    static Family round_sphere(int dim, double radius);
    static Family ellipsoid(std::vector<double> axes);
    static Family radial_graph(int dim, RadialProfile profile);

    std::string describe() const;
};

/// Throws PreconditionError unless the family parameters satisfy their invariants.
void validate(const Family& f);

/// The graph family X^ε = x̂ / (u + ε). Requires ε > 0 and a RadialGraph base.
Family epsilon_family(const Family& base, double eps);

struct SurfacePoint {
    ChartPoint point;
    int dim = 0;
    std::vector<Jet> X;   ///< order p (5 by default)
    std::vector<Jet> N;   ///< outer unit normal, order p − 1
    MetricJet metric;     ///< order p − 1
    JetMatrix chi;        ///< order p − 2
    Jet rho;              ///< ½ X·X, order p

    Eigen::VectorXd position() const;
    Eigen::VectorXd normal() const;
    double support() const; ///< X·N
    double rho_value() const { return rho.value(); }
    double mean_curvature() const;   ///< H = g^{ij} χ_ij
    double scalar_extrinsic() const; ///< H² − tr χ², the Gauss-equation R
    /// Principal curvatures (eigenvalues of g⁻¹χ), ascending.
    Eigen::VectorXd principal_curvatures() const;
    /// χ_ij χ^{ij}
    double chi_norm2() const;
};

/// Evaluates a family at a chart point. Sphere and ellipsoid use X = (a_i x̂_i);
/// radial graphs use X = x̂/u with g and χ from the graph formulas
///   g = ρ²γ + dρ⊗dρ,  χ = (uγ + Hess_γ u) / (u √(u² + |∇u|²_γ)),  ρ = 1/u.
/// `order` is the jet order of X; g and χ carry one and two orders less.
SurfacePoint evaluate(const Family& family, const ChartPoint& p, int order = 5);

/// Same quantities computed from the embedding alone (g = ∂X·∂X, χ = −∂²X·N);
/// the cross-check path for the graph formulas.
SurfacePoint evaluate_embedded(const Family& family, const ChartPoint& p, int order = 5);

/// g at a chart point from first derivatives only (cheap, for edge lengths).
Eigen::MatrixXd metric_at(const Family& family, const ChartPoint& p);

/// max |R_ijkl − (χ_ik χ_jl − χ_il χ_jk)|, R from the metric jets.
double gauss_residual(const SurfacePoint& sp);
/// max |χ_{ij;k} − χ_{ik;j}|
double codazzi_residual(const SurfacePoint& sp);
/// max |∂_i X · ∂_j X − g_ij|
double isometry_residual(const SurfacePoint& sp);
/// max |∂_i∂_j X − Γ^k_ij ∂_k X + χ_ij N|
double normal_residual(const SurfacePoint& sp);

struct SupportResiduals {
    double hessian = 0.0;  ///< ‖ρ_{;ij} − g_ij + (X·N)χ_ij‖_∞
    double gradient = 0.0; ///< |2ρ − |∇ρ|² − (X·N)²|
    /// |σ₂(λ)^{1/2} − 2^{−1/2}(X·N)R^{1/2}|; NaN when R ≤ 0
    double elliptic = 0.0;
    bool gamma2 = false;   ///< σ₁(λ) > 0 and σ₂(λ) > 0
    Eigen::VectorXd lambda; ///< eigenvalues of g − ∇²ρ relative to g
};

SupportResiduals support_identities(const SurfacePoint& sp);

/// Inverse stereographic projection of a unit vector into the given chart.
ChartPoint chart_coords(const std::vector<double>& xhat, Chart chart);

/// The chart point of `family` whose image is closest in direction to `target`
/// (exact for sphere/ellipsoid/graph families, which are star-shaped).
ChartPoint locate(const Family& family, const Eigen::VectorXd& target, Chart chart);

/// `count` chart points, uniform in the chart ball of the given radius,
/// alternating charts.
std::vector<ChartPoint> random_chart_points(int dim, std::size_t count, std::uint64_t seed,
                                            double radius = kDefaultChartRadius);

} // namespace isoembed
