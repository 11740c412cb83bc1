#pragma once

// A priori curvature estimates for convex hypersurfaces evaluated as sups
// over a chart grid.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "isoembed/intrinsic.hpp"
#include "isoembed/surfaces.hpp"

namespace isoembed {

struct GridPoint {
    SurfacePoint surface;
    CurvatureState curvature;
};

struct SurfaceGrid {
    Family family;
    int resolution = 0;
    double chart_radius = kDefaultChartRadius;
    std::vector<GridPoint> points;

    int dim() const { return family.dim; }
};

/// Both chart lattices of the family (see chart_grid).
SurfaceGrid surface_grid(const Family& family, int resolution, double chart_radius = kDefaultChartRadius);
/// Arbitrary chart points, e.g. random samples.
SurfaceGrid surface_samples(const Family& family, const std::vector<ChartPoint>& points);

/// Geodesic diameter of the family's induced metric on the two-chart graph.
DiameterEstimate family_diameter(const Family& family, int resolution, double chart_radius = kDefaultChartRadius,
                                 const GraphOptions& opts = {});

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; ///< rhs − lhs
    double tol = 0.0;
    bool pass = false;
    std::optional<ChartPoint> lhs_argmax;
    std::optional<ChartPoint> rhs_argmax;
    int resolution = 0;
    std::size_t points = 0;
    std::map<std::string, double> constants;
};

/// tol = 1e−7·max(1, |rhs|), pass ⇔ slack ≥ −tol
void finalize(BoundReport& r);

/// C = 4(n − 1)^{−2} e^{(n−1)/4}
double guanli_constant(int n);
/// C_n = n / (2√((n − 1)(n − 2)))
double c2_constant(int n);

/// sup H² ≤ sup(2R − ΔR/R). Requires R > 0 at every point.
BoundReport weyl_report(const SurfaceGrid& grid);

/// sup H² ≤ C d² sup(2R² − ΔR + (n − 1)² R / (64 d²)).
BoundReport guanli_report(const SurfaceGrid& grid, double d);

/// sup ‖χ‖ ≤ C_n Λ κ^{−1/2} with κ the least sectional curvature and Λ = sup |Ric|.
BoundReport c2bound_report(const SurfaceGrid& grid);
BoundReport c2bound_report(const SurfaceGrid& grid, double kappa, double lambda);

/// sup χ_ij χ^{ij} ≤ sup H² (and ≤ the Weyl right side when R > 0).
BoundReport second_deriv_report(const SurfaceGrid& grid);

struct SupportFloor {
    double value = 0.0;
    ChartPoint argmin;
    Eigen::VectorXd origin;
};

/// min over the grid of (X − X₀)·N; X₀ defaults to the centroid of the grid.
SupportFloor support_floor(const SurfaceGrid& grid, std::optional<Eigen::VectorXd> origin = std::nullopt);

} // namespace isoembed
