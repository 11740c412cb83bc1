#include "isoembed/bounds.hpp"

#include <cmath>
#include <limits>

namespace isoembed {

namespace {

GridPoint make_point(const Family& family, const ChartPoint& p) {
    GridPoint gp{evaluate(family, p), {}};
    gp.curvature = curvature(gp.surface.metric);
    return gp;
}

void require_points(const SurfaceGrid& grid, const char* who) {
    if (grid.points.empty()) throw PreconditionError(std::string(who) + ": empty grid");
}

BoundReport start(const SurfaceGrid& grid, const char* name) {
    BoundReport r;
    r.name = name;
    r.resolution = grid.resolution;
    r.points = grid.points.size();
    return r;
}

std::string where(const ChartPoint& p) {
    std::string s = to_string(p.chart) + " (";
    for (std::size_t i = 0; i < p.coords.size(); ++i) s += (i ? ", " : "") + std::to_string(p.coords[i]);
    return s + ")";
}

} // namespace

SurfaceGrid surface_grid(const Family& family, int resolution, double chart_radius) {
    validate(family);
    SurfaceGrid grid{family, resolution, chart_radius, {}};
    for (const auto& p : sphere_grid(family.dim, resolution, chart_radius)) grid.points.push_back(make_point(family, p));
    return grid;
}

SurfaceGrid surface_samples(const Family& family, const std::vector<ChartPoint>& points) {
    validate(family);
    SurfaceGrid grid{family, 0, kDefaultChartRadius, {}};
    for (const auto& p : points) grid.points.push_back(make_point(family, p));
    return grid;
}

DiameterEstimate family_diameter(const Family& family, int resolution, double chart_radius, const GraphOptions& opts) {
    validate(family);
    const auto gg = build_geodesic_graph([&family](const ChartPoint& p) { return metric_at(family, p); }, family.dim,
                                         resolution, chart_radius, opts);
    return diameter(gg);
}

void finalize(BoundReport& r) {
    r.slack = r.rhs - r.lhs;
    r.tol = 1e-7 * std::max(1.0, std::abs(r.rhs));
    r.pass = r.slack >= -r.tol;
}

double guanli_constant(int n) {
    if (n < 2) throw PreconditionError("guanli_constant: n must be at least 2");
    return 4.0 / ((n - 1.0) * (n - 1.0)) * std::exp((n - 1.0) / 4.0);
}

double c2_constant(int n) {
    if (n < 3) throw PreconditionError("c2_constant: n must be at least 3");
    return n / (2.0 * std::sqrt((n - 1.0) * (n - 2.0)));
}

BoundReport weyl_report(const SurfaceGrid& grid) {
    require_points(grid, "weyl_report");
    BoundReport r = start(grid, "weyl");
    r.lhs = -std::numeric_limits<double>::infinity();
    r.rhs = -std::numeric_limits<double>::infinity();
    for (const auto& gp : grid.points) {
        const double big_r = gp.curvature.scalar;
        if (!(big_r > 0.0))
            throw DomainError("weyl_report: scalar curvature is not positive at " + where(gp.surface.point));
        const double h = gp.surface.mean_curvature();
        if (h * h > r.lhs) {
            r.lhs = h * h;
            r.lhs_argmax = gp.surface.point;
        }
        const double right = 2.0 * big_r - gp.curvature.laplacian_scalar / big_r;
        if (right > r.rhs) {
            r.rhs = right;
            r.rhs_argmax = gp.surface.point;
        }
    }
    finalize(r);
    return r;
}

BoundReport guanli_report(const SurfaceGrid& grid, double d) {
    require_points(grid, "guanli_report");
    if (!(d > 0.0)) throw PreconditionError("guanli_report: diameter must be positive");
    const int n = grid.dim();
    const double c = guanli_constant(n);
    BoundReport r = start(grid, "guanli");
    r.lhs = -std::numeric_limits<double>::infinity();
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& gp : grid.points) {
        const double h = gp.surface.mean_curvature();
        if (h * h > r.lhs) {
            r.lhs = h * h;
            r.lhs_argmax = gp.surface.point;
        }
        const double big_r = gp.curvature.scalar;
        const double inner = 2.0 * big_r * big_r - gp.curvature.laplacian_scalar +
                             (n - 1.0) * (n - 1.0) * big_r / (64.0 * d * d);
        if (inner > sup) {
            sup = inner;
            r.rhs_argmax = gp.surface.point;
        }
    }
    r.rhs = c * d * d * sup;
    r.constants = {{"C", c}, {"d", d}};
    finalize(r);
    return r;
}

BoundReport c2bound_report(const SurfaceGrid& grid) {
    require_points(grid, "c2bound_report");
    double kappa = std::numeric_limits<double>::infinity(), lambda = 0.0;
    for (const auto& gp : grid.points) {
        kappa = std::min(kappa, gp.curvature.sectional_min);
        lambda = std::max(lambda, gp.curvature.ricci_norm);
    }
    return c2bound_report(grid, kappa, lambda);
}

BoundReport c2bound_report(const SurfaceGrid& grid, double kappa, double lambda) {
    require_points(grid, "c2bound_report");
    const int n = grid.dim();
    if (n < 3) throw PreconditionError("c2bound_report: requires n >= 3");
    if (!(kappa > 0.0)) throw DomainError("c2bound_report: least sectional curvature is not positive");
    const double cn = c2_constant(n);
    BoundReport r = start(grid, "c2bound");
    for (const auto& gp : grid.points) {
        const double norm = std::sqrt(gp.surface.chi_norm2());
        if (!r.lhs_argmax || norm > r.lhs) {
            r.lhs = norm;
            r.lhs_argmax = gp.surface.point;
        }
        if (!r.rhs_argmax || gp.curvature.ricci_norm >= lambda) r.rhs_argmax = gp.surface.point;
    }
    r.rhs = cn * lambda / std::sqrt(kappa);
    r.constants = {{"C_n", cn}, {"kappa", kappa}, {"Lambda", lambda}};
    finalize(r);
    return r;
}

BoundReport second_deriv_report(const SurfaceGrid& grid) {
    require_points(grid, "second_deriv_report");
    BoundReport r = start(grid, "second_deriv");
    double sup_h2 = -std::numeric_limits<double>::infinity();
    double pointwise = std::numeric_limits<double>::infinity();
    bool positive_r = true;
    r.lhs = -std::numeric_limits<double>::infinity();
    for (const auto& gp : grid.points) {
        const double c2 = gp.surface.chi_norm2();
        const double h = gp.surface.mean_curvature();
        if (c2 > r.lhs) {
            r.lhs = c2;
            r.lhs_argmax = gp.surface.point;
        }
        if (h * h > sup_h2) {
            sup_h2 = h * h;
            r.rhs_argmax = gp.surface.point;
        }
        pointwise = std::min(pointwise, h * h - c2);
        positive_r = positive_r && gp.curvature.scalar > 0.0;
    }
    r.rhs = sup_h2;
    r.constants = {{"sup_H2", sup_h2}, {"pointwise_min_slack", pointwise}};
    if (positive_r) {
        const BoundReport w = weyl_report(grid);
        r.constants["weyl_rhs"] = w.rhs;
        if (w.rhs < r.rhs) {
            r.rhs = w.rhs;
            r.rhs_argmax = w.rhs_argmax;
        }
    }
    finalize(r);
    return r;
}

SupportFloor support_floor(const SurfaceGrid& grid, std::optional<Eigen::VectorXd> origin) {
    require_points(grid, "support_floor");
    SupportFloor out;
    if (origin) {
        out.origin = *origin;
    } else {
        out.origin = Eigen::VectorXd::Zero(grid.dim() + 1);
        for (const auto& gp : grid.points) out.origin += gp.surface.position();
        out.origin /= static_cast<double>(grid.points.size());
    }
    out.value = std::numeric_limits<double>::infinity();
    for (const auto& gp : grid.points) {
        const double s = (gp.surface.position() - out.origin).dot(gp.surface.normal());
        if (s < out.value) {
            out.value = s;
            out.argmin = gp.surface.point;
        }
    }
    if (!(out.value > 0.0)) throw DomainError("support_floor: origin is not inside the body (floor <= 0)");
    return out;
}

} // namespace isoembed
