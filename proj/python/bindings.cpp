#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isoembed/bounds.hpp"
#include "isoembed/cli.hpp"
#include "isoembed/embedsolve.hpp"
#include "isoembed/intrinsic.hpp"
#include "isoembed/matmap.hpp"
#include "isoembed/surfaces.hpp"
#include "isoembed/symfun.hpp"

namespace py = pybind11;
using namespace isoembed;

namespace {

ChartPoint chart_point(const std::string& chart, const std::vector<double>& coords) {
    return {chart_from_string(chart), coords};
}

std::vector<ChartPoint> chart_points(const std::vector<std::pair<std::string, std::vector<double>>>& pts) {
    std::vector<ChartPoint> out;
    for (const auto& [c, y] : pts) out.push_back(chart_point(c, y));
    return out;
}

py::dict point_dict(const SurfacePoint& sp) {
    const CurvatureState cs = curvature(sp.metric);
    const SupportResiduals s = support_identities(sp);
    py::dict d;
    d["position"] = sp.position();
    d["normal"] = sp.normal();
    d["metric"] = Eigen::MatrixXd(sp.metric.g.value());
    d["chi"] = Eigen::MatrixXd(sp.chi.value());
    d["mean_curvature"] = sp.mean_curvature();
    d["principal_curvatures"] = sp.principal_curvatures();
    d["support"] = sp.support();
    d["scalar_curvature"] = cs.scalar;
    d["laplacian_scalar"] = cs.laplacian_scalar;
    d["ricci"] = cs.ricci.matrix();
    d["sectional_min"] = cs.sectional_min;
    d["sectional_max"] = cs.sectional_max;
    d["gauss_residual"] = gauss_residual(sp);
    d["codazzi_residual"] = codazzi_residual(sp);
    d["support_residuals"] = py::make_tuple(s.hessian, s.gradient, s.elliptic);
    return d;
}

py::dict bound_dict(const BoundReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["slack"] = r.slack;
    d["pass"] = r.pass;
    d["constants"] = r.constants;
    return d;
}

} // namespace

PYBIND11_MODULE(_isoembed, m) {
    m.doc() = "Convex hypersurfaces: curvature bounds, the contracted Gauss solve and reconstruction";
    m.attr("__version__") = kVersion;

    static py::exception<PreconditionError> precondition(m, "PreconditionError", PyExc_ValueError);
    static py::exception<ConfigError> config(m, "ConfigError", PyExc_ValueError);
    static py::exception<DomainError> domain(m, "DomainError", PyExc_ArithmeticError);
    static py::exception<EmbeddabilityObstruction> obstruction(m, "EmbeddabilityObstruction", domain.ptr());
    static py::exception<ConvergenceError> convergence(m, "ConvergenceError", PyExc_RuntimeError);
    // most derived first
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const EmbeddabilityObstruction& e) {
            py::set_error(obstruction, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain, e.what());
        } catch (const PreconditionError& e) {
            py::set_error(precondition, e.what());
        } catch (const ConfigError& e) {
            py::set_error(config, e.what());
        } catch (const ConvergenceError& e) {
            py::set_error(convergence, e.what());
        }
    });

    // symmetric functions and the matrix map
    m.def("sigma", [](int k, const std::vector<double>& x) { return sigma(k, x); }, py::arg("k"), py::arg("x"));
    m.def("sigma_all", [](const std::vector<double>& x) { return sigma_all(x); }, py::arg("x"));
    m.def("det_gn", [](const std::vector<double>& x) { return det_Gn_direct(x); }, py::arg("x"));
    m.def("phi", [](const Eigen::MatrixXd& a) { return phi(SymMatrix(a)).matrix(); }, py::arg("a"));
    m.def(
        "phi_inverse",
        [](const Eigen::MatrixXd& b, const std::string& method, double tol) {
            PhiInverseOptions opts;
            opts.tol = tol;
            if (method == "auto") opts.method = PhiInverseMethod::Auto;
            else if (method == "closed_form") opts.method = PhiInverseMethod::ClosedForm;
            else if (method == "newton") opts.method = PhiInverseMethod::Newton;
            else throw PreconditionError("method must be auto, closed_form or newton");
            return phi_inverse(SymMatrix(b), opts).matrix();
        },
        py::arg("b"), py::arg("method") = "auto", py::arg("tol") = 1e-13);
    m.def(
        "cone_report",
        [](const Eigen::MatrixXd& b) {
            const ConeReport r = cone_report(SymMatrix(b));
            py::dict d;
            d["member"] = r.member();
            d["is_spd"] = r.is_spd;
            d["eps_gap"] = r.eps_gap;
            d["eigenvalues"] = r.eigenvalues;
            return d;
        },
        py::arg("b"));

    // families
    py::class_<Family>(m, "Family")
        .def_static("round_sphere", &Family::round_sphere, py::arg("dim"), py::arg("radius") = 1.0)
        .def_static("ellipsoid", &Family::ellipsoid, py::arg("axes"))
        .def_static(
            "radial_graph",
            [](int dim, double constant, std::vector<double> linear, std::vector<double> gauge_axes,
               double gauge_weight, double shift) {
                RadialProfile p;
                p.constant = constant;
                p.linear = std::move(linear);
                p.gauge_axes = std::move(gauge_axes);
                p.gauge_weight = gauge_weight;
                p.shift = shift;
                return Family::radial_graph(dim, p);
            },
            py::arg("dim"), py::arg("constant"), py::arg("linear") = std::vector<double>{},
            py::arg("gauge_axes") = std::vector<double>{}, py::arg("gauge_weight") = 0.0, py::arg("shift") = 0.0)
        .def_readonly("dim", &Family::dim)
        .def("epsilon", [](const Family& f, double eps) { return epsilon_family(f, eps); }, py::arg("eps"))
        .def("describe", &Family::describe)
        .def("__repr__", &Family::describe);

    m.def(
        "evaluate",
        [](const Family& f, const std::string& chart, const std::vector<double>& coords) {
            return point_dict(evaluate(f, chart_point(chart, coords)));
        },
        py::arg("family"), py::arg("chart"), py::arg("coords"));
    m.def(
        "random_chart_points",
        [](int dim, std::size_t count, std::uint64_t seed) {
            std::vector<std::pair<std::string, std::vector<double>>> out;
            for (const auto& p : random_chart_points(dim, count, seed)) out.emplace_back(to_string(p.chart), p.coords);
            return out;
        },
        py::arg("dim"), py::arg("count"), py::arg("seed") = 0);

    // bounds
    m.def(
        "bounds",
        [](const Family& f, int resolution, py::object diameter) {
            const SurfaceGrid grid = surface_grid(f, resolution);
            py::dict d;
            d["weyl"] = bound_dict(weyl_report(grid));
            if (f.dim >= 3) d["c2bound"] = bound_dict(c2bound_report(grid));
            d["second_deriv"] = bound_dict(second_deriv_report(grid));
            if (!diameter.is_none()) d["guanli"] = bound_dict(guanli_report(grid, diameter.cast<double>()));
            return d;
        },
        py::arg("family"), py::arg("resolution") = 9, py::arg("diameter") = py::none());
    m.def(
        "diameter",
        [](const Family& f, int resolution) { return family_diameter(f, resolution).value; },
        py::arg("family"), py::arg("resolution") = 17);

    // intrinsic data to χ
    m.def(
        "solve_contracted_gauss",
        [](const Family& f, const std::vector<std::pair<std::string, std::vector<double>>>& pts,
           double perturbation, py::object threshold) {
            const auto points = chart_points(pts);
            IntrinsicField field = intrinsic_field(f, points);
            if (perturbation != 0.0) field = perturb_ricci(field, perturbation);
            const ChiField chi = solve_contracted_gauss(field);
            const double theta = threshold.is_none() ? calibrate_codazzi_threshold(calibration_families(), points)
                                                     : threshold.cast<double>();
            const auto v = embeddability_check(field, chi, theta);
            std::vector<Eigen::MatrixXd> mats;
            std::vector<double> gaps;
            for (const auto& p : chi.points) {
                mats.push_back(p.chi.value());
                gaps.push_back(p.eps_gap);
            }
            py::dict d;
            d["chi"] = mats;
            d["eps_gap"] = gaps;
            d["max_residual"] = chi.max_residual;
            d["embeddable"] = v.embeddable;
            d["threshold"] = theta;
            d["codazzi_residual"] = v.max_residual;
            return d;
        },
        py::arg("family"), py::arg("points"), py::arg("perturbation") = 0.0, py::arg("threshold") = py::none());

    m.def(
        "reconstruct",
        [](const Family& f, const std::string& chart, int half_width, double spacing, double step,
           const std::string& chi, double perturbation) {
            PathPlan plan;
            plan.chart = chart_from_string(chart);
            plan.half_width = half_width;
            plan.spacing = spacing;
            plan.step = step;
            const ChiSource src = chi == "embedded" ? ChiSource::Embedded : ChiSource::Solved;
            if (chi != "embedded" && chi != "solved") throw PreconditionError("chi must be embedded or solved");
            const Reconstruction rec = reconstruct(family_source(f, plan.chart, src, perturbation), plan);
            std::vector<Eigen::VectorXd> truth;
            for (const auto& y : rec.coords) truth.push_back(evaluate(f, {plan.chart, y}, 2).position());
            const RigidAlignment fit = align_rigid(rec.X, truth);
            Eigen::MatrixXd x(static_cast<Eigen::Index>(rec.X.size()), rec.X.front().size());
            for (std::size_t i = 0; i < rec.X.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = rec.X[i].transpose();
            py::dict d;
            d["coords"] = rec.coords;
            d["X"] = x;
            d["rms"] = fit.rms;
            d["holonomy_residual"] = rec.holonomy_residual;
            d["isometry_residual"] = rec.isometry_residual;
            return d;
        },
        py::arg("family"), py::arg("chart") = "north", py::arg("half_width") = 2, py::arg("spacing") = 0.1,
        py::arg("step") = 1e-2, py::arg("chi") = "solved", py::arg("perturbation") = 0.0);

    m.def(
        "align_rigid",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
            if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("align_rigid: shape mismatch");
            std::vector<Eigen::VectorXd> va, vb;
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                va.push_back(a.row(i).transpose());
                vb.push_back(b.row(i).transpose());
            }
            const RigidAlignment r = align_rigid(va, vb);
            return py::make_tuple(r.Q, r.t, r.rms, r.unstable);
        },
        py::arg("a"), py::arg("b"));

    // the CLI commands, with configs and reports as JSON text
    m.def(
        "_run_json",
        [](const std::string& command, const std::string& config) {
            const RunConfig c = parse_config(nlohmann::json::parse(config), command);
            return run_command(command, c).dump();
        },
        py::arg("command"), py::arg("config"));
    m.def(
        "_strip_timing", [](const std::string& report) { return strip_timing(nlohmann::json::parse(report)).dump(); },
        py::arg("report"));
    m.def(
        "format_report", [](const std::string& report) { return format_report(nlohmann::json::parse(report)); },
        py::arg("report"));
}
