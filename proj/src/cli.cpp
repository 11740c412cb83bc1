#include "isoembed/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "isoembed/bounds.hpp"

namespace isoembed {

using nlohmann::json;

namespace {

const std::vector<std::string> kVerifyChecks{"weyl",          "guanli",           "c2bound",           "second-deriv",
                                             "gauss-residual", "codazzi-residual", "support-identities"};
const std::vector<std::string> kSolveChecks{"contracted-gauss", "embeddability", "truth"};
const std::vector<std::string> kReconstructChecks{"rms", "holonomy", "isometry"};
const std::vector<std::string> kFamilyChecks{"min-eig", "monotone", "linear"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json point_json(const ChartPoint& p) { return {{"chart", to_string(p.chart)}, {"coords", p.coords}}; }

template <typename T>
T get(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

json bound_json(const BoundReport& r) {
    json j{{"name", r.name},   {"lhs", r.lhs},           {"rhs", r.rhs},       {"slack", r.slack},
           {"tol", r.tol},     {"pass", r.pass},         {"resolution", r.resolution},
           {"points", r.points}, {"constants", r.constants}};
    if (r.lhs_argmax) j["lhs_argmax"] = point_json(*r.lhs_argmax);
    if (r.rhs_argmax) j["rhs_argmax"] = point_json(*r.rhs_argmax);
    return j;
}

// residual-style check: lhs ≤ rhs
BoundReport residual_report(const std::string& name, double worst, const ChartPoint& where, double bound,
                            const SurfaceGrid& grid) {
    BoundReport r;
    r.name = name;
    r.lhs = worst;
    r.rhs = bound;
    r.lhs_argmax = where;
    r.resolution = grid.resolution;
    r.points = grid.points.size();
    r.slack = r.rhs - r.lhs;
    r.tol = 0.0;
    r.pass = r.lhs <= r.rhs;
    return r;
}

bool wanted(const RunConfig& c, const std::string& name) {
    return std::find(c.checks.begin(), c.checks.end(), name) != c.checks.end();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<ChartPoint> config_points(const RunConfig& c, int dim) {
    auto pts = sphere_grid(dim, c.resolution, c.chart_radius);
    if (c.samples > 0) {
        const auto extra = random_chart_points(dim, static_cast<std::size_t>(c.samples), c.seed,
                                               std::min(c.chart_radius, kDefaultChartRadius));
        pts.insert(pts.end(), extra.begin(), extra.end());
    }
    return pts;
}

json run_verify(const RunConfig& c) {
    SurfaceGrid grid = surface_samples(c.family, config_points(c, c.family.dim));
    grid.resolution = c.resolution;
    grid.chart_radius = c.chart_radius;
    json checks = json::array();
    auto timed = [&](const std::string& name, auto&& fn) {
        if (!wanted(c, name)) return;
        const auto t0 = Clock::now();
        json j = fn();
        j["name"] = name;
        j["wall_time_s"] = seconds_since(t0);
        checks.push_back(std::move(j));
    };
    timed("weyl", [&] { return bound_json(weyl_report(grid)); });
    timed("guanli", [&] {
        const DiameterEstimate d = family_diameter(c.family, c.diameter_resolution, c.chart_radius);
        json j = bound_json(guanli_report(grid, d.value));
        j["diameter"] = {{"value", d.value},
                         {"resolution", d.resolution},
                         {"nodes", d.nodes},
                         {"edges", d.edges},
                         {"landmarks", d.landmarks}};
        return j;
    });
    timed("c2bound", [&] {
        if (c.family.dim < 3) return json{{"pass", true}, {"skipped", "requires n >= 3"}};
        return bound_json(c2bound_report(grid));
    });
    timed("second-deriv", [&] { return bound_json(second_deriv_report(grid)); });
    timed("gauss-residual", [&] {
        double worst = 0.0;
        ChartPoint at = grid.points.front().surface.point;
        for (const auto& gp : grid.points) {
            const double r = gauss_residual(gp.surface);
            if (r > worst) {
                worst = r;
                at = gp.surface.point;
            }
        }
        return bound_json(residual_report("gauss-residual", worst, at, c.tolerances.residual, grid));
    });
    timed("codazzi-residual", [&] {
        double worst = 0.0;
        ChartPoint at = grid.points.front().surface.point;
        for (const auto& gp : grid.points) {
            const double r = codazzi_residual(gp.surface);
            if (r > worst) {
                worst = r;
                at = gp.surface.point;
            }
        }
        return bound_json(residual_report("codazzi-residual", worst, at, c.tolerances.residual, grid));
    });
    timed("support-identities", [&] {
        double worst = 0.0;
        bool gamma2 = true;
        std::size_t not_applicable = 0;
        ChartPoint at = grid.points.front().surface.point;
        for (const auto& gp : grid.points) {
            const SupportResiduals s = support_identities(gp.surface);
            double r = std::max(s.hessian, s.gradient);
            if (std::isnan(s.elliptic)) ++not_applicable;
            else r = std::max(r, s.elliptic);
            gamma2 = gamma2 && s.gamma2;
            if (r > worst) {
                worst = r;
                at = gp.surface.point;
            }
        }
        BoundReport b = residual_report("support-identities", worst, at, c.tolerances.residual, grid);
        b.pass = b.pass && gamma2;
        b.constants = {{"gamma2_all", gamma2 ? 1.0 : 0.0}, {"elliptic_not_applicable", static_cast<double>(not_applicable)}};
        return bound_json(b);
    });

    if (!c.table_path.empty()) {
        std::ofstream out(c.table_path);
        if (!out) throw ConfigError("cannot write table '" + c.table_path + "'");
        out << grid_table(grid);
    }
    return checks;
}

json run_solve(const RunConfig& c) {
    json checks = json::array();
    const auto t0 = Clock::now();
    IntrinsicField field;
    std::vector<ChartPoint> pts;
    const bool from_file = !c.grid_file.empty();
    if (from_file) {
        field = load_grid_file(c.grid_file);
        for (const auto& fp : field.points) pts.push_back(fp.point);
    } else {
        if (c.family.dim != 3) throw ConfigError("solve requires a family with dim = 3");
        pts = config_points(c, 3);
        field = intrinsic_field(c.family, pts);
    }
    if (c.perturbation != 0.0) field = perturb_ricci(field, c.perturbation);
    if (!c.field_out.empty()) save_grid_file(c.field_out, field);
    const ChiField chi = solve_contracted_gauss(field);
    const double solve_time = seconds_since(t0);

    if (wanted(c, "contracted-gauss")) {
        std::size_t worst_i = 0;
        for (std::size_t i = 0; i < chi.points.size(); ++i)
            if (chi.points[i].residual > chi.points[worst_i].residual) worst_i = i;
        double min_gap = std::numeric_limits<double>::infinity();
        for (const auto& p : chi.points) min_gap = std::min(min_gap, p.eps_gap);
        json j{{"name", "contracted-gauss"}, {"lhs", chi.max_residual},       {"rhs", 1e-9},
               {"pass", chi.max_residual <= 1e-9}, {"points", chi.points.size()}, {"min_eps_gap", min_gap},
               {"lhs_argmax", point_json(pts[worst_i])}, {"wall_time_s", solve_time}};
        checks.push_back(j);
    }
    if (wanted(c, "embeddability")) {
        const auto t1 = Clock::now();
        const double theta = c.tolerances.codazzi_threshold ? *c.tolerances.codazzi_threshold
                                                            : calibrate_codazzi_threshold(calibration_families(), pts);
        const auto v = embeddability_check(field, chi, theta);
        checks.push_back({{"name", "embeddability"},
                          {"lhs", v.max_residual},
                          {"rhs", theta},
                          {"pass", v.embeddable},
                          {"embeddable", v.embeddable},
                          {"threshold_calibrated", !c.tolerances.codazzi_threshold.has_value()},
                          {"lhs_argmax", point_json(pts[v.argmax])},
                          {"wall_time_s", seconds_since(t1)}});
    }
    if (wanted(c, "truth") && !from_file && c.perturbation == 0.0) {
        const auto t1 = Clock::now();
        double worst = 0.0;
        std::size_t at = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Eigen::MatrixXd truth = evaluate(c.family, pts[i], 2).chi.value();
            const double e = (chi.points[i].chi.value() - truth).cwiseAbs().maxCoeff() / truth.cwiseAbs().maxCoeff();
            if (e > worst) {
                worst = e;
                at = i;
            }
        }
        checks.push_back({{"name", "truth"},
                          {"lhs", worst},
                          {"rhs", c.tolerances.chi},
                          {"pass", worst <= c.tolerances.chi},
                          {"lhs_argmax", point_json(pts[at])},
                          {"wall_time_s", seconds_since(t1)}});
    }
    return checks;
}

json run_reconstruct(const RunConfig& c) {
    if (c.family.dim != 3) throw ConfigError("reconstruct requires a family with dim = 3");
    const auto t0 = Clock::now();
    const FrameSource src = family_source(c.family, c.plan.chart, ChiSource::Solved, c.reconstruct_perturbation);
    const Reconstruction rec = reconstruct(src, c.plan);
    std::vector<Eigen::VectorXd> truth;
    for (const auto& y : rec.coords) truth.push_back(evaluate(c.family, {c.plan.chart, y}, 2).position());
    const RigidAlignment fit = align_rigid(rec.X, truth);
    const double t = seconds_since(t0);
    json checks = json::array();
    auto add = [&](const std::string& name, double lhs, double rhs, json extra) {
        if (!wanted(c, name)) return;
        json j{{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"pass", lhs <= rhs}, {"wall_time_s", t}};
        j.update(extra);
        checks.push_back(j);
    };
    add("rms", fit.rms, c.tolerances.rms, {{"alignment_unstable", fit.unstable}, {"nodes", rec.X.size()}});
    add("holonomy", rec.holonomy_residual, c.tolerances.holonomy, {{"substeps", rec.substeps}});
    add("isometry", rec.isometry_residual, c.tolerances.holonomy, json::object());
    return checks;
}

json run_family(const RunConfig& c) {
    if (c.family.kind != Family::Kind::RadialGraph) throw ConfigError("family command requires a radial_graph base");
    const auto t0 = Clock::now();
    std::vector<double> eps = c.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    const auto pts = sphere_grid(c.family.dim, c.resolution, c.chart_radius);
    std::vector<Eigen::MatrixXd> base;
    for (const auto& p : pts) base.push_back(metric_at(c.family, p));

    json table = json::array();
    double min_eig = std::numeric_limits<double>::infinity();
    std::vector<double> dist;
    for (double e : eps) {
        const Family fe = epsilon_family(c.family, e);
        double me = std::numeric_limits<double>::infinity(), dg = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const SurfacePoint sp = evaluate(fe, pts[i], 2);
            me = std::min(me, sp.principal_curvatures().minCoeff());
            dg = std::max(dg, (sp.metric.g.value() - base[i]).cwiseAbs().maxCoeff());
        }
        min_eig = std::min(min_eig, me);
        dist.push_back(dg);
        table.push_back({{"eps", e}, {"min_eig_chi", me}, {"metric_distance", dg}, {"ratio", dg / e}});
    }
    const double t = seconds_since(t0);
    bool monotone = true;
    for (std::size_t i = 1; i < dist.size(); ++i) monotone = monotone && dist[i] < dist[i - 1];
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        rmin = std::min(rmin, dist[i] / eps[i]);
        rmax = std::max(rmax, dist[i] / eps[i]);
    }
    json checks = json::array();
    if (wanted(c, "min-eig"))
        checks.push_back({{"name", "min-eig"}, {"lhs", min_eig}, {"pass", min_eig > 0.0}, {"table", table}, {"wall_time_s", t}});
    if (wanted(c, "monotone"))
        checks.push_back({{"name", "monotone"}, {"pass", monotone}, {"distances", dist}, {"wall_time_s", t}});
    if (wanted(c, "linear"))
        checks.push_back({{"name", "linear"}, {"lhs", rmax / rmin}, {"rhs", 2.0}, {"pass", rmax / rmin <= 2.0}, {"wall_time_s", t}});
    return checks;
}

std::vector<double> jet_coeffs(const Jet& j) {
    std::vector<double> v;
    for (std::size_t k = 0; k < j.size(); ++k) v.push_back(j[k]);
    return v;
}

JetMatrix jets_from_json(const json& arr, int n, int order, const std::string& what) {
    const std::size_t want = static_cast<std::size_t>(n * (n + 1) / 2);
    if (!arr.is_array() || arr.size() != want) throw ConfigError(what + ": expected " + std::to_string(want) + " entries");
    JetMatrix m(n, Jet::constant(0.0, order, n));
    std::size_t e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++e) {
            const auto coeffs = arr[e].get<std::vector<double>>();
            if (coeffs.size() != jet_size(order)) throw ConfigError(what + ": wrong number of jet coefficients");
            Jet jet(order, n);
            for (std::size_t k = 0; k < coeffs.size(); ++k) jet[k] = coeffs[k];
            m(i, j) = m(j, i) = jet;
        }
    return m;
}

json jets_to_json(const JetMatrix& m) {
    json arr = json::array();
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i; j < m.dim(); ++j) arr.push_back(jet_coeffs(m(i, j)));
    return arr;
}

} // namespace

const std::vector<std::string>& checks_for(const std::string& command) {
    if (command == "verify") return kVerifyChecks;
    if (command == "solve") return kSolveChecks;
    if (command == "reconstruct") return kReconstructChecks;
    if (command == "family") return kFamilyChecks;
    throw ConfigError("unknown command '" + command + "'");
}

json family_to_json(const Family& f) {
    switch (f.kind) {
    case Family::Kind::RoundSphere:
        return {{"type", "round_sphere"}, {"dim", f.dim}, {"radius", f.radius}};
    case Family::Kind::Ellipsoid:
        return {{"type", "ellipsoid"}, {"axes", f.axes}};
    case Family::Kind::RadialGraph:
        return {{"type", "radial_graph"},
                {"dim", f.dim},
                {"profile",
                 {{"constant", f.profile.constant},
                  {"linear", f.profile.linear},
                  {"gauge_axes", f.profile.gauge_axes},
                  {"gauge_weight", f.profile.gauge_weight},
                  {"shift", f.profile.shift}}}};
    }
    return {};
}

Family family_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("family must be an object");
    reject_unknown(j, {"type", "dim", "radius", "axes", "profile"}, "family");
    const auto type = get<std::string>(j, "type", "round_sphere");
    try {
        if (type == "round_sphere") return Family::round_sphere(get<int>(j, "dim", 3), get<double>(j, "radius", 1.0));
        if (type == "ellipsoid") {
            if (!j.contains("axes")) throw ConfigError("ellipsoid needs 'axes'");
            return Family::ellipsoid(get<std::vector<double>>(j, "axes", {}));
        }
        if (type == "radial_graph") {
            const json p = j.value("profile", json::object());
            reject_unknown(p, {"constant", "linear", "gauge_axes", "gauge_weight", "shift"}, "family.profile");
            RadialProfile rp;
            rp.constant = get<double>(p, "constant", 0.0);
            rp.linear = get<std::vector<double>>(p, "linear", {});
            rp.gauge_axes = get<std::vector<double>>(p, "gauge_axes", {});
            rp.gauge_weight = get<double>(p, "gauge_weight", 0.0);
            rp.shift = get<double>(p, "shift", 0.0);
            return Family::radial_graph(get<int>(j, "dim", 3), rp);
        }
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("invalid family: ") + e.what());
    }
    throw ConfigError("unknown family type '" + type + "'");
}

RunConfig parse_config(const json& j, const std::string& command) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"family", "resolution", "chart_radius", "seed", "samples", "diameter_resolution", "checks",
                    "tolerances", "eps", "solve", "reconstruct", "output"},
                   "config");
    RunConfig c;
    if (j.contains("family")) c.family = family_from_json(j.at("family"));
    c.resolution = get<int>(j, "resolution", c.resolution);
    c.chart_radius = get<double>(j, "chart_radius", c.chart_radius);
    c.seed = get<std::uint64_t>(j, "seed", c.seed);
    c.samples = get<int>(j, "samples", c.samples);
    c.diameter_resolution = get<int>(j, "diameter_resolution", c.diameter_resolution);
    c.checks = get<std::vector<std::string>>(j, "checks", checks_for(command));
    c.eps = get<std::vector<double>>(j, "eps", c.eps);

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        reject_unknown(t, {"residual", "chi", "rms", "holonomy", "codazzi_threshold"}, "tolerances");
        c.tolerances.residual = get<double>(t, "residual", c.tolerances.residual);
        c.tolerances.chi = get<double>(t, "chi", c.tolerances.chi);
        c.tolerances.rms = get<double>(t, "rms", c.tolerances.rms);
        c.tolerances.holonomy = get<double>(t, "holonomy", c.tolerances.holonomy);
        if (t.contains("codazzi_threshold")) c.tolerances.codazzi_threshold = get<double>(t, "codazzi_threshold", 0.0);
    }
    if (j.contains("solve")) {
        const json& s = j.at("solve");
        reject_unknown(s, {"perturbation", "grid_file", "field_out"}, "solve");
        c.perturbation = get<double>(s, "perturbation", 0.0);
        c.grid_file = get<std::string>(s, "grid_file", "");
        c.field_out = get<std::string>(s, "field_out", "");
    }
    if (j.contains("reconstruct")) {
        const json& r = j.at("reconstruct");
        reject_unknown(r, {"chart", "center", "half_width", "spacing", "step", "perturbation"}, "reconstruct");
        try {
            c.plan.chart = chart_from_string(get<std::string>(r, "chart", "north"));
        } catch (const PreconditionError& e) {
            throw ConfigError(e.what());
        }
        c.plan.center = get<std::vector<double>>(r, "center", c.plan.center);
        c.plan.half_width = get<int>(r, "half_width", c.plan.half_width);
        c.plan.spacing = get<double>(r, "spacing", c.plan.spacing);
        c.plan.step = get<double>(r, "step", c.plan.step);
        c.reconstruct_perturbation = get<double>(r, "perturbation", 0.0);
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, {"report", "table"}, "output");
        c.report_path = get<std::string>(o, "report", "");
        c.table_path = get<std::string>(o, "table", "");
    }
    if (command == "family" && !j.contains("family")) {
        RadialProfile one;
        one.constant = 1.0;
        c.family = Family::radial_graph(3, one);
    }

    // validation
    if (c.resolution < 5 || c.resolution % 2 == 0) throw ConfigError("resolution must be odd and at least 5");
    if (c.diameter_resolution < 3) throw ConfigError("diameter_resolution must be at least 3");
    if (!(c.chart_radius > 1.0) || c.chart_radius > kDefaultChartRadius)
        throw ConfigError("chart_radius must lie in (1, 1.8]");
    if (c.samples < 0) throw ConfigError("samples must be nonnegative");
    for (double t : {c.tolerances.residual, c.tolerances.chi, c.tolerances.rms, c.tolerances.holonomy})
        if (!(t > 0.0)) throw ConfigError("tolerances must be positive");
    if (c.tolerances.codazzi_threshold && !(*c.tolerances.codazzi_threshold > 0.0))
        throw ConfigError("codazzi_threshold must be positive");
    const auto& valid = checks_for(command);
    for (const auto& name : c.checks)
        if (std::find(valid.begin(), valid.end(), name) == valid.end())
            throw ConfigError("unknown check '" + name + "' for command " + command);
    for (double e : c.eps)
        if (!(e > 0.0)) throw ConfigError("eps values must be positive");
    if (c.plan.center.size() != 3 || c.plan.half_width < 1 || !(c.plan.spacing > 0.0) || !(c.plan.step > 0.0))
        throw ConfigError("reconstruct: center must have 3 entries; half_width >= 1; spacing, step > 0");
    return c;
}

json config_to_json(const RunConfig& c) {
    json j{{"family", family_to_json(c.family)},
           {"resolution", c.resolution},
           {"chart_radius", c.chart_radius},
           {"seed", c.seed},
           {"samples", c.samples},
           {"diameter_resolution", c.diameter_resolution},
           {"checks", c.checks},
           {"tolerances",
            {{"residual", c.tolerances.residual},
             {"chi", c.tolerances.chi},
             {"rms", c.tolerances.rms},
             {"holonomy", c.tolerances.holonomy}}},
           {"eps", c.eps},
           {"solve", {{"perturbation", c.perturbation}, {"grid_file", c.grid_file}, {"field_out", c.field_out}}},
           {"reconstruct",
            {{"chart", to_string(c.plan.chart)},
             {"center", c.plan.center},
             {"half_width", c.plan.half_width},
             {"spacing", c.plan.spacing},
             {"step", c.plan.step},
             {"perturbation", c.reconstruct_perturbation}}},
           {"output", {{"report", c.report_path}, {"table", c.table_path}}}};
    if (c.tolerances.codazzi_threshold) j["tolerances"]["codazzi_threshold"] = *c.tolerances.codazzi_threshold;
    return j;
}

json run_command(const std::string& command, const RunConfig& config) {
    checks_for(command);
    const auto t0 = Clock::now();
    json checks;
    if (command == "verify") checks = run_verify(config);
    else if (command == "solve") checks = run_solve(config);
    else if (command == "reconstruct") checks = run_reconstruct(config);
    else checks = run_family(config);
    bool pass = true;
    for (const auto& ch : checks) pass = pass && ch.at("pass").get<bool>();
    return {{"schema", kReportSchema},
            {"version", kVersion},
            {"command", command},
            {"family", config.family.describe()},
            {"config", config_to_json(config)},
            {"checks", checks},
            {"pass", pass},
            {"wall_time_s", seconds_since(t0)}};
}

bool report_passed(const json& report) { return report.at("pass").get<bool>(); }

json strip_timing(json report) {
    if (report.is_object()) {
        report.erase("wall_time_s");
        for (auto& [k, v] : report.items()) v = strip_timing(v);
    } else if (report.is_array()) {
        for (auto& v : report) v = strip_timing(v);
    }
    return report;
}

std::string format_report(const json& report) {
    std::ostringstream os;
    os << "isoembed " << report.value("version", "") << "  " << report.value("command", "") << "  "
       << report.value("family", "") << "\n";
    for (const auto& ch : report.at("checks")) {
        os << "  " << (ch.at("pass").get<bool>() ? "PASS" : "FAIL") << "  " << ch.at("name").get<std::string>();
        if (ch.contains("skipped")) os << "  (skipped: " << ch.at("skipped").get<std::string>() << ")";
        if (ch.contains("lhs")) os << "  lhs=" << fmt(ch.at("lhs").get<double>());
        if (ch.contains("rhs")) os << "  rhs=" << fmt(ch.at("rhs").get<double>());
        if (ch.contains("slack")) os << "  slack=" << fmt(ch.at("slack").get<double>());
        os << "\n";
        if (ch.contains("table"))
            for (const auto& row : ch.at("table"))
                os << "        eps=" << fmt(row.at("eps").get<double>())
                   << "  min_eig=" << fmt(row.at("min_eig_chi").get<double>())
                   << "  |g_eps - g|=" << fmt(row.at("metric_distance").get<double>()) << "\n";
    }
    os << (report_passed(report) ? "PASS" : "FAIL") << "\n";
    return os.str();
}

IntrinsicField load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read grid file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("grid file '" + path + "': " + e.what());
    }
    IntrinsicField field;
    field.dim = get<int>(j, "dim", 3);
    if (field.dim != 3) throw ConfigError("grid file: dim must be 3");
    const int order = get<int>(j, "order", 3);
    const int ricci_order = get<int>(j, "ricci_order", 1);
    if (order < 1 || order > kMaxJetOrder) throw ConfigError("grid file: order must lie in [1, 5]");
    if (!j.contains("points") || !j.at("points").is_array()) throw ConfigError("grid file: missing 'points'");
    for (const auto& p : j.at("points")) {
        FieldPoint fp;
        try {
            fp.point = {chart_from_string(get<std::string>(p, "chart", "north")), get<std::vector<double>>(p, "coords", {})};
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string("grid file: ") + e.what());
        }
        if (fp.point.dim() != field.dim) throw ConfigError("grid file: coords must have dim entries");
        fp.metric.g = jets_from_json(p.at("metric"), field.dim, order, "grid file metric");
        if (p.contains("ricci")) {
            fp.ricci = jets_from_json(p.at("ricci"), field.dim, ricci_order, "grid file ricci");
        } else {
            if (order < 3) throw ConfigError("grid file: without 'ricci' the metric order must be at least 3");
            fp.ricci = ricci_jets(fp.metric);
        }
        field.points.push_back(std::move(fp));
    }
    return field;
}

void save_grid_file(const std::string& path, const IntrinsicField& field) {
    if (field.points.empty()) throw PreconditionError("save_grid_file: empty field");
    json pts = json::array();
    for (const auto& fp : field.points)
        pts.push_back({{"chart", to_string(fp.point.chart)},
                       {"coords", fp.point.coords},
                       {"metric", jets_to_json(fp.metric.g)},
                       {"ricci", jets_to_json(fp.ricci)}});
    const json j{{"dim", field.dim},
                 {"order", field.points.front().metric.order()},
                 {"ricci_order", field.points.front().ricci.order()},
                 {"points", pts}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write grid file '" + path + "'");
    out << j.dump(1) << "\n";
}

std::string grid_table(const SurfaceGrid& grid) {
    std::ostringstream os;
    const int n = grid.dim();
    os << "chart";
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    os << ",H,R,dR,chi_norm,gauss_residual,codazzi_residual\n";
    for (const auto& gp : grid.points) {
        os << to_string(gp.surface.point.chart);
        for (double y : gp.surface.point.coords) os << "," << fmt(y);
        os << "," << fmt(gp.surface.mean_curvature()) << "," << fmt(gp.curvature.scalar) << ","
           << fmt(gp.curvature.laplacian_scalar) << "," << fmt(std::sqrt(gp.surface.chi_norm2())) << ","
           << fmt(gauss_residual(gp.surface)) << "," << fmt(codazzi_residual(gp.surface)) << "\n";
    }
    return os.str();
}

} // namespace isoembed
