// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isoembed/bounds.hpp"
#include "isoembed/cli.hpp"
#include "isoembed/embedsolve.hpp"
#include "isoembed/matmap.hpp"
#include "isoembed/surfaces.hpp"
#include "isoembed/symfun.hpp"
#include "oracles.hpp"

using namespace isoembed;
namespace t = isoembed::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max(1e-300, b.cwiseAbs().maxCoeff());
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

MultiIndex random_gamma(std::mt19937_64& rng, std::size_t n, int total) {
    std::vector<int> e(n, 0);
    std::uniform_int_distribution<std::size_t> slot(0, n - 1);
    for (int b = 0; b < total; ++b) ++e[slot(rng)];
    return MultiIndex(e);
}

// 1. symmetric functions
void symmetric_functions(Outcome& o) {
    std::mt19937_64 rng(101);
    for (int n = 1; n <= 8; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Rational> x;
            for (int i = 0; i < n; ++i) x.push_back(t::random_rational(rng, -4, 4, 9));
            const std::span<const Rational> xs(x);
            for (int k = 0; k <= n; ++k) {
                o.require(sigma(k, x) == t::sigma_bitmask(k, x), "sigma vs bitmask");
                const auto [l, r] = identity_sum_sides(k, xs);
                o.require(l == r, "deleted-coordinate sum identity");
                if (k == 0) continue;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const auto xi = delete_coordinate(xs, i);
                    o.require(sigma(k, x) == x[i] * sigma(k - 1, xi) + sigma(k, xi), "recursion");
                }
            }
        }

    std::uniform_int_distribution<int> dim(1, 8);
    int count_sums = 0, count_chi = 0, count_gamma = 0, count_b = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = dim(rng);
        std::vector<Rational> x;
        for (int i = 0; i < n; ++i) x.push_back(t::random_rational(rng, 0, 5, 11) + Rational(1, 97));
        const auto [l, r] = sums_inequality_sides(std::span<const Rational>(x));
        o.require(l <= r, "sums inequality");
        ++count_sums;
    }
    for (int trial = 0; trial < 10000; ++trial) {
        const auto a = t::random_spd(rng, 2 + trial % 5);
        const auto [l, r] = chi_inequality_sides(a);
        o.require(l <= r * (1 + 1e-12), "chi inequality");
        ++count_chi;
    }
    std::uniform_int_distribution<int> entry(0, 6);
    for (int trial = 0; trial < 10000; ++trial) {
        const auto n = static_cast<std::size_t>(dim(rng));
        std::vector<int> g(n);
        for (auto& v : g) v = entry(rng);
        const int k = std::uniform_int_distribution<int>(0, static_cast<int>(n) + 1)(rng);
        const auto [l, r] = gamma_inequality_sides(k, MultiIndex(g));
        o.require(l <= r, "gamma inequality");
        ++count_gamma;
    }
    std::uniform_int_distribution<int> bdim(4, 8);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = bdim(rng);
        const MultiIndex g = random_gamma(rng, static_cast<std::size_t>(n), n);
        const int k = std::uniform_int_distribution<int>(3, n - 1)(rng);
        o.require(det_Gn_b_coefficient(g, k + 1, n) <= det_Gn_b_coefficient(g, k, n), "b monotone");
        const auto [l, r] = gamma_inequality_sides(k, g);
        o.require(l <= r, "gamma inequality at norm n");
        ++count_b;
    }

    // n = 2 equality cases, exact
    std::uniform_int_distribution<int> small(1, 40);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<Rational> x{Rational(small(rng), small(rng)), Rational(small(rng), small(rng))};
        const auto [l, r] = sums_inequality_sides(std::span<const Rational>(x));
        o.require(l == r, "sums equality n=2");
        const auto [cl, cr] = chi_inequality_sides(SymMatrix::diagonal({double(small(rng)), double(small(rng))}));
        o.require(cl == cr, "chi equality n=2");
    }
    o.detail << "samples sums=" << count_sums << " chi=" << count_chi << " gamma=" << count_gamma << " b=" << count_b;
}

// 2. Φ and its inverse
void phi_suite(Outcome& o) {
    std::mt19937_64 rng(202);
    double worst_round = 0.0, worst_case3 = 0.0, worst_norm = 0.0;
    for (int n : {3, 4, 5})
        for (int trial = 0; trial < 1000; ++trial) {
            const auto a = t::random_spd(rng, n);
            const auto back = phi_inverse(phi(a));
            const double e = (back.matrix() - a.matrix()).norm() / a.norm();
            worst_round = std::max(worst_round, e);
            o.require(e <= 1e-9, "roundtrip");
            const auto [l, r] = norm_bound_sides(a);
            worst_norm = std::max(worst_norm, l / r);
            o.require(l <= r * (1 + 1e-12), "norm bound");
        }
    PhiInverseOptions newton, closed;
    newton.method = PhiInverseMethod::Newton;
    closed.method = PhiInverseMethod::ClosedForm;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto b = t::random_cone_member(rng, 3);
        const auto an = phi_inverse(b, newton), ac = phi_inverse(b, closed);
        const double e = (an.matrix() - ac.matrix()).norm() / ac.norm();
        worst_case3 = std::max(worst_case3, e);
        o.require(e <= 1e-10, "closed form vs Newton");
    }
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 3 + trial % 3;
        const auto b = t::random_cone_member(rng, n);
        double prev = cone_report(b).eps_gap;
        for (double s : {0.01, 0.1, 1.0, 10.0}) {
            const double gap = cone_report(b + s * SymMatrix::identity(n)).eps_gap;
            o.require(gap > prev, "eps gap monotone");
            prev = gap;
        }
    }
    o.detail << "roundtrip=" << worst_round << " case3=" << worst_case3 << " max |A|/bound=" << worst_norm;
}

// 3. determinant expansion
void determinant_suite(Outcome& o) {
    std::mt19937_64 rng(303);
    for (int n = 3; n <= 6; ++n) {
        const auto coeffs = det_Gn_coefficients(n);
        for (const auto& [g, a] : coeffs) o.require(a >= 0, "nonnegative coefficient");
        if (n == 3) o.require(coeffs.at(MultiIndex({1, 1, 1})) == 4, "a_(1,1,1),3 = 4");
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Rational> x;
            for (int i = 0; i < n; ++i) x.push_back(t::random_rational(rng, -3, 3, 7));
            Rational poly(0);
            for (const auto& [g, a] : coeffs) {
                Rational mono(1);
                for (int i = 0; i < n; ++i)
                    for (int e = 0; e < g[static_cast<std::size_t>(i)]; ++e) mono *= x[static_cast<std::size_t>(i)];
                poly += a * mono;
            }
            o.require(poly == bareiss_determinant(gn_matrix<Rational>(std::span<const Rational>(x))), "expansion");
        }
    }
    o.detail << "n=3..6, 100 rational points each";
}

// 4. geometry identities
void geometry_identities(Outcome& o) {
    const std::vector<Family> fams{Family::round_sphere(2, 1.0), Family::round_sphere(3, 1.0),
                                   Family::ellipsoid({1, 1.3, 0.8, 1.1}), Family::ellipsoid({1.1, 0.9, 1.2, 1.0}),
                                   Family::ellipsoid({1.4, 1.0, 0.7})};
    double worst = 0.0;
    std::uint64_t seed = 404;
    for (const Family& f : fams) {
        for (const auto& p : random_chart_points(f.dim, 200, seed++)) {
            const SurfacePoint sp = evaluate(f, p);
            const SupportResiduals s = support_identities(sp);
            double r = std::max({gauss_residual(sp), codazzi_residual(sp), s.hessian, s.gradient});
            if (!std::isnan(s.elliptic)) r = std::max(r, s.elliptic);
            worst = std::max(worst, r);
        }
    }
    o.require(worst <= 1e-7, "residual above 1e-7");
    o.detail << "max residual=" << worst << " over " << fams.size() << " families x 200 points";
}

// 5. frozen bound values
void bound_values(Outcome& o) {
    const SurfaceGrid s3 = surface_grid(Family::round_sphere(3, 1.0), 9);
    const SurfaceGrid s2 = surface_grid(Family::round_sphere(2, 1.0), 9);
    const auto w3 = weyl_report(s3);
    o.require(w3.pass && rel_err(w3.lhs, 9) <= 1e-6 && rel_err(w3.rhs, 12) <= 1e-6, "S3 weyl (9, 12)");
    const auto w2 = weyl_report(s2);
    o.require(w2.pass && std::abs(w2.lhs - 4) <= 1e-9 && std::abs(w2.rhs - 4) <= 1e-9, "S2 weyl sharp");
    const auto c2 = c2bound_report(s3);
    o.require(c2.pass && rel_err(c2.lhs, std::sqrt(3.0)) <= 1e-6 && rel_err(c2.rhs, 3.674234614174767) <= 1e-6,
              "c2bound");
    const auto gl = guanli_report(s3, std::numbers::pi);
    o.require(gl.pass && rel_err(gl.lhs, 9) <= 1e-6 && rel_err(gl.rhs, 1172.2185935584696) <= 1e-6, "guanli");
    char buf[256];
    std::snprintf(buf, sizeof buf, "weyl S3 (%.9g, %.9g) S2 (%.12g, %.12g) c2 (%.9g, %.9g) guanli (%.9g, %.12g)",
                  w3.lhs, w3.rhs, w2.lhs, w2.rhs, c2.lhs, c2.rhs, gl.lhs, gl.rhs);
    o.detail << buf;
}

const std::vector<Family>& solve_families() {
    static const std::vector<Family> f{Family::ellipsoid({1, 1.3, 0.8, 1.1}), Family::ellipsoid({1.1, 0.9, 1.2, 1.0}),
                                       Family::ellipsoid({1, 1.2, 0.9, 1.05})};
    return f;
}

// 6. contracted Gauss solve against the embedding
void contracted_gauss(Outcome& o) {
    const auto pts = sphere_grid(3, 17, kDefaultChartRadius);
    double worst = 0.0;
    std::size_t outside = 0;
    for (const Family& f : solve_families()) {
        const IntrinsicField field = intrinsic_field(f, pts);
        const ChiField chi = solve_contracted_gauss(field);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Eigen::MatrixXd truth = evaluate(f, pts[i], 2).chi.value();
            worst = std::max(worst, rel_diff(chi.points[i].chi.value(), truth));
            if (!(chi.points[i].eps_gap > 0.0)) ++outside;
        }
    }
    o.require(worst <= 1e-6, "chi mismatch");
    o.require(outside == 0, "cone membership");
    o.detail << "points/family=" << pts.size() << " max rel err=" << worst;
}

// 7. Codazzi discrimination
void discrimination(Outcome& o) {
    const auto pts = random_chart_points(3, 60, 707);
    const double theta = calibrate_codazzi_threshold(calibration_families(), pts);
    RadialProfile prof;
    prof.constant = 1.0;
    prof.linear = {0.1, -0.05, 0.0, 0.08};
    prof.gauge_axes = {1.0, 1.2, 0.9, 1.1};
    prof.gauge_weight = 0.2;
    const std::vector<Family> fams{Family::round_sphere(3, 1.5), Family::ellipsoid({1, 1.2, 0.9, 1.05}),
                                   Family::radial_graph(3, prof)};
    double worst_ok = 0.0, least_bad = std::numeric_limits<double>::infinity();
    for (const Family& f : fams) {
        const IntrinsicField field = intrinsic_field(f, pts);
        const auto ok = embeddability_check(field, solve_contracted_gauss(field), theta);
        o.require(ok.embeddable, "embedded field rejected: " + f.describe());
        worst_ok = std::max(worst_ok, ok.max_residual);
        const IntrinsicField bad = perturb_ricci(field, 0.05);
        const auto no = embeddability_check(bad, solve_contracted_gauss(bad), theta);
        o.require(no.max_residual >= 10 * theta, "perturbed field below 10 theta: " + f.describe());
        least_bad = std::min(least_bad, no.max_residual);
    }
    o.detail << "theta=" << theta << " embedded max=" << worst_ok << " perturbed min=" << least_bad;
}

// 8. reconstruction
void reconstruction(Outcome& o) {
    const Family ell = Family::ellipsoid({1, 1.3, 0.8, 1.1});
    PathPlan plan;
    plan.half_width = 2;
    plan.spacing = 0.1;
    auto rms_at = [&](double step, ChiSource chi, Reconstruction* keep = nullptr) {
        plan.step = step;
        Reconstruction rec = reconstruct(family_source(ell, plan.chart, chi), plan);
        std::vector<Eigen::VectorXd> truth;
        for (const auto& y : rec.coords) truth.push_back(evaluate(ell, {plan.chart, y}, 2).position());
        const double rms = align_rigid(rec.X, truth).rms;
        if (keep) *keep = std::move(rec);
        return rms;
    };
    Reconstruction solved, embedded;
    const double rms1 = rms_at(1e-2, ChiSource::Solved, &solved);
    const double rms2 = rms_at(5e-3, ChiSource::Solved);
    rms_at(1e-2, ChiSource::Embedded, &embedded);
    plan.step = 1e-2;
    const Reconstruction bad = reconstruct(family_source(ell, plan.chart, ChiSource::Solved, 0.05), plan);
    o.require(rms1 <= 1e-4, "rms at step 1e-2");
    o.require(rms1 / rms2 >= 12.0, "rms ratio under step halving");
    o.require(solved.holonomy_residual <= 1e-6 && embedded.holonomy_residual <= 1e-6, "holonomy of embedded data");
    o.require(bad.holonomy_residual >= 1e-3, "holonomy of non-Codazzi data");
    o.detail << "rms(1e-2)=" << rms1 << " rms(5e-3)=" << rms2 << " ratio=" << rms1 / rms2
             << " holonomy embedded=" << embedded.holonomy_residual << " solved=" << solved.holonomy_residual
             << " perturbed=" << bad.holonomy_residual;
}

// 9. ε family
void epsilon_families(Outcome& o) {
    RadialProfile one;
    one.constant = 1.0;
    RadialProfile tilted;
    tilted.constant = 1.0;
    tilted.linear = {0.2, 0.0, -0.1, 0.1};
    tilted.gauge_axes = {1.0, 1.3, 0.8, 1.1};
    tilted.gauge_weight = 0.3;
    for (const Family& base : {Family::radial_graph(3, one), Family::radial_graph(3, tilted)}) {
        RunConfig c = parse_config(nlohmann::json::object(), "family");
        c.family = base;
        c.eps = {0.1, 0.05, 0.025};
        const auto report = run_command("family", c);
        for (const auto& ch : report.at("checks"))
            o.require(ch.at("pass").get<bool>(), ch.at("name").get<std::string>() + " on " + base.describe());
        const auto& checks = report.at("checks");
        o.detail << base.describe() << ": min-eig=" << checks[0].at("lhs").get<double>()
                 << " linear ratio=" << checks[2].at("lhs").get<double>() << "; ";
    }
}

// 10. determinism
void determinism(Outcome& o) {
    nlohmann::json cfg = {{"family", {{"type", "ellipsoid"}, {"axes", {1, 1.3, 0.8, 1.1}}}},
                          {"resolution", 5},
                          {"seed", 1234},
                          {"samples", 25}};
    for (const std::string cmd : {"verify", "solve", "reconstruct"}) {
        nlohmann::json c = cfg;
        if (cmd == "verify") c["checks"] = {"weyl", "gauss-residual", "codazzi-residual", "support-identities"};
        if (cmd == "reconstruct") c["reconstruct"] = {{"half_width", 1}};
        const RunConfig rc = parse_config(c, cmd);
        const auto a = strip_timing(run_command(cmd, rc)).dump();
        const auto b = strip_timing(run_command(cmd, rc)).dump();
        o.require(a == b, cmd + " report differs");
        o.require(format_report(strip_timing(run_command(cmd, rc))) == format_report(strip_timing(nlohmann::json::parse(a))),
                  cmd + " text differs");
    }
    o.detail << "verify, solve, reconstruct with seed 1234";
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "symmetric functions", symmetric_functions},
        {2, "phi and inverse", phi_suite},
        {3, "determinant expansion", determinant_suite},
        {4, "geometry identities", geometry_identities},
        {5, "bound regression values", bound_values},
        {6, "contracted Gauss roundtrip", contracted_gauss},
        {7, "embeddability discrimination", discrimination},
        {8, "reconstruction", reconstruction},
        {9, "epsilon family", epsilon_families},
        {10, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d  %s  %-30s %8.2f s  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, s,
                    o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%s: %zu criteria, %d failed\n", failed ? "FAIL" : "PASS", criteria.size(), failed);
    return failed ? 1 : 0;
}
