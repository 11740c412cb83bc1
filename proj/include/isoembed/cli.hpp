#pragma once

// Run configuration, the four commands and the run report.
//
// Config schema (JSON):
//   family:       {type: round_sphere|ellipsoid|radial_graph, dim, radius, axes,
//                  profile: {constant, linear, gauge_axes, gauge_weight, shift}}
//   resolution:   lattice nodes per chart axis, odd, >= 5          (default 9)
//   chart_radius: > 1                                              (default 1.8)
//   seed:         RNG seed for sampled points                      (default 0)
//   samples:      extra random chart points for residual checks    (default 0)
//   diameter_resolution: geodesic graph resolution                 (default 17)
//   checks:       list of check names (command specific)           (default: all)
//   tolerances:   {residual, chi, rms, holonomy, codazzi_threshold}
//   eps:          list of ε for the family command
//   solve:        {perturbation, grid_file, field_out}
//   reconstruct:  {chart, center, half_width, spacing, step, perturbation}
//   output:       {report, table}

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isoembed/bounds.hpp"
#include "isoembed/embedsolve.hpp"
#include "isoembed/surfaces.hpp"

namespace isoembed {

inline constexpr const char* kReportSchema = "isoembed-report/1";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kExitPass = 0, kExitCheckFailed = 1, kExitConfigError = 2, kExitDomainError = 3 };

struct Tolerances {
    double residual = 1e-7;
    double chi = 1e-6;
    double rms = 1e-4;
    double holonomy = 1e-6;
    std::optional<double> codazzi_threshold;
};

struct RunConfig {
    Family family;
    int resolution = 9;
    double chart_radius = kDefaultChartRadius;
    std::uint64_t seed = 0;
    int samples = 0;
    int diameter_resolution = 17;
    std::vector<std::string> checks;
    Tolerances tolerances;
    std::vector<double> eps{0.1, 0.05, 0.025};
    double perturbation = 0.0;
    std::string grid_file;
    std::string field_out;
    PathPlan plan;
    double reconstruct_perturbation = 0.0;
    std::string report_path;
    std::string table_path;
};

/// Check names accepted by each command.
const std::vector<std::string>& checks_for(const std::string& command);

/// Parses and validates; throws ConfigError.
RunConfig parse_config(const nlohmann::json& j, const std::string& command);
nlohmann::json family_to_json(const Family& f);
Family family_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Runs one command and returns the report. Numerical-domain failures
/// propagate as DomainError / ConvergenceError.
nlohmann::json run_command(const std::string& command, const RunConfig& config);

/// True iff every check in the report passed.
bool report_passed(const nlohmann::json& report);

/// Report with every wall-time field removed (for determinism comparisons).
nlohmann::json strip_timing(nlohmann::json report);

/// Human-readable summary, numbers printed with 17 significant digits.
std::string format_report(const nlohmann::json& report);

/// Grid file: {dim, order, points: [{chart, coords, metric: [[coeffs] per (i ≤ j)], ricci?}]}
/// Jet coefficients are c_γ = ∂^γ f / γ! in graded monomial order.
IntrinsicField load_grid_file(const std::string& path);
void save_grid_file(const std::string& path, const IntrinsicField& field);

/// Delimited table: chart, y1..yn, H, R, dR, chi_norm, gauss_residual, codazzi_residual.
std::string grid_table(const SurfaceGrid& grid);

} // namespace isoembed
