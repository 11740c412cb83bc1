#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isoembed/cli.hpp"
#include "isoembed/errors.hpp"

using namespace isoembed;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;
    std::vector<std::string> checks;
    std::vector<double> eps;
    bool quiet = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config file");
    sub->add_option("--out", o.out_path, "write the JSON report here");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--resolution", o.resolution, "lattice nodes per chart axis (odd, >= 5)");
    sub->add_option("--checks", o.checks, "comma-separated check names")->delimiter(',');
    sub->add_flag("--quiet", o.quiet, "suppress the text summary");
}

int run(const std::string& command, const Overrides& o) {
    RunConfig config;
    try {
        json j = json::object();
        if (!o.config_path.empty()) {
            std::ifstream in(o.config_path);
            if (!in) throw ConfigError("cannot read config '" + o.config_path + "'");
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError("config '" + o.config_path + "': " + e.what());
            }
            if (!j.is_object()) throw ConfigError("config must be a JSON object");
        }
        if (o.seed) j["seed"] = *o.seed;
        if (o.resolution) j["resolution"] = *o.resolution;
        if (!o.checks.empty()) j["checks"] = o.checks;
        if (!o.eps.empty()) j["eps"] = o.eps;
        if (!o.out_path.empty()) j["output"]["report"] = o.out_path;
        config = parse_config(j, command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    json report;
    try {
        report = run_command(command, config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const EmbeddabilityObstruction& e) {
        std::cerr << "domain error: " << e.what() << " (point " << e.point() << ", eps gap " << e.eps_gap() << ")\n";
        return kExitDomainError;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const ConvergenceError& e) {
        std::cerr << "domain error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitDomainError;
    }

    if (!config.report_path.empty()) {
        std::ofstream out(config.report_path);
        if (!out) {
            std::cerr << "config error: cannot write report '" << config.report_path << "'\n";
            return kExitConfigError;
        }
        out << report.dump(2) << "\n";
    }
    if (!o.quiet) std::cout << format_report(report);
    return report_passed(report) ? kExitPass : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for convex hypersurfaces and their intrinsic data", "isoembed"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Overrides o;
    std::string command;
    for (const char* name : {"verify", "solve", "reconstruct", "family"}) {
        const char* help = std::string(name) == "verify"        ? "curvature bounds and geometric identities"
                           : std::string(name) == "solve"       ? "solve the contracted Gauss equation and test Codazzi"
                           : std::string(name) == "reconstruct" ? "rebuild an embedding by frame integration"
                                                                : "convergence table for the epsilon family";
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        if (std::string(name) == "family") sub->add_option("--eps", o.eps, "comma-separated eps values")->delimiter(',');
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }
    return run(command, o);
}
