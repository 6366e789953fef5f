// sldyn: subjective-logic opinion dynamics from the command line.
//
//   sldyn validate    --config scenario.json
//   sldyn run         --config scenario.json --out outdir [--operator X] [--epistemic] [--steps N] [--eps E]
//   sldyn sweep       --config scenario.json --grid grid.json --out outdir
//   sldyn fixed-point --trust 0.5 --out curve.csv [--pa 0.1,0.2] [--tol 1e-4]
//   sldyn classify    --config scenario.json

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sldyn/commands.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::string op;
    bool epistemic = false;
    std::optional<std::size_t> steps;
    std::optional<double> eps;
    bool evidence = false;
    std::uint64_t seed = 0;  // reserved: simulations are deterministic
};

void add_simulation_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--operator", f.op, "Override fusion operator: cumulative | averaging | weighted");
    cmd->add_flag("--epistemic", f.epistemic, "Uncertainty-maximize opinions after every update");
    cmd->add_option("--steps", f.steps, "Override t_max");
    cmd->add_option("--eps", f.eps, "Override convergence eps");
    cmd->add_flag("--evidence", f.evidence, "Append evidence columns r_i to the trace CSV");
    cmd->add_option("--seed", f.seed, "Reserved; runs are deterministic");
}

sldyn::Overrides overrides_from(const CommonFlags& f) {
    sldyn::Overrides o;
    if (!f.op.empty()) {
        o.fusion = sldyn::parse_fusion_operator(f.op);
        if (!o.fusion) throw sldyn::ConfigError("--operator", "unknown operator '" + f.op + "'");
    }
    o.epistemic = f.epistemic;
    o.steps = f.steps;
    o.eps = f.eps;
    return o;
}

sldyn::ScenarioConfig load_with_overrides(const CommonFlags& f) {
    auto cfg = sldyn::load_config(f.config);
    overrides_from(f).apply(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subjective-logic opinion dynamics"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* validate = app.add_subcommand("validate", "Check a scenario config");
    validate->add_option("--config", flags.config, "Scenario JSON")->required();

    auto* run = app.add_subcommand("run", "Simulate a scenario; writes trace.csv and report.json");
    run->add_option("--config", flags.config, "Scenario JSON")->required();
    run->add_option("--out", flags.out, "Output directory")->required();
    add_simulation_flags(run, flags);

    std::string grid_path;
    auto* sweep = app.add_subcommand("sweep", "Run a grid of two-agent scenarios; writes summary.csv");
    sweep->add_option("--config", flags.config, "Base scenario JSON")->required();
    sweep->add_option("--grid", grid_path, "Grid JSON with optional p_a, p_b, trust arrays")->required();
    sweep->add_option("--out", flags.out, "Output directory")->required();
    add_simulation_flags(sweep, flags);

    sldyn::FixedPointRequest fp;
    double trust = 0.5;
    std::vector<double> pa;
    std::string fp_operator = "cumulative";
    std::optional<std::size_t> horizon;
    auto* fixed = app.add_subcommand("fixed-point", "Radicalization boundary curve; writes CSV and a gnuplot script");
    fixed->add_option("--trust", trust, "Mutual trust")->check(CLI::Range(0.0, 1.0));
    fixed->add_option("--operator", fp_operator, "Fusion operator (cumulative only)");
    fixed->add_option("--pa", pa, "Comma-separated P_A[0](x) values (default 0.05..0.95)")->delimiter(',');
    fixed->add_option("--tol", fp.tol, "Bisection tolerance");
    fixed->add_option("--prior-weight", fp.prior_weight, "Prior weight W");
    fixed->add_option("--steps", horizon, "Simulation horizon per probe");
    fixed->add_flag("--epistemic", flags.epistemic, "Accepted for symmetry; the search always runs epistemic");
    fixed->add_option("--out", flags.out, "Output CSV")->required();
    fixed->add_option("--seed", flags.seed, "Reserved; runs are deterministic");

    auto* classify = app.add_subcommand("classify", "Classify a two-agent binary scenario");
    classify->add_option("--config", flags.config, "Scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sldyn::kExitConfig;
    }

    try {
        if (*validate) {
            return sldyn::validate_command(flags.config, std::cout, std::cerr);
        }
        if (*run) {
            return sldyn::run_command(load_with_overrides(flags), flags.out, {flags.evidence}, std::cerr);
        }
        if (*sweep) {
            const auto grid = sldyn::parse_grid(sldyn::Json::parse(sldyn::read_file(grid_path)));
            return sldyn::sweep_command(load_with_overrides(flags), grid, flags.out, {flags.evidence}, std::cerr);
        }
        if (*fixed) {
            const auto op = sldyn::parse_fusion_operator(fp_operator);
            if (!op) throw sldyn::ConfigError("--operator", "unknown operator '" + fp_operator + "'");
            fp.fusion = *op;
            fp.trust = sldyn::TrustOpinion(trust);
            fp.p_a = pa.empty() ? sldyn::default_fixed_point_sweep() : pa;
            if (horizon) fp.options.horizon = *horizon;
            return sldyn::fixedpoint_command(fp, flags.out, std::cerr);
        }
        if (*classify) {
            return sldyn::classify_command(sldyn::load_config(flags.config), std::cout, std::cerr);
        }
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return sldyn::kExitConfig;
    } catch (...) {
        return sldyn::exit_code_for_current_exception(std::cerr);
    }
    return sldyn::kExitConfig;
}
