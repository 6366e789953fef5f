#pragma once

// Command implementations behind the `sldyn` CLI. Each returns a process exit
// code and never lets an exception escape:
//
//   0  success
//   2  configuration or usage error
//   3  simulation error (dogmatic opinion, inconsistent domains)
//   4  I/O failure
//   5  fixed-point search failed for every requested point

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sldyn/dynamics.hpp"
#include "sldyn/error.hpp"
#include "sldyn/io.hpp"

namespace sldyn {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitSimulation = 3,
    kExitIo = 4,
    kExitFixedPoint = 5,
};

/// Maps the in-flight exception to an exit code and reports it on `err`.
inline int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DogmaticOpinion& e) {
        err << "simulation error: " << e.what() << '\n';
        return kExitSimulation;
    } catch (const DomainMismatch& e) {
        err << "simulation error: " << e.what() << '\n';
        return kExitSimulation;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "simulation error: " << e.what() << '\n';
        return kExitSimulation;
    }
}

/// Command-line overrides applied on top of a parsed config.
struct Overrides {
    std::optional<FusionOperator> fusion;
    bool epistemic = false;
    std::optional<std::size_t> steps;
    std::optional<double> eps;

    void apply(ScenarioConfig& cfg) const {
        if (fusion) cfg.fusion = *fusion;
        if (epistemic) cfg.epistemic = true;
        if (steps) cfg.t_max = *steps;
        if (eps) {
            if (!(*eps > 0.0)) throw ConfigError("--eps", "must be positive");
            cfg.eps = *eps;
        }
    }
};

struct RunOptions {
    bool evidence_columns = false;
};

struct RunResult {
    Trace trace;
    ConvergenceReport report;
    std::optional<ScenarioClass> classification;
};

namespace detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create directory " + dir.string());
    }
}

inline bool is_binary_pair(const ScenarioConfig& cfg) {
    return cfg.agents.size() == 2 && cfg.agents.front().opinion.size() == 2;
}

}  // namespace detail

inline RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult result;
    result.trace = simulate(cfg.initial_state(), cfg.params(), cfg.t_max);
    result.report = detect_convergence(result.trace, cfg.eps, cfg.window);
    if (detail::is_binary_pair(cfg)) {
        result.classification =
            classify_pair(cfg.agents[0].opinion, cfg.agents[1].opinion, TrustOpinion(cfg.trust[0][1]));
    }
    return result;
}

inline Json report_json(const ScenarioConfig& cfg, const RunResult& r) {
    std::vector<std::string> ids;
    for (const auto& a : cfg.agents) ids.push_back(a.id);
    Json j = to_json(r.report, ids);
    j["t_max"] = cfg.t_max;
    j["operator"] = std::string(to_string(cfg.fusion));
    j["prior_weight"] = cfg.prior_weight;
    j["epistemic_mode"] = cfg.epistemic;
    if (r.classification) {
        j["classification"] = to_json(*r.classification);
    }
    return j;
}

/// Writes <dir>/trace.csv and <dir>/report.json.
inline void write_run_outputs(const ScenarioConfig& cfg, const RunResult& r, const std::filesystem::path& dir,
                              const RunOptions& opts) {
    detail::ensure_directory(dir);
    {
        auto out = detail::open_for_write(dir / "trace.csv");
        CsvOptions csv;
        if (opts.evidence_columns) csv.evidence_prior_weight = cfg.prior_weight;
        write_trace_csv(out, r.trace, csv);
        if (!out) throw IoError("failed writing trace.csv");
    }
    auto out = detail::open_for_write(dir / "report.json");
    out << report_json(cfg, r).dump(2) << '\n';
    if (!out) throw IoError("failed writing report.json");
}

inline int validate_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = load_config(config_path);
        cfg.initial_state().validate();
        out << "ok: " << cfg.agents.size() << " agents, " << cfg.agents.front().opinion.size() << " states, "
            << to_string(cfg.fusion) << ", t_max " << cfg.t_max << '\n';
        return kExitOk;
    } catch (const DogmaticOpinion& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

inline int run_command(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, const RunOptions& opts,
                       std::ostream& err) {
    try {
        const auto result = run_scenario(cfg);
        write_run_outputs(cfg, result, out_dir, opts);
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

inline int run_command(const std::filesystem::path& config_path, const Overrides& overrides,
                       const std::filesystem::path& out_dir, const RunOptions& opts, std::ostream& err) {
    try {
        auto cfg = load_config(config_path);
        overrides.apply(cfg);
        return run_command(cfg, out_dir, opts, err);
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

// ---------------------------------------------------------------------------
// Sweeps over initial projections and mutual trust of a two-agent binary scenario.

struct SweepGrid {
    std::optional<std::vector<double>> p_a;
    std::optional<std::vector<double>> p_b;
    std::optional<std::vector<double>> trust;
};

inline SweepGrid parse_grid(const Json& j) {
    detail::reject_unknown_keys(j, "grid", {"p_a", "p_b", "trust"});
    SweepGrid g;
    auto axis = [&](const char* key, std::optional<std::vector<double>>& dst, bool open_interval) {
        auto it = j.find(key);
        if (it == j.end()) return;
        const std::string path = std::string("grid.") + key;
        auto values = detail::numbers(*it, path);
        if (values.empty()) throw ConfigError(path, "empty axis");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double v = values[i];
            const bool ok = open_interval ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
            if (!ok) throw ConfigError(detail::index(path, i), open_interval ? "must be in (0,1)" : "must be in [0,1]");
        }
        dst = std::move(values);
    };
    axis("p_a", g.p_a, true);
    axis("p_b", g.p_b, true);
    axis("trust", g.trust, false);
    if (!g.p_a && !g.p_b && !g.trust) {
        throw ConfigError("grid", "no axes given");
    }
    return g;
}

struct SweepPoint {
    std::optional<double> p_a;
    std::optional<double> p_b;
    std::optional<double> trust;
};

inline std::vector<SweepPoint> expand(const SweepGrid& g) {
    auto axis = [](const std::optional<std::vector<double>>& a) {
        return a ? std::vector<std::optional<double>>(a->begin(), a->end())
                 : std::vector<std::optional<double>>{std::nullopt};
    };
    std::vector<SweepPoint> points;
    for (auto pa : axis(g.p_a))
        for (auto pb : axis(g.p_b))
            for (auto t : axis(g.trust)) points.push_back({pa, pb, t});
    return points;
}

/// The base config with the point's initial projections (as uncertainty-maximized
/// opinions over the base rate) and mutual trust substituted.
inline ScenarioConfig apply_point(ScenarioConfig cfg, const SweepPoint& p) {
    const auto& a = cfg.agents.front().opinion.base_rate();
    const std::vector<double> base_rate(a.begin(), a.end());
    if (p.p_a) cfg.agents[0].opinion = binary_opinion(*p.p_a, base_rate);
    if (p.p_b) cfg.agents[1].opinion = binary_opinion(*p.p_b, base_rate);
    if (p.trust) {
        cfg.trust[0][1] = *p.trust;
        cfg.trust[1][0] = *p.trust;
    }
    return cfg;
}

inline std::string point_directory(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%04zu", i);
    return buf;
}

/// One run per grid point under <out_dir>/point_NNNN/, plus <out_dir>/summary.csv.
/// A point whose simulation fails (an agent reaching the dogmatic threshold) is
/// reported in the summary with status "error" and NaN limits; the sweep exits 3
/// only if every point fails.
inline int sweep_command(const ScenarioConfig& base, const SweepGrid& grid, const std::filesystem::path& out_dir,
                         const RunOptions& opts, std::ostream& err) {
    try {
        if (!detail::is_binary_pair(base)) {
            throw ConfigError("agents", "sweeps need exactly two agents over a binary domain");
        }
        const auto points = expand(grid);
        if (points.empty()) {
            throw ConfigError("grid", "empty grid");
        }
        detail::ensure_directory(out_dir);

        struct Outcome {
            std::optional<RunResult> result;
            std::string error;
        };
        std::vector<std::future<Outcome>> jobs;
        std::vector<ScenarioConfig> configs;
        for (const auto& p : points) configs.push_back(apply_point(base, p));
        for (const auto& cfg : configs) {
            jobs.push_back(std::async(std::launch::async, [&cfg, &out_dir, &opts, i = jobs.size()]() -> Outcome {
                try {
                    auto r = run_scenario(cfg);
                    write_run_outputs(cfg, r, out_dir / point_directory(i), opts);
                    return {std::move(r), {}};
                } catch (const DogmaticOpinion& e) {
                    return {std::nullopt, e.what()};
                }
            }));
        }
        std::vector<Outcome> outcomes;
        for (auto& j : jobs) outcomes.push_back(j.get());

        std::size_t failed = 0;
        auto out = detail::open_for_write(out_dir / "summary.csv");
        out << "index,p_a,p_b,trust_ab,trust_ba,class,converged,radicalized,final_P_A,final_P_B,status\n";
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const auto& cfg = configs[i];
            const auto& a = cfg.agents[0].opinion;
            const auto& b = cfg.agents[1].opinion;
            out << i << ',' << format_number(projected(a)[0]) << ',' << format_number(projected(b)[0]) << ','
                << format_number(cfg.trust[0][1]) << ',' << format_number(cfg.trust[1][0]) << ','
                << to_string(classify_pair(a, b, TrustOpinion(cfg.trust[0][1]))) << ',';
            if (const auto& r = outcomes[i].result) {
                const auto& last = r->trace.steps.back().projected;
                out << (r->report.converged ? 1 : 0) << ',' << (r->report.radicalized ? 1 : 0) << ','
                    << format_number(last[0][0]) << ',' << format_number(last[1][0]) << ",ok\n";
            } else {
                ++failed;
                err << point_directory(i) << ": simulation error: " << outcomes[i].error << '\n';
                out << "0,0,nan,nan,error\n";
            }
        }
        if (!out) throw IoError("failed writing summary.csv");
        return failed == configs.size() ? kExitSimulation : kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

// ---------------------------------------------------------------------------
// Fixed-point curve

struct FixedPointRequest {
    TrustOpinion trust{0.5};
    FusionOperator fusion = FusionOperator::Cumulative;
    double prior_weight = kDefaultPriorWeight;
    std::vector<double> p_a;
    double tol = 1e-4;
    FixedPointOptions options{};
};

/// Default sweep 0.05, 0.10, ..., 0.95.
inline std::vector<double> default_fixed_point_sweep() {
    std::vector<double> v;
    for (int i = 1; i <= 19; ++i) v.push_back(0.05 * i);
    return v;
}

struct FixedPointRow {
    double p_a;
    double p_b;  // NaN when the search failed
};

inline std::vector<FixedPointRow> fixed_point_curve(const FixedPointRequest& req, std::ostream& err) {
    const UpdateParams params{req.fusion, req.prior_weight, true};
    std::vector<std::future<double>> jobs;
    for (double p : req.p_a) {
        jobs.push_back(std::async(std::launch::async,
                                  [&, p] { return find_fixed_point(p, req.trust, params, req.tol, req.options); }));
    }
    std::vector<FixedPointRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        double v = std::numeric_limits<double>::quiet_NaN();
        try {
            v = jobs[i].get();
        } catch (const BracketError& e) {
            err << "p_a = " << req.p_a[i] << ": " << e.what() << '\n';
        }
        rows.push_back({req.p_a[i], v});
    }
    return rows;
}

inline void write_gnuplot_script(std::ostream& out, const std::filesystem::path& csv) {
    out << "# gnuplot -p " << csv.filename().string() << ".gp\n"
        << "set datafile separator ','\n"
        << "set key off\n"
        << "set xlabel 'P_A[0](x)'\n"
        << "set ylabel 'fixed point P_B[0](x)'\n"
        << "set xrange [0:1]\nset yrange [0:1]\nset grid\n"
        << "plot '" << csv.filename().string() << "' using 1:2 skip 1 with linespoints pt 7\n";
}

/// Writes the (p_a, p_b) CSV to `out_csv` and a gnuplot script to `out_csv` + ".gp".
inline int fixedpoint_command(const FixedPointRequest& req, const std::filesystem::path& out_csv, std::ostream& err) {
    try {
        if (req.fusion != FusionOperator::Cumulative) {
            throw ConfigError("--operator", "the fixed-point search is defined for cumulative fusion only");
        }
        if (req.p_a.empty()) {
            throw ConfigError("--pa", "no p_a values");
        }
        for (double p : req.p_a) {
            if (!(p > 0.0 && p < 1.0)) throw ConfigError("--pa", "values must lie in (0,1)");
        }
        if (!(req.tol > 0.0)) throw ConfigError("--tol", "must be positive");
        detail::require_prior_weight(req.prior_weight);

        const auto rows = fixed_point_curve(req, err);
        if (out_csv.has_parent_path()) detail::ensure_directory(out_csv.parent_path());
        {
            auto out = detail::open_for_write(out_csv);
            out << "p_a,p_b\n";
            for (const auto& r : rows) out << format_number(r.p_a) << ',' << format_number(r.p_b) << '\n';
            if (!out) throw IoError("failed writing " + out_csv.string());
        }
        auto script_path = out_csv;
        script_path += ".gp";
        auto script = detail::open_for_write(script_path);
        write_gnuplot_script(script, out_csv);

        const bool all_failed = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return std::isnan(r.p_b); });
        return all_failed ? kExitFixedPoint : kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

// ---------------------------------------------------------------------------

inline int classify_command(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (!detail::is_binary_pair(cfg)) {
            throw ConfigError("agents", "classification needs exactly two agents over a binary domain");
        }
        const TrustOpinion t(cfg.trust[0][1]);
        const auto& a = cfg.agents[0].opinion;
        const auto& b = cfg.agents[1].opinion;
        Json j{{"class", to_json(classify_pair(a, b, t))},
               {"P_A", projected(a)[0]},
               {"P_learned", projected(discount(t, b))[0]}};
        out << j.dump() << '\n';
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

}  // namespace sldyn
