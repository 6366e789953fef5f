#pragma once

// Scenario configuration (JSON), trace export (CSV) and report export (JSON).

#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sldyn/dynamics.hpp"
#include "sldyn/error.hpp"
#include "sldyn/evidence.hpp"
#include "sldyn/fusion.hpp"
#include "sldyn/opinion.hpp"
#include "sldyn/trust.hpp"

namespace sldyn {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Opinion <-> JSON

inline Json to_json(const Opinion& op) {
    return Json{{"belief", std::vector<double>(op.belief().begin(), op.belief().end())},
                {"uncertainty", op.uncertainty()},
                {"base_rate", std::vector<double>(op.base_rate().begin(), op.base_rate().end())}};
}

namespace detail {

inline std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

inline void reject_unknown_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw ConfigError(child(path, key), "unknown key");
        }
    }
}

inline const Json& require(const Json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(child(path, key), "missing required key");
    }
    return *it;
}

inline double number(const Json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    return v.get<double>();
}

inline std::size_t count(const Json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError(path, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline std::vector<double> numbers(const Json& v, const std::string& path) {
    if (!v.is_array()) {
        throw ConfigError(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(number(v[i], index(path, i)));
    }
    return out;
}

}  // namespace detail

inline Opinion opinion_from_json(const Json& j, const std::string& path = "") {
    detail::reject_unknown_keys(j, path, {"belief", "uncertainty", "base_rate"});
    auto belief = detail::numbers(detail::require(j, path, "belief"), detail::child(path, "belief"));
    const double u = detail::number(detail::require(j, path, "uncertainty"), detail::child(path, "uncertainty"));
    auto base_rate = detail::numbers(detail::require(j, path, "base_rate"), detail::child(path, "base_rate"));
    try {
        return Opinion(std::move(belief), u, std::move(base_rate));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
}

// ---------------------------------------------------------------------------
// Scenario configuration

struct AgentSpec {
    std::string id;
    Opinion opinion;

    friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct ScenarioConfig {
    std::optional<std::vector<std::string>> domain;
    std::vector<AgentSpec> agents;
    std::vector<std::vector<double>> trust;
    FusionOperator fusion = FusionOperator::Cumulative;
    double prior_weight = kDefaultPriorWeight;
    bool epistemic = false;
    std::size_t t_max = 0;
    double eps = 1e-6;
    std::size_t window = 10;

    UpdateParams params() const { return {fusion, prior_weight, epistemic}; }

    NetworkState initial_state() const {
        NetworkState s;
        for (const auto& a : agents) {
            s.agents.push_back(a.id);
            s.opinions.push_back(a.opinion);
        }
        s.trust = TrustMatrix(trust);
        return s;
    }

    DomainSpec domain_spec() const {
        return domain ? DomainSpec(*domain) : DomainSpec::indexed(agents.front().opinion.size());
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Prior weight used when a config omits one: $SL_DEFAULT_W if set, else 2.
inline double default_prior_weight() {
    const char* env = std::getenv("SL_DEFAULT_W");
    if (env == nullptr || *env == '\0') {
        return kDefaultPriorWeight;
    }
    char* end = nullptr;
    const double w = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(w) || w <= 0.0) {
        throw ConfigError("SL_DEFAULT_W", "must be a positive number");
    }
    return w;
}

inline ScenarioConfig parse_config(const Json& j, double default_w) {
    using detail::child;
    using detail::index;
    detail::reject_unknown_keys(
        j, "", {"domain", "agents", "trust", "operator", "prior_weight", "epistemic_mode", "t_max", "convergence"});
    ScenarioConfig cfg;
    cfg.prior_weight = default_w;

    const Json& agents = detail::require(j, "", "agents");
    if (!agents.is_array() || agents.empty()) {
        throw ConfigError("agents", "expected a non-empty array");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string path = index("agents", i);
        detail::reject_unknown_keys(agents[i], path, {"id", "opinion"});
        const Json& id = detail::require(agents[i], path, "id");
        if (!id.is_string() || id.get<std::string>().empty()) {
            throw ConfigError(child(path, "id"), "expected a non-empty string");
        }
        if (!ids.insert(id.get<std::string>()).second) {
            throw ConfigError(child(path, "id"), "duplicate agent id");
        }
        cfg.agents.push_back(
            {id.get<std::string>(), opinion_from_json(detail::require(agents[i], path, "opinion"), child(path, "opinion"))});
        if (!same_base_rate(cfg.agents.back().opinion, cfg.agents.front().opinion)) {
            throw ConfigError(child(path, "opinion"), "domain size or base rate differs from agents[0]");
        }
    }
    const std::size_t n = cfg.agents.size();
    const std::size_t k = cfg.agents.front().opinion.size();

    if (auto it = j.find("domain"); it != j.end()) {
        if (!it->is_array()) {
            throw ConfigError("domain", "expected an array of labels");
        }
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < it->size(); ++i) {
            if (!(*it)[i].is_string()) {
                throw ConfigError(index("domain", i), "expected a string");
            }
            labels.push_back((*it)[i].get<std::string>());
        }
        if (labels.size() != k) {
            throw ConfigError("domain", "has " + std::to_string(labels.size()) + " labels but opinions have " +
                                            std::to_string(k) + " states");
        }
        try {
            DomainSpec check(labels);
        } catch (const InvalidArgument& e) {
            throw ConfigError("domain", e.what());
        }
        cfg.domain = std::move(labels);
    }

    const Json& trust = detail::require(j, "", "trust");
    if (!trust.is_array() || trust.size() != n) {
        throw ConfigError("trust", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    for (std::size_t r = 0; r < n; ++r) {
        const std::string row_path = index("trust", r);
        if (!trust[r].is_array() || trust[r].size() != n) {
            throw ConfigError(row_path, "expected " + std::to_string(n) + " entries");
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < n; ++c) {
            const std::string path = index(row_path, c);
            const double v = detail::number(trust[r][c], path);
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ConfigError(path, "must be in [0,1]");
            }
            row.push_back(v);
        }
        cfg.trust.push_back(std::move(row));
    }

    const Json& op = detail::require(j, "", "operator");
    if (!op.is_string()) {
        throw ConfigError("operator", "expected one of cumulative, averaging, weighted");
    }
    const auto fusion = parse_fusion_operator(op.get<std::string>());
    if (!fusion) {
        throw ConfigError("operator", "unknown operator '" + op.get<std::string>() + "'");
    }
    cfg.fusion = *fusion;

    if (auto it = j.find("prior_weight"); it != j.end()) {
        cfg.prior_weight = detail::number(*it, "prior_weight");
        if (!(cfg.prior_weight > 0.0) || !std::isfinite(cfg.prior_weight)) {
            throw ConfigError("prior_weight", "must be positive");
        }
    }
    if (auto it = j.find("epistemic_mode"); it != j.end()) {
        if (!it->is_boolean()) {
            throw ConfigError("epistemic_mode", "expected a boolean");
        }
        cfg.epistemic = it->get<bool>();
    }
    cfg.t_max = detail::count(detail::require(j, "", "t_max"), "t_max");

    if (auto it = j.find("convergence"); it != j.end()) {
        detail::reject_unknown_keys(*it, "convergence", {"eps", "window"});
        if (auto e = it->find("eps"); e != it->end()) {
            cfg.eps = detail::number(*e, "convergence.eps");
            if (!(cfg.eps > 0.0)) {
                throw ConfigError("convergence.eps", "must be positive");
            }
        }
        if (auto w = it->find("window"); w != it->end()) {
            cfg.window = detail::count(*w, "convergence.window");
            if (cfg.window == 0) {
                throw ConfigError("convergence.window", "must be at least 1");
            }
        }
    }
    return cfg;
}

inline ScenarioConfig parse_config(const std::string& text, double default_w) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("", std::string("JSON parse error: ") + e.what());
    }
    return parse_config(j, default_w);
}

inline ScenarioConfig parse_config(const std::string& text) {
    return parse_config(text, default_prior_weight());
}

inline Json to_json(const ScenarioConfig& cfg) {
    Json agents = Json::array();
    for (const auto& a : cfg.agents) {
        agents.push_back({{"id", a.id}, {"opinion", to_json(a.opinion)}});
    }
    Json j{{"agents", agents},
           {"trust", cfg.trust},
           {"operator", std::string(to_string(cfg.fusion))},
           {"prior_weight", cfg.prior_weight},
           {"epistemic_mode", cfg.epistemic},
           {"t_max", cfg.t_max},
           {"convergence", {{"eps", cfg.eps}, {"window", cfg.window}}}};
    if (cfg.domain) {
        j["domain"] = *cfg.domain;
    }
    return j;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

// ---------------------------------------------------------------------------
// Trace CSV: t,agent,b_0..b_{k-1},u,P_0..P_{k-1}[,r_0..r_{k-1}]

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CsvOptions {
    /// Append evidence columns r_0..r_{k-1}, computed with this prior weight.
    std::optional<double> evidence_prior_weight;
};

inline void write_trace_csv(std::ostream& out, const Trace& trace, const CsvOptions& opts = {}) {
    if (trace.steps.empty()) {
        return;
    }
    const std::size_t k = trace.steps.front().opinions.front().size();
    out << "t,agent";
    for (std::size_t i = 0; i < k; ++i) out << ",b_" << i;
    out << ",u";
    for (std::size_t i = 0; i < k; ++i) out << ",P_" << i;
    if (opts.evidence_prior_weight) {
        for (std::size_t i = 0; i < k; ++i) out << ",r_" << i;
    }
    out << '\n';
    for (const auto& snap : trace.steps) {
        for (std::size_t a = 0; a < snap.opinions.size(); ++a) {
            const auto& op = snap.opinions[a];
            out << snap.time << ',' << trace.agents[a];
            for (double b : op.belief()) out << ',' << format_number(b);
            out << ',' << format_number(op.uncertainty());
            for (double p : snap.projected[a].values()) out << ',' << format_number(p);
            if (opts.evidence_prior_weight) {
                const auto ev = to_evidence(op, *opts.evidence_prior_weight);
                for (double r : ev.evidence()) out << ',' << format_number(r);
            }
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const ProjectedDistribution& p) {
    return std::vector<double>(p.values().begin(), p.values().end());
}

inline Json to_json(ScenarioClass c) { return std::string(to_string(c)); }

inline Json to_json(const ConvergenceReport& r, const std::vector<std::string>& agents) {
    Json j{{"converged", r.converged}, {"radicalized", r.radicalized}};
    j["steps_to_converge"] = r.steps_to_converge ? Json(*r.steps_to_converge) : Json(nullptr);
    if (r.limit) {
        Json limit = Json::array();
        for (std::size_t i = 0; i < r.limit->size(); ++i) {
            limit.push_back({{"agent", agents.at(i)}, {"P", to_json((*r.limit)[i])}});
        }
        j["limit"] = limit;
    } else {
        j["limit"] = nullptr;
    }
    return j;
}

}  // namespace sldyn
