#pragma once

// Synchronous opinion dynamics. At each step every agent fuses its own opinion
// with the trust-discounted opinions of all other agents, all read at time t:
//
//   w_i[t+1] = fuse( w_i[t], (T_ij (x) w_j[t]) for j != i )
//
// In epistemic mode each updated opinion is uncertainty-maximized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sldyn/error.hpp"
#include "sldyn/evidence.hpp"
#include "sldyn/fusion.hpp"
#include "sldyn/opinion.hpp"
#include "sldyn/trust.hpp"

namespace sldyn {

struct UpdateParams {
    FusionOperator fusion = FusionOperator::Cumulative;
    double prior_weight = kDefaultPriorWeight;
    /// Uncertainty-maximize every agent's opinion after its update.
    bool epistemic = false;

    void validate() const { detail::require_prior_weight(prior_weight); }
};

/// Square matrix of trust opinions; entry (i, j) is how much agent i trusts
/// agent j. Diagonal entries are ignored by the update.
class TrustMatrix {
public:
    TrustMatrix() = default;

    explicit TrustMatrix(std::size_t n, TrustOpinion fill = TrustOpinion{}) : n_(n), entries_(n * n, fill) {}

    explicit TrustMatrix(const std::vector<std::vector<double>>& rows) : n_(rows.size()), entries_() {
        entries_.reserve(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (rows[i].size() != n_) {
                throw InvalidArgument("trust row " + std::to_string(i) + " has wrong length");
            }
            for (double v : rows[i]) {
                entries_.emplace_back(v);
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    TrustOpinion operator()(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }
    void set(std::size_t i, std::size_t j, TrustOpinion t) { entries_.at(i * n_ + j) = t; }

    friend bool operator==(const TrustMatrix&, const TrustMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<TrustOpinion> entries_;
};

struct NetworkState {
    std::vector<std::string> agents;
    std::vector<Opinion> opinions;
    TrustMatrix trust;
    std::size_t time = 0;

    std::size_t size() const noexcept { return agents.size(); }

    /// Throws InvalidArgument / DomainMismatch on structural problems and
    /// DogmaticOpinion if any agent's opinion is dogmatic.
    void validate() const {
        if (agents.empty()) {
            throw InvalidArgument("a network needs at least one agent");
        }
        if (opinions.size() != agents.size() || trust.size() != agents.size()) {
            throw InvalidArgument("agents, opinions and trust matrix disagree on the number of agents");
        }
        for (std::size_t i = 0; i < opinions.size(); ++i) {
            if (!same_base_rate(opinions[i], opinions[0])) {
                throw DomainMismatch("agent '" + agents[i] + "' has a different domain or base rate");
            }
            if (is_dogmatic(opinions[i])) {
                throw DogmaticOpinion("agent '" + agents[i] + "' holds a dogmatic opinion at t=" + std::to_string(time) +
                                      " (u <= 1e-12); the update is undefined");
            }
        }
    }
};

struct Snapshot {
    std::size_t time = 0;
    std::vector<Opinion> opinions;
    std::vector<ProjectedDistribution> projected;
};

struct Trace {
    std::vector<std::string> agents;
    std::vector<Snapshot> steps;
};

struct ConvergenceReport {
    bool converged = false;
    /// Final per-agent projections, present iff converged.
    std::optional<std::vector<ProjectedDistribution>> limit;
    /// First time index after which no step moved any projection by eps or more.
    std::optional<std::size_t> steps_to_converge;
    bool radicalized = false;
};

enum class ScenarioClass { Consensus, BalancedOpposite, UnbalancedOpposite, Boundary };

inline std::string_view to_string(ScenarioClass c) noexcept {
    switch (c) {
        case ScenarioClass::Consensus: return "consensus";
        case ScenarioClass::BalancedOpposite: return "balanced_opposite";
        case ScenarioClass::UnbalancedOpposite: return "unbalanced_opposite";
        case ScenarioClass::Boundary: return "boundary";
    }
    return "unknown";
}

/// Limit probabilities within this distance of 1 count as radicalized.
inline constexpr double kRadicalTolerance = 0.01;

namespace detail {

inline Opinion finish_update(Opinion op, const UpdateParams& params) {
    return params.epistemic ? uncertainty_maximize(op) : op;
}

inline Snapshot snapshot_of(const NetworkState& s) {
    Snapshot snap{s.time, s.opinions, {}};
    snap.projected.reserve(s.opinions.size());
    for (const auto& op : s.opinions) {
        snap.projected.push_back(projected(op));
    }
    return snap;
}

}  // namespace detail

/// One update of agent A from agent B: fuse(a, discount(trust_ab, b)).
inline Opinion step_two_agent(const Opinion& a, const Opinion& b, TrustOpinion trust_ab, const UpdateParams& params) {
    params.validate();
    if (is_dogmatic(a) || is_dogmatic(b)) {
        throw DogmaticOpinion("update is undefined for dogmatic opinions");
    }
    const Opinion operands[] = {a, discount(trust_ab, b)};
    return detail::finish_update(fuse(params.fusion, operands, params.prior_weight), params);
}

inline NetworkState step_network(const NetworkState& state, const UpdateParams& params) {
    params.validate();
    state.validate();
    NetworkState next = state;
    ++next.time;
    const std::size_t n = state.size();
    if (n == 1) {
        return next;
    }
    std::vector<Opinion> operands;
    operands.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        operands.clear();
        operands.push_back(state.opinions[i]);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                operands.push_back(discount(state.trust(i, j), state.opinions[j]));
            }
        }
        next.opinions[i] = detail::finish_update(fuse(params.fusion, operands, params.prior_weight), params);
    }
    return next;
}

/// Runs t_max synchronous steps; the trace holds t_max + 1 snapshots.
inline Trace simulate(const NetworkState& initial, const UpdateParams& params, std::size_t t_max) {
    Trace trace{initial.agents, {}};
    trace.steps.reserve(t_max + 1);
    NetworkState state = initial;
    state.validate();
    trace.steps.push_back(detail::snapshot_of(state));
    for (std::size_t t = 0; t < t_max; ++t) {
        state = step_network(state, params);
        trace.steps.push_back(detail::snapshot_of(state));
    }
    return trace;
}

/// Largest max-norm move of any agent's projection between snapshots t-1 and t.
inline double step_movement(const Trace& trace, std::size_t t) {
    double d = 0.0;
    const auto& prev = trace.steps.at(t - 1).projected;
    const auto& cur = trace.steps.at(t).projected;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        d = std::max(d, max_abs_diff(prev[i], cur[i]));
    }
    return d;
}

/// Converged iff each of the final `window` steps moved every projection by
/// less than eps. A trace with fewer than window + 1 snapshots has not converged.
inline ConvergenceReport detect_convergence(const Trace& trace, double eps = 1e-6, std::size_t window = 10) {
    if (!(eps > 0.0) || window == 0) {
        throw InvalidArgument("convergence needs eps > 0 and window >= 1");
    }
    if (trace.steps.empty()) {
        throw InvalidArgument("empty trace");
    }
    ConvergenceReport report;
    const std::size_t last = trace.steps.size() - 1;
    if (last < window) {
        return report;
    }
    for (std::size_t t = last - window + 1; t <= last; ++t) {
        if (step_movement(trace, t) >= eps) {
            return report;
        }
    }
    // Walk back to the last step that still moved by eps or more.
    std::size_t settled = last - window;
    while (settled > 0 && step_movement(trace, settled) < eps) {
        --settled;
    }
    report.converged = true;
    report.steps_to_converge = trace.steps[settled].time - trace.steps.front().time;
    report.limit = trace.steps.back().projected;
    report.radicalized = std::all_of(report.limit->begin(), report.limit->end(), [](const auto& p) {
        const auto v = p.values();
        return *std::max_element(v.begin(), v.end()) >= 1.0 - kRadicalTolerance;
    });
    return report;
}

/// Two-agent check that neither agent's P(x_0) ever moves away from, or past,
/// its peer: P_A[t] <= P_A[t+1] <= P_B[t] or P_A[t] >= P_A[t+1] >= P_B[t].
inline bool check_weak_convergence(const Trace& trace) {
    constexpr double slack = 1e-12;
    for (const auto& s : trace.steps) {
        if (s.projected.size() != 2) {
            throw InvalidArgument("weak convergence is defined for two agents");
        }
    }
    for (std::size_t t = 0; t + 1 < trace.steps.size(); ++t) {
        for (std::size_t self = 0; self < 2; ++self) {
            const double now = trace.steps[t].projected[self][0];
            const double next = trace.steps[t + 1].projected[self][0];
            const double peer = trace.steps[t].projected[1 - self][0];
            const bool rising = now <= next + slack && next <= peer + slack;
            const bool falling = now + slack >= next && next + slack >= peer;
            if (!rising && !falling) {
                return false;
            }
        }
    }
    return true;
}

/// Classifies a binary pair by A's projection P_A(x) and the projection of the
/// opinion A learns from B, P_L(x) = P(discount(trust_ab, b))(x).
inline ScenarioClass classify_pair(const Opinion& a, const Opinion& b, TrustOpinion trust_ab) {
    if (a.size() != 2 || b.size() != 2) {
        throw InvalidArgument("classification needs a binary domain");
    }
    const double pa = projected(a)[0];
    const double pl = projected(discount(trust_ab, b))[0];
    if (std::abs(pa - 0.5) <= kTolerance || std::abs(pl - 0.5) <= kTolerance) {
        return ScenarioClass::Boundary;
    }
    if ((pa < 0.5) == (pl < 0.5)) {
        return ScenarioClass::Consensus;
    }
    if (std::abs(pa - (1.0 - pl)) <= kTolerance) {
        return ScenarioClass::BalancedOpposite;
    }
    return ScenarioClass::UnbalancedOpposite;
}

/// Two agents with trust_ab (A in B) and trust_ba (B in A); agents named "A", "B".
inline NetworkState two_agent_state(Opinion a, Opinion b, TrustOpinion trust_ab, TrustOpinion trust_ba) {
    NetworkState s;
    s.agents = {"A", "B"};
    s.opinions = {std::move(a), std::move(b)};
    s.trust = TrustMatrix(2, TrustOpinion(1.0));
    s.trust.set(0, 1, trust_ab);
    s.trust.set(1, 0, trust_ba);
    return s;
}

struct FixedPointOptions {
    std::size_t horizon = 5000;
    std::size_t max_iterations = 60;
    /// Distance kept from 0.5 and from the dogmatic end of the search interval.
    double margin = 1e-9;
};

namespace detail {

// True when agent B, started at p_b against A at p_a, still sits on its own
// side of 0.5 after the horizon. Once both agents are strictly on one side all
// evidence is on that side's state, so the run stops there; this also keeps
// fast full-trust runs from collapsing to numerically dogmatic opinions.
inline bool b_holds_its_side(double p_a, double p_b, TrustOpinion trust, const UpdateParams& params,
                             std::size_t horizon) {
    Opinion a = binary_opinion(p_a);
    Opinion b = binary_opinion(p_b);
    double pa = p_a;
    double pb = p_b;
    for (std::size_t t = 0; t < horizon; ++t) {
        if ((pa > 0.5 && pb > 0.5) || (pa < 0.5 && pb < 0.5)) {
            break;
        }
        Opinion next_a = step_two_agent(a, b, trust, params);
        b = step_two_agent(b, a, trust, params);
        a = std::move(next_a);
        pa = projected(a)[0];
        pb = projected(b)[0];
    }
    return p_b > 0.5 ? pb > 0.5 : pb < 0.5;
}

}  // namespace detail

/// Boundary initial projection p_b (opposite side of 0.5 from p_a) between the
/// region where B's side wins and the region where A's side wins, for two
/// agents with equal mutual trust under cumulative epistemic updates. Found by
/// bisection until the bracket is narrower than tol.
inline double find_fixed_point(double p_a, TrustOpinion trust, const UpdateParams& params, double tol = 1e-4,
                               const FixedPointOptions& opts = {}) {
    params.validate();
    if (params.fusion != FusionOperator::Cumulative || !params.epistemic) {
        throw InvalidArgument("fixed-point search needs cumulative fusion in epistemic mode");
    }
    if (!(p_a > 0.0 && p_a < 1.0)) {
        throw InvalidArgument("p_a must lie in (0,1)");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("tol must be positive");
    }
    if (std::abs(p_a - 0.5) <= kTolerance) {
        return 0.5;
    }
    // Oriented so that `lo` is the end where B loses (near 0.5).
    double lo = p_a < 0.5 ? 0.5 + opts.margin : 0.5 - opts.margin;
    double hi = p_a < 0.5 ? 1.0 - opts.margin : opts.margin;
    auto holds = [&](double p_b) { return detail::b_holds_its_side(p_a, p_b, trust, params, opts.horizon); };
    if (holds(lo) || !holds(hi)) {
        throw BracketError("no sign change of B's drift inside the search interval for p_a = " +
                           std::to_string(p_a));
    }
    for (std::size_t it = 0; it < opts.max_iterations && std::abs(hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace sldyn
