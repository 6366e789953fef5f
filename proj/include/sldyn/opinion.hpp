#pragma once

// Multinomial subjective-logic opinions: belief mass over k disjoint states,
// an uncertainty mass, and a base-rate (prior) distribution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sldyn/error.hpp"

namespace sldyn {

/// Tolerance for additivity and normalization checks.
inline constexpr double kTolerance = 1e-9;
/// An opinion whose uncertainty is at or below this value is dogmatic.
inline constexpr double kDogmaticThreshold = 1e-12;

namespace detail {

inline double sum(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

inline bool in_unit_interval(double x) {
    return std::isfinite(x) && x >= 0.0 && x <= 1.0;
}

// Pull values that drifted outside [0,1] by rounding back onto the interval.
inline double clamp_unit(double x) {
    return std::clamp(x, 0.0, 1.0);
}

/// Throws unless `a` is a strictly positive distribution with at least two states.
inline void require_base_rate(std::span<const double> a) {
    if (a.size() < 2) {
        throw InvalidArgument("base rate needs at least 2 states, got " + std::to_string(a.size()));
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || a[i] <= 0.0 || a[i] > 1.0) {
            throw InvalidArgument("base_rate[" + std::to_string(i) + "] must lie in (0,1]");
        }
    }
    if (std::abs(sum(a) - 1.0) > kTolerance) {
        throw InvalidArgument("base rate does not sum to 1");
    }
}

}  // namespace detail

/// Ordered, pairwise-distinct state labels of a domain (k >= 2).
class DomainSpec {
public:
    explicit DomainSpec(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() < 2) {
            throw InvalidArgument("a domain needs at least 2 states");
        }
        std::unordered_set<std::string> seen;
        for (const auto& l : labels_) {
            if (!seen.insert(l).second) {
                throw InvalidArgument("duplicate domain label '" + l + "'");
            }
        }
    }

    /// Labels x_0 .. x_{k-1}.
    static DomainSpec indexed(std::size_t k) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < k; ++i) {
            labels.push_back("x" + std::to_string(i));
        }
        return DomainSpec(std::move(labels));
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const DomainSpec&, const DomainSpec&) = default;

private:
    std::vector<std::string> labels_;
};

/// A probability distribution over the k states of a domain.
class ProjectedDistribution {
public:
    explicit ProjectedDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            if (!detail::in_unit_interval(probs_[i])) {
                throw InvalidArgument("probability[" + std::to_string(i) + "] outside [0,1]");
            }
        }
        if (std::abs(detail::sum(probs_) - 1.0) > kTolerance) {
            throw InvalidArgument("probabilities do not sum to 1");
        }
    }

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> values() const noexcept { return probs_; }

    friend bool operator==(const ProjectedDistribution&, const ProjectedDistribution&) = default;

private:
    std::vector<double> probs_;
};

/// The triple (belief, uncertainty, base rate). Every instance satisfies
/// u + sum(b) = 1 within kTolerance, all components in [0,1], and a strictly
/// positive base rate summing to 1.
class Opinion {
public:
    Opinion(std::vector<double> belief, double uncertainty, std::vector<double> base_rate)
        : belief_(std::move(belief)), uncertainty_(uncertainty), base_rate_(std::move(base_rate)) {
        if (belief_.size() != base_rate_.size()) {
            throw InvalidArgument("belief has " + std::to_string(belief_.size()) +
                                  " states but base rate has " + std::to_string(base_rate_.size()));
        }
        detail::require_base_rate(base_rate_);
        for (std::size_t i = 0; i < belief_.size(); ++i) {
            if (!detail::in_unit_interval(belief_[i])) {
                throw InvalidArgument("belief[" + std::to_string(i) + "] outside [0,1]");
            }
        }
        if (!detail::in_unit_interval(uncertainty_)) {
            throw InvalidArgument("uncertainty outside [0,1]");
        }
        if (std::abs(uncertainty_ + detail::sum(belief_) - 1.0) > kTolerance) {
            throw InvalidArgument("belief and uncertainty do not sum to 1");
        }
    }

    std::size_t size() const noexcept { return belief_.size(); }
    std::span<const double> belief() const noexcept { return belief_; }
    double belief(std::size_t i) const { return belief_[i]; }
    double uncertainty() const noexcept { return uncertainty_; }
    std::span<const double> base_rate() const noexcept { return base_rate_; }
    double base_rate(std::size_t i) const { return base_rate_[i]; }
    double total_belief() const { return detail::sum(belief_); }

    friend bool operator==(const Opinion&, const Opinion&) = default;

private:
    std::vector<double> belief_;
    double uncertainty_;
    std::vector<double> base_rate_;
};

/// Validating factory; throws InvalidArgument on any broken invariant.
inline Opinion make_opinion(std::vector<double> belief, double uncertainty,
                            std::vector<double> base_rate) {
    return Opinion(std::move(belief), uncertainty, std::move(base_rate));
}

/// Zero belief, full uncertainty. Its projection is the base rate itself.
inline Opinion vacuous(std::vector<double> base_rate) {
    std::vector<double> belief(base_rate.size(), 0.0);
    return Opinion(std::move(belief), 1.0, std::move(base_rate));
}

inline ProjectedDistribution projected(const Opinion& op) {
    std::vector<double> p(op.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = detail::clamp_unit(op.belief(i) + op.base_rate(i) * op.uncertainty());
    }
    return ProjectedDistribution(std::move(p));
}

inline bool is_dogmatic(const Opinion& op) noexcept {
    return op.uncertainty() <= kDogmaticThreshold;
}

inline bool same_base_rate(const Opinion& a, const Opinion& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a.base_rate(i) - b.base_rate(i)) > kTolerance) {
            return false;
        }
    }
    return true;
}

inline constexpr double kMaximizeRoundoff = 8.0 * std::numeric_limits<double>::epsilon();

/// The opinion with projected distribution `p` and base rate `a` that carries
/// the most uncertainty: u = min(1, min_i p_i / a_i), b_i = p_i - a_i u.
inline Opinion maximized_opinion(std::span<const double> p, std::vector<double> base_rate) {
    if (p.size() != base_rate.size()) {
        throw InvalidArgument("distribution and base rate differ in size");
    }
    detail::require_base_rate(base_rate);
    double u = 1.0;
    std::size_t argmin = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double ratio = p[i] / base_rate[i];
        if (ratio < u) {
            u = ratio;
            argmin = i;
        }
    }
    // A distribution equal to the base rate up to rounding is vacuous. Without
    // this, residues of a few ulps seed the unstable 0.5 equilibrium.
    if (u >= 1.0 - kMaximizeRoundoff) {
        return Opinion(std::vector<double>(p.size(), 0.0), 1.0, std::move(base_rate));
    }
    u = detail::clamp_unit(u);
    std::vector<double> belief(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        belief[i] = i == argmin ? 0.0 : detail::clamp_unit(p[i] - base_rate[i] * u);
    }
    return Opinion(std::move(belief), u, std::move(base_rate));
}

/// Projection-preserving transform that raises uncertainty until some belief
/// component reaches zero (or u reaches 1).
inline Opinion uncertainty_maximize(const Opinion& op) {
    const auto p = projected(op);
    return maximized_opinion(p.values(), {op.base_rate().begin(), op.base_rate().end()});
}

/// Uncertainty-maximized binary opinion with P(x_0) = p.
inline Opinion binary_opinion(double p, std::vector<double> base_rate = {0.5, 0.5}) {
    if (!detail::in_unit_interval(p)) {
        throw InvalidArgument("projected probability outside [0,1]");
    }
    const double probs[] = {p, 1.0 - p};
    return maximized_opinion(probs, std::move(base_rate));
}

/// Largest componentwise difference of belief and uncertainty.
inline double max_abs_diff(const Opinion& a, const Opinion& b) {
    if (a.size() != b.size()) {
        throw DomainMismatch("opinions differ in domain size");
    }
    double d = std::abs(a.uncertainty() - b.uncertainty());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a.belief(i) - b.belief(i)));
    }
    return d;
}

inline double max_abs_diff(const ProjectedDistribution& a, const ProjectedDistribution& b) {
    if (a.size() != b.size()) {
        throw DomainMismatch("distributions differ in size");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace sldyn
