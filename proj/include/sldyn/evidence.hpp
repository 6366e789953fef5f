#pragma once

// Opinion <-> Dirichlet evidence mapping. An opinion with non-zero uncertainty
// corresponds to evidence r_i = W b_i / u over the prior weight W; the
// Dirichlet strength vector is alpha = r + a W.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sldyn/error.hpp"
#include "sldyn/opinion.hpp"

namespace sldyn {

/// Default non-informative prior weight: the binary vacuous opinion with a
/// uniform base rate maps to Beta(1,1).
inline constexpr double kDefaultPriorWeight = 2.0;

namespace detail {

inline void require_prior_weight(double w) {
    if (!std::isfinite(w) || w <= 0.0) {
        throw InvalidArgument("prior weight must be positive and finite");
    }
}

}  // namespace detail

class EvidenceOpinion {
public:
    EvidenceOpinion(std::vector<double> evidence, std::vector<double> base_rate, double prior_weight)
        : evidence_(std::move(evidence)), base_rate_(std::move(base_rate)), prior_weight_(prior_weight) {
        if (evidence_.size() != base_rate_.size()) {
            throw InvalidArgument("evidence and base rate differ in size");
        }
        detail::require_base_rate(base_rate_);
        detail::require_prior_weight(prior_weight_);
        for (std::size_t i = 0; i < evidence_.size(); ++i) {
            if (!std::isfinite(evidence_[i]) || evidence_[i] < 0.0) {
                throw InvalidArgument("evidence[" + std::to_string(i) + "] must be finite and >= 0");
            }
        }
    }

    std::size_t size() const noexcept { return evidence_.size(); }
    std::span<const double> evidence() const noexcept { return evidence_; }
    double evidence(std::size_t i) const { return evidence_[i]; }
    std::span<const double> base_rate() const noexcept { return base_rate_; }
    double prior_weight() const noexcept { return prior_weight_; }
    double total_evidence() const { return detail::sum(evidence_); }

    /// Dirichlet strength alpha_i = r_i + a_i W.
    std::vector<double> strength() const {
        std::vector<double> alpha(size());
        for (std::size_t i = 0; i < size(); ++i) {
            alpha[i] = evidence_[i] + base_rate_[i] * prior_weight_;
        }
        return alpha;
    }

    friend bool operator==(const EvidenceOpinion&, const EvidenceOpinion&) = default;

private:
    std::vector<double> evidence_;
    std::vector<double> base_rate_;
    double prior_weight_;
};

/// Throws DogmaticOpinion for u <= kDogmaticThreshold, whose evidence is unbounded.
inline EvidenceOpinion to_evidence(const Opinion& op, double prior_weight = kDefaultPriorWeight) {
    detail::require_prior_weight(prior_weight);
    if (is_dogmatic(op)) {
        throw DogmaticOpinion("dogmatic opinion has infinite evidence");
    }
    std::vector<double> r(op.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = prior_weight * op.belief(i) / op.uncertainty();
    }
    return EvidenceOpinion(std::move(r), {op.base_rate().begin(), op.base_rate().end()}, prior_weight);
}

inline Opinion from_evidence(const EvidenceOpinion& ev) {
    const double denom = ev.prior_weight() + ev.total_evidence();
    std::vector<double> belief(ev.size());
    for (std::size_t i = 0; i < belief.size(); ++i) {
        belief[i] = ev.evidence(i) / denom;
    }
    return Opinion(std::move(belief), ev.prior_weight() / denom,
                   {ev.base_rate().begin(), ev.base_rate().end()});
}

/// Mean of the Dirichlet: (r_i + a_i W) / (W + sum r).
inline ProjectedDistribution expected_probability(const EvidenceOpinion& ev) {
    const double denom = ev.prior_weight() + ev.total_evidence();
    std::vector<double> p(ev.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = detail::clamp_unit((ev.evidence(i) + ev.base_rate()[i] * ev.prior_weight()) / denom);
    }
    return ProjectedDistribution(std::move(p));
}

/// Dirichlet density Gamma(sum alpha) / prod Gamma(alpha_i) * prod p_i^(alpha_i - 1),
/// evaluated in log space. p_i may be 0 only where alpha_i >= 1.
inline double dirichlet_density(const EvidenceOpinion& ev, std::span<const double> p) {
    if (p.size() != ev.size()) {
        throw InvalidArgument("probability vector has wrong size");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!detail::in_unit_interval(p[i])) {
            throw InvalidArgument("p[" + std::to_string(i) + "] outside [0,1]");
        }
    }
    if (std::abs(detail::sum(p) - 1.0) > kTolerance) {
        throw InvalidArgument("p is not a distribution");
    }
    const auto alpha = ev.strength();
    double log_density = std::lgamma(detail::sum(alpha));
    for (std::size_t i = 0; i < p.size(); ++i) {
        log_density -= std::lgamma(alpha[i]);
        if (p[i] == 0.0) {
            if (alpha[i] < 1.0) {
                throw InvalidArgument("p[" + std::to_string(i) + "] = 0 with alpha < 1");
            }
            if (alpha[i] > 1.0) {
                return 0.0;
            }
            continue;  // 0^0
        }
        log_density += (alpha[i] - 1.0) * std::log(p[i]);
    }
    return std::exp(log_density);
}

}  // namespace sldyn
