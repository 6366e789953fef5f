#pragma once

// Belief fusion, computed in evidence space:
//   cumulative  r = sum_i r_i
//   averaging   r = (1/n) sum_i r_i
//   weighted    r = sum_i c_i r_i / sum_i c_i,  c_i = 1 - u_i
// n-ary averaging and weighted fusion are single-pass means over all inputs.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sldyn/error.hpp"
#include "sldyn/evidence.hpp"
#include "sldyn/opinion.hpp"

namespace sldyn {

enum class FusionOperator { Cumulative, Averaging, Weighted };

inline std::string_view to_string(FusionOperator op) noexcept {
    switch (op) {
        case FusionOperator::Cumulative: return "cumulative";
        case FusionOperator::Averaging: return "averaging";
        case FusionOperator::Weighted: return "weighted";
    }
    return "unknown";
}

inline std::optional<FusionOperator> parse_fusion_operator(std::string_view token) noexcept {
    if (token == "cumulative") return FusionOperator::Cumulative;
    if (token == "averaging") return FusionOperator::Averaging;
    if (token == "weighted") return FusionOperator::Weighted;
    return std::nullopt;
}

namespace detail {

// Shared precondition check; returns every input's evidence vector.
inline std::vector<EvidenceOpinion> fusion_evidence(std::span<const Opinion> ops, double prior_weight) {
    if (ops.empty()) {
        throw InvalidArgument("fusion needs at least one opinion");
    }
    std::vector<EvidenceOpinion> out;
    out.reserve(ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].size() != ops[0].size()) {
            throw DomainMismatch("fusion operand " + std::to_string(i) + " has a different domain size");
        }
        if (!same_base_rate(ops[i], ops[0])) {
            throw DomainMismatch("fusion operand " + std::to_string(i) + " has a different base rate");
        }
        if (is_dogmatic(ops[i])) {
            throw DogmaticOpinion("fusion operand " + std::to_string(i) + " is dogmatic");
        }
        out.push_back(to_evidence(ops[i], prior_weight));
    }
    return out;
}

inline Opinion opinion_from_evidence(std::vector<double> r, const Opinion& like, double prior_weight) {
    return from_evidence(EvidenceOpinion(std::move(r), {like.base_rate().begin(), like.base_rate().end()},
                                         prior_weight));
}

}  // namespace detail

inline Opinion cumulative_fuse(std::span<const Opinion> ops, double prior_weight = kDefaultPriorWeight) {
    const auto ev = detail::fusion_evidence(ops, prior_weight);
    std::vector<double> r(ops[0].size(), 0.0);
    for (const auto& e : ev) {
        for (std::size_t x = 0; x < r.size(); ++x) {
            r[x] += e.evidence(x);
        }
    }
    return detail::opinion_from_evidence(std::move(r), ops[0], prior_weight);
}

inline Opinion averaging_fuse(std::span<const Opinion> ops, double prior_weight = kDefaultPriorWeight) {
    const auto ev = detail::fusion_evidence(ops, prior_weight);
    std::vector<double> r(ops[0].size(), 0.0);
    for (const auto& e : ev) {
        for (std::size_t x = 0; x < r.size(); ++x) {
            r[x] += e.evidence(x);
        }
    }
    const auto n = static_cast<double>(ev.size());
    for (auto& v : r) {
        v /= n;
    }
    return detail::opinion_from_evidence(std::move(r), ops[0], prior_weight);
}

/// Confidence-weighted mean of evidence. Vacuous inputs carry zero weight;
/// if every input is vacuous the result is vacuous.
inline Opinion weighted_fuse(std::span<const Opinion> ops, double prior_weight = kDefaultPriorWeight) {
    const auto ev = detail::fusion_evidence(ops, prior_weight);
    std::vector<double> r(ops[0].size(), 0.0);
    double total_confidence = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        const double c = 1.0 - ops[i].uncertainty();
        total_confidence += c;
        for (std::size_t x = 0; x < r.size(); ++x) {
            r[x] += c * ev[i].evidence(x);
        }
    }
    if (total_confidence <= 0.0) {
        return vacuous({ops[0].base_rate().begin(), ops[0].base_rate().end()});
    }
    for (auto& v : r) {
        v /= total_confidence;
    }
    return detail::opinion_from_evidence(std::move(r), ops[0], prior_weight);
}

inline Opinion fuse(FusionOperator op, std::span<const Opinion> ops, double prior_weight = kDefaultPriorWeight) {
    switch (op) {
        case FusionOperator::Cumulative: return cumulative_fuse(ops, prior_weight);
        case FusionOperator::Averaging: return averaging_fuse(ops, prior_weight);
        case FusionOperator::Weighted: return weighted_fuse(ops, prior_weight);
    }
    throw InvalidArgument("unknown fusion operator");
}

inline Opinion fuse(FusionOperator op, std::initializer_list<Opinion> ops,
                    double prior_weight = kDefaultPriorWeight) {
    return fuse(op, std::span<const Opinion>(ops.begin(), ops.size()), prior_weight);
}

}  // namespace sldyn
