#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sldyn/error.hpp"
#include "sldyn/opinion.hpp"

namespace sldyn {

/// Dogmatic binary trust opinion, represented by its projected probability
/// of the source being trustworthy.
class TrustOpinion {
public:
    constexpr TrustOpinion() = default;

    explicit TrustOpinion(double trust) : trust_(trust) {
        if (!std::isfinite(trust) || trust < 0.0 || trust > 1.0) {
            throw InvalidArgument("trust must lie in [0,1]");
        }
    }

    constexpr double value() const noexcept { return trust_; }

    friend bool operator==(const TrustOpinion&, const TrustOpinion&) = default;

private:
    double trust_ = 0.0;
};

/// The opinion learned from a source: belief scaled by trust, the removed mass
/// moved to uncertainty, base rate unchanged.
inline Opinion discount(TrustOpinion trust, const Opinion& op) {
    if (trust.value() == 1.0) {
        return op;
    }
    if (trust.value() == 0.0) {
        return vacuous({op.base_rate().begin(), op.base_rate().end()});
    }
    std::vector<double> belief(op.belief().begin(), op.belief().end());
    for (auto& b : belief) {
        b *= trust.value();
    }
    // u' = u + (1 - t) sum(b) keeps u' >= u exactly in floating point.
    const double u = op.uncertainty() + (1.0 - trust.value()) * op.total_belief();
    return Opinion(std::move(belief), detail::clamp_unit(u), {op.base_rate().begin(), op.base_rate().end()});
}

}  // namespace sldyn
