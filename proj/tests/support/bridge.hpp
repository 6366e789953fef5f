#pragma once

// Conversions between library opinions and the high-precision oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "sldyn/fusion.hpp"
#include "sldyn/opinion.hpp"
#include "support/oracle.hpp"

namespace bridge {

inline oracle::Op to_oracle(const sldyn::Opinion& op) {
    oracle::Op o;
    for (double b : op.belief()) o.b.emplace_back(b);
    o.u = op.uncertainty();
    for (double a : op.base_rate()) o.a.emplace_back(a);
    return o;
}

inline std::vector<oracle::Op> to_oracle(const std::vector<sldyn::Opinion>& ops) {
    std::vector<oracle::Op> out;
    for (const auto& op : ops) out.push_back(to_oracle(op));
    return out;
}

/// Largest absolute difference over beliefs and uncertainty.
inline double distance(const sldyn::Opinion& op, const oracle::Op& ref) {
    double d = std::abs(static_cast<double>(ref.u) - op.uncertainty());
    for (std::size_t i = 0; i < op.size(); ++i) {
        d = std::max(d, std::abs(static_cast<double>(ref.b[i]) - op.belief(i)));
    }
    return d;
}

inline oracle::Kind kind(sldyn::FusionOperator op) {
    switch (op) {
        case sldyn::FusionOperator::Cumulative: return oracle::Kind::Cumulative;
        case sldyn::FusionOperator::Averaging: return oracle::Kind::Averaging;
        case sldyn::FusionOperator::Weighted: return oracle::Kind::Weighted;
    }
    return oracle::Kind::Cumulative;
}

}  // namespace bridge
