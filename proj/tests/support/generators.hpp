#pragma once

// Hand-rolled random generators for property tests. Fixed seeds keep every
// run reproducible.

#include <cstddef>
#include <random>
#include <vector>

#include "sldyn/opinion.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t domain_size(Rng& rng, std::size_t max_k = 5) {
    return std::uniform_int_distribution<std::size_t>(2, max_k)(rng);
}

/// Strictly positive distribution over k states.
inline std::vector<double> base_rate(Rng& rng, std::size_t k) {
    std::vector<double> a(k);
    double s = 0.0;
    for (auto& v : a) {
        v = uniform(rng, 0.05, 1.0);
        s += v;
    }
    for (auto& v : a) v /= s;
    return a;
}

inline std::vector<double> uniform_base_rate(std::size_t k) { return std::vector<double>(k, 1.0 / static_cast<double>(k)); }

/// Random opinion with uncertainty drawn from [u_min, 1].
inline sldyn::Opinion opinion(Rng& rng, std::vector<double> a, double u_min = 0.01) {
    const std::size_t k = a.size();
    const double u = uniform(rng, u_min, 1.0);
    std::vector<double> w(k);
    double s = 0.0;
    for (auto& v : w) {
        // a sprinkling of exact zeros, as in uncertainty-maximized opinions
        v = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : uniform(rng, 0.0, 1.0);
        s += v;
    }
    std::vector<double> b(k, 0.0);
    if (s > 0.0) {
        for (std::size_t i = 0; i < k; ++i) b[i] = (1.0 - u) * w[i] / s;
    }
    const double ub = s > 0.0 ? u : 1.0;
    return sldyn::Opinion(std::move(b), ub, std::move(a));
}

inline sldyn::Opinion opinion(Rng& rng, std::size_t k, double u_min = 0.01) {
    return opinion(rng, base_rate(rng, k), u_min);
}

}  // namespace gen
