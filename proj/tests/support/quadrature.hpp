#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace quadrature {

/// Integral of f(p, 1 - p) over p in (0,1). Substitutes p = sin^2(pi s / 2),
/// which keeps the integrand bounded for Beta exponents >= 1/2, then applies
/// the open midpoint rule in s. The complement is passed as cos^2 so it never
/// rounds to zero inside the interval.
template <class F>
double integrate_beta_line(F f, std::size_t panels) {
    const double h = 1.0 / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double half = std::numbers::pi * (static_cast<double>(i) + 0.5) * h / 2.0;
        const double sn = std::sin(half);
        const double cs = std::cos(half);
        sum += f(sn * sn, cs * cs) * std::numbers::pi * sn * cs;
    }
    return sum * h;
}

}  // namespace quadrature
