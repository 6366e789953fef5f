#pragma once

// Independent reference implementation of the update rule, written directly
// from the evidence-space formulas in 50-digit binary floating point. It shares
// no code with the library.

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

struct Op {
    std::vector<Real> b;
    Real u;
    std::vector<Real> a;
};

enum class Kind { Cumulative, Averaging, Weighted };

inline std::vector<Real> evidence(const Op& o, const Real& w) {
    std::vector<Real> r;
    for (const auto& bi : o.b) r.push_back(w * bi / o.u);
    return r;
}

inline Op from_evidence(const std::vector<Real>& r, const std::vector<Real>& a, const Real& w) {
    Real s = w;
    for (const auto& ri : r) s += ri;
    Op o;
    for (const auto& ri : r) o.b.push_back(ri / s);
    o.u = w / s;
    o.a = a;
    return o;
}

inline Op discounted(const Real& t, const Op& o) {
    Op d;
    Real total = 0;
    for (const auto& bi : o.b) {
        d.b.push_back(t * bi);
        total += t * bi;
    }
    d.u = Real(1) - total;
    d.a = o.a;
    return d;
}

inline Op fuse(Kind kind, const std::vector<Op>& ops, const Real& w) {
    const std::size_t k = ops.front().b.size();
    std::vector<Real> r(k, Real(0));
    Real weight_sum = 0;
    for (const auto& o : ops) {
        const auto e = evidence(o, w);
        Real weight = 1;
        if (kind == Kind::Weighted) {
            weight = Real(1) - o.u;
        }
        weight_sum += weight;
        for (std::size_t x = 0; x < k; ++x) r[x] += weight * e[x];
    }
    if (kind != Kind::Cumulative) {
        if (weight_sum == 0) {
            Op v{std::vector<Real>(k, Real(0)), Real(1), ops.front().a};
            return v;
        }
        for (auto& v : r) v /= weight_sum;
    }
    return from_evidence(r, ops.front().a, w);
}

inline Op maximize(const Op& o) {
    const std::size_t k = o.b.size();
    std::vector<Real> p(k);
    for (std::size_t x = 0; x < k; ++x) p[x] = o.b[x] + o.a[x] * o.u;
    Real u = 1;
    for (std::size_t x = 0; x < k; ++x) {
        if (p[x] / o.a[x] < u) u = p[x] / o.a[x];
    }
    Op m;
    for (std::size_t x = 0; x < k; ++x) {
        Real bx = p[x] - o.a[x] * u;
        m.b.push_back(bx < 0 ? Real(0) : bx);
    }
    m.u = u;
    m.a = o.a;
    return m;
}

/// One synchronous network step; trust[i][j] is i's trust in j.
inline std::vector<Op> network_step(const std::vector<Op>& ops, const std::vector<std::vector<double>>& trust,
                                    Kind kind, const Real& w, bool epistemic) {
    if (ops.size() == 1) return ops;
    std::vector<Op> next;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        std::vector<Op> operands{ops[i]};
        for (std::size_t j = 0; j < ops.size(); ++j) {
            if (j != i) operands.push_back(discounted(Real(trust[i][j]), ops[j]));
        }
        Op fused = fuse(kind, operands, w);
        next.push_back(epistemic ? maximize(fused) : fused);
    }
    return next;
}

}  // namespace oracle
