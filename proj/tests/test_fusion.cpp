#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sldyn/fusion.hpp"
#include "support/bridge.hpp"
#include "support/generators.hpp"

using namespace sldyn;
using Catch::Approx;

namespace {

const std::vector<double> kHalf{0.5, 0.5};

constexpr FusionOperator kAll[] = {FusionOperator::Cumulative, FusionOperator::Averaging, FusionOperator::Weighted};

void check_valid(const Opinion& op) {
    double s = op.uncertainty();
    REQUIRE(op.uncertainty() >= 0.0);
    REQUIRE(op.uncertainty() <= 1.0);
    for (double b : op.belief()) {
        REQUIRE(b >= 0.0);
        REQUIRE(b <= 1.0);
        s += b;
    }
    REQUIRE(std::abs(s - 1.0) <= 1e-9);
}

}  // namespace

TEST_CASE("cumulative fusion worked values", "[fusion]") {
    const auto a = make_opinion({0.6, 0.0}, 0.4, kHalf);
    const auto self = fuse(FusionOperator::Cumulative, {a, a});
    CHECK(self.belief(0) == Approx(0.75).margin(1e-12));
    CHECK(self.uncertainty() == Approx(0.25).margin(1e-12));

    const auto x = make_opinion({0.2, 0.0}, 0.8, kHalf);
    const auto y = make_opinion({0.4, 0.0}, 0.6, kHalf);
    const auto c = fuse(FusionOperator::Cumulative, {x, y});
    CHECK(c.belief(0) == Approx(11.0 / 23.0).margin(1e-12));
    CHECK(c.belief(1) == 0.0);
    CHECK(c.uncertainty() == Approx(12.0 / 23.0).margin(1e-12));
    CHECK(projected(c)[0] == Approx(17.0 / 23.0).margin(1e-12));
}

TEST_CASE("averaging and weighted fusion worked values", "[fusion]") {
    const auto x = make_opinion({0.6, 0.0}, 0.4, kHalf);
    const auto y = make_opinion({0.2, 0.0}, 0.8, kHalf);

    const auto avg = fuse(FusionOperator::Averaging, {x, y});
    CHECK(avg.belief(0) == Approx(7.0 / 15.0).margin(1e-12));
    CHECK(avg.uncertainty() == Approx(8.0 / 15.0).margin(1e-12));

    const auto wtd = fuse(FusionOperator::Weighted, {x, y});
    CHECK(wtd.belief(0) == Approx(19.0 / 35.0).margin(1e-12));
    CHECK(wtd.uncertainty() == Approx(16.0 / 35.0).margin(1e-12));

    // single operand is returned unchanged
    for (auto op : kAll) {
        CHECK(max_abs_diff(fuse(op, {x}), x) <= 1e-12);
    }
}

TEST_CASE("weighted fusion of only vacuous opinions is vacuous", "[fusion]") {
    const auto v = vacuous(kHalf);
    CHECK(fuse(FusionOperator::Weighted, {v, v, v}) == v);
}

TEST_CASE("fusion preconditions", "[fusion]") {
    const std::vector<Opinion> none;
    const auto x = make_opinion({0.2, 0.0}, 0.8, kHalf);
    const auto tri = vacuous({0.2, 0.3, 0.5});
    const auto skew = make_opinion({0.2, 0.0}, 0.8, {0.3, 0.7});
    const auto dog = make_opinion({0.5, 0.5}, 0.0, kHalf);
    for (auto op : kAll) {
        CHECK_THROWS_AS(fuse(op, none), InvalidArgument);
        CHECK_THROWS_AS(fuse(op, {x, tri}), DomainMismatch);
        CHECK_THROWS_AS(fuse(op, {x, skew}), DomainMismatch);
        CHECK_THROWS_AS(fuse(op, {x, dog}), DogmaticOpinion);
    }
}

TEST_CASE("operator names", "[fusion]") {
    for (auto op : kAll) {
        CHECK(parse_fusion_operator(to_string(op)) == op);
    }
    CHECK_FALSE(parse_fusion_operator("consensus").has_value());
}

TEST_CASE("fusion algebra", "[fusion][property]") {
    gen::Rng rng(0xf05e);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t k = gen::domain_size(rng, 4);
        const auto a = gen::base_rate(rng, k);
        const auto x = gen::opinion(rng, a, 0.05);
        const auto y = gen::opinion(rng, a, 0.05);
        const auto z = gen::opinion(rng, a, 0.05);
        const auto v = vacuous(a);

        for (auto op : kAll) {
            const auto xyz = fuse(op, {x, y, z});
            check_valid(xyz);
            REQUIRE(max_abs_diff(fuse(op, {x, y}), fuse(op, {y, x})) <= 1e-12);
            REQUIRE(max_abs_diff(fuse(op, {z, x, y}), xyz) <= 1e-12);
        }

        const auto cum = [](const Opinion& p, const Opinion& q) { return fuse(FusionOperator::Cumulative, {p, q}); };
        REQUIRE(max_abs_diff(cum(cum(x, y), z), cum(x, cum(y, z))) <= 1e-9);
        REQUIRE(cum(x, y).uncertainty() <= std::min(x.uncertainty(), y.uncertainty()) + 1e-12);

        REQUIRE(max_abs_diff(cum(x, v), x) <= 1e-12);
        REQUIRE(max_abs_diff(fuse(FusionOperator::Weighted, {x, v}), x) <= 1e-12);
        REQUIRE(max_abs_diff(fuse(FusionOperator::Averaging, {x, x}), x) <= 1e-12);
        REQUIRE(max_abs_diff(fuse(FusionOperator::Weighted, {x, x}), x) <= 1e-12);
        if (x.uncertainty() < 1.0 - 1e-6) {
            REQUIRE(max_abs_diff(fuse(FusionOperator::Averaging, {x, v}), x) > 1e-9);
        }
        if (x.uncertainty() < 1.0 - 1e-6) {
            REQUIRE(cum(x, x).uncertainty() < x.uncertainty());
        }
    }
}

TEST_CASE("fusion agrees with the high-precision oracle", "[fusion][property]") {
    gen::Rng rng(0x0ac1e);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t k = gen::domain_size(rng, 4);
        const auto a = gen::base_rate(rng, k);
        const std::size_t n = 1 + static_cast<std::size_t>(i % 4);
        std::vector<Opinion> ops;
        for (std::size_t j = 0; j < n; ++j) ops.push_back(gen::opinion(rng, a, 0.01));
        const double w = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 2.0 : 5.0);
        for (auto op : kAll) {
            const auto got = fuse(op, ops, w);
            const auto ref = oracle::fuse(bridge::kind(op), bridge::to_oracle(ops), oracle::Real(w));
            REQUIRE(bridge::distance(got, ref) <= 1e-9);
        }
    }
}
