#include "doctest.h"

#include <cmath>

#include "legsynth/line_fit.hpp"
#include "support.hpp"

using namespace legsynth;
using namespace legsynth::testing;
using doctest::Approx;

namespace {

Individual member(MechanismKind kind, double l1, double l2, double l3, double dx, double eta = 0.5) {
    Individual m;
    m.design = make_design(kind, l1, l2, l3);
    m.objectives = {dx, eta};
    return m;
}

} // namespace

TEST_CASE("three collinear points on a plane fit exactly") {
    const std::vector<Vec3> pts{{10, 10, 10}, {12, 9, 9}, {14, 8, 8}};
    const PlaneFit fit = fit_plane(pts);
    CHECK(fit.collinear);
    CHECK(fit.rms < 1e-9);
    const auto c = fit.constant_for({-1, -1, -1});
    REQUIRE(c);
    CHECK(*c == Approx(30.0).epsilon(1e-12));
    CHECK(fit.constant_for({1, 1, 1}).value() == Approx(-30.0).epsilon(1e-12));
    CHECK_FALSE(fit.constant_for({1, 0, 0}).has_value());
}

TEST_CASE("coplanar points give the normalized plane") {
    Rng rng(41);
    std::vector<Vec3> pts;
    for (int i = 0; i < 30; ++i) {
        const double a = uniform(rng, 1, 20);
        const double b = uniform(rng, 1, 20);
        pts.push_back({a, b, 40 - a - b});
    }
    const PlaneFit fit = fit_plane(pts);
    CHECK_FALSE(fit.collinear);
    CHECK(fit.rms < 1e-9);
    for (double a : fit.coefficients) {
        CHECK(a == Approx(-1.0).epsilon(1e-9));
    }
    CHECK(fit.constant == Approx(40.0).epsilon(1e-9));
    CHECK(fit.constant_for({2, 2, 2}).value() == Approx(-80.0).epsilon(1e-9));
    CHECK_FALSE(fit.constant_for({1, -2, -1}).has_value());
}

TEST_CASE("coefficients are normalized to unit max and non-negative constant") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 n{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
        const double d = uniform(rng, -20, 20);
        std::vector<Vec3> pts;
        for (int i = 0; i < 20; ++i) {
            // Points on n . l = d plus a little noise.
            const Vec3 p{uniform(rng, 1, 30), uniform(rng, 1, 30), uniform(rng, 1, 30)};
            const double nn = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
            const double off = (n[0] * p[0] + n[1] * p[1] + n[2] * p[2] - d) / nn;
            const double eps = uniform(rng, -1e-3, 1e-3);
            pts.push_back({p[0] - off * n[0] + eps, p[1] - off * n[1], p[2] - off * n[2]});
        }
        const PlaneFit fit = fit_plane(pts);
        const double mx = std::max({std::abs(fit.coefficients[0]), std::abs(fit.coefficients[1]),
                                    std::abs(fit.coefficients[2])});
        CHECK(mx == Approx(1.0).epsilon(1e-12));
        CHECK(fit.constant >= 0.0);
        CHECK(fit.rms < 1e-3);
        for (const auto& p : pts) {
            const double r = fit.coefficients[0] * p[0] + fit.coefficients[1] * p[1] + fit.coefficients[2] * p[2] +
                             fit.constant;
            CHECK(std::abs(r) < 5e-3);
        }
    }
}

TEST_CASE("degenerate input") {
    const std::vector<Vec3> twice{{1, 2, 3}, {1, 2, 3}, {4, 5, 6}};
    CHECK_THROWS_AS(fit_plane(twice), Error);
    try {
        fit_plane(twice);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Degenerate);
    }
}

TEST_CASE("front fits reject unsuitable fronts") {
    ParetoSet slot;
    for (int i = 0; i < 5; ++i) {
        slot.members.push_back(member(MechanismKind::SlotFollower, 29, 3 + i, 0, 25 + i));
    }
    CHECK_THROWS_AS(pareto_line_fit(slot), Error);

    ParetoSet mixed;
    mixed.members.push_back(member(MechanismKind::CrankSlider4, 14, 14, 15, 25));
    mixed.members.push_back(member(MechanismKind::CrankSlider6, 8, 8, 13, 16));
    mixed.members.push_back(member(MechanismKind::CrankSlider6, 9, 8, 12, 17));
    CHECK_THROWS_AS(pareto_line_fit(mixed), Error);

    ParetoSet tiny;
    tiny.members.push_back(member(MechanismKind::CrankSlider4, 14, 14, 15, 25));
    tiny.members.push_back(member(MechanismKind::CrankSlider4, 15, 15, 14, 26));
    try {
        pareto_line_fit(tiny);
        FAIL("expected Degenerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Degenerate);
    }
}

TEST_CASE("four-bar line front") {
    ParetoSet front;
    for (int i = 0; i <= 10; ++i) {
        const double t = 14.5 + 0.5 * i;
        front.members.push_back(member(MechanismKind::CrankSlider4, t, t, 29 - t, 25 + i));
    }
    const auto fits = pareto_line_fit(front);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].collinear);
    const auto c = fits[0].constant_for({1, -2, -1});
    REQUIRE(c);
    CHECK(*c == Approx(29.0).epsilon(1e-9));
    CHECK(fits[0].constant_for({-1, 0, -1}).value() == Approx(29.0).epsilon(1e-9));
}

TEST_CASE("six-bar front splits into its two lines") {
    ParetoSet front;
    // First run: l1 = l2 rising; second run: l2 = l3 falling; both on sum 29.
    for (int i = 0; i < 8; ++i) {
        const double t = 8.8 + 0.1 * i;
        front.members.push_back(member(MechanismKind::CrankSlider6, t, t, 29 - 2 * t, 16.5 + 0.1 * i));
    }
    for (int i = 1; i <= 20; ++i) {
        const double l1 = 10.4 + 0.5 * i;
        const double l23 = (29 - l1) / 2;
        front.members.push_back(member(MechanismKind::CrankSlider6, l1, l23, l23, 17.5 + 0.8 * i));
    }
    const auto parts = split_front(front.members);
    CHECK(parts[0].size() == 8);
    CHECK(parts[1].size() == 20);

    const auto fits = pareto_line_fit(front);
    REQUIRE(fits.size() == 2);
    for (const auto& f : fits) {
        CHECK(f.collinear);
        CHECK(f.constant_for({-1, -1, -1}).value() == Approx(29.0).epsilon(1e-9));
    }
    CHECK(fits[0].members == 8);
    CHECK(fits[1].members == 20);
}
