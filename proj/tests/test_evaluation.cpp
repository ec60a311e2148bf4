#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "legsynth/evaluation.hpp"
#include "support.hpp"

using namespace legsynth;
using namespace legsynth::testing;
using doctest::Approx;

namespace {

const ConstraintStatus* find(const std::vector<ConstraintStatus>& cs, ConstraintId id) {
    const auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.id == id; });
    return it == cs.end() ? nullptr : &*it;
}

} // namespace

TEST_CASE("pipe validation") {
    CHECK_NOTHROW(validate(PipeSpec{}));
    CHECK_THROWS_AS(validate(PipeSpec{29, 14, {}}), Error);
    CHECK_THROWS_AS(validate(PipeSpec{0, 14, {}}), Error);
}

TEST_CASE("make_design drops l3 for the slot-follower") {
    const DesignVector d = make_design(MechanismKind::SlotFollower, 29, 3.9, 7);
    CHECK_FALSE(d.lengths.l3.has_value());
    CHECK(make_design(MechanismKind::CrankSlider6, 1, 2, 3).lengths.l3 == 3.0);
}

TEST_CASE("operating stroke examples") {
    const PipeSpec pipe;
    const StrokeInterval s1 = operating_stroke(make_design(MechanismKind::SlotFollower, 29, 14, 0), pipe);
    CHECK(s1.rho_lo == 0.5);
    CHECK(std::abs(s1.rho_hi - 25.39) < 0.01);
    const StrokeInterval s2 = operating_stroke(make_design(MechanismKind::CrankSlider4, 20, 20, 9), pipe);
    CHECK(s2.rho_lo == 0.5);
    CHECK(std::abs(s2.rho_hi - 35.03) < 0.01);
    try {
        operating_stroke(make_design(MechanismKind::SlotFollower, 20, 3, 0), pipe);
        FAIL("expected Unreachable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unreachable);
    }
}

TEST_CASE("reference designs against frozen oracle values") {
    const PipeSpec pipe;
    for (const auto& ref : reference_designs()) {
        CAPTURE(ref.name);
        const DesignVector d = ref.design();
        const StrokeInterval s = operating_stroke(d, pipe);
        CHECK(s.rho_lo == Approx(ref.rho_lo).epsilon(1e-5));
        CHECK(s.rho_hi == Approx(ref.rho_hi).epsilon(1e-6));
        const Evaluation ev = evaluate_design(d, pipe);
        REQUIRE(ev.delta_x);
        REQUIRE(ev.eta_min);
        CHECK(std::abs(*ev.delta_x - ref.delta_x) < 1e-4);
        CHECK(std::abs(*ev.eta_min - ref.eta_min) < 1e-5);
        CHECK(std::abs(delta_x(d, pipe) - *ev.delta_x) < 1e-12);
        CHECK(std::abs(min_efficiency(d, pipe) - *ev.eta_min) < 1e-12);
    }
}

TEST_CASE("reference design objectives") {
    const PipeSpec pipe;
    CHECK(std::abs(delta_x(make_design(MechanismKind::SlotFollower, 29.2, 3.9, 0), pipe) - 25.7) < 0.3);
    CHECK(std::abs(delta_x(make_design(MechanismKind::CrankSlider4, 20, 20, 9), pipe) - 35.0) < 0.3);
    CHECK(std::abs(delta_x(make_design(MechanismKind::CrankSlider6, 8.8, 8.8, 11.6), pipe) - 16.4) < 0.5);
    CHECK(min_efficiency(make_design(MechanismKind::SlotFollower, 29.2, 3.9, 0), pipe) == Approx(0.347).epsilon(1e-3));
    CHECK(min_efficiency(make_design(MechanismKind::SlotFollower, 29.0, 10.5, 0), pipe) == Approx(0.941).epsilon(1e-3));
    CHECK(std::abs(min_efficiency(make_design(MechanismKind::CrankSlider4, 13.8, 13.8, 15.2), pipe) - 0.525) < 0.01);

    const Evaluation s1b = evaluate_design(make_design(MechanismKind::SlotFollower, 29.0, 10.5, 0), pipe);
    CHECK(s1b.feasible);
    CHECK(std::abs(*s1b.delta_x - 29.1) < 0.3);
    CHECK(std::abs(*s1b.eta_min - 0.94) < 0.02);
    const Evaluation s3a = evaluate_design(make_design(MechanismKind::CrankSlider6, 19.8, 4.6, 4.6), pipe);
    CHECK(s3a.feasible);
    CHECK(std::abs(*s3a.delta_x - 34.9) < 0.5);
    CHECK(std::abs(*s3a.eta_min - 0.75) < 0.02);
}

TEST_CASE("slot-follower minimum efficiency at the stationary stroke") {
    const PipeSpec pipe;
    Rng rng(21);
    int inside = 0;
    for (int i = 0; i < 200; ++i) {
        const double l1 = uniform(rng, 29.0, 45.0);
        const double l2 = uniform(rng, 1.0, 14.0);
        const DesignVector d = make_design(MechanismKind::SlotFollower, l1, l2, 0);
        StrokeInterval s;
        try {
            s = operating_stroke(d, pipe);
        } catch (const Error&) {
            continue;
        }
        const double rho_star = l2 / std::sqrt(2.0);
        if (rho_star < s.rho_lo || rho_star > s.rho_hi) {
            continue;
        }
        ++inside;
        const double analytic = std::pow(l2 * l2 + rho_star * rho_star, 1.5) / (l2 * l1 * rho_star);
        CHECK(min_efficiency(d, pipe) == Approx(analytic).epsilon(1e-6));
    }
    CHECK(inside > 50);
}

TEST_CASE("constraint examples") {
    const PipeSpec pipe;
    const auto s1c = check_constraints(make_design(MechanismKind::SlotFollower, 29.2, 3.9, 0), pipe);
    CHECK(std::all_of(s1c.begin(), s1c.end(), [](const auto& c) { return c.satisfied; }));
    CHECK(find(s1c, ConstraintId::G1)->margin == Approx(0.2));
    CHECK(find(s1c, ConstraintId::G3) == nullptr);

    const auto short_rod = check_constraints(make_design(MechanismKind::SlotFollower, 20, 3.9, 0), pipe);
    REQUIRE(find(short_rod, ConstraintId::G1));
    CHECK_FALSE(find(short_rod, ConstraintId::G1)->satisfied);
    CHECK(find(short_rod, ConstraintId::G1)->margin == Approx(-9.0));

    const auto s3c = check_constraints(make_design(MechanismKind::CrankSlider6, 8.8, 8.8, 11.6), pipe);
    REQUIRE(find(s3c, ConstraintId::G6));
    CHECK(find(s3c, ConstraintId::G6)->satisfied);
    CHECK(find(s3c, ConstraintId::G6)->margin == Approx(14.0 - std::sqrt(11.6 * 11.6 - 8.8 * 8.8)));

    const Evaluation wide = evaluate_design(make_design(MechanismKind::SlotFollower, 29.2, 20, 0), pipe);
    CHECK_FALSE(wide.feasible);
    CHECK_FALSE(find(wide.constraints, ConstraintId::G2)->satisfied);

    const Evaluation big = evaluate_design(make_design(MechanismKind::CrankSlider4, 60, 13.8, 15.2), pipe);
    CHECK_FALSE(big.feasible);
    CHECK_FALSE(find(big.constraints, ConstraintId::G10)->satisfied);

    // S2a sits 0.03 mm beyond the footprint limit.
    const Evaluation s2a = evaluate_design(make_design(MechanismKind::CrankSlider4, 20, 20, 9), pipe);
    CHECK_FALSE(s2a.feasible);
    CHECK(find(s2a.constraints, ConstraintId::G9)->margin == Approx(-0.030138).epsilon(1e-4));
}

TEST_CASE("unreachable designs surface as constraint violations") {
    const PipeSpec pipe;
    const Evaluation ev = evaluate_design(make_design(MechanismKind::CrankSlider6, 5, 5, 5), pipe);
    CHECK_FALSE(ev.feasible);
    CHECK_FALSE(ev.delta_x.has_value());
    CHECK_FALSE(ev.note.empty());
    CHECK_FALSE(find(ev.constraints, ConstraintId::G5)->satisfied);
    CHECK(ev.total_violation() > 0.0);
    CHECK(ev.violations().size() >= 1);
}

TEST_CASE("evaluation invariants") {
    const PipeSpec pipe;
    Rng rng(22);
    for (int i = 0; i < 300; ++i) {
        const auto kind = kAllKinds[i % 3];
        const DesignVector d = make_design(kind, uniform(rng, 1, 50), uniform(rng, 1, 50), uniform(rng, 1, 50));
        const Evaluation ev = evaluate_design(d, pipe);
        CHECK(ev.feasible == ev.violations().empty());
        CHECK(ev.feasible == (ev.total_violation() == 0.0));
        if (ev.delta_x) {
            CHECK(*ev.delta_x > 0.0);
        }
        if (ev.eta_min) {
            CHECK(*ev.eta_min > 0.0);
        }
        const Evaluation again = evaluate_design(d, pipe);
        CHECK(again.delta_x == ev.delta_x);
        CHECK(again.eta_min == ev.eta_min);
        CHECK(again.feasible == ev.feasible);
    }
}

TEST_CASE("minimum efficiency bounds every sampled stroke") {
    const PipeSpec pipe;
    for (const auto& ref : reference_designs()) {
        CAPTURE(ref.name);
        const DesignVector d = ref.design();
        const StrokeInterval s = operating_stroke(d, pipe);
        const double eta = min_efficiency(d, pipe);
        for (int k = 0; k <= 1000; ++k) {
            const double rho = s.rho_lo + (s.rho_hi - s.rho_lo) * k / 1000.0;
            CHECK(eta <= transmission_efficiency(d.kind, d.lengths, rho) + 1e-12);
        }
    }
}

TEST_CASE("footprint converges with sampling") {
    const PipeSpec pipe;
    for (const auto& ref : reference_designs()) {
        CAPTURE(ref.name);
        const double base = delta_x(ref.design(), pipe, 512);
        CHECK(std::abs(delta_x(ref.design(), pipe, 1024) - base) < 1e-3);
        CHECK(std::abs(delta_x(ref.design(), pipe, 4096) - base) < 1e-3);
    }
}

TEST_CASE("footprint bounds every joint over the stroke") {
    const PipeSpec pipe;
    for (const auto& ref : reference_designs()) {
        CAPTURE(ref.name);
        const DesignVector d = ref.design();
        const StrokeInterval s = operating_stroke(d, pipe);
        double lo = INFINITY;
        double hi = -INFINITY;
        for (int k = 0; k <= 4000; ++k) {
            const JointLayout j = joint_layout(d.kind, d.lengths, s.rho_lo + (s.rho_hi - s.rho_lo) * k / 4000.0);
            const auto pts = j.joints();
            for (std::size_t i = 0; i < j.joint_count(); ++i) {
                lo = std::min(lo, pts[i].x);
                hi = std::max(hi, pts[i].x);
            }
        }
        const double dx = delta_x(d, pipe);
        CHECK(dx >= hi - lo - 1e-9);
        CHECK(dx <= hi - lo + 1e-4);
    }
}

TEST_CASE("feasibility is monotone in pipe difficulty for static constraints") {
    Rng rng(23);
    for (int i = 0; i < 300; ++i) {
        const auto kind = kAllKinds[i % 3];
        const DesignVector d = make_design(kind, uniform(rng, 1, 50), uniform(rng, 1, 50), uniform(rng, 1, 50));
        const PipeSpec easy{14, 29, {}};
        const PipeSpec hard{uniform(rng, 8, 14), uniform(rng, 29, 35), {}};
        const auto satisfied = [](const std::vector<ConstraintStatus>& cs) {
            return std::all_of(cs.begin(), cs.end(), [](const auto& c) {
                return c.id > ConstraintId::G6 || c.satisfied;
            });
        };
        if (!satisfied(static_constraints(d, easy))) {
            CHECK_FALSE(satisfied(static_constraints(d, hard)));
        }
    }
}
