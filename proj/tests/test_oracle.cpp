#include "doctest.h"

#include <algorithm>
#include <string>

#include "legsynth/oracle.hpp"
#include "support.hpp"

using namespace legsynth;
using namespace legsynth::testing;
using doctest::Approx;

namespace {

GridSpec grid_for(MechanismKind kind, const char* l1, const char* l2, const char* l3 = "1:1:1") {
    GridSpec g;
    g.kinds = {kind};
    g.l1 = parse_grid_range(l1);
    g.l2 = parse_grid_range(l2);
    g.l3 = parse_grid_range(l3);
    return g;
}

} // namespace

TEST_CASE("grid ranges") {
    const GridRange r = parse_grid_range("29:30:0.1");
    CHECK(r.count() == 11);
    CHECK(r.value(0) == 29.0);
    CHECK(r.value(3) == 29.3);
    CHECK(r.value(10) == 30.0);
    CHECK(parse_grid_range("1:14:0.2").count() == 66);
    CHECK(parse_grid_range("5:5:1").count() == 1);
    CHECK(to_string(r) == "29:30:0.1");
    CHECK_THROWS_AS(parse_grid_range("1:2"), Error);
    CHECK_THROWS_AS(parse_grid_range("1:x:1"), Error);
    CHECK_THROWS_AS(parse_grid_range("1:2:3:4"), Error);
}

TEST_CASE("grid validation") {
    GridSpec g = grid_for(MechanismKind::CrankSlider4, "1:2:0.5", "1:2:0.5", "1:2:0.5");
    CHECK_NOTHROW(g.validate());
    g.l1.step = 0.0;
    CHECK_THROWS_AS(g.validate(), Error);
    g = grid_for(MechanismKind::CrankSlider4, "0.5:2:0.5", "1:2:0.5", "1:2:0.5");
    CHECK_THROWS_AS(g.validate(), Error);
    g = grid_for(MechanismKind::CrankSlider4, "1:51:0.5", "1:2:0.5", "1:2:0.5");
    CHECK_THROWS_AS(g.validate(), Error);
    g.kinds.clear();
    CHECK_THROWS_AS(g.validate(), Error);
    // l3 is irrelevant for the slot-follower.
    GridSpec s = grid_for(MechanismKind::SlotFollower, "29:30:0.1", "1:14:0.1", "0:0:0");
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("budget") {
    GridSpec g;
    const std::string all = "1:50:" + std::to_string(49.0 / 249.0);
    g.l1 = g.l2 = g.l3 = parse_grid_range(all);
    REQUIRE(g.l1.count() == 250);
    CHECK(g.combinations() == 250u * 250u + 2u * 250u * 250u * 250u);
    try {
        grid_oracle(g, PipeSpec{});
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
        CHECK(std::string(e.what()).find(std::to_string(g.combinations())) != std::string::npos);
    }
}

TEST_CASE("singleton grid") {
    const ParetoSet f = grid_oracle(grid_for(MechanismKind::CrankSlider6, "8.8:8.8:1", "8.8:8.8:1", "11.6:11.6:1"),
                                    PipeSpec{});
    REQUIRE(f.members.size() == 1);
    CHECK(f.members[0].design == make_design(MechanismKind::CrankSlider6, 8.8, 8.8, 11.6));
    CHECK(f.members[0].objectives.delta_x == Approx(16.585559).epsilon(1e-6));
}

TEST_CASE("slot-follower grid front") {
    OracleProgress stats;
    std::vector<OracleProgress> seen;
    OracleOptions options;
    options.progress = [&](const OracleProgress& p) { seen.push_back(p); };
    const GridSpec g = grid_for(MechanismKind::SlotFollower, "29:30:0.1", "1:14:0.1");
    const ParetoSet f = grid_oracle(g, PipeSpec{}, options, &stats);

    CHECK(stats.total == 11 * 131);
    CHECK(stats.done == stats.total);
    CHECK(stats.feasible > 0);
    CHECK(stats.evaluated >= stats.feasible);
    REQUIRE_FALSE(seen.empty());
    CHECK(seen.back().done == stats.total);
    CHECK(f.provenance.method == "grid");
    CHECK(f.provenance.evaluations == stats.evaluated);

    double eta_lo = INFINITY, eta_hi = -INFINITY, dx_lo = INFINITY, dx_hi = -INFINITY;
    for (const auto& m : f.members) {
        eta_lo = std::min(eta_lo, m.objectives.eta);
        eta_hi = std::max(eta_hi, m.objectives.eta);
        dx_lo = std::min(dx_lo, m.objectives.delta_x);
        dx_hi = std::max(dx_hi, m.objectives.delta_x);
        CHECK(evaluate_design(m.design, PipeSpec{}).feasible);
    }
    // Low end is (29.1, 4.3): eta 0.384 at delta_x 25.63.
    CHECK(std::abs(eta_lo - 0.35) < 0.05);
    CHECK(std::abs(eta_hi - 1.25) < 0.02);
    CHECK(std::abs(dx_lo - 25.7) < 0.1);
    CHECK(std::abs(dx_hi - 32.3) < 0.1);
    for (const auto& a : f.members) {
        for (const auto& b : f.members) {
            CHECK_FALSE(dominates(a.objectives, b.objectives));
        }
    }
}

TEST_CASE("refining the grid never loses hypervolume") {
    const PipeSpec pipe;
    const double coarse = hypervolume(
        grid_oracle(grid_for(MechanismKind::CrankSlider6, "6:22:1", "2:12:1", "2:14:1"), pipe).points());
    const double fine = hypervolume(
        grid_oracle(grid_for(MechanismKind::CrankSlider6, "6:22:0.5", "2:12:0.5", "2:14:0.5"), pipe).points());
    CHECK(coarse > 0.0);
    CHECK(fine >= coarse - 1e-9);

    const double c1 = hypervolume(grid_oracle(grid_for(MechanismKind::SlotFollower, "29:31:0.2", "1:14:0.2"), pipe).points());
    const double f1 = hypervolume(grid_oracle(grid_for(MechanismKind::SlotFollower, "29:31:0.1", "1:14:0.1"), pipe).points());
    CHECK(f1 >= c1 - 1e-9);
}

TEST_CASE("oracle result does not depend on thread count") {
    const GridSpec g = grid_for(MechanismKind::CrankSlider4, "12:20:0.5", "12:20:0.5", "8:16:0.5");
    OracleOptions one;
    one.threads = 1;
    OracleOptions many;
    many.threads = 3;
    const ParetoSet a = grid_oracle(g, PipeSpec{}, one);
    const ParetoSet b = grid_oracle(g, PipeSpec{}, many);
    REQUIRE(a.members.size() == b.members.size());
    for (std::size_t i = 0; i < a.members.size(); ++i) {
        CHECK(a.members[i].design == b.members[i].design);
        CHECK(a.members[i].objectives == b.members[i].objectives);
    }
}

TEST_CASE("dominance report on synthetic fronts") {
    const std::vector<ObjectivePoint> a{{20, 0.4}, {30, 0.9}};
    const std::vector<ObjectivePoint> b{{18, 0.45}, {33, 0.7}};
    const auto same = front_dominance_report(a, a);
    for (const auto& band : same) {
        CHECK(band.winner == BandWinner::Tie);
    }
    const auto bands = front_dominance_report(a, b, {0.1, 1e-9});
    REQUIRE(bands.size() == 6);
    CHECK(bands.front().eta_lo == Approx(0.4));
    // [0.4, 0.5): b is better at 0.4..0.45, a beyond.
    CHECK(bands[0].winner == BandWinner::Mixed);
    CHECK(bands[1].winner == BandWinner::First);
    CHECK(bands[3].winner == BandWinner::First);
    CHECK(bands[5].winner == BandWinner::First);
    CHECK(attainment(a, 0.95) == INFINITY);
    CHECK(attainment(b, 0.5) == 33.0);
    CHECK_THROWS_AS(front_dominance_report(a, std::vector<ObjectivePoint>{}), Error);
}

TEST_CASE("slot-follower against six-bar on coarse grids") {
    const PipeSpec pipe;
    const ParetoSet slot = grid_oracle(grid_for(MechanismKind::SlotFollower, "29:30:0.1", "1:14:0.1"), pipe);
    const ParetoSet six = grid_oracle(grid_for(MechanismKind::CrankSlider6, "6:22:0.5", "2:12:0.5", "2:14:0.5"), pipe);
    const auto bands = front_dominance_report(slot.points(), six.points());
    bool high_checked = false;
    for (const auto& band : bands) {
        if (band.eta_lo >= 0.6 - 1e-12) {
            CHECK(band.winner == BandWinner::First);
            high_checked = true;
        }
    }
    CHECK(high_checked);
    CHECK(attainment(six.points(), 0.3) < attainment(slot.points(), 0.3) - 5.0);
}
