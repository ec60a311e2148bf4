#pragma once

// Exhaustive grid search used as the reference front for the optimizer.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "legsynth/evaluation.hpp"
#include "legsynth/optimizer.hpp"

namespace legsynth {

/// Values lo, lo + step, ... up to hi (inclusive within 1e-9 of a step).
struct GridRange {
    double lo = 1.0;
    double hi = 50.0;
    double step = 1.0;

    [[nodiscard]] std::size_t count() const;
    /// Computed from the index, so no accumulated drift.
    [[nodiscard]] double value(std::size_t i) const;
};

/// Parses "lo:hi:step".
GridRange parse_grid_range(const std::string& text);
std::string to_string(const GridRange& range);

struct GridSpec {
    std::vector<MechanismKind> kinds{MechanismKind::SlotFollower, MechanismKind::CrankSlider4,
                                     MechanismKind::CrankSlider6};
    GridRange l1;
    GridRange l2;
    GridRange l3; // ignored for d = 1
    std::size_t budget = 10'000'000;

    /// Throws InvalidArgument for a broken range (step <= 0, lo > hi,
    /// outside [1, 50]) or an empty kind list.
    void validate() const;
    [[nodiscard]] std::size_t combinations() const;
};

std::string to_string(const GridSpec& grid);

struct OracleProgress {
    std::size_t done = 0;      // grid points visited
    std::size_t total = 0;     // grid points overall
    std::size_t evaluated = 0; // full stroke evaluations run
    std::size_t feasible = 0;
};

struct OracleOptions {
    std::size_t samples = 512;
    DesignLimits limits{};
    std::size_t threads = 0;
    std::function<void(const OracleProgress&)> progress; // called from the calling thread
};

/// Front of every feasible grid point.  Iteration order is kind, l1, l2, l3
/// so ties keep the earliest point.  Throws BudgetExceeded when the grid is
/// larger than its budget.
ParetoSet grid_oracle(const GridSpec& grid, const PipeSpec& pipe, const OracleOptions& options = {},
                      OracleProgress* stats = nullptr);

enum class BandWinner { First, Second, Tie, Mixed, Neither };

std::string_view to_string(BandWinner winner) noexcept;

struct DominanceBand {
    double eta_lo = 0.0;
    double eta_hi = 0.0;
    BandWinner winner = BandWinner::Neither;
    double first_delta_x = 0.0; // best delta_x with eta >= eta_lo, inf if unreachable
    double second_delta_x = 0.0;
};

struct DominanceOptions {
    double band_width = 0.05;
    double tie_tolerance = 1e-9;
};

/// Best delta_x reachable at efficiency >= level (inf if none).
double attainment(std::span<const ObjectivePoint> front, double level);

/// Splits the eta axis covered by either front into bands of fixed width
/// (edges on multiples of the width) and names the front with the smaller
/// attainable delta_x throughout each band.
std::vector<DominanceBand> front_dominance_report(std::span<const ObjectivePoint> first,
                                                  std::span<const ObjectivePoint> second,
                                                  const DominanceOptions& options = {});

} // namespace legsynth
