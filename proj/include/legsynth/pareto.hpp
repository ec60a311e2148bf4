#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace legsynth {

/// Objective pair: delta_x is minimized, eta is maximized.
struct ObjectivePoint {
    double delta_x = 0.0;
    double eta = 0.0;

    friend bool operator==(const ObjectivePoint&, const ObjectivePoint&) = default;
};

/// True when a is at least as good on both objectives and strictly better on one.
[[nodiscard]] constexpr bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
    return a.delta_x <= b.delta_x && a.eta >= b.eta && (a.delta_x < b.delta_x || a.eta > b.eta);
}

inline constexpr ObjectivePoint kDefaultReference{35.0, 0.3};

/// Indices (ascending) of the non-dominated points.  Exact duplicates keep
/// only their first occurrence.
std::vector<std::size_t> non_dominated_filter(std::span<const ObjectivePoint> points);

/// Area dominated by the points and bounded by the reference point.  Points
/// that do not dominate the reference contribute nothing.
double hypervolume(std::span<const ObjectivePoint> front, ObjectivePoint reference = kDefaultReference);

} // namespace legsynth
