#pragma once

// Total-least-squares plane fits of Pareto fronts in link-length space.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "legsynth/kinematics.hpp"
#include "legsynth/optimizer.hpp"

namespace legsynth {

using Vec3 = std::array<double, 3>;

/// Plane a . l + c = 0 with max |a_i| = 1 and c >= 0.
struct PlaneFit {
    Vec3 coefficients{};
    double constant = 0.0;
    double rms = 0.0; // orthogonal residual
    Vec3 centroid{};
    Vec3 direction{};       // principal axis of the points
    double line_ratio = 0.0; // second over first principal spread
    double extent = 0.0;     // largest distance from the centroid along the axis
    bool collinear = false;  // line_ratio within FitOptions::collinear_ratio
    std::size_t members = 0;

    /// For points on a line every plane through the line fits equally well.
    /// Returns c such that normal . l + c = 0 through the centroid, taking
    /// the normal as given, when that plane is the fitted one or, for
    /// collinear input, contains the principal line; `tolerance` bounds the
    /// cosine between normal and axis (or 1 - cosine to the fitted normal).
    [[nodiscard]] std::optional<double> constant_for(const Vec3& normal, double tolerance = 1e-6) const;
};

struct FitOptions {
    double collinear_ratio = 0.03;
};

/// Throws Degenerate when fewer than 3 distinct designs are given.
PlaneFit fit_plane(std::span<const Vec3> points, const FitOptions& options = {});

/// Splits a front (ordered by delta_x) into two runs minimizing the summed
/// squared distance to each run's principal line.  Both runs have at least 3
/// members.  Returned as index lists into `members`, lowest delta_x first.
std::array<std::vector<std::size_t>, 2> split_front(std::span<const Individual> members);

/// One fit for d = 2, two fits (in delta_x order) for d = 3.  Throws
/// InvalidArgument for d = 1 or mixed kinds, Degenerate for fewer than 3
/// distinct designs.
std::vector<PlaneFit> pareto_line_fit(const ParetoSet& front, const FitOptions& options = {});

} // namespace legsynth
