#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "legsynth/kinematics.hpp"

namespace legsynth {

struct PipeSpec {
    double r_min = 14.0;
    double r_max = 29.0;
    ElbowSpec elbow{};
};

void validate(const PipeSpec& pipe);

/// Thresholds of the design problem.
struct DesignLimits {
    double eta_min = 0.3;         // g7
    double rho_min = 0.5;         // g8
    double delta_x_max = 35.0;    // g9
    double length_min = 1.0;      // g10
    double length_max = 50.0;     // g10
    double reach_tolerance = 0.1; // top of stroke may fall short of r_max by this much after the g8 clamp
};

struct DesignVector {
    MechanismKind kind = MechanismKind::SlotFollower;
    LinkLengths lengths;

    friend bool operator==(const DesignVector&, const DesignVector&) = default;
};

/// Builds a design from d and three length genes; l3 is dropped for d = 1.
DesignVector make_design(MechanismKind kind, double l1, double l2, double l3);

struct StrokeInterval {
    double rho_lo = 0.0;
    double rho_hi = 0.0;
    double rho_top = 0.0; // stroke at y = r_max before the g8 clamp
};

enum class ConstraintId { G1 = 1, G2, G3, G4, G5, G6, G7, G8, G9, G10 };

std::string_view to_string(ConstraintId id) noexcept;

struct ConstraintStatus {
    ConstraintId id;
    bool satisfied;
    double margin; // positive = satisfied
};

struct Evaluation {
    std::optional<double> delta_x;
    std::optional<double> eta_min;
    bool feasible = false;
    std::vector<ConstraintStatus> constraints; // every constraint that applies to the kind
    std::string note;                          // why objectives are missing, if they are

    [[nodiscard]] std::vector<ConstraintStatus> violations() const;
    /// Sum of negative margins; zero iff feasible.
    [[nodiscard]] double total_violation() const;
};

struct EvaluationOptions {
    std::size_t samples = 512;
    DesignLimits limits{};
};

/// Stroke interval mapping the contact point over [r_min, r_max], clamped
/// to rho >= rho_min.  Throws Unreachable when the mechanism cannot span
/// the pipe range.
StrokeInterval operating_stroke(const DesignVector& design, const PipeSpec& pipe,
                                const DesignLimits& limits = {});

/// Axial span of all joints over the operating stroke.
double delta_x(const DesignVector& design, const PipeSpec& pipe, std::size_t samples = 512,
               const DesignLimits& limits = {});

/// Worst-case transmission efficiency over the operating stroke.
double min_efficiency(const DesignVector& design, const PipeSpec& pipe, std::size_t samples = 512,
                      const DesignLimits& limits = {});

/// Constraints that need no stroke sweep (g1-g6 as they apply to the kind,
/// and g10).  Cheap enough for grid prefiltering.
std::vector<ConstraintStatus> static_constraints(const DesignVector& design, const PipeSpec& pipe,
                                                 const DesignLimits& limits = {});

std::vector<ConstraintStatus> check_constraints(const DesignVector& design, const PipeSpec& pipe,
                                                const EvaluationOptions& options = {});

/// Total function: never throws for a well-formed design.
Evaluation evaluate_design(const DesignVector& design, const PipeSpec& pipe,
                           const EvaluationOptions& options = {});

} // namespace legsynth
