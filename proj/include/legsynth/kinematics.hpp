#pragma once

// Planar models of the three candidate leg mechanisms.
//
// Every mechanism is driven by a prismatic joint along the pipe axis: O is
// the fixed origin, A = (rho, 0) the slider, and P the contact point whose
// ordinate y is the output.  All lengths are millimetres.
//
//   SlotFollower  rod AP (l1) slides through a pivot B = (0, l2).
//   CrankSlider4  |AB| = l1, |OB| = l2, P on ray O->B with |BP| = l3.
//   CrankSlider6  |OB| = |AB| = l1, D and C extend O->B and A->B by l2,
//                 |DP| = |CP| = l3.

#include <array>
#include <optional>
#include <string_view>

#include "legsynth/errors.hpp"

namespace legsynth {

enum class MechanismKind : int {
    SlotFollower = 1,
    CrankSlider4 = 2,
    CrankSlider6 = 3,
};

inline constexpr std::array<MechanismKind, 3> kAllKinds{
    MechanismKind::SlotFollower, MechanismKind::CrankSlider4, MechanismKind::CrankSlider6};

std::string_view to_string(MechanismKind kind) noexcept;

/// Maps the integer design variable d in {1, 2, 3}; throws InvalidArgument otherwise.
MechanismKind kind_from_int(int d);

[[nodiscard]] constexpr int to_int(MechanismKind kind) noexcept { return static_cast<int>(kind); }

struct LinkLengths {
    double l1 = 0.0;
    double l2 = 0.0;
    std::optional<double> l3; // absent for SlotFollower

    [[nodiscard]] double l3_or_zero() const noexcept { return l3.value_or(0.0); }
    [[nodiscard]] LinkLengths scaled(double k) const;

    friend bool operator==(const LinkLengths&, const LinkLengths&) = default;
};

/// Structural check: positive finite lengths, l3 present iff kind != SlotFollower.
/// The [1, 50] mm design bounds are a constraint (g10), not checked here.
void validate(MechanismKind kind, const LinkLengths& lengths);

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(const Point2& a, const Point2& b) noexcept;

struct JointLayout {
    Point2 O;
    Point2 A;
    Point2 B;
    std::optional<Point2> C; // CrankSlider6 only
    std::optional<Point2> D; // CrankSlider6 only
    Point2 P;

    /// Joints in a fixed order (O, A, B, [C, D,] P).
    [[nodiscard]] std::size_t joint_count() const noexcept { return C ? 6 : 4; }
    [[nodiscard]] std::array<Point2, 6> joints() const noexcept;
};

struct StrokeLimits {
    double y_min = 0.0;
    double y_max = 0.0;
};

/// Actuator-stroke interval on which y(rho) is strictly decreasing.  Every
/// inverse-kinematics query and every operating stroke lives on it.
struct MonotoneBranch {
    double rho_begin = 0.0; // y is maximal here
    double rho_end = 0.0;   // y reaches its lower limit here
};

struct ElbowSpec {
    double r_p = 20.0; // pipe radius
    double r_c = 45.0; // elbow curvature radius
    double d_r = 30.0; // robot diameter
};

/// Constructs every joint position at stroke rho (upper assembly mode).
/// Throws NoAssembly when a required intersection does not exist and
/// Singular at rho = 0 or on a parallel singularity.
JointLayout joint_layout(MechanismKind kind, const LinkLengths& lengths, double rho);

/// Output height from the closed-form direct kinematics.  Defined on the
/// closed domain, including rho = 0 where the limit is taken.
double direct_kinematics(MechanismKind kind, const LinkLengths& lengths, double rho);

/// dy/drho from the analytic derivative of the closed form.
double output_velocity_ratio(MechanismKind kind, const LinkLengths& lengths, double rho);

/// Inverse of direct_kinematics on the monotone branch.
double inverse_kinematics(MechanismKind kind, const LinkLengths& lengths, double y);

StrokeLimits stroke_limits(MechanismKind kind, const LinkLengths& lengths);

MonotoneBranch monotone_branch(MechanismKind kind, const LinkLengths& lengths);

/// Transmission force efficiency eta_f = 1 / |dy/drho| (virtual work).
/// Returns 0 at a parallel singularity; throws Singular where dy/drho
/// vanishes (serial singularity, eta unbounded).
double transmission_efficiency(MechanismKind kind, const LinkLengths& lengths, double rho);

/// Longest rigid body of diameter d_r that negotiates the elbow.
double elbow_max_length(const ElbowSpec& elbow);

namespace detail {

enum class LayoutStatus { Ok, NoAssembly, Singular };

// Non-throwing construction for hot loops.  On Singular the positions are
// still filled in (the clamped limit configuration).
LayoutStatus construct_layout(MechanismKind kind, const LinkLengths& lengths, double rho,
                              JointLayout& out) noexcept;

// dy/drho without domain validation; +-inf at parallel singularities.
double velocity_ratio(MechanismKind kind, const LinkLengths& lengths, double rho) noexcept;

// Clamps radicands within tolerance of zero; nullopt when clearly negative.
std::optional<double> clamped_radicand(double value, double scale) noexcept;

inline constexpr double kRadicandTolerance = 1e-12;

} // namespace detail

} // namespace legsynth
