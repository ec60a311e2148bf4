#include "legsynth/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace legsynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance on squared distances used to flag singular layouts.
constexpr double kSingularTolerance = 1e-12;

bool is_valid_stroke(double rho) noexcept { return std::isfinite(rho) && rho >= 0.0; }

void require_stroke(double rho) {
    if (!is_valid_stroke(rho)) {
        throw Error(ErrorCode::InvalidArgument,
                    "actuator stroke must be finite and non-negative, got " + std::to_string(rho));
    }
}

[[noreturn]] void throw_no_assembly(MechanismKind kind, double rho) {
    throw Error(ErrorCode::NoAssembly, std::string(to_string(kind)) + ": no assembly at rho = " +
                                           std::to_string(rho));
}

double length_scale(const LinkLengths& lengths) noexcept {
    return std::max({1.0, lengths.l1, lengths.l2, lengths.l3_or_zero()});
}

// --- slot follower ---------------------------------------------------------

std::optional<double> slot_follower_y(const LinkLengths& len, double rho) noexcept {
    // |AB| may not exceed the rod length: P stops at the pivot B.
    const double scale = len.l1 * len.l1;
    if (!detail::clamped_radicand(len.l1 * len.l1 - len.l2 * len.l2 - rho * rho, scale)) {
        return std::nullopt;
    }
    return len.l1 * len.l2 / std::sqrt(len.l2 * len.l2 + rho * rho);
}

double slot_follower_dy(const LinkLengths& len, double rho) noexcept {
    const double r2 = len.l2 * len.l2 + rho * rho;
    return -len.l1 * len.l2 * rho / (r2 * std::sqrt(r2));
}

// --- four-bar crank slider ---------------------------------------------------

bool same_length(double a, double b) noexcept {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, a, b});
}

std::optional<double> four_bar_radicand(const LinkLengths& len, double rho) noexcept {
    const double q = rho * rho + len.l2 * len.l2 - len.l1 * len.l1;
    const double two = 2.0 * rho * len.l2;
    const double scale = std::pow(len.l1 + len.l2, 4);
    return detail::clamped_radicand((two - q) * (two + q), scale);
}

std::optional<double> four_bar_y(const LinkLengths& len, double rho) noexcept {
    const double l3 = len.l3_or_zero();
    if (rho == 0.0) {
        if (same_length(len.l1, len.l2)) {
            return len.l2 + l3;
        }
        return std::nullopt;
    }
    const auto radicand = four_bar_radicand(len, rho);
    if (!radicand) {
        return std::nullopt;
    }
    return std::sqrt(*radicand) * (len.l2 + l3) / (2.0 * rho * len.l2);
}

double four_bar_dy(const LinkLengths& len, double rho) noexcept {
    const double k = (len.l2 + len.l3_or_zero()) / len.l2;
    if (rho == 0.0) {
        return 0.0;
    }
    const double radicand = four_bar_radicand(len, rho).value_or(0.0);
    const double l1s = len.l1 * len.l1;
    const double l2s = len.l2 * len.l2;
    const double r2 = rho * rho;
    const double num = (r2 + l2s - l1s) * (r2 + l1s - l2s);
    if (radicand == 0.0) {
        return num == 0.0 ? std::numeric_limits<double>::quiet_NaN() : -kInf;
    }
    return -k * num / (2.0 * r2 * std::sqrt(radicand));
}

// --- six-bar crank slider ----------------------------------------------------

bool six_bar_in_domain(const LinkLengths& len, double rho) noexcept {
    const double tol = 1e-12 * length_scale(len);
    return rho <= 2.0 * len.l1 + tol && len.l2 * rho <= 2.0 * len.l1 * len.l3_or_zero() + tol * len.l2;
}

std::optional<double> six_bar_y(const LinkLengths& len, double rho) noexcept {
    if (!six_bar_in_domain(len, rho)) {
        return std::nullopt;
    }
    const double l1 = len.l1;
    const double l2 = len.l2;
    const double l3 = len.l3_or_zero();
    const double r2 = rho * rho;
    const double a1 = 4.0 * std::pow(l1, 4) + 8.0 * std::pow(l1, 3) * l2 + 4.0 * l1 * l1 * l2 * l2 +
                      4.0 * l1 * l1 * l3 * l3 - l1 * l1 * r2 - 2.0 * l1 * l2 * r2 - 2.0 * l2 * l2 * r2;
    const double a2 = (2.0 * l1 - rho) * (2.0 * l1 + rho) * (l1 + l2) * (l1 + l2) *
                      (2.0 * l1 * l3 - l2 * rho) * (2.0 * l1 * l3 + l2 * rho);
    const auto a2c = detail::clamped_radicand(a2, std::pow(2.0 * length_scale(len), 8));
    if (!a2c) {
        return std::nullopt;
    }
    const auto inner = detail::clamped_radicand(a1 + 2.0 * std::sqrt(*a2c),
                                                std::pow(2.0 * length_scale(len), 4));
    if (!inner) {
        return std::nullopt;
    }
    return std::sqrt(*inner) / (2.0 * l1);
}

double six_bar_dy(const LinkLengths& len, double rho) noexcept {
    const double l1 = len.l1;
    const double l2 = len.l2;
    const double l3 = len.l3_or_zero();
    const double h2 = std::max(0.0, l1 * l1 - rho * rho / 4.0);
    const double half = rho * l2 / (2.0 * l1);
    const double s2 = std::max(0.0, l3 * l3 - half * half);
    if (rho == 0.0) {
        return 0.0;
    }
    if (h2 == 0.0 || s2 == 0.0) {
        return -kInf;
    }
    const double dh = -rho / (4.0 * std::sqrt(h2));
    const double ds = -(l2 / (2.0 * l1)) * (l2 / (2.0 * l1)) * rho / std::sqrt(s2);
    return (l1 + l2) / l1 * dh + ds;
}

} // namespace

std::string_view to_string(MechanismKind kind) noexcept {
    switch (kind) {
    case MechanismKind::SlotFollower:
        return "slot-follower";
    case MechanismKind::CrankSlider4:
        return "crank-slider-4";
    case MechanismKind::CrankSlider6:
        return "crank-slider-6";
    }
    return "unknown";
}

MechanismKind kind_from_int(int d) {
    if (d < 1 || d > 3) {
        throw Error(ErrorCode::InvalidArgument,
                    "mechanism kind must be 1, 2 or 3, got " + std::to_string(d));
    }
    return static_cast<MechanismKind>(d);
}

LinkLengths LinkLengths::scaled(double k) const {
    LinkLengths out{l1 * k, l2 * k, std::nullopt};
    if (l3) {
        out.l3 = *l3 * k;
    }
    return out;
}

void validate(MechanismKind kind, const LinkLengths& lengths) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(lengths.l1) || !positive(lengths.l2)) {
        throw Error(ErrorCode::InvalidGeometry, "link lengths must be positive and finite");
    }
    const bool wants_l3 = kind != MechanismKind::SlotFollower;
    if (wants_l3 != lengths.l3.has_value()) {
        throw Error(ErrorCode::InvalidGeometry, wants_l3 ? std::string(to_string(kind)) + " requires l3"
                                                         : "slot-follower takes no l3");
    }
    if (lengths.l3 && !positive(*lengths.l3)) {
        throw Error(ErrorCode::InvalidGeometry, "link lengths must be positive and finite");
    }
}

double distance(const Point2& a, const Point2& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

std::array<Point2, 6> JointLayout::joints() const noexcept {
    if (C && D) {
        return {O, A, B, *C, *D, P};
    }
    return {O, A, B, P, P, P};
}

namespace detail {

std::optional<double> clamped_radicand(double value, double scale) noexcept {
    if (value >= 0.0) {
        return value;
    }
    if (value >= -kRadicandTolerance * std::max(1.0, scale)) {
        return 0.0;
    }
    return std::nullopt;
}

double velocity_ratio(MechanismKind kind, const LinkLengths& lengths, double rho) noexcept {
    switch (kind) {
    case MechanismKind::SlotFollower:
        return slot_follower_dy(lengths, rho);
    case MechanismKind::CrankSlider4:
        return four_bar_dy(lengths, rho);
    case MechanismKind::CrankSlider6:
        return six_bar_dy(lengths, rho);
    }
    return 0.0;
}

LayoutStatus construct_layout(MechanismKind kind, const LinkLengths& len, double rho,
                              JointLayout& out) noexcept {
    if (!is_valid_stroke(rho)) {
        return LayoutStatus::NoAssembly;
    }
    const double scale = length_scale(len);
    bool singular = rho <= kSingularTolerance * scale;
    out = JointLayout{};
    out.A = {rho, 0.0};

    switch (kind) {
    case MechanismKind::SlotFollower: {
        out.B = {0.0, len.l2};
        const double ab = std::hypot(rho, len.l2);
        if (len.l1 < ab * (1.0 - 1e-12)) {
            return LayoutStatus::NoAssembly;
        }
        const double t = len.l1 / ab;
        out.P = {rho - t * rho, t * len.l2};
        break;
    }
    case MechanismKind::CrankSlider4: {
        const double l3 = len.l3_or_zero();
        if (singular) {
            if (!same_length(len.l1, len.l2)) {
                return LayoutStatus::NoAssembly;
            }
            out.B = {0.0, len.l2};
        } else {
            // Upper intersection of circle(O, l2) and circle(A, l1).
            const double bx = (rho * rho + (len.l2 - len.l1) * (len.l2 + len.l1)) / (2.0 * rho);
            const auto by2 = clamped_radicand((len.l2 - bx) * (len.l2 + bx), len.l2 * len.l2);
            if (!by2) {
                return LayoutStatus::NoAssembly;
            }
            singular = singular || *by2 <= kSingularTolerance * len.l2 * len.l2;
            out.B = {bx, std::sqrt(*by2)};
        }
        const double k = (len.l2 + l3) / len.l2;
        out.P = {out.B.x * k, out.B.y * k};
        break;
    }
    case MechanismKind::CrankSlider6: {
        const double l1 = len.l1;
        const double l3 = len.l3_or_zero();
        const auto h2 = clamped_radicand(l1 * l1 - rho * rho / 4.0, l1 * l1);
        if (!h2) {
            return LayoutStatus::NoAssembly;
        }
        singular = singular || *h2 <= kSingularTolerance * l1 * l1;
        out.B = {rho / 2.0, std::sqrt(*h2)};
        const double ext = (l1 + len.l2) / l1;
        out.D = Point2{out.B.x * ext, out.B.y * ext};
        out.C = Point2{rho + (out.B.x - rho) * ext, out.B.y * ext};
        const double half = (out.D->x - out.C->x) / 2.0;
        const auto s2 = clamped_radicand(l3 * l3 - half * half, l3 * l3);
        if (!s2) {
            return LayoutStatus::NoAssembly;
        }
        singular = singular || *s2 <= kSingularTolerance * l3 * l3;
        out.P = {(out.C->x + out.D->x) / 2.0, out.D->y + std::sqrt(*s2)};
        break;
    }
    }
    return singular ? LayoutStatus::Singular : LayoutStatus::Ok;
}

} // namespace detail

JointLayout joint_layout(MechanismKind kind, const LinkLengths& lengths, double rho) {
    validate(kind, lengths);
    require_stroke(rho);
    JointLayout layout;
    switch (detail::construct_layout(kind, lengths, rho, layout)) {
    case detail::LayoutStatus::Ok:
        return layout;
    case detail::LayoutStatus::NoAssembly:
        throw_no_assembly(kind, rho);
    case detail::LayoutStatus::Singular:
        throw Error(ErrorCode::Singular,
                    std::string(to_string(kind)) + ": singular configuration at rho = " + std::to_string(rho));
    }
    throw_no_assembly(kind, rho);
}

double direct_kinematics(MechanismKind kind, const LinkLengths& lengths, double rho) {
    validate(kind, lengths);
    require_stroke(rho);
    std::optional<double> y;
    switch (kind) {
    case MechanismKind::SlotFollower:
        y = slot_follower_y(lengths, rho);
        break;
    case MechanismKind::CrankSlider4:
        y = four_bar_y(lengths, rho);
        break;
    case MechanismKind::CrankSlider6:
        y = six_bar_y(lengths, rho);
        break;
    }
    if (!y) {
        throw_no_assembly(kind, rho);
    }
    return *y;
}

double output_velocity_ratio(MechanismKind kind, const LinkLengths& lengths, double rho) {
    // Also validates the domain.
    direct_kinematics(kind, lengths, rho);
    return detail::velocity_ratio(kind, lengths, rho);
}

double transmission_efficiency(MechanismKind kind, const LinkLengths& lengths, double rho) {
    const double dy = output_velocity_ratio(kind, lengths, rho);
    if (std::isnan(dy)) {
        throw Error(ErrorCode::Singular, "velocity ratio undefined at rho = " + std::to_string(rho));
    }
    if (std::isinf(dy)) {
        return 0.0;
    }
    if (std::abs(dy) < 1e-12) {
        throw Error(ErrorCode::Singular,
                    std::string(to_string(kind)) + ": serial singularity at rho = " + std::to_string(rho));
    }
    return 1.0 / std::abs(dy);
}

StrokeLimits stroke_limits(MechanismKind kind, const LinkLengths& lengths) {
    validate(kind, lengths);
    const double l1 = lengths.l1;
    const double l2 = lengths.l2;
    const double l3 = lengths.l3_or_zero();
    switch (kind) {
    case MechanismKind::SlotFollower:
        return {l2, l1};
    case MechanismKind::CrankSlider4:
        return {0.0, std::min(l2 * (l3 / l1 + 1.0), l1 + l3)};
    case MechanismKind::CrankSlider6: {
        const double y_min = l3 >= l2 ? std::sqrt(l3 * l3 - l2 * l2)
                                      : std::sqrt(l2 * l2 - l3 * l3) * (l1 / l2 + 1.0);
        return {y_min, l1 + l2 + l3};
    }
    }
    return {};
}

MonotoneBranch monotone_branch(MechanismKind kind, const LinkLengths& lengths) {
    validate(kind, lengths);
    const double l1 = lengths.l1;
    const double l2 = lengths.l2;
    switch (kind) {
    case MechanismKind::SlotFollower:
        return {0.0, l1 > l2 ? std::sqrt((l1 - l2) * (l1 + l2)) : 0.0};
    case MechanismKind::CrankSlider4:
        return {std::sqrt(std::abs((l1 - l2) * (l1 + l2))), l1 + l2};
    case MechanismKind::CrankSlider6:
        return {0.0, std::min(2.0 * l1, 2.0 * l1 * lengths.l3_or_zero() / l2)};
    }
    return {};
}

double inverse_kinematics(MechanismKind kind, const LinkLengths& lengths, double y) {
    validate(kind, lengths);
    const auto out_of_range = [&](double lo, double hi) {
        return Error(ErrorCode::OutOfRange, std::string(to_string(kind)) + ": y = " + std::to_string(y) +
                                                " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
    };
    const StrokeLimits limits = stroke_limits(kind, lengths);
    const double tol = 1e-12 * length_scale(lengths);
    // The four-bar's tabulated y_max understates the reach of the linkage
    // when l1 != l2, so its range is checked against the construction below.
    const double y_max = kind == MechanismKind::CrankSlider4 ? std::numeric_limits<double>::infinity() : limits.y_max;
    if (!std::isfinite(y) || y < limits.y_min - tol || y > y_max + tol) {
        throw out_of_range(limits.y_min, limits.y_max);
    }

    switch (kind) {
    case MechanismKind::SlotFollower: {
        const double l1 = lengths.l1;
        if (l1 <= lengths.l2) {
            throw out_of_range(limits.y_min, limits.y_max);
        }
        const double yc = std::clamp(y, lengths.l2, l1);
        return lengths.l2 * std::sqrt((l1 - yc) * (l1 + yc)) / yc;
    }
    case MechanismKind::CrankSlider4: {
        // B sits on circle(O, l2) at height b; A lies to the right of B.
        const double l1 = lengths.l1;
        const double l2 = lengths.l2;
        const double b = y * l2 / (l2 + lengths.l3_or_zero());
        const double reach = std::min(l1, l2);
        if (b > reach + tol) {
            throw out_of_range(0.0, reach * (l2 + lengths.l3_or_zero()) / l2);
        }
        const double bc = std::clamp(b, 0.0, reach);
        return std::sqrt((l2 - bc) * (l2 + bc)) + std::sqrt((l1 - bc) * (l1 + bc));
    }
    case MechanismKind::CrankSlider6: {
        const MonotoneBranch branch = monotone_branch(kind, lengths);
        const double y_top = direct_kinematics(kind, lengths, branch.rho_begin);
        const double y_bottom = direct_kinematics(kind, lengths, branch.rho_end);
        if (y >= y_top) {
            return branch.rho_begin;
        }
        if (y <= y_bottom) {
            return branch.rho_end;
        }
        const auto f = [&](double rho) { return direct_kinematics(kind, lengths, rho) - y; };
        boost::math::tools::eps_tolerance<double> stop(std::numeric_limits<double>::digits - 2);
        std::uintmax_t iterations = 200;
        const auto [lo, hi] = boost::math::tools::toms748_solve(f, branch.rho_begin, branch.rho_end,
                                                                y_top - y, y_bottom - y, stop, iterations);
        return 0.5 * (lo + hi);
    }
    }
    return 0.0;
}

double elbow_max_length(const ElbowSpec& elbow) {
    if (!(elbow.d_r > 0.0) || !(elbow.r_c > 0.0) || !(elbow.r_p > 0.0)) {
        throw Error(ErrorCode::InvalidGeometry, "elbow radii and robot diameter must be positive");
    }
    if (elbow.d_r >= 2.0 * elbow.r_p) {
        throw Error(ErrorCode::InvalidGeometry, "robot diameter " + std::to_string(elbow.d_r) +
                                                    " does not fit a pipe of radius " +
                                                    std::to_string(elbow.r_p));
    }
    return 2.0 * std::sqrt((2.0 * elbow.r_p - elbow.d_r) * (2.0 * elbow.r_c + elbow.d_r));
}

} // namespace legsynth
