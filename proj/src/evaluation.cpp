#include "legsynth/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "golden_section.hpp"

namespace legsynth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Margins within this of zero count as satisfied (grid points on an active
// boundary suffer round-off).
constexpr double kConstraintTolerance = 1e-9;

constexpr double kRhoTolerance = 1e-7;

[[noreturn]] void throw_unreachable(const std::string& why) { throw Error(ErrorCode::Unreachable, why); }

struct SweepResult {
    double delta_x;
    double eta_min;
};

double efficiency_at(const DesignVector& design, double rho) noexcept {
    const double dy = detail::velocity_ratio(design.kind, design.lengths, rho);
    if (std::isinf(dy)) {
        return 0.0;
    }
    if (std::isnan(dy) || std::abs(dy) < 1e-12) {
        return kInf;
    }
    return 1.0 / std::abs(dy);
}

std::array<double, 6> joint_x(const DesignVector& design, double rho, std::size_t& count) {
    JointLayout layout;
    if (detail::construct_layout(design.kind, design.lengths, rho, layout) ==
        detail::LayoutStatus::NoAssembly) {
        throw Error(ErrorCode::NoAssembly, "no assembly inside the operating stroke");
    }
    count = layout.joint_count();
    const auto joints = layout.joints();
    std::array<double, 6> xs{};
    for (std::size_t j = 0; j < count; ++j) {
        xs[j] = joints[j].x;
    }
    return xs;
}

// Uniform sampling followed by golden-section refinement of every joint's
// extreme abscissa and of the efficiency minimum.
SweepResult sweep(const DesignVector& design, const StrokeInterval& stroke, std::size_t samples,
                  bool want_delta_x, bool want_eta) {
    if (samples < 2) {
        throw Error(ErrorCode::InvalidArgument, "at least two stroke samples are required");
    }
    const double lo = stroke.rho_lo;
    const double hi = stroke.rho_hi;
    const auto rho_at = [&](std::size_t i) {
        return i + 1 == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    };

    std::size_t count = 0;
    std::array<double, 6> x_max;
    std::array<double, 6> x_min;
    std::array<std::size_t, 6> i_max{};
    std::array<std::size_t, 6> i_min{};
    x_max.fill(-kInf);
    x_min.fill(kInf);
    double eta_best = kInf;
    std::size_t i_eta = 0;

    for (std::size_t i = 0; i < samples; ++i) {
        const double rho = rho_at(i);
        if (want_delta_x) {
            const auto xs = joint_x(design, rho, count);
            for (std::size_t j = 0; j < count; ++j) {
                if (xs[j] > x_max[j]) {
                    x_max[j] = xs[j];
                    i_max[j] = i;
                }
                if (xs[j] < x_min[j]) {
                    x_min[j] = xs[j];
                    i_min[j] = i;
                }
            }
        }
        if (want_eta) {
            const double eta = efficiency_at(design, rho);
            if (eta < eta_best) {
                eta_best = eta;
                i_eta = i;
            }
        }
    }

    const auto bracket = [&](std::size_t i) {
        return std::pair{rho_at(i == 0 ? 0 : i - 1), rho_at(std::min(i + 1, samples - 1))};
    };

    SweepResult result{0.0, eta_best};
    if (want_delta_x) {
        double overall_max = -kInf;
        double overall_min = kInf;
        for (std::size_t j = 0; j < count; ++j) {
            std::size_t dummy = 0;
            const auto [a_max, b_max] = bracket(i_max[j]);
            const auto upper = detail::golden_section_minimize(
                [&](double rho) { return -joint_x(design, rho, dummy)[j]; }, a_max, b_max, kRhoTolerance);
            const auto [a_min, b_min] = bracket(i_min[j]);
            const auto lower = detail::golden_section_minimize(
                [&](double rho) { return joint_x(design, rho, dummy)[j]; }, a_min, b_min, kRhoTolerance);
            overall_max = std::max({overall_max, x_max[j], -upper.value});
            overall_min = std::min({overall_min, x_min[j], lower.value});
        }
        result.delta_x = overall_max - overall_min;
    }
    if (want_eta) {
        const auto [a, b] = bracket(i_eta);
        const auto refined = detail::golden_section_minimize(
            [&](double rho) { return efficiency_at(design, rho); }, a, b, 1e-9);
        result.eta_min = std::min(eta_best, refined.value);
        if (design.kind == MechanismKind::SlotFollower) {
            // Interior stationary point of the slot-follower efficiency.
            const double rho_star = design.lengths.l2 / std::sqrt(2.0);
            if (rho_star >= lo && rho_star <= hi) {
                result.eta_min = std::min(result.eta_min, efficiency_at(design, rho_star));
            }
        }
        if (!std::isfinite(result.eta_min)) {
            throw Error(ErrorCode::Singular, "efficiency unbounded over the whole stroke");
        }
    }
    return result;
}

ConstraintStatus make_status(ConstraintId id, double margin) {
    return {id, margin >= -kConstraintTolerance, margin};
}

} // namespace

void validate(const PipeSpec& pipe) {
    if (!(pipe.r_min > 0.0) || !(pipe.r_max > pipe.r_min) || !std::isfinite(pipe.r_max)) {
        throw Error(ErrorCode::InvalidGeometry, "pipe radii must satisfy 0 < r_min < r_max");
    }
}

DesignVector make_design(MechanismKind kind, double l1, double l2, double l3) {
    DesignVector design{kind, {l1, l2, std::nullopt}};
    if (kind != MechanismKind::SlotFollower) {
        design.lengths.l3 = l3;
    }
    return design;
}

std::string_view to_string(ConstraintId id) noexcept {
    static constexpr std::array<std::string_view, 10> names{"g1", "g2", "g3", "g4", "g5",
                                                            "g6", "g7", "g8", "g9", "g10"};
    const int index = static_cast<int>(id) - 1;
    return index >= 0 && index < 10 ? names[static_cast<std::size_t>(index)] : "g?";
}

std::vector<ConstraintStatus> Evaluation::violations() const {
    std::vector<ConstraintStatus> out;
    std::copy_if(constraints.begin(), constraints.end(), std::back_inserter(out),
                 [](const ConstraintStatus& c) { return !c.satisfied; });
    return out;
}

double Evaluation::total_violation() const {
    double total = 0.0;
    for (const auto& c : constraints) {
        if (!c.satisfied) {
            total += std::max(-c.margin, kConstraintTolerance);
        }
    }
    return total;
}

StrokeInterval operating_stroke(const DesignVector& design, const PipeSpec& pipe, const DesignLimits& limits) {
    validate(design.kind, design.lengths);
    validate(pipe);
    const auto kind = design.kind;
    const auto& len = design.lengths;

    const StrokeLimits y_limits = stroke_limits(kind, len);
    if (y_limits.y_max < pipe.r_max - kConstraintTolerance) {
        throw_unreachable("y_max = " + std::to_string(y_limits.y_max) + " below r_max = " +
                          std::to_string(pipe.r_max));
    }
    if (y_limits.y_min > pipe.r_min + kConstraintTolerance) {
        throw_unreachable("y_min = " + std::to_string(y_limits.y_min) + " above r_min = " +
                          std::to_string(pipe.r_min));
    }

    const MonotoneBranch branch = monotone_branch(kind, len);
    const double y_peak = direct_kinematics(kind, len, branch.rho_begin);
    if (y_peak < pipe.r_max - limits.reach_tolerance) {
        throw_unreachable("linkage peaks at y = " + std::to_string(y_peak) + " below r_max = " +
                          std::to_string(pipe.r_max));
    }

    StrokeInterval stroke;
    stroke.rho_top = y_peak > pipe.r_max ? inverse_kinematics(kind, len, pipe.r_max) : branch.rho_begin;
    stroke.rho_lo = std::max(limits.rho_min, stroke.rho_top);
    stroke.rho_hi = inverse_kinematics(kind, len, std::max(pipe.r_min, y_limits.y_min));
    if (stroke.rho_lo > stroke.rho_hi) {
        throw_unreachable("stroke clamp rho >= " + std::to_string(limits.rho_min) +
                          " leaves no stroke reaching r_min");
    }
    return stroke;
}

double delta_x(const DesignVector& design, const PipeSpec& pipe, std::size_t samples, const DesignLimits& limits) {
    const StrokeInterval stroke = operating_stroke(design, pipe, limits);
    return sweep(design, stroke, samples, true, false).delta_x;
}

double min_efficiency(const DesignVector& design, const PipeSpec& pipe, std::size_t samples,
                      const DesignLimits& limits) {
    const StrokeInterval stroke = operating_stroke(design, pipe, limits);
    return sweep(design, stroke, samples, false, true).eta_min;
}

std::vector<ConstraintStatus> static_constraints(const DesignVector& design, const PipeSpec& pipe,
                                                 const DesignLimits& limits) {
    const auto& len = design.lengths;
    const double l1 = len.l1;
    const double l2 = len.l2;
    const double l3 = len.l3_or_zero();

    std::vector<ConstraintStatus> cs;
    switch (design.kind) {
    case MechanismKind::SlotFollower:
        cs.push_back(make_status(ConstraintId::G1, l1 - pipe.r_max));
        cs.push_back(make_status(ConstraintId::G2, pipe.r_min - l2));
        break;
    case MechanismKind::CrankSlider4:
        cs.push_back(make_status(ConstraintId::G3, std::min(l2 * (l3 / l1 + 1.0), l1 + l3) - pipe.r_max));
        // y_min = 0 for the four-bar, so r_min >= y_min always holds.
        cs.push_back(make_status(ConstraintId::G4, pipe.r_min));
        break;
    case MechanismKind::CrankSlider6:
        cs.push_back(make_status(ConstraintId::G5, l1 + l2 + l3 - pipe.r_max));
        cs.push_back(make_status(ConstraintId::G6, pipe.r_min - stroke_limits(design.kind, len).y_min));
        break;
    }

    double g10 = kInf;
    for (double l : {l1, l2}) {
        g10 = std::min({g10, l - limits.length_min, limits.length_max - l});
    }
    if (len.l3) {
        g10 = std::min({g10, l3 - limits.length_min, limits.length_max - l3});
    }
    cs.push_back(make_status(ConstraintId::G10, g10));
    return cs;
}

Evaluation evaluate_design(const DesignVector& design, const PipeSpec& pipe, const EvaluationOptions& options) {
    validate(design.kind, design.lengths);
    validate(pipe);
    const auto& lim = options.limits;
    const auto& len = design.lengths;

    Evaluation ev;
    auto& cs = ev.constraints;
    cs = static_constraints(design, pipe, lim);

    std::optional<StrokeInterval> stroke;
    try {
        stroke = operating_stroke(design, pipe, lim);
    } catch (const Error& e) {
        ev.note = e.what();
    }

    if (stroke) {
        try {
            const SweepResult r = sweep(design, *stroke, options.samples, true, true);
            ev.delta_x = r.delta_x;
            ev.eta_min = r.eta_min;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::InvalidArgument) {
                throw;
            }
            ev.note = e.what();
        }
    }

    if (ev.eta_min) {
        cs.push_back(make_status(ConstraintId::G7, *ev.eta_min - lim.eta_min));
    }

    // g8: after clamping to rho_min the stroke still has to reach r_max.
    {
        const MonotoneBranch branch = monotone_branch(design.kind, len);
        const double rho_lo = stroke ? stroke->rho_lo : std::max(lim.rho_min, branch.rho_begin);
        std::optional<double> y_lo;
        try {
            y_lo = direct_kinematics(design.kind, len, rho_lo);
        } catch (const Error&) {
        }
        if (y_lo) {
            cs.push_back(make_status(ConstraintId::G8, *y_lo - (pipe.r_max - lim.reach_tolerance)));
        }
    }

    if (ev.delta_x) {
        cs.push_back(make_status(ConstraintId::G9, lim.delta_x_max - *ev.delta_x));
    }

    std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

    const bool all_satisfied =
        std::all_of(cs.begin(), cs.end(), [](const ConstraintStatus& c) { return c.satisfied; });
    if (all_satisfied && !(ev.delta_x && ev.eta_min)) {
        // Objectives could not be computed although no listed constraint
        // failed; report it against the stroke constraint.
        auto it = std::find_if(cs.begin(), cs.end(), [](const auto& c) { return c.id == ConstraintId::G8; });
        if (it == cs.end()) {
            cs.push_back({ConstraintId::G8, false, -lim.reach_tolerance});
            std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        } else {
            *it = {ConstraintId::G8, false, std::min(it->margin, -lim.reach_tolerance)};
        }
    }
    ev.feasible = std::all_of(cs.begin(), cs.end(), [](const ConstraintStatus& c) { return c.satisfied; });
    return ev;
}

std::vector<ConstraintStatus> check_constraints(const DesignVector& design, const PipeSpec& pipe,
                                                const EvaluationOptions& options) {
    return evaluate_design(design, pipe, options).constraints;
}

} // namespace legsynth
