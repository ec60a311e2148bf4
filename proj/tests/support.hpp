#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "legsynth/evaluation.hpp"

namespace legsynth::testing {

// Reference designs with objectives frozen from an independent dense-sampling
// evaluator.  Target values to reproduce are kept alongside.
struct ReferenceDesign {
    const char* name;
    MechanismKind kind;
    double l1, l2, l3;
    double rho_lo, rho_hi;
    double delta_x, eta_min;
    double target_delta_x, target_eta;

    [[nodiscard]] DesignVector design() const { return make_design(kind, l1, l2, l3); }
};

inline const std::vector<ReferenceDesign>& reference_designs() {
    using K = MechanismKind;
    static const std::vector<ReferenceDesign> table = {
        {"S1a", K::SlotFollower, 29.0, 14.0, 0.0, 0.5, 25.396850, 32.313915, 1.254244, 32.3, 1.25},
        {"S1b", K::SlotFollower, 29.0, 10.5, 0.0, 0.5, 19.047638, 29.055701, 0.940683, 29.1, 0.94},
        {"S1c", K::SlotFollower, 29.2, 3.9, 0.0, 0.5, 7.138389, 25.677747, 0.347003, 25.7, 0.35},
        {"S2a", K::CrankSlider4, 20.0, 20.0, 9.0, 0.5, 35.030138, 35.030138, 0.760346, 35.0, 0.75},
        {"S2b", K::CrankSlider4, 17.3, 17.3, 11.7, 0.5, 30.301070, 30.301070, 0.657699, 30.3, 0.65},
        {"S2c", K::CrankSlider4, 13.8, 13.8, 15.2, 0.5, 24.170795, 25.396850, 0.524639, 25.4, 0.52},
        {"S3a", K::CrankSlider6, 19.8, 4.6, 4.6, 0.5, 34.679837, 34.679837, 0.752743, 34.9, 0.75},
        {"S3b", K::CrankSlider6, 14.7, 7.2, 7.2, 2.435244, 25.773978, 25.773978, 0.554443, 25.7, 0.56},
        {"S3c", K::CrankSlider6, 8.8, 8.8, 11.6, 2.255088, 16.585559, 16.585559, 0.300519, 16.4, 0.30},
    };
    return table;
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct KinematicSample {
    MechanismKind kind;
    LinkLengths lengths;
    double rho;
};

// Random lengths in [1, 50] and a stroke strictly inside the monotone
// branch, away from both ends by `margin` of its width.
inline KinematicSample random_sample(Rng& rng, MechanismKind kind, double margin = 0.02) {
    for (;;) {
        LinkLengths len;
        len.l1 = uniform(rng, 1.0, 50.0);
        len.l2 = uniform(rng, 1.0, 50.0);
        if (kind == MechanismKind::SlotFollower) {
            if (len.l2 >= 0.95 * len.l1) {
                continue;
            }
        } else {
            len.l3 = uniform(rng, 1.0, 50.0);
        }
        const MonotoneBranch b = monotone_branch(kind, len);
        const double width = b.rho_end - b.rho_begin;
        if (!(width > 1e-3)) {
            continue;
        }
        const double rho = uniform(rng, b.rho_begin + margin * width, b.rho_end - margin * width);
        if (rho <= 1e-3) {
            continue;
        }
        return {kind, len, rho};
    }
}

inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace legsynth::testing
