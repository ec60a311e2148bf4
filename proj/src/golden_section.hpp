#pragma once

#include <cmath>
#include <utility>

namespace legsynth::detail {

struct LineMinimum {
    double x;
    double value;
};

/// Golden-section search for the minimum of a unimodal f on [a, b].  The
/// bracket endpoints are candidates too, so a monotone f returns its
/// smaller endpoint.
template <class F>
LineMinimum golden_section_minimize(F&& f, double a, double b, double tolerance) {
    constexpr double kInvPhi = 0.6180339887498949;
    if (b < a) {
        std::swap(a, b);
    }
    LineMinimum best{a, f(a)};
    if (const double fb = f(b); fb < best.value) {
        best = {b, fb};
    }
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const LineMinimum inner = fc < fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
    return inner.value < best.value ? inner : best;
}

} // namespace legsynth::detail
