#include "legsynth/pareto.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace legsynth {

std::vector<std::size_t> non_dominated_filter(std::span<const ObjectivePoint> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Sweep by increasing delta_x (ties: larger eta first, then input order);
    // a point survives iff it strictly improves the best eta seen so far.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].delta_x != points[b].delta_x) {
            return points[a].delta_x < points[b].delta_x;
        }
        return points[a].eta > points[b].eta;
    });

    std::vector<std::size_t> kept;
    double best_eta = -std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
        if (points[i].eta > best_eta) {
            kept.push_back(i);
            best_eta = points[i].eta;
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double hypervolume(std::span<const ObjectivePoint> front, ObjectivePoint reference) {
    std::vector<ObjectivePoint> inside;
    for (const auto& p : front) {
        if (p.delta_x < reference.delta_x && p.eta > reference.eta) {
            inside.push_back(p);
        }
    }
    if (inside.empty()) {
        return 0.0;
    }
    std::sort(inside.begin(), inside.end(), [](const ObjectivePoint& a, const ObjectivePoint& b) {
        return a.delta_x != b.delta_x ? a.delta_x < b.delta_x : a.eta > b.eta;
    });

    // Vertical slabs between consecutive delta_x values; each slab's height
    // is the best eta reachable at or left of it.
    double area = 0.0;
    double best_eta = reference.eta;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        best_eta = std::max(best_eta, inside[i].eta);
        const double right = i + 1 < inside.size() ? inside[i + 1].delta_x : reference.delta_x;
        area += (right - inside[i].delta_x) * (best_eta - reference.eta);
    }
    return area;
}

} // namespace legsynth
