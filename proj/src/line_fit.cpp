#include "legsynth/line_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "legsynth/errors.hpp"

namespace legsynth {

namespace {

Eigen::Vector3d as_eigen(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 as_array(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

Vec3 lengths_of(const DesignVector& d) { return {d.lengths.l1, d.lengths.l2, d.lengths.l3_or_zero()}; }

std::size_t distinct_count(std::span<const Vec3> points) {
    std::vector<Vec3> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

// Prefix sums of first and second moments for O(1) segment scatter.
struct Moments {
    std::vector<Eigen::Vector3d> sum;
    std::vector<Eigen::Matrix3d> outer;

    explicit Moments(const std::vector<Vec3>& pts) : sum(pts.size() + 1), outer(pts.size() + 1) {
        sum[0].setZero();
        outer[0].setZero();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto p = as_eigen(pts[i]);
            sum[i + 1] = sum[i] + p;
            outer[i + 1] = outer[i] + p * p.transpose();
        }
    }

    // Squared distance of points [a, b) to their principal line.
    [[nodiscard]] double line_residual(std::size_t a, std::size_t b) const {
        const double n = static_cast<double>(b - a);
        const Eigen::Vector3d s = sum[b] - sum[a];
        const Eigen::Matrix3d scatter = (outer[b] - outer[a]) - s * s.transpose() / n;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter, Eigen::EigenvaluesOnly);
        return std::max(0.0, scatter.trace() - eig.eigenvalues()(2));
    }
};

} // namespace

std::optional<double> PlaneFit::constant_for(const Vec3& normal, double tolerance) const {
    const Eigen::Vector3d n = as_eigen(normal);
    const double norm = n.norm();
    if (!(norm > 0.0)) {
        return std::nullopt;
    }
    const Eigen::Vector3d unit = n / norm;
    if (collinear) {
        if (std::abs(unit.dot(as_eigen(direction))) > tolerance) {
            return std::nullopt;
        }
    } else {
        const Eigen::Vector3d fitted = as_eigen(coefficients).normalized();
        if (std::abs(unit.dot(fitted)) < 1.0 - tolerance) {
            return std::nullopt;
        }
    }
    return -n.dot(as_eigen(centroid));
}

PlaneFit fit_plane(std::span<const Vec3> points, const FitOptions& options) {
    if (distinct_count(points) < 3) {
        throw Error(ErrorCode::Degenerate, "plane fit needs at least 3 distinct designs");
    }
    const double n = static_cast<double>(points.size());
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& p : points) {
        mean += as_eigen(p);
    }
    mean /= n;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        const Eigen::Vector3d d = as_eigen(p) - mean;
        cov += d * d.transpose();
    }
    cov /= n;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d values = eig.eigenvalues().cwiseMax(0.0);
    const Eigen::Vector3d axis = eig.eigenvectors().col(2);

    PlaneFit fit;
    fit.members = points.size();
    fit.centroid = as_array(mean);
    fit.direction = as_array(axis);
    fit.line_ratio = values(2) > 0.0 ? std::sqrt(values(1) / values(2)) : 0.0;
    fit.collinear = fit.line_ratio <= options.collinear_ratio;
    for (const auto& p : points) {
        fit.extent = std::max(fit.extent, std::abs(axis.dot(as_eigen(p) - mean)));
    }

    const Eigen::Vector3d normal = eig.eigenvectors().col(0);
    double rms_sq = 0.0;
    for (const auto& p : points) {
        const double r = normal.dot(as_eigen(p) - mean);
        rms_sq += r * r;
    }
    fit.rms = std::sqrt(rms_sq / n);

    Eigen::Vector3d a = normal / normal.cwiseAbs().maxCoeff();
    double c = -a.dot(mean);
    if (c < 0.0) {
        a = -a;
        c = -c;
    }
    fit.coefficients = as_array(a);
    fit.constant = c;
    return fit;
}

std::array<std::vector<std::size_t>, 2> split_front(std::span<const Individual> members) {
    if (members.size() < 6) {
        throw Error(ErrorCode::Degenerate, "front segmentation needs at least 6 members");
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return members[a].objectives.delta_x < members[b].objectives.delta_x;
    });
    std::vector<Vec3> pts;
    pts.reserve(order.size());
    for (std::size_t i : order) {
        pts.push_back(lengths_of(members[i].design));
    }

    const Moments moments(pts);
    std::size_t best_split = 3;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t k = 3; k + 3 <= pts.size(); ++k) {
        const double cost = moments.line_residual(0, k) + moments.line_residual(k, pts.size());
        if (cost < best_cost) {
            best_cost = cost;
            best_split = k;
        }
    }
    const auto split = order.begin() + static_cast<std::ptrdiff_t>(best_split);
    return {std::vector<std::size_t>(order.begin(), split), std::vector<std::size_t>(split, order.end())};
}

std::vector<PlaneFit> pareto_line_fit(const ParetoSet& front, const FitOptions& options) {
    if (front.members.empty()) {
        throw Error(ErrorCode::Degenerate, "empty front");
    }
    const MechanismKind kind = front.members.front().design.kind;
    for (const auto& m : front.members) {
        if (m.design.kind != kind) {
            throw Error(ErrorCode::InvalidArgument, "line fit needs a front of a single kind");
        }
    }
    if (kind == MechanismKind::SlotFollower) {
        throw Error(ErrorCode::InvalidArgument, "line fit needs three link lengths");
    }

    const auto fit_indices = [&](const std::vector<std::size_t>& idx) {
        std::vector<Vec3> pts;
        pts.reserve(idx.size());
        for (std::size_t i : idx) {
            pts.push_back(lengths_of(front.members[i].design));
        }
        return fit_plane(pts, options);
    };

    std::vector<std::size_t> all(front.members.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (kind == MechanismKind::CrankSlider4 || front.members.size() < 6) {
        return {fit_indices(all)};
    }
    const auto segments = split_front(front.members);
    return {fit_indices(segments[0]), fit_indices(segments[1])};
}

} // namespace legsynth
