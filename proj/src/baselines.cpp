#include "smoothmax/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <list>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "smoothmax/errors.hpp"
#include "smoothmax/random.hpp"

namespace smoothmax {

namespace {

// Points whose squared distance exceeds r^2 by less than this relative margin count as inside.
constexpr double kExcessTolerance = 1e-13;

// A boundary point is rejected when it lies this close (relative) to the affine hull of the others.
constexpr double kDegeneracyTolerance = 1e-20;

// Move-to-front Welzl with pivoting, after Gärtner's miniball. The list L holds point
// indices; its prefix [begin, support_end) is the support of the current ball.
class WelzlSolver {
  public:
    explicit WelzlSolver(const PointCloud& cloud)
      : cloud_{cloud}
      , dim_{cloud.dim()}
      , center_{Vector::Zero(static_cast<Eigen::Index>(cloud.dim()))} {}

    void solve(std::vector<std::size_t> order) {
        order_ = std::list<std::size_t>(order.begin(), order.end());
        support_end_ = order_.begin();
        pivot_mb(order_.end());
    }

    const Vector& center() const { return center_; }

    std::vector<std::size_t> support() const {
        return std::vector<std::size_t>(order_.cbegin(), std::list<std::size_t>::const_iterator(support_end_));
    }

  private:
    using Iter = std::list<std::size_t>::iterator;

    double excess(std::size_t idx) const {
        return (cloud_.point(idx) - center_).squaredNorm() - squared_radius_;
    }

    double tolerance() const { return kExcessTolerance * std::max(squared_radius_, 0.0); }

    bool push(std::size_t idx) {
        if (boundary_.empty()) {
            center_         = cloud_.point(idx);
            squared_radius_ = 0.0;
            boundary_.push_back(idx);
            return true;
        }
        const auto   k  = static_cast<Eigen::Index>(boundary_.size());
        const Vector p0 = cloud_.point(boundary_.front());
        Matrix       V(static_cast<Eigen::Index>(dim_), k);
        for (Eigen::Index j = 1; j < k; ++j) {
            V.col(j - 1) = cloud_.point(boundary_[static_cast<std::size_t>(j)]) - p0;
        }
        V.col(k - 1) = cloud_.point(idx) - p0;

        const Vector fresh = V.col(k - 1);
        Vector       residual = fresh;
        if (k > 1) {
            const Matrix previous = V.leftCols(k - 1);
            residual -= previous * previous.colPivHouseholderQr().solve(fresh);
        }
        if (!(residual.squaredNorm() > kDegeneracyTolerance * fresh.squaredNorm())) {
            return false;
        }

        const Matrix gram = V.transpose() * V;
        const Vector rhs  = 0.5 * gram.diagonal();
        const Vector lambda = gram.ldlt().solve(rhs);
        center_         = p0 + V * lambda;
        squared_radius_ = (center_ - p0).squaredNorm();
        boundary_.push_back(idx);
        return true;
    }

    // The current ball stays at the last one computed; only the boundary stack shrinks.
    void pop() { boundary_.pop_back(); }

    void move_to_front(Iter j) {
        if (support_end_ == j) {
            ++support_end_;
        }
        order_.splice(order_.begin(), order_, j);
    }

    void mtf_mb(Iter end) {
        support_end_ = order_.begin();
        if (boundary_.size() == dim_ + 1) {
            return;
        }
        for (Iter k = order_.begin(); k != end;) {
            Iter j = k++;
            if (excess(*j) > tolerance()) {
                if (push(*j)) {
                    mtf_mb(j);
                    pop();
                    move_to_front(j);
                }
            }
        }
    }

    void pivot_mb(Iter end) {
        Iter t = std::next(order_.begin());
        mtf_mb(t);
        double max_excess = 0.0;
        double old_squared_radius = 0.0;
        do {
            Iter pivot = end;
            max_excess = 0.0;
            for (Iter k = t; k != end; ++k) {
                const double e = excess(*k);
                if (e > max_excess) {
                    max_excess = e;
                    pivot      = k;
                }
            }
            if (max_excess > tolerance()) {
                t = support_end_;
                if (t == pivot) {
                    ++t;
                }
                old_squared_radius = squared_radius_;
                push(*pivot);
                mtf_mb(support_end_);
                pop();
                move_to_front(pivot);
            }
        } while (max_excess > tolerance() && squared_radius_ > old_squared_radius);
    }

    const PointCloud&        cloud_;
    std::size_t              dim_;
    std::list<std::size_t>   order_;
    Iter                     support_end_;
    std::vector<std::size_t> boundary_;
    Vector                   center_;
    double                   squared_radius_ = -1.0;
};

}  // namespace

Ball circumscribed_ball(const PointCloud& cloud, const std::vector<std::size_t>& indices) {
    if (indices.empty()) {
        return {Vector::Zero(static_cast<Eigen::Index>(cloud.dim())), -1.0};
    }
    const Vector p0 = cloud.point(indices.front());
    const auto   k  = static_cast<Eigen::Index>(indices.size()) - 1;
    if (k == 0) {
        return {p0, 0.0};
    }
    Matrix V(static_cast<Eigen::Index>(cloud.dim()), k);
    for (Eigen::Index j = 0; j < k; ++j) {
        V.col(j) = cloud.point(indices[static_cast<std::size_t>(j + 1)]) - p0;
    }
    const Matrix gram   = V.transpose() * V;
    const Vector rhs    = 0.5 * gram.diagonal();
    const Vector lambda = gram.completeOrthogonalDecomposition().solve(rhs);
    Ball         ball{p0 + V * lambda, 0.0};
    for (std::size_t idx : indices) {
        ball.squared_radius = std::max(ball.squared_radius, (cloud.point(idx) - ball.center).squaredNorm());
    }
    return ball;
}

ExactMebResult welzl_exact(const PointCloud& cloud, std::uint64_t seed) {
    if (cloud.dim() > kMaxExactDimension) {
        throw UnsupportedDimension("exact enclosing ball supports dim <= " + std::to_string(kMaxExactDimension) +
                                   ", got " + std::to_string(cloud.dim()) +
                                   "; use the core-set baseline at a small epsilon as a reference instead");
    }
    std::vector<std::size_t> order(cloud.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    WelzlSolver solver(cloud);
    solver.solve(std::move(order));

    ExactMebResult result;
    result.center  = solver.center();
    result.radius  = std::sqrt(farthest_sq_distance(cloud, result.center).squared_distance);
    result.support = solver.support();
    std::sort(result.support.begin(), result.support.end());
    return result;
}

std::size_t coreset_iterations(double relative_epsilon) {
    if (!(relative_epsilon > 0.0) || !(relative_epsilon <= 1.0)) {
        throw ContractViolation("relative epsilon must lie in (0, 1]");
    }
    return static_cast<std::size_t>(std::ceil(1.0 / (relative_epsilon * relative_epsilon)));
}

namespace {

// Lowest index among the points within a relative 1e-10 of the largest squared distance, so
// rounding differences between equivalent inputs cannot flip the choice between tied points.
std::size_t farthest_with_ties(const PointCloud& cloud, const Vector& x) {
    const double threshold = farthest_sq_distance(cloud, x).squared_distance * (1.0 - 1e-10);
    for (std::size_t i = 0;; ++i) {
        if ((cloud.point(i) - x).squaredNorm() >= threshold) {
            return i;
        }
    }
}

}  // namespace

MebResult badoiu_clarkson(const PointCloud& cloud, double relative_epsilon) {
    const std::size_t iterations = coreset_iterations(relative_epsilon);

    MebResult result;
    Vector    center     = cloud.point(0);
    const Bracket start  = radius_bounds(farthest_sq_distance(cloud, center).squared_distance);
    result.radius_lower  = start.lo;
    result.radius_upper  = start.hi;

    if (cloud.size() == 1) {
        result.center = center;
        return result;
    }
    for (std::size_t k = 1; k <= iterations; ++k) {
        const std::size_t q = farthest_with_ties(cloud, center);
        center += (cloud.point(q) - center) / static_cast<double>(k + 1);
    }
    result.center             = center;
    result.radius             = std::sqrt(farthest_sq_distance(cloud, center).squared_distance);
    result.iterations         = iterations;
    result.planned_iterations = iterations;
    return result;
}

}  // namespace smoothmax
