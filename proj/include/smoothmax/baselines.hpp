#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smoothmax/meb.hpp"
#include "smoothmax/point_cloud.hpp"

namespace smoothmax {

/// Largest dimension accepted by welzl_exact.
inline constexpr std::size_t kMaxExactDimension = 12;

struct ExactMebResult {
    Vector                   center;
    double                   radius = 0.0;
    std::vector<std::size_t> support;  // at most dim + 1 indices on the boundary
};

/// Exact minimal enclosing ball: Welzl's randomized incremental construction with
/// move-to-front and pivoting. The seed only fixes the initial point order.
/// Throws UnsupportedDimension for dim > kMaxExactDimension.
ExactMebResult welzl_exact(const PointCloud& cloud, std::uint64_t seed);

/// Smallest ball whose boundary passes through the given points, with its center in
/// their affine hull. Rank-deficient sets fall back to the minimum-norm solution.
struct Ball {
    Vector center;
    double squared_radius = -1.0;  // negative for the empty set
};
Ball circumscribed_ball(const PointCloud& cloud, const std::vector<std::size_t>& indices);

/// ceil(1 / eps~^2).
std::size_t coreset_iterations(double relative_epsilon);

/// Farthest-point core-set iteration: c_0 = first point, then
/// c_k = c_{k-1} + (q_k - c_{k-1}) / (k + 1) for k = 1..ceil(1/eps~^2), where q_k is the point
/// farthest from c_{k-1}. Squared distances within 1e-10 relative of the maximum count as tied
/// and the lowest index wins. radius_lower/upper are the bracket at c_0.
MebResult badoiu_clarkson(const PointCloud& cloud, double relative_epsilon);

}  // namespace smoothmax
