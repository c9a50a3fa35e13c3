#pragma once

#include <cstddef>

#include "smoothmax/agd.hpp"
#include "smoothmax/point_cloud.hpp"

namespace smoothmax {

struct MebConfig {
    double relative_epsilon = 0.1;  // (1 + eps~) approximation factor, in (0, 1]
};

/// Result shared by the smoothed solver and the core-set baseline. Solver
/// constants are left at 0 by algorithms that do not use them.
struct MebResult {
    Vector      center;
    double      radius             = 0.0;  // covering radius at `center`
    std::size_t iterations         = 0;
    std::size_t planned_iterations = 0;
    double      epsilon_gap_used   = 0.0;  // absolute gap handed to the generic solver
    double      radius_lower       = 0.0;  // bracket on the optimal radius from the start point
    double      radius_upper       = 0.0;

    double s       = 0.0;
    double L_s     = 0.0;
    double U_s     = 0.0;
    double kappa_s = 0.0;
    double G_s     = 0.0;
};

/// Arithmetic mean of the points.
Vector centroid_init(const PointCloud& cloud);

/// sqrt(f(x1)) / 2 <= R <= sqrt(f(x1)) for any x1 in the convex hull.
Bracket radius_bounds(double f_at_x1);

/// 6 * sqrt(5 f(x1) + eps / 2): common gradient-norm bound of the squared-distance
/// components over every iterate of the accelerated scheme.
double meb_gradient_bound(double f_at_x1, double epsilon_gap);

/// 1 + log(1 + 4/eps~) * sqrt(1 + 18 (1 + 20/eps~) log n), rounded up; 1 for n == 1.
std::size_t required_iterations_meb(double relative_epsilon, std::size_t n);

/// (1 + eps~)-approximate minimal enclosing ball via the smoothed min-max solver.
///
/// Starts from the centroid, converts eps~ into the absolute gap
/// (2 eps~ + eps~^2) * f(x1) / 4 using the lower radius bound, sets l = u = 2,
/// G from meb_gradient_bound and D = sqrt(f(x1)), and runs the smaller of the two
/// planned iteration counts. Clouds with a single distinct location return
/// immediately with radius 0.
MebResult solve_meb(const PointCloud& cloud, const MebConfig& config, const RunOptions& options = {});

}  // namespace smoothmax
