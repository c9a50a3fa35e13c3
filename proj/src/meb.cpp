#include "smoothmax/meb.hpp"

#include <algorithm>
#include <cmath>

#include "smoothmax/errors.hpp"
#include "smoothmax/families.hpp"

namespace smoothmax {

namespace {

// Both component curvature constants of ||x - c_i||^2.
constexpr double kComponentCurvature = 2.0;

void validate_relative_epsilon(double relative_epsilon) {
    if (!(relative_epsilon > 0.0) || !(relative_epsilon <= 1.0)) {
        throw ContractViolation("relative epsilon must lie in (0, 1]");
    }
}

}  // namespace

Vector centroid_init(const PointCloud& cloud) {
    return cloud.points().rowwise().mean();
}

Bracket radius_bounds(double f_at_x1) {
    if (!(f_at_x1 >= 0.0)) {
        throw ContractViolation("radius_bounds needs f(x1) >= 0");
    }
    const double root = std::sqrt(f_at_x1);
    return {0.5 * root, root};
}

double meb_gradient_bound(double f_at_x1, double epsilon_gap) {
    if (!(f_at_x1 >= 0.0) || !(epsilon_gap > 0.0)) {
        throw ContractViolation("meb_gradient_bound needs f(x1) >= 0 and epsilon > 0");
    }
    return 6.0 * std::sqrt(5.0 * f_at_x1 + 0.5 * epsilon_gap);
}

std::size_t required_iterations_meb(double relative_epsilon, std::size_t n) {
    validate_relative_epsilon(relative_epsilon);
    if (n == 0) {
        throw ContractViolation("required_iterations_meb needs n >= 1");
    }
    if (n == 1) {
        return 1;
    }
    const double e     = relative_epsilon;
    const double log_n = std::log(static_cast<double>(n));
    const double t     = 1.0 + std::log(1.0 + 4.0 / e) * std::sqrt(1.0 + 18.0 * (1.0 + 20.0 / e) * log_n);
    return static_cast<std::size_t>(std::ceil(t));
}

MebResult solve_meb(const PointCloud& cloud, const MebConfig& config, const RunOptions& options) {
    validate_relative_epsilon(config.relative_epsilon);

    MebResult result;
    const Vector x1        = centroid_init(cloud);
    const double f1        = farthest_sq_distance(cloud, x1).squared_distance;
    const Bracket bracket  = radius_bounds(f1);
    result.radius_lower    = bracket.lo;
    result.radius_upper    = bracket.hi;

    if (cloud.size() == 1 || f1 == 0.0) {
        result.center = x1;
        result.radius = 0.0;
        return result;
    }

    const double e   = config.relative_epsilon;
    const double eps = (2.0 * e + e * e) * (0.25 * f1);
    const double G   = meb_gradient_bound(f1, eps);
    const double D   = std::sqrt(f1);
    const std::size_t n = cloud.size();

    const IsotropicQuadraticFamily family(cloud.points());
    const DomainConstants constants = DomainConstants::uniform(n, kComponentCurvature, kComponentCurvature, G);

    const std::size_t planned =
        std::min(required_iterations_meb(e, n),
                 required_iterations_general(eps, n, G, kComponentCurvature, kComponentCurvature, D));

    OptimizerConfig solver_config;
    solver_config.epsilon                = eps;
    solver_config.x1                     = x1;
    solver_config.initial_distance_bound = D;
    const SolveReport report             = run_iterations(family, constants, solver_config, planned, options);

    result.center             = report.x_final;
    result.radius             = std::sqrt(farthest_sq_distance(cloud, report.x_final).squared_distance);
    result.iterations         = report.iterations_run;
    result.planned_iterations = planned;
    result.epsilon_gap_used   = eps;
    result.s                  = report.s;
    result.L_s                = report.L_s;
    result.U_s                = report.U_s;
    result.kappa_s            = report.kappa_s;
    result.G_s                = G;
    return result;
}

}  // namespace smoothmax
