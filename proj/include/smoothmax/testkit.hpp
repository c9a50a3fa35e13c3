#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "smoothmax/families.hpp"
#include "smoothmax/point_cloud.hpp"

namespace smoothmax::testkit {

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;

/// Default central-difference step for unit-scale inputs.
inline constexpr double kDefaultStep = 1e-5;

/// (fn(x + h e_j) - fn(x - h e_j)) / (2h) per coordinate.
Vector finite_diff_gradient(const ScalarFn& fn, const Vector& x, double h = kDefaultStep);

/// Central-difference Jacobian of a vector field; column j is d fn / d x_j.
Matrix finite_diff_jacobian(const VectorFn& fn, const Vector& x, double h = kDefaultStep);

/// ||actual - expected||_inf / max(||expected||_inf, 1e-12).
double max_relative_error(const Vector& actual,
                          const Vector& expected);
double max_relative_error(const Matrix& actual, const Matrix& expected);

/// f_i(x) = curvature_i * ||x - center_i||^2 with centers uniform in [-center_scale, center_scale]^dim
/// and curvatures uniform in [curv_min, curv_max]. Constants (l_i = u_i = 2 curvature_i) are exact.
struct RandomQuadraticFamily {
    IsotropicQuadraticFamily family;
    std::vector<double>      curvatures;
    DomainConstants          true_constants;  // gradient bound over the ball used by `start`
    Vector                   start;           // mean of the centers
    double                   distance_bound;  // >= ||start - x*||
};

struct QuadraticFamilySpec {
    std::size_t n            = 4;
    std::size_t dim          = 2;
    double      curv_min     = 0.5;
    double      curv_max     = 2.0;
    double      center_scale = 1.0;
};

/// Deterministic in (seed, spec). Gradient bound covers the ball of radius
/// domain_margin * distance_bound around `start`.
RandomQuadraticFamily random_quadratic_family(std::uint64_t seed, const QuadraticFamilySpec& spec,
                                              double domain_margin = 4.0);

/// The family in local coordinates around x0: component i becomes
/// delta -> f_i(x0 + delta) - max_j f_j(x0) - tilt . delta, evaluated without cancellation.
/// Hessians at delta equal those of the original family at x0 + delta; gradients differ by
/// the tilt (empty means zero).
FunctionFamily recentered(const IsotropicQuadraticFamily& family, const Vector& x0, const Vector& tilt = Vector());

struct DerivativeErrors {
    double gradient = 0.0;  // smooth_gradient vs central differences of smooth_value
    double hessian  = 0.0;  // smooth_hessian vs central differences of smooth_gradient
    double asymmetry = 0.0;  // max |H - H^T|
};

/// Compares the analytic smooth derivatives at x0 with central differences. Differencing runs
/// on the recentered family in coordinates rescaled by min(1, 1 / (s * G)), G the largest
/// component gradient norm at x0, so the step stays matched to the curvature scale of f_s.
DerivativeErrors check_smooth_derivatives(const IsotropicQuadraticFamily& family, double s, const Vector& x0);

struct Box {
    Vector lo;
    Vector hi;
};

struct OracleMinimum {
    Vector x;
    double value = 0.0;
};

/// Exhaustive grid evaluation (resolution points per axis) followed by repeated
/// refinement of a smaller grid around the incumbent. Intended for dim <= 3.
OracleMinimum grid_oracle_minimize(const ScalarFn& fn, const Box& box, std::size_t resolution);

enum class Distribution { gaussian, sphere_surface, clustered };

Distribution     parse_distribution(std::string_view name);
std::string_view to_string(Distribution distribution);

struct CloudSpec {
    std::size_t  n            = 100;
    std::size_t  dim          = 2;
    Distribution distribution = Distribution::gaussian;
    double       radius       = 1.0;  // sphere_surface radius
    std::size_t  clusters     = 3;    // clustered: number of clusters
};

/// gaussian: standard normal coordinates. sphere_surface: uniform on the sphere of
/// `radius` about the origin. clustered: `clusters` groups of sizes differing by at most
/// one, each normal with sigma 0.5 around a center with standard deviation 5.
PointCloud random_point_cloud(std::uint64_t seed, const CloudSpec& spec);

/// Exact enclosing ball by enumerating every subset of at most dim + 1 points
/// (independent of the Welzl implementation). O(n^(d+2)); keep n <= 12 and dim <= 4.
struct BruteForceBall {
    Vector center;
    double radius = 0.0;
};
BruteForceBall brute_force_meb(const PointCloud& cloud);

}  // namespace smoothmax::testkit
