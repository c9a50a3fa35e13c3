#include "smoothmax/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "smoothmax/errors.hpp"
#include "smoothmax/random.hpp"

namespace smoothmax::testkit {

Vector finite_diff_gradient(const ScalarFn& fn, const Vector& x, double h) {
    if (!(h > 0.0)) {
        throw ContractViolation("finite difference step must be positive");
    }
    Vector grad(x.size());
    Vector probe = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        probe[j]        = x[j] + h;
        const double up = fn(probe);
        probe[j]        = x[j] - h;
        const double dn = fn(probe);
        probe[j]        = x[j];
        grad[j]         = (up - dn) / (2.0 * h);
    }
    return grad;
}

Matrix finite_diff_jacobian(const VectorFn& fn, const Vector& x, double h) {
    if (!(h > 0.0)) {
        throw ContractViolation("finite difference step must be positive");
    }
    Matrix jac;
    Vector probe = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        probe[j]        = x[j] + h;
        const Vector up = fn(probe);
        probe[j]        = x[j] - h;
        const Vector dn = fn(probe);
        probe[j]        = x[j];
        if (j == 0) {
            jac.resize(up.size(), x.size());
        }
        jac.col(j) = (up - dn) / (2.0 * h);
    }
    return jac;
}

double max_relative_error(const Vector& actual,
                          const Vector& expected) {
    if (actual.size() != expected.size()) {
        throw ContractViolation("max_relative_error: size mismatch");
    }
    if (actual.size() == 0) {
        return 0.0;
    }
    const double scale = std::max(expected.cwiseAbs().maxCoeff(), 1e-12);
    return (actual - expected).cwiseAbs().maxCoeff() / scale;
}

double max_relative_error(const Matrix& actual, const Matrix& expected) {
    if (actual.rows() != expected.rows() || actual.cols() != expected.cols()) {
        throw ContractViolation("max_relative_error: shape mismatch");
    }
    return max_relative_error(Vector(actual.reshaped()), Vector(expected.reshaped()));
}

FunctionFamily recentered(const IsotropicQuadraticFamily& family, const Vector& x0, const Vector& tilt) {
    if (tilt.size() != 0 && tilt.size() != x0.size()) {
        throw ContractViolation("recentered: tilt dimension mismatch");
    }
    const Vector slope = tilt.size() == 0 ? Vector::Zero(x0.size()) : tilt;
    const std::size_t n   = family.size();
    const auto        dim = static_cast<Eigen::Index>(family.dim());
    double            top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        top = std::max(top, family.value(i, x0));
    }
    std::vector<FunctionFamily::Component> components;
    components.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a      = family.curvatures()[i];
        const Vector offset = x0 - family.centers().col(static_cast<Eigen::Index>(i));
        const double base   = a * offset.squaredNorm() - top;
        components.push_back({
            [a, lin = Vector(2.0 * a * offset - slope), base](const Vector& delta) {
                return base + lin.dot(delta) + a * delta.squaredNorm();
            },
            [a, lin = Vector(2.0 * a * offset - slope)](const Vector& delta) -> Vector { return lin + 2.0 * a * delta; },
            [a, dim](const Vector&) -> Matrix { return 2.0 * a * Matrix::Identity(dim, dim); },
        });
    }
    return FunctionFamily(family.dim(), std::move(components));
}

DerivativeErrors check_smooth_derivatives(const IsotropicQuadraticFamily& family, double s, const Vector& x0) {
    const SmoothingParams params{s};
    const Vector          origin = Vector::Zero(x0.size());

    auto step_length = [&](const Vector& tilt) {
        double g = 0.0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            g = std::max(g, (family.gradient(i, x0) - tilt).norm());
        }
        return std::min(1.0, 1.0 / std::max(s * g, 1e-300));
    };

    const FunctionFamily local  = recentered(family, x0);
    const double         length = step_length(origin);
    const Vector         gradient = smooth_gradient(local, params, origin);
    const Vector         fd_gradient =
        finite_diff_gradient([&](const Vector& u) { return smooth_value(local, params, Vector(length * u)); },
                             origin) / length;

    // A linear term shared by all components leaves the Hessian unchanged; tilting by the
    // leading component's gradient keeps the differenced gradients small.
    const Vector         tilt    = family.gradient(max_value(family, x0).index, x0);
    const FunctionFamily tilted  = recentered(family, x0, tilt);
    const double         tlength = step_length(tilt);
    const Matrix         hessian = smooth_hessian(tilted, params, origin);
    const Matrix         fd_hessian =
        finite_diff_jacobian([&](const Vector& u) { return smooth_gradient(tilted, params, Vector(tlength * u)); },
                             origin) / tlength;

    return {max_relative_error(gradient, fd_gradient), max_relative_error(hessian, fd_hessian),
            (hessian - hessian.transpose()).cwiseAbs().maxCoeff()};
}

RandomQuadraticFamily random_quadratic_family(std::uint64_t seed, const QuadraticFamilySpec& spec,
                                              double domain_margin) {
    if (spec.n == 0 || spec.dim == 0 || !(spec.curv_min > 0.0) || spec.curv_max < spec.curv_min) {
        throw ContractViolation("invalid random quadratic family spec");
    }
    Rng    rng(seed);
    Matrix centers(static_cast<Eigen::Index>(spec.dim), static_cast<Eigen::Index>(spec.n));
    std::vector<double> curvatures(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t j = 0; j < spec.dim; ++j) {
            centers(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                rng.uniform(-spec.center_scale, spec.center_scale);
        }
        curvatures[i] = rng.uniform(spec.curv_min, spec.curv_max);
    }
    const Vector start = centers.rowwise().mean();
    double       reach = 0.0;
    for (Eigen::Index i = 0; i < centers.cols(); ++i) {
        reach = std::max(reach, (centers.col(i) - start).norm());
    }
    // the minimizer lies in the hull of the centers, inside B(start, reach)
    const double distance = std::max(reach, 1e-12);

    IsotropicQuadraticFamily family(centers, curvatures);
    DomainConstants constants = family.constants_on_ball(start, domain_margin * distance);
    return RandomQuadraticFamily{std::move(family), std::move(curvatures), std::move(constants), start, distance};
}

OracleMinimum grid_oracle_minimize(const ScalarFn& fn, const Box& box, std::size_t resolution) {
    if (resolution < 2) {
        throw ContractViolation("grid oracle needs resolution >= 2");
    }
    if (box.lo.size() != box.hi.size() || box.lo.size() == 0 || !box.lo.allFinite() || !box.hi.allFinite() ||
        (box.hi - box.lo).minCoeff() < 0.0) {
        throw ContractViolation("grid oracle needs a finite, non-empty box");
    }
    const Eigen::Index dim = box.lo.size();

    auto scan = [&](const Vector& lo, const Vector& hi, std::size_t points, OracleMinimum& best) {
        std::vector<std::size_t> counter(static_cast<std::size_t>(dim), 0);
        Vector                   x(dim);
        while (true) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                const double frac = static_cast<double>(counter[static_cast<std::size_t>(j)]) /
                                    static_cast<double>(points - 1);
                x[j] = lo[j] + frac * (hi[j] - lo[j]);
            }
            const double v = fn(x);
            if (v < best.value) {
                best = {x, v};
            }
            std::size_t axis = 0;
            while (axis < counter.size() && ++counter[axis] == points) {
                counter[axis++] = 0;
            }
            if (axis == counter.size()) {
                break;
            }
        }
    };

    OracleMinimum best{box.lo, std::numeric_limits<double>::infinity()};
    scan(box.lo, box.hi, resolution, best);

    // zoom: keep two cells either side of the incumbent, shrinking by a constant factor per round
    const std::size_t refine_points = std::min<std::size_t>(std::max<std::size_t>(resolution, 9), 21);
    Vector            half_width    = 2.0 * (box.hi - box.lo) / static_cast<double>(resolution - 1);
    for (int round = 0; round < 200; ++round) {
        if (half_width.maxCoeff() < 1e-13 * (1.0 + best.x.cwiseAbs().maxCoeff())) {
            break;
        }
        scan(best.x - half_width, best.x + half_width, refine_points, best);
        half_width *= 4.0 / static_cast<double>(refine_points - 1);
    }
    return best;
}

Distribution parse_distribution(std::string_view name) {
    if (name == "gaussian") {
        return Distribution::gaussian;
    }
    if (name == "sphere_surface") {
        return Distribution::sphere_surface;
    }
    if (name == "clustered") {
        return Distribution::clustered;
    }
    throw ContractViolation("unknown distribution '" + std::string(name) +
                            "' (expected gaussian, sphere_surface or clustered)");
}

std::string_view to_string(Distribution distribution) {
    switch (distribution) {
        case Distribution::gaussian:
            return "gaussian";
        case Distribution::sphere_surface:
            return "sphere_surface";
        case Distribution::clustered:
            return "clustered";
    }
    return "unknown";
}

PointCloud random_point_cloud(std::uint64_t seed, const CloudSpec& spec) {
    if (spec.n == 0 || spec.dim == 0) {
        throw ContractViolation("random_point_cloud needs n >= 1 and dim >= 1");
    }
    Rng          rng(seed);
    const auto   d = static_cast<Eigen::Index>(spec.dim);
    Matrix       points(d, static_cast<Eigen::Index>(spec.n));
    auto         normal_vector = [&] {
        Vector v(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            v[j] = rng.normal();
        }
        return v;
    };

    switch (spec.distribution) {
        case Distribution::gaussian:
            for (Eigen::Index i = 0; i < points.cols(); ++i) {
                points.col(i) = normal_vector();
            }
            break;
        case Distribution::sphere_surface:
            for (Eigen::Index i = 0; i < points.cols(); ++i) {
                Vector v = normal_vector();
                while (v.norm() == 0.0) {
                    v = normal_vector();
                }
                points.col(i) = spec.radius * v / v.norm();
            }
            break;
        case Distribution::clustered: {
            const std::size_t k = std::max<std::size_t>(1, std::min(spec.clusters, spec.n));
            std::vector<Vector> centers;
            for (std::size_t c = 0; c < k; ++c) {
                centers.push_back(5.0 * normal_vector());
            }
            // round-robin assignment keeps cluster sizes within one of each other
            for (std::size_t i = 0; i < spec.n; ++i) {
                points.col(static_cast<Eigen::Index>(i)) = centers[i % k] + 0.5 * normal_vector();
            }
            break;
        }
    }
    return PointCloud(std::move(points));
}

BruteForceBall brute_force_meb(const PointCloud& cloud) {
    const std::size_t n       = cloud.size();
    const std::size_t max_sub = std::min(n, cloud.dim() + 1);
    BruteForceBall    best{Vector(), std::numeric_limits<double>::infinity()};

    std::vector<std::size_t> subset;
    // center = sum mu_j p_j with sum mu_j = 1 and equal distances to every p_j:
    // [2 P^T P  1; 1^T 0] [mu; lambda] = [diag(P^T P); 1]
    auto try_subset = [&] {
        const auto k = static_cast<Eigen::Index>(subset.size());
        Matrix     P(static_cast<Eigen::Index>(cloud.dim()), k);
        for (Eigen::Index j = 0; j < k; ++j) {
            P.col(j) = cloud.point(subset[static_cast<std::size_t>(j)]);
        }
        const Matrix gram = P.transpose() * P;
        Matrix       system = Matrix::Zero(k + 1, k + 1);
        system.topLeftCorner(k, k) = 2.0 * gram;
        system.topRightCorner(k, 1).setOnes();
        system.bottomLeftCorner(1, k).setOnes();
        Vector rhs(k + 1);
        rhs.head(k) = gram.diagonal();
        rhs[k]      = 1.0;
        const Eigen::FullPivLU<Matrix> lu(system);
        if (!lu.isInvertible()) {
            return;
        }
        const Vector center = P * lu.solve(rhs).head(k);
        double       r2     = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r2 = std::max(r2, (cloud.point(i) - center).squaredNorm());
        }
        const double r = std::sqrt(r2);
        if (r < best.radius) {
            best = {center, r};
        }
    };

    // every subset of size 1..max_sub in lexicographic order
    auto recurse = [&](auto&& self, std::size_t from) -> void {
        if (!subset.empty()) {
            try_subset();
        }
        if (subset.size() == max_sub) {
            return;
        }
        for (std::size_t i = from; i < n; ++i) {
            subset.push_back(i);
            self(self, i + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
    return best;
}

}  // namespace smoothmax::testkit
