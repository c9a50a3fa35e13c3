#include "smoothmax/families.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothmax/errors.hpp"

namespace smoothmax {

IsotropicQuadraticFamily::IsotropicQuadraticFamily(Matrix centers, std::vector<double> curvatures)
  : centers_{std::move(centers)}
  , curvatures_{std::move(curvatures)} {
    if (centers_.cols() == 0 || centers_.rows() == 0) {
        throw ContractViolation("quadratic family needs at least one center of positive dimension");
    }
    if (curvatures_.size() != static_cast<std::size_t>(centers_.cols())) {
        throw ContractViolation("quadratic family needs one curvature per center");
    }
    for (double a : curvatures_) {
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw ContractViolation("quadratic family curvatures must be positive and finite");
        }
    }
}

IsotropicQuadraticFamily::IsotropicQuadraticFamily(Matrix centers)
  : IsotropicQuadraticFamily(centers, std::vector<double>(static_cast<std::size_t>(centers.cols()), 1.0)) {}

double IsotropicQuadraticFamily::value(std::size_t i, const Vector& x) const {
    return curvatures_[i] * (x - centers_.col(static_cast<Eigen::Index>(i))).squaredNorm();
}

Vector IsotropicQuadraticFamily::gradient(std::size_t i, const Vector& x) const {
    return 2.0 * curvatures_[i] * (x - centers_.col(static_cast<Eigen::Index>(i)));
}

void IsotropicQuadraticFamily::accumulate_gradient(std::size_t i, const Vector& x, double weight, Vector& acc) const {
    const double scale = 2.0 * curvatures_[i] * weight;
    acc.noalias() += scale * (x - centers_.col(static_cast<Eigen::Index>(i)));
}

Matrix IsotropicQuadraticFamily::hessian(std::size_t i, const Vector& x) const {
    return 2.0 * curvatures_[i] * Matrix::Identity(x.size(), x.size());
}

DomainConstants IsotropicQuadraticFamily::constants_on_ball(const Vector& center, double radius) const {
    const std::size_t n = size();
    DomainConstants   constants;
    constants.strong_convexity.resize(n);
    constants.smoothness.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double curvature         = 2.0 * curvatures_[i];
        constants.strong_convexity[i] = curvature;
        constants.smoothness[i]       = curvature;
        const double reach = (center - centers_.col(static_cast<Eigen::Index>(i))).norm() + radius;
        constants.gradient_norm_bound = std::max(constants.gradient_norm_bound, curvature * reach);
    }
    return constants;
}

FunctionFamily::FunctionFamily(std::size_t dim, std::vector<Component> components)
  : dim_{dim}
  , components_{std::move(components)} {
    if (dim_ == 0 || components_.empty()) {
        throw ContractViolation("function family needs dim >= 1 and at least one component");
    }
    for (const Component& c : components_) {
        if (!c.value || !c.gradient) {
            throw ContractViolation("every component needs a value and a gradient");
        }
    }
}

double FunctionFamily::value(std::size_t i, const Vector& x) const {
    return components_[i].value(x);
}

Vector FunctionFamily::gradient(std::size_t i, const Vector& x) const {
    return components_[i].gradient(x);
}

bool FunctionFamily::has_hessian() const {
    return std::all_of(components_.begin(), components_.end(), [](const Component& c) { return bool(c.hessian); });
}

Matrix FunctionFamily::hessian(std::size_t i, const Vector& x) const {
    if (!components_[i].hessian) {
        throw UnsupportedCapability("component " + std::to_string(i) + " has no Hessian");
    }
    return components_[i].hessian(x);
}

}  // namespace smoothmax
