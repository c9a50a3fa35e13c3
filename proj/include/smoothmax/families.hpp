#pragma once

#include <functional>
#include <vector>

#include "smoothmax/smooth_max.hpp"

namespace smoothmax {

/// f_i(x) = a_i * ||x - c_i||^2. Hessians are 2 a_i I, so l_i = u_i = 2 a_i everywhere.
/// Centers are stored column-wise (dim x n).
class IsotropicQuadraticFamily final : public ComponentFamily {
  public:
    IsotropicQuadraticFamily(Matrix centers, std::vector<double> curvatures);

    /// All curvatures equal to 1: the squared-distance family of a point set.
    explicit IsotropicQuadraticFamily(Matrix centers);

    std::size_t size() const override { return static_cast<std::size_t>(centers_.cols()); }
    std::size_t dim() const override { return static_cast<std::size_t>(centers_.rows()); }

    double value(std::size_t i, const Vector& x) const override;
    Vector gradient(std::size_t i, const Vector& x) const override;
    void   accumulate_gradient(std::size_t i, const Vector& x, double weight, Vector& acc) const override;

    bool   has_hessian() const override { return true; }
    Matrix hessian(std::size_t i, const Vector& x) const override;

    const Matrix&              centers() const { return centers_; }
    const std::vector<double>& curvatures() const { return curvatures_; }

    /// Exact constants over the ball B(center, radius): l_i = u_i = 2 a_i and
    /// G = max_i 2 a_i (||center - c_i|| + radius).
    DomainConstants constants_on_ball(const Vector& center, double radius) const;

  private:
    Matrix              centers_;
    std::vector<double> curvatures_;
};

/// A family assembled from callables; convenient for ad-hoc components in tests and tools.
class FunctionFamily final : public ComponentFamily {
  public:
    using ValueFn    = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;
    using HessianFn  = std::function<Matrix(const Vector&)>;

    struct Component {
        ValueFn    value;
        GradientFn gradient;
        HessianFn  hessian;  // may be empty
    };

    FunctionFamily(std::size_t dim, std::vector<Component> components);

    std::size_t size() const override { return components_.size(); }
    std::size_t dim() const override { return dim_; }

    double value(std::size_t i, const Vector& x) const override;
    Vector gradient(std::size_t i, const Vector& x) const override;
    bool   has_hessian() const override;
    Matrix hessian(std::size_t i, const Vector& x) const override;

  private:
    std::size_t            dim_;
    std::vector<Component> components_;
};

}  // namespace smoothmax
