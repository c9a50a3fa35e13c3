#pragma once

#include <cstddef>
#include <vector>

#include "smoothmax/smooth_max.hpp"

namespace smoothmax {

/// n points in R^d, stored column-wise. Always non-empty with finite coordinates.
class PointCloud {
  public:
    /// Throws ContractViolation for an empty matrix or non-finite coordinates.
    explicit PointCloud(Matrix points);

    /// Throws ContractViolation for empty input, ragged dimensions or non-finite coordinates.
    static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
    std::size_t dim() const { return static_cast<std::size_t>(points_.rows()); }

    auto point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

    const Matrix& points() const { return points_; }

    PointCloud translated(const Vector& offset) const;
    PointCloud scaled(double factor) const;

  private:
    Matrix points_;
};

/// max_i ||x - c_i||^2 with its index (lowest on ties).
struct FarthestPoint {
    double      squared_distance = 0.0;
    std::size_t index            = 0;
};

FarthestPoint farthest_sq_distance(const PointCloud& cloud, const Vector& x);

}  // namespace smoothmax
