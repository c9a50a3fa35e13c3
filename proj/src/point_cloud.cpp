#include "smoothmax/point_cloud.hpp"

#include <string>

#include "smoothmax/errors.hpp"

namespace smoothmax {

PointCloud::PointCloud(Matrix points)
  : points_{std::move(points)} {
    if (points_.cols() == 0 || points_.rows() == 0) {
        throw ContractViolation("point cloud must contain at least one point of dimension >= 1");
    }
    if (!points_.allFinite()) {
        throw ContractViolation("point cloud coordinates must be finite");
    }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw ContractViolation("point cloud must contain at least one point of dimension >= 1");
    }
    const std::size_t dim = rows.front().size();
    Matrix            points(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw ContractViolation("point " + std::to_string(i) + " has dimension " +
                                    std::to_string(rows[i].size()) + ", expected " + std::to_string(dim));
        }
        for (std::size_t j = 0; j < dim; ++j) {
            points(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = rows[i][j];
        }
    }
    return PointCloud(std::move(points));
}

PointCloud PointCloud::translated(const Vector& offset) const {
    if (static_cast<std::size_t>(offset.size()) != dim()) {
        throw ContractViolation("translation offset has the wrong dimension");
    }
    return PointCloud(points_.colwise() + offset);
}

PointCloud PointCloud::scaled(double factor) const {
    return PointCloud(points_ * factor);
}

FarthestPoint farthest_sq_distance(const PointCloud& cloud, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != cloud.dim()) {
        throw ContractViolation("query point has dimension " + std::to_string(x.size()) + ", cloud has " +
                                std::to_string(cloud.dim()));
    }
    FarthestPoint best{(cloud.point(0) - x).squaredNorm(), 0};
    for (std::size_t i = 1; i < cloud.size(); ++i) {
        const double d2 = (cloud.point(i) - x).squaredNorm();
        if (d2 > best.squared_distance) {
            best = {d2, i};
        }
    }
    return best;
}

}  // namespace smoothmax
