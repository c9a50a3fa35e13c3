#include <gtest/gtest.h>

#include <cmath>

#include "smoothmax/baselines.hpp"
#include "smoothmax/errors.hpp"
#include "smoothmax/random.hpp"
#include "smoothmax/testkit.hpp"

namespace smoothmax {
namespace {

PointCloud cloud_of(std::vector<std::vector<double>> rows) { return PointCloud::from_rows(rows); }

TEST(WelzlExact, UnitSquare) {
    const ExactMebResult r = welzl_exact(cloud_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 0);
    EXPECT_NEAR(r.center[0], 0.5, 1e-15);
    EXPECT_NEAR(r.center[1], 0.5, 1e-15);
    EXPECT_NEAR(r.radius, std::sqrt(2.0) / 2.0, 1e-15);
    EXPECT_NEAR(r.radius, 0.70711, 1e-5);
}

TEST(WelzlExact, Collinear) {
    const ExactMebResult r = welzl_exact(cloud_of({{0}, {1}, {2}, {3}}), 5);
    EXPECT_EQ(r.center[0], 1.5);
    EXPECT_EQ(r.radius, 1.5);
    EXPECT_EQ(r.support, (std::vector<std::size_t>{0, 3}));
}

TEST(WelzlExact, SingletonAndDuplicates) {
    const ExactMebResult single = welzl_exact(cloud_of({{2, -1}}), 0);
    EXPECT_EQ(single.radius, 0.0);
    EXPECT_EQ(single.center, (Vector(2) << 2, -1).finished());

    const ExactMebResult dup = welzl_exact(cloud_of({{1, 1}, {1, 1}, {3, 1}, {3, 1}}), 0);
    EXPECT_NEAR(dup.radius, 1.0, 1e-15);
    EXPECT_NEAR(dup.center[0], 2.0, 1e-15);
}

TEST(WelzlExact, SeedIndependence) {
    const PointCloud     cloud = testkit::random_point_cloud(42, {200, 3, testkit::Distribution::gaussian});
    const ExactMebResult a     = welzl_exact(cloud, 1);
    const ExactMebResult b     = welzl_exact(cloud, 2);
    EXPECT_NEAR(a.radius, b.radius, 1e-10);
    EXPECT_LE((a.center - b.center).norm(), 1e-10);
    EXPECT_LE(a.support.size(), 4u);
}

TEST(WelzlExact, MatchesBruteForceOnSubsamples) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng                rng(seed);
        testkit::CloudSpec spec;
        spec.n            = 2 + rng.below(11);
        spec.dim          = 1 + rng.below(3);
        spec.distribution = static_cast<testkit::Distribution>(seed % 3);
        const PointCloud             cloud = testkit::random_point_cloud(seed, spec);
        const testkit::BruteForceBall brute = testkit::brute_force_meb(cloud);
        const ExactMebResult          r     = welzl_exact(cloud, seed);
        EXPECT_NEAR(r.radius, brute.radius, 1e-10 * std::max(1.0, brute.radius)) << seed;
        EXPECT_LE((r.center - brute.center).norm(), 1e-8 * std::max(1.0, brute.radius)) << seed;
    }
}

TEST(WelzlExact, SupportPointsLieOnBoundary) {
    const PointCloud     cloud = testkit::random_point_cloud(9, {300, 6, testkit::Distribution::sphere_surface});
    const ExactMebResult r     = welzl_exact(cloud, 3);
    ASSERT_GE(r.support.size(), 2u);
    ASSERT_LE(r.support.size(), 7u);
    for (std::size_t i : r.support) {
        EXPECT_NEAR((cloud.point(i) - r.center).norm(), r.radius, 1e-9);
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        EXPECT_LE((cloud.point(i) - r.center).norm(), r.radius * (1.0 + 1e-12));
    }
}

TEST(WelzlExact, CosphericalPointsInHigherDimension) {
    // many points exactly on a common sphere stress the degenerate-support path
    const PointCloud     cloud = testkit::random_point_cloud(3, {500, 12, testkit::Distribution::sphere_surface});
    const ExactMebResult r     = welzl_exact(cloud, 0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        EXPECT_LE((cloud.point(i) - r.center).norm(), r.radius * (1.0 + 1e-9));
    }
    EXPECT_LE(r.radius, 1.0 + 1e-9);
}

TEST(WelzlExact, RejectsHighDimension) {
    const PointCloud cloud = testkit::random_point_cloud(1, {20, 13, testkit::Distribution::gaussian});
    EXPECT_THROW(welzl_exact(cloud, 0), UnsupportedDimension);
}

TEST(CircumscribedBall, Triangle) {
    const PointCloud cloud = cloud_of({{0, 0}, {2, 0}, {0, 2}});
    const Ball       b     = circumscribed_ball(cloud, {0, 1, 2});
    EXPECT_NEAR(b.center[0], 1.0, 1e-15);
    EXPECT_NEAR(b.center[1], 1.0, 1e-15);
    EXPECT_NEAR(b.squared_radius, 2.0, 1e-15);
    EXPECT_LT(circumscribed_ball(cloud, {}).squared_radius, 0.0);
    EXPECT_EQ(circumscribed_ball(cloud, {1}).squared_radius, 0.0);
}

TEST(BadoiuClarkson, TwoPointsExactAfterOneStep) {
    const PointCloud cloud = cloud_of({{0}, {2}});
    const MebResult  r     = badoiu_clarkson(cloud, 1.0);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.center[0], 1.0);
    EXPECT_EQ(r.radius, 1.0);
}

TEST(BadoiuClarkson, TiesResolvedToLowestIndex) {
    // c_1 = 1 is equidistant from 0 and 2; picking index 0 gives c_2 = 2/3
    const MebResult r = badoiu_clarkson(cloud_of({{0}, {2}}), 0.6);
    EXPECT_EQ(r.iterations, 3u);
    const MebResult moved = badoiu_clarkson(cloud_of({{0.1 + 5.0}, {2.1 + 5.0}}), 0.6);
    EXPECT_NEAR(moved.center[0] - 5.1, r.center[0], 1e-12);
}

TEST(BadoiuClarkson, Singleton) {
    const MebResult r = badoiu_clarkson(cloud_of({{4, 5, 6}}), 0.1);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_EQ(r.radius, 0.0);
    EXPECT_EQ(r.center, (Vector(3) << 4, 5, 6).finished());
}

TEST(BadoiuClarkson, IterationCount) {
    EXPECT_EQ(coreset_iterations(0.2), 25u);
    EXPECT_EQ(coreset_iterations(0.1), 100u);
    EXPECT_EQ(coreset_iterations(0.05), 400u);
    EXPECT_EQ(coreset_iterations(0.025), 1600u);
    EXPECT_EQ(coreset_iterations(1.0), 1u);
    EXPECT_EQ(coreset_iterations(0.3), 12u);
    EXPECT_THROW(coreset_iterations(0.0), ContractViolation);
}

TEST(BadoiuClarkson, CenterStaysInConvexHull) {
    // every iterate is a convex combination of points, so the coefficients found by
    // replaying the update are nonnegative and sum to one
    const PointCloud cloud = testkit::random_point_cloud(6, {30, 2, testkit::Distribution::gaussian});
    const MebResult  r     = badoiu_clarkson(cloud, 0.2);
    Vector           weights = Vector::Zero(30);
    weights[0]               = 1.0;
    Vector c                 = cloud.point(0);
    for (std::size_t k = 1; k <= r.iterations; ++k) {
        const std::size_t q = farthest_sq_distance(cloud, c).index;
        const double      a = 1.0 / static_cast<double>(k + 1);
        weights *= 1.0 - a;
        weights[static_cast<Eigen::Index>(q)] += a;
        c += (cloud.point(q) - c) * a;
    }
    EXPECT_LE((c - r.center).norm(), 1e-12);
    EXPECT_GE(weights.minCoeff(), 0.0);
    EXPECT_NEAR(weights.sum(), 1.0, 1e-12);
    EXPECT_LE((cloud.points() * weights - r.center).norm(), 1e-12);
}

class CoresetGuarantee : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(CoresetGuarantee, WithinTenPercentOfWelzl) {
    const std::uint64_t seed = GetParam();
    Rng                 rng(seed + 1000);
    testkit::CloudSpec  spec;
    spec.n            = 2 + rng.below(499);
    spec.dim          = 1 + rng.below(10);
    spec.distribution = static_cast<testkit::Distribution>(seed % 3);
    const PointCloud cloud = testkit::random_point_cloud(seed, spec);
    const double     exact = welzl_exact(cloud, seed).radius;
    const MebResult  r     = badoiu_clarkson(cloud, 0.1);
    EXPECT_LE(r.radius, 1.1 * exact) << seed;
    EXPECT_GE(r.radius, exact * (1.0 - 1e-12));
    EXPECT_LE(r.radius_lower, exact * (1.0 + 1e-12));
    EXPECT_GE(r.radius_upper, exact * (1.0 - 1e-12));
}

INSTANTIATE_TEST_SUITE_P(Seeds, CoresetGuarantee, ::testing::Range<std::uint64_t>(0, 20));

TEST(Equivariance, TranslationAndScale) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const PointCloud cloud = testkit::random_point_cloud(seed, {80, 3, testkit::Distribution::clustered});
        const Vector     shift = (Vector(3) << 10.0, -3.5, 0.25).finished();
        const double     scale = 3.0;
        const PointCloud moved = cloud.translated(shift).scaled(scale);

        const ExactMebResult w0 = welzl_exact(cloud, seed);
        const ExactMebResult w1 = welzl_exact(moved, seed);
        EXPECT_NEAR(w1.radius, scale * w0.radius, 1e-9 * scale * w0.radius);
        EXPECT_LE((w1.center - scale * (w0.center + shift)).norm(), 1e-9 * scale * w0.radius);

        const MebResult b0 = badoiu_clarkson(cloud, 0.1);
        const MebResult b1 = badoiu_clarkson(moved, 0.1);
        EXPECT_NEAR(b1.radius, scale * b0.radius, 1e-9 * scale * b0.radius);
        EXPECT_LE((b1.center - scale * (b0.center + shift)).norm(), 1e-9 * scale * b0.radius);
    }
}

}  // namespace
}  // namespace smoothmax
