#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "smoothmax/point_cloud.hpp"
#include "smoothmax/testkit.hpp"

namespace smoothmax::cli {

namespace exit_code {
inline constexpr int ok                = 0;
inline constexpr int tolerance_failure = 1;
inline constexpr int bad_flags         = 2;
inline constexpr int parse_error       = 3;
inline constexpr int solver_error      = 4;
}  // namespace exit_code

enum class Algorithm { smooth, coreset, exact };

Algorithm        parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);

struct SolveOptions {
    Algorithm     algorithm = Algorithm::smooth;
    double        epsilon   = 0.1;
    std::uint64_t seed      = 0;
    bool          verify    = false;
};

/// Runs one algorithm and returns the result object written by `smoothmax solve`.
/// When `trace` is non-null and the algorithm is smooth, one CSV row per iteration
/// (t, f_s(y_t), |grad f_s(y_t)|) is written to it after a header line.
/// With `verify`, a "verification" member compares against the exact radius; a failed
/// check throws smoothmax::Error.
nlohmann::ordered_json solve_cloud(const PointCloud& cloud, const SolveOptions& options, std::ostream* trace = nullptr);

struct BenchOptions {
    std::size_t              n            = 1000;
    std::size_t              dim          = 3;
    testkit::Distribution    distribution = testkit::Distribution::gaussian;
    std::uint64_t            seed         = 1;
    std::vector<double>      epsilons     = {0.2, 0.1, 0.05, 0.025};
    std::vector<Algorithm>   algorithms   = {Algorithm::smooth, Algorithm::coreset};
};

struct BenchRow {
    Algorithm                  algorithm = Algorithm::smooth;
    double                     epsilon   = 0.0;
    std::size_t                iterations = 0;
    std::size_t                planned_iterations = 0;
    std::optional<std::size_t> formula_iterations;   // smooth: closed-form MEB count
    std::optional<std::size_t> observed_iterations;  // smooth: first step reaching (1+eps) R_exact
    double                     wall_time_ms = 0.0;
    double                     radius       = 0.0;
    double                     radius_over_reference = 0.0;
    std::optional<double>      radius_over_exact;
};

struct BenchReport {
    BenchOptions          options;
    std::string           reference_kind;  // "welzl" or "coreset_1e-3"
    double                reference_radius = 0.0;
    std::optional<double> exact_radius;
    std::vector<BenchRow> rows;
};

BenchReport run_bench(const BenchOptions& options);

/// Least-squares slope of log(iterations) against log(1 / epsilon).
double loglog_slope(const std::vector<double>& epsilons, const std::vector<double>& iterations);

nlohmann::ordered_json bench_to_json(const BenchReport& report);
std::string            bench_to_csv(const BenchReport& report);

struct GradcheckOptions {
    std::uint64_t seed     = 1;
    std::size_t   n        = 8;
    std::size_t   dim      = 4;
    double        smoother = 10.0;
    std::size_t   trials   = 20;
};

inline constexpr double kGradientTolerance = 1e-5;
inline constexpr double kHessianTolerance  = 1e-4;

struct GradcheckSummary {
    double      worst_gradient_error = 0.0;
    std::size_t worst_gradient_trial = 0;
    double      worst_hessian_error  = 0.0;
    std::size_t worst_hessian_trial  = 0;

    bool passed() const {
        return worst_gradient_error <= kGradientTolerance && worst_hessian_error <= kHessianTolerance;
    }
};

GradcheckSummary run_gradcheck(const GradcheckOptions& options);

/// Entry point of the smoothmax executable; returns the process exit code.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smoothmax::cli
