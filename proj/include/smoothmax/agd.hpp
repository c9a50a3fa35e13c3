#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "smoothmax/smooth_max.hpp"

namespace smoothmax {

struct OptimizerConfig {
    double epsilon = 0.0;  // requested gap on the original max objective
    Vector x1;
    double initial_distance_bound = 0.0;  // D >= ||x1 - x*||
    std::optional<std::size_t> max_iterations_override;
};

/// Iterate pair of the accelerated scheme. At t = 1 all three vectors equal x1.
struct OptimizerState {
    Vector      x_current;
    Vector      x_previous;
    Vector      y_current;
    std::size_t t = 1;

    static OptimizerState start(const Vector& x1);
};

struct SolveReport {
    Vector      x_final;
    std::size_t iterations_run     = 0;
    std::size_t planned_iterations = 0;
    double      s       = 0.0;  // 0 when the single-component path bypassed smoothing
    double      L_s     = 0.0;
    double      U_s     = 0.0;
    double      kappa_s = 0.0;
    double      f_final = 0.0;
    double      gap_certificate = 0.0;
};

/// Passed to the observer once per step, before the step is taken, with
/// quantities evaluated at y_t.
struct IterationInfo {
    const OptimizerState& state;
    double                smoother;
    double                smooth_value_at_y;
    double                gradient_norm_at_y;
};

using IterationObserver = std::function<void(const IterationInfo&)>;

struct RunOptions {
    IterationObserver observer;
    Reduction         reduction;
};

/// Constants derived from (family, constants, epsilon) before the first step.
struct SmoothSetup {
    bool   smoothed = true;  // false when n == 1
    double s        = 0.0;
    double L_s      = 0.0;
    double U_s      = 0.0;
    double kappa_s  = 0.0;
    double gradient_norm_bound = 0.0;
};

/// s = 2 log(n) / epsilon. Returns 0 for n == 1, which callers must treat as "already smooth".
double smoother_for_gap(double epsilon, std::size_t n);

/// 1 - 2 / (sqrt(kappa) + 1), i.e. (sqrt(kappa) - 1) / (sqrt(kappa) + 1).
double momentum_coefficient(double kappa_s);

/// x_{t+1} = y_t - grad(y_t) / U_s;  y_{t+1} = x_{t+1} + c (x_{t+1} - x_t).
OptimizerState agd_step(const OptimizerState& state, const std::function<Vector(const Vector&)>& gradient_of_smooth,
                        double U_s, double kappa_s);

/// (L_s/2 * distance^2 + initial_gap) * exp(-(t - 1) / sqrt(kappa_s)).
double gap_bound(std::size_t t, double L_s, double kappa_s, double distance, double initial_gap);

/// Sufficient iteration count for a gap of epsilon on the max objective, with the gap split
/// evenly between smoothing regret and optimization error:
///   1 + sqrt(2/eps * G^2 log n / L + U~/L) * log((L D^2 + 2 G D) / eps), rounded up.
/// Returns 1 for n == 1 or when the log argument is <= 1. Throws ConfigurationError above 2^31.
std::size_t required_iterations_general(double epsilon, std::size_t n, double G_s, double L_s, double U_tilde,
                                        double distance);

/// Plain accelerated gradient descent count used when n == 1 (no smoothing regret):
///   1 + sqrt(U/L) * log((L D^2 / 2 + G D) / eps), rounded up.
std::size_t required_iterations_unsmoothed(double epsilon, double G_s, double L_s, double U_s, double distance);

SmoothSetup prepare_setup(const ComponentFamily& family, const DomainConstants& constants, double epsilon);

/// Runs exactly `iterations` accelerated steps from config.x1 (capped by the config override)
/// and fills in the report; planned_iterations is set to `iterations`.
SolveReport run_iterations(const ComponentFamily& family, const DomainConstants& constants,
                           const OptimizerConfig& config, std::size_t iterations, const RunOptions& options = {});

/// Min-max optimizer: derives s, L_s, U_s, kappa_s, plans the iteration count and runs it.
SolveReport run_to_gap(const ComponentFamily& family, const DomainConstants& constants, const OptimizerConfig& config,
                       const RunOptions& options = {});

/// Epsilon-halving restarts: round k runs with epsilon_0 / 2^k, warm-started from the previous
/// round's x_final. The distance bound of round k > 0 is tightened to
/// min(D_{k-1}, sqrt(2 * certificate_{k-1} / L)) using strong convexity of the max objective.
std::vector<SolveReport> run_online(const ComponentFamily& family,
                                    const std::function<DomainConstants(double)>& constants_provider,
                                    double epsilon_0, std::size_t rounds, const OptimizerConfig& config,
                                    const RunOptions& options = {});

}  // namespace smoothmax
