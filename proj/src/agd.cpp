#include "smoothmax/agd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smoothmax/errors.hpp"

namespace smoothmax {

namespace {

constexpr double kIterationCeiling = 2147483648.0;  // 2^31

std::size_t checked_ceiling(double t, const char* what) {
    if (!std::isfinite(t) || t > kIterationCeiling) {
        throw ConfigurationError(std::string(what) + " exceeds 2^31 iterations; refusing to run");
    }
    return static_cast<std::size_t>(std::ceil(t));
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ContractViolation(std::string(name) + " must be positive and finite");
    }
}

void validate_config(const ComponentFamily& family, const OptimizerConfig& config) {
    require_positive(config.epsilon, "epsilon");
    require_positive(config.initial_distance_bound, "initial_distance_bound");
    if (static_cast<std::size_t>(config.x1.size()) != family.dim()) {
        throw ContractViolation("x1 has dimension " + std::to_string(config.x1.size()) + ", family expects " +
                                std::to_string(family.dim()));
    }
    if (!config.x1.allFinite()) {
        throw ContractViolation("x1 must be finite");
    }
    if (config.max_iterations_override && *config.max_iterations_override == 0) {
        throw ContractViolation("max_iterations_override must be positive");
    }
}

OptimizerState advance(const OptimizerState& state, const Vector& gradient_at_y, double U_s, double momentum) {
    if (!gradient_at_y.allFinite()) {
        throw DivergenceError("non-finite gradient at iteration " + std::to_string(state.t), state.t,
                              state.y_current);
    }
    OptimizerState next;
    next.x_previous = state.x_current;
    next.x_current  = state.y_current - gradient_at_y / U_s;
    next.y_current  = next.x_current + momentum * (next.x_current - state.x_current);
    next.t          = state.t + 1;
    return next;
}

}  // namespace

OptimizerState OptimizerState::start(const Vector& x1) {
    return OptimizerState{x1, x1, x1, 1};
}

double smoother_for_gap(double epsilon, std::size_t n) {
    require_positive(epsilon, "epsilon");
    if (n == 0) {
        throw ContractViolation("smoother_for_gap needs n >= 1");
    }
    return 2.0 * std::log(static_cast<double>(n)) / epsilon;
}

double momentum_coefficient(double kappa_s) {
    if (!(kappa_s >= 1.0)) {
        throw ContractViolation("condition number must be >= 1");
    }
    return 1.0 - 2.0 / (std::sqrt(kappa_s) + 1.0);
}

OptimizerState agd_step(const OptimizerState& state, const std::function<Vector(const Vector&)>& gradient_of_smooth,
                        double U_s, double kappa_s) {
    require_positive(U_s, "U_s");
    return advance(state, gradient_of_smooth(state.y_current), U_s, momentum_coefficient(kappa_s));
}

double gap_bound(std::size_t t, double L_s, double kappa_s, double distance, double initial_gap) {
    if (t < 1 || !(L_s > 0.0) || !(kappa_s >= 1.0) || !(distance >= 0.0) || !(initial_gap >= 0.0)) {
        throw ContractViolation("gap_bound needs t >= 1, L_s > 0, kappa_s >= 1, distance >= 0, initial_gap >= 0");
    }
    const double decay = std::exp(-static_cast<double>(t - 1) / std::sqrt(kappa_s));
    return (0.5 * L_s * distance * distance + initial_gap) * decay;
}

std::size_t required_iterations_general(double epsilon, std::size_t n, double G_s, double L_s, double U_tilde,
                                        double distance) {
    require_positive(epsilon, "epsilon");
    require_positive(G_s, "G_s");
    require_positive(L_s, "L_s");
    require_positive(U_tilde, "U_tilde");
    require_positive(distance, "distance");
    if (n == 0) {
        throw ContractViolation("required_iterations_general needs n >= 1");
    }
    if (n == 1) {
        return 1;
    }
    const double log_arg = (L_s * distance * distance + 2.0 * G_s * distance) / epsilon;
    if (log_arg <= 1.0) {
        return 1;
    }
    const double log_n = std::log(static_cast<double>(n));
    const double root  = std::sqrt(2.0 / epsilon * G_s * G_s * log_n / L_s + U_tilde / L_s);
    return checked_ceiling(1.0 + root * std::log(log_arg), "planned iteration count");
}

std::size_t required_iterations_unsmoothed(double epsilon, double G_s, double L_s, double U_s, double distance) {
    require_positive(epsilon, "epsilon");
    require_positive(G_s, "G_s");
    require_positive(L_s, "L_s");
    require_positive(distance, "distance");
    const double kappa   = condition_number(L_s, U_s);
    const double log_arg = (0.5 * L_s * distance * distance + G_s * distance) / epsilon;
    if (log_arg <= 1.0) {
        return 1;
    }
    return checked_ceiling(1.0 + std::sqrt(kappa) * std::log(log_arg), "planned iteration count");
}

SmoothSetup prepare_setup(const ComponentFamily& family, const DomainConstants& constants, double epsilon) {
    const std::size_t n = family.size();
    constants.validate(n);
    require_positive(epsilon, "epsilon");

    SmoothSetup setup;
    setup.gradient_norm_bound = constants.gradient_norm_bound;
    if (n == 1) {
        setup.smoothed = false;
        setup.s        = 0.0;
        setup.L_s      = constants.strong_convexity[0];
        setup.U_s      = constants.smoothness[0];
    } else {
        setup.s              = smoother_for_gap(epsilon, n);
        const EigenBounds eb = hessian_eig_bounds(constants, SmoothingParams{setup.s});
        setup.L_s            = eb.lower;
        setup.U_s            = eb.upper;
    }
    setup.kappa_s = condition_number(setup.L_s, setup.U_s);
    return setup;
}

SolveReport run_iterations(const ComponentFamily& family, const DomainConstants& constants,
                           const OptimizerConfig& config, std::size_t iterations, const RunOptions& options) {
    validate_config(family, config);
    const SmoothSetup setup = prepare_setup(family, constants, config.epsilon);

    std::size_t steps = iterations;
    if (config.max_iterations_override) {
        steps = std::min(steps, *config.max_iterations_override);
    }

    // With a single component every s > 0 gives f_s == f_1 exactly.
    const SmoothingParams params{setup.smoothed ? setup.s : 1.0};
    const double          momentum = momentum_coefficient(setup.kappa_s);

    OptimizerState state = OptimizerState::start(config.x1);
    for (std::size_t k = 0; k < steps; ++k) {
        const SmoothEval at_y = evaluate(family, params, state.y_current, options.reduction);
        if (options.observer) {
            options.observer(IterationInfo{state, setup.s, at_y.value, at_y.gradient.norm()});
        }
        state = advance(state, at_y.gradient, setup.U_s, momentum);
    }

    SolveReport report;
    report.iterations_run     = steps;
    report.planned_iterations = iterations;
    report.s                  = setup.s;
    report.L_s                = setup.L_s;
    report.U_s                = setup.U_s;
    report.kappa_s            = setup.kappa_s;
    report.f_final            = max_value(family, state.x_current).value;

    const double distance     = config.initial_distance_bound;
    const double initial_gap  = setup.gradient_norm_bound * distance;
    report.gap_certificate    = gap_bound(state.t, setup.L_s, setup.kappa_s, distance, initial_gap);
    if (setup.smoothed) {
        report.gap_certificate += std::log(static_cast<double>(family.size())) / setup.s;
    }
    report.x_final = std::move(state.x_current);
    return report;
}

SolveReport run_to_gap(const ComponentFamily& family, const DomainConstants& constants, const OptimizerConfig& config,
                       const RunOptions& options) {
    validate_config(family, config);
    const SmoothSetup setup = prepare_setup(family, constants, config.epsilon);
    const double      D     = config.initial_distance_bound;

    const std::size_t planned =
        setup.smoothed ? required_iterations_general(config.epsilon, family.size(), setup.gradient_norm_bound,
                                                     setup.L_s, constants.max_smoothness(), D)
                       : required_iterations_unsmoothed(config.epsilon, setup.gradient_norm_bound, setup.L_s,
                                                        setup.U_s, D);
    return run_iterations(family, constants, config, planned, options);
}

std::vector<SolveReport> run_online(const ComponentFamily& family,
                                    const std::function<DomainConstants(double)>& constants_provider,
                                    double epsilon_0, std::size_t rounds, const OptimizerConfig& config,
                                    const RunOptions& options) {
    require_positive(epsilon_0, "epsilon_0");
    if (rounds == 0) {
        throw ContractViolation("run_online needs at least one round");
    }
    std::vector<SolveReport> reports;
    reports.reserve(rounds);

    OptimizerConfig round_config = config;
    round_config.epsilon         = epsilon_0;
    for (std::size_t k = 0; k < rounds; ++k) {
        const DomainConstants constants = constants_provider(round_config.epsilon);
        reports.push_back(run_to_gap(family, constants, round_config, options));

        const SolveReport& last = reports.back();
        round_config.x1         = last.x_final;
        round_config.epsilon /= 2.0;
        const double shrunk = std::sqrt(2.0 * last.gap_certificate / constants.min_strong_convexity());
        if (shrunk > 0.0) {
            round_config.initial_distance_bound = std::min(round_config.initial_distance_bound, shrunk);
        }
    }
    return reports;
}

}  // namespace smoothmax
