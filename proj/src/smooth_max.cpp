#include "smoothmax/smooth_max.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "smoothmax/errors.hpp"

namespace smoothmax {

void ComponentFamily::accumulate_gradient(std::size_t i, const Vector& x, double weight, Vector& acc) const {
    acc.noalias() += weight * gradient(i, x);
}

Matrix ComponentFamily::hessian(std::size_t, const Vector&) const {
    throw UnsupportedCapability("component family does not provide Hessians");
}

DomainConstants DomainConstants::uniform(std::size_t n, double strong_convexity, double smoothness,
                                         double gradient_norm_bound) {
    return DomainConstants{std::vector<double>(n, strong_convexity), std::vector<double>(n, smoothness),
                           gradient_norm_bound};
}

void DomainConstants::validate(std::size_t n) const {
    if (n == 0) {
        throw ContractViolation("domain constants need at least one component");
    }
    if (strong_convexity.size() != n || smoothness.size() != n) {
        throw ContractViolation("domain constants sized for " + std::to_string(strong_convexity.size()) +
                                " components, family has " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(strong_convexity[i] > 0.0) || !(strong_convexity[i] <= smoothness[i]) || !std::isfinite(smoothness[i])) {
            throw ContractViolation("component " + std::to_string(i) +
                                    " needs 0 < strong_convexity <= smoothness < inf");
        }
    }
    if (!(gradient_norm_bound > 0.0) || !std::isfinite(gradient_norm_bound)) {
        throw ContractViolation("gradient_norm_bound must be positive and finite");
    }
}

double DomainConstants::min_strong_convexity() const {
    return *std::min_element(strong_convexity.begin(), strong_convexity.end());
}

double DomainConstants::max_smoothness() const {
    return *std::max_element(smoothness.begin(), smoothness.end());
}

Reduction Reduction::from_environment() {
    const char* raw = std::getenv("SMOOTHMAX_THREADS");
    if (raw == nullptr || *raw == '\0') {
        return {};
    }
    char*               end    = nullptr;
    const unsigned long parsed = std::strtoul(raw, &end, 10);
    if (*end != '\0' || parsed == 0 || parsed > 256) {
        return {};
    }
    return Reduction{static_cast<unsigned>(parsed)};
}

namespace {

void check_point(const ComponentFamily& family, const Vector& x) {
    if (family.size() == 0) {
        throw ContractViolation("component family is empty");
    }
    if (static_cast<std::size_t>(x.size()) != family.dim()) {
        throw ContractViolation("point has dimension " + std::to_string(x.size()) + ", family expects " +
                                std::to_string(family.dim()));
    }
}

void check_params(const SmoothingParams& params) {
    if (!(params.s > 0.0) || !std::isfinite(params.s)) {
        throw ContractViolation("smoother s must be positive and finite");
    }
}

std::size_t effective_threads(const Reduction& reduction, std::size_t n) {
    // below this many components the thread startup dominates
    constexpr std::size_t min_per_thread = 64;
    const std::size_t     wanted         = std::max<std::size_t>(1, reduction.threads);
    return std::min(wanted, std::max<std::size_t>(1, n / min_per_thread));
}

// Runs fn(chunk, begin, end) over contiguous index ranges, one chunk per thread.
template <typename Fn>
void for_chunks(std::size_t n, std::size_t threads, Fn&& fn) {
    if (threads <= 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t c = 0; c < threads; ++c) {
        const std::size_t begin = n * c / threads;
        const std::size_t end   = n * (c + 1) / threads;
        workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
    }
}

std::vector<double> component_values(const ComponentFamily& family, const Vector& x, std::size_t threads) {
    const std::size_t   n = family.size();
    std::vector<double> values(n);
    for_chunks(n, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            values[i] = family.value(i, x);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(values[i])) {
            throw EvaluationError("component " + std::to_string(i) + " evaluated to a non-finite value", i);
        }
    }
    return values;
}

MaxValue argmax(const std::vector<double>& values) {
    MaxValue best{values[0], 0};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > best.value) {
            best = {values[i], i};
        }
    }
    return best;
}

struct Softmax {
    double   value;
    Vector   weights;
    MaxValue max;
};

Softmax softmax(const std::vector<double>& values, double s) {
    const MaxValue m = argmax(values);
    const auto     n = static_cast<Eigen::Index>(values.size());
    Vector         weights(n);
    double         total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        weights[i] = std::exp(s * (values[static_cast<std::size_t>(i)] - m.value));
        total += weights[i];
    }
    weights /= total;
    // total >= 1 because the maximal term contributes exp(0)
    return {m.value + std::log(total) / s, std::move(weights), m};
}

}  // namespace

MaxValue max_value(const ComponentFamily& family, const Vector& x) {
    check_point(family, x);
    return argmax(component_values(family, x, 1));
}

SmoothEval evaluate(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                    const Reduction& reduction) {
    check_point(family, x);
    check_params(params);
    const std::size_t n       = family.size();
    const std::size_t threads = effective_threads(reduction, n);

    Softmax sm = softmax(component_values(family, x, threads), params.s);

    Vector gradient = Vector::Zero(x.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            family.accumulate_gradient(i, x, sm.weights[static_cast<Eigen::Index>(i)], gradient);
        }
    } else {
        std::vector<Vector> partial(threads, Vector::Zero(x.size()));
        for_chunks(n, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                family.accumulate_gradient(i, x, sm.weights[static_cast<Eigen::Index>(i)], partial[c]);
            }
        });
        for (const Vector& p : partial) {
            gradient += p;
        }
    }

    return SmoothEval{sm.value, std::move(sm.weights), std::move(gradient), sm.max.index, sm.max.value};
}

double smooth_value(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                    const Reduction& reduction) {
    check_point(family, x);
    check_params(params);
    return softmax(component_values(family, x, effective_threads(reduction, family.size())), params.s).value;
}

Vector softmax_weights(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                       const Reduction& reduction) {
    check_point(family, x);
    check_params(params);
    return softmax(component_values(family, x, effective_threads(reduction, family.size())), params.s).weights;
}

Vector smooth_gradient(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                       const Reduction& reduction) {
    return evaluate(family, params, x, reduction).gradient;
}

Matrix smooth_hessian(const ComponentFamily& family, const SmoothingParams& params, const Vector& x) {
    check_point(family, x);
    check_params(params);
    if (!family.has_hessian()) {
        throw UnsupportedCapability("smooth_hessian needs a family that provides component Hessians");
    }
    const std::size_t n  = family.size();
    const Softmax     sm = softmax(component_values(family, x, 1), params.s);

    std::vector<Vector> gradients;
    gradients.reserve(n);
    Vector mean = Vector::Zero(x.size());
    for (std::size_t i = 0; i < n; ++i) {
        gradients.push_back(family.gradient(i, x));
        mean += sm.weights[static_cast<Eigen::Index>(i)] * gradients.back();
    }

    // Cov_p(g) = E[g g^T] - E[g] E[g]^T, accumulated in centered form.
    Matrix covariance       = Matrix::Zero(x.size(), x.size());
    Matrix expected_hessian = Matrix::Zero(x.size(), x.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double w        = sm.weights[static_cast<Eigen::Index>(i)];
        const Vector centered = gradients[i] - mean;
        covariance.noalias() += w * centered * centered.transpose();
        expected_hessian.noalias() += w * family.hessian(i, x);
    }
    Matrix result = params.s * covariance + expected_hessian;
    return 0.5 * (result + result.transpose());
}

Bracket sandwich_bounds(double max_value, const SmoothingParams& params, std::size_t n) {
    check_params(params);
    if (n == 0) {
        throw ContractViolation("sandwich_bounds needs n >= 1");
    }
    return {max_value, max_value + std::log(static_cast<double>(n)) / params.s};
}

EigenBounds hessian_eig_bounds(const DomainConstants& constants, const SmoothingParams& params) {
    check_params(params);
    constants.validate(constants.strong_convexity.size());
    const double g = constants.gradient_norm_bound;
    return {constants.min_strong_convexity(), params.s * g * g + constants.max_smoothness()};
}

double condition_number(double lower, double upper) {
    if (!(lower > 0.0) || !(upper >= lower)) {
        throw ContractViolation("condition_number needs 0 < L_s <= U_s");
    }
    return upper / lower;
}

}  // namespace smoothmax
