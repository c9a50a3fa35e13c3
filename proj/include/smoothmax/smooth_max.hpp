#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace smoothmax {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A finite family {f_i}, i = 0..size()-1, of functions R^dim -> R whose pointwise
/// maximum f(x) = max_i f_i(x) is the objective being minimized.
///
/// value() and gradient() must be pure. Hessians are optional and only used by
/// verification paths (smooth_hessian); solve paths never request them.
class ComponentFamily {
  public:
    virtual ~ComponentFamily() = default;

    virtual std::size_t size() const = 0;
    virtual std::size_t dim() const  = 0;

    virtual double value(std::size_t i, const Vector& x) const    = 0;
    virtual Vector gradient(std::size_t i, const Vector& x) const = 0;

    /// acc += weight * gradient(i, x). Override to avoid the temporary.
    virtual void accumulate_gradient(std::size_t i, const Vector& x, double weight, Vector& acc) const;

    virtual bool   has_hessian() const { return false; }
    virtual Matrix hessian(std::size_t i, const Vector& x) const;
};

/// Curvature and gradient-norm constants of the components over the working domain.
/// The caller is responsible for their validity on the set containing x* and every iterate.
struct DomainConstants {
    std::vector<double> strong_convexity;  // per component, lower Hessian eigenvalue bound
    std::vector<double> smoothness;        // per component, upper Hessian eigenvalue bound
    double              gradient_norm_bound = 0.0;

    /// Same constants for all n components.
    static DomainConstants uniform(std::size_t n, double strong_convexity, double smoothness, double gradient_norm_bound);

    /// Throws ContractViolation unless sized for n components with 0 < l_i <= u_i and G > 0.
    void validate(std::size_t n) const;

    double min_strong_convexity() const;
    double max_smoothness() const;
};

struct SmoothingParams {
    double s = 1.0;
};

/// Controls how per-component work is distributed. With threads == 1 (the default)
/// every summation runs in index order and results are bit-reproducible. With more
/// threads the component values are computed concurrently and gradient partial sums are
/// combined per chunk, which is reproducible for a fixed thread count and agrees with the
/// sequential result to ~1e-12 relative.
struct Reduction {
    unsigned threads = 1;

    /// Reads SMOOTHMAX_THREADS; unset, empty or invalid values mean 1.
    static Reduction from_environment();
};

struct SmoothEval {
    double      value = 0.0;  // f_s(x)
    Vector      weights;      // softmax weights p_s(x), sums to 1
    Vector      gradient;     // grad f_s(x)
    std::size_t max_index = 0;  // argmax_i f_i(x), lowest index on ties
    double      max_value = 0.0;  // f(x)
};

struct MaxValue {
    double      value = 0.0;
    std::size_t index = 0;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct EigenBounds {
    double lower = 0.0;  // L_s
    double upper = 0.0;  // U_s
};

/// Exact max_i f_i(x) with lowest-index tie breaking.
MaxValue max_value(const ComponentFamily& family, const Vector& x);

/// One pass producing value, weights and gradient of the LogSumExp smooth maximum.
/// All exponentials are taken of s * (f_i(x) - max_j f_j(x)), so the result is finite for
/// any finite component values and any s > 0.
SmoothEval evaluate(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                    const Reduction& reduction = {});

double smooth_value(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                    const Reduction& reduction = {});

Vector softmax_weights(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                       const Reduction& reduction = {});

Vector smooth_gradient(const ComponentFamily& family, const SmoothingParams& params, const Vector& x,
                       const Reduction& reduction = {});

/// s * Cov_p(grad f_i) + E_p[hess f_i]. Requires family.has_hessian().
Matrix smooth_hessian(const ComponentFamily& family, const SmoothingParams& params, const Vector& x);

/// (max_value, max_value + log(n)/s): the interval f_s(x) must lie in.
Bracket sandwich_bounds(double max_value, const SmoothingParams& params, std::size_t n);

/// L_s = min_i l_i and U_s = s * G^2 + max_i u_i.
EigenBounds hessian_eig_bounds(const DomainConstants& constants, const SmoothingParams& params);

double condition_number(double lower, double upper);

}  // namespace smoothmax
