#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "geyser/prep.hpp"

namespace geyser {

enum class ModelKind { linear, exponential, sigmoidal };

std::string_view to_string(ModelKind kind);

/// A fitted duration -> interval model.
///   linear:      params = (a, b),          y = a*x + b
///   exponential: params = (a, b, c),       y = a*exp(b*x) + c
///   sigmoidal:   params = (L, k, x0, y0),  y = y0 + L / (1 + exp(-k*(x - x0)))
/// Sigmoidal fits are canonicalized to L > 0 (the (L,k,x0,y0) ->
/// (-L,-k,x0,y0+L) symmetry leaves the curve unchanged).
struct RegressionModel {
    ModelKind kind = ModelKind::linear;
    Eigen::VectorXd params;
    double sse = 0.0;     // sum of squared residuals, minutes^2
    std::size_t n = 0;    // sample count
    bool converged = true;
    int iterations = 0;   // iterations spent by the winning start
};

struct FitOptions {
    int max_iterations = 200;
    double relative_sse_tolerance = 1e-10;
    double parameter_tolerance = 1e-8;
    int multistart_count = 16;

    void validate() const;  // throws ConfigError
};

// Curve evaluation as expression-friendly free functions: scalar overloads
// and Eigen array overloads share one formula.
template <typename T>
T linear_value(T a, T b, T x) {
    return a * x + b;
}
template <typename T>
T exponential_value(T a, T b, T c, T x) {
    return a * std::exp(b * x) + c;
}
template <typename T>
T sigmoid_value(T l, T k, T x0, T y0, T x) {
    return y0 + l / (T(1) + std::exp(-k * (x - x0)));
}

template <typename Derived>
auto linear_value(double a, double b, const Eigen::ArrayBase<Derived>& x) {
    return (a * x + b).eval();
}
template <typename Derived>
auto exponential_value(double a, double b, double c, const Eigen::ArrayBase<Derived>& x) {
    return (a * (b * x).exp() + c).eval();
}
template <typename Derived>
auto sigmoid_value(double l, double k, double x0, double y0,
                   const Eigen::ArrayBase<Derived>& x) {
    return (y0 + l / (1.0 + (-k * (x - x0)).exp())).eval();
}

/// Ordinary least squares y = slope*x + intercept via centered sums.
struct OlsLine {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};
OlsLine ols_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);  // throws DegenerateDesign

/// Closed-form OLS line through the (duration, gap) samples.
RegressionModel fit_linear(const std::vector<IntervalPair>& pairs);

/// Damped iterative least squares (Levenberg-Marquardt) from a fixed set of
/// multistart initializations; data are normalized to zero mean / unit
/// variance internally and parameters mapped back. When no start converges
/// within the iteration cap the best-so-far model is returned with
/// converged = false.
RegressionModel fit_exponential(const std::vector<IntervalPair>& pairs,
                                const FitOptions& opts = {});
RegressionModel fit_sigmoid(const std::vector<IntervalPair>& pairs, const FitOptions& opts = {});

/// Evaluate the model's closed form at one duration (minutes -> minutes).
double predict(const RegressionModel& model, double x_duration_min);

/// The exact multistart initialization points fit_exponential/fit_sigmoid
/// run from, in original data units. Exposed so the monotone-refinement
/// property (fitted sse never exceeds any start's sse) stays checkable.
std::vector<Eigen::VectorXd> exponential_seeds(const std::vector<IntervalPair>& pairs,
                                               const FitOptions& opts = {});
std::vector<Eigen::VectorXd> sigmoid_seeds(const std::vector<IntervalPair>& pairs,
                                           const FitOptions& opts = {});

/// Sum of squared residuals of an arbitrary parameter vector over the
/// samples; non-finite values count as +infinity.
double model_sse(ModelKind kind, const Eigen::VectorXd& params,
                 const std::vector<IntervalPair>& pairs);

} // namespace geyser
