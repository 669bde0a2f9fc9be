#include "geyser/regress.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "geyser/errors.hpp"

namespace geyser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::ArrayXd x_of(const std::vector<IntervalPair>& pairs) {
    Eigen::ArrayXd x(static_cast<Eigen::Index>(pairs.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = pairs[static_cast<std::size_t>(i)].x_duration_min;
    return x;
}

Eigen::ArrayXd y_of(const std::vector<IntervalPair>& pairs) {
    Eigen::ArrayXd y(static_cast<Eigen::Index>(pairs.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = pairs[static_cast<std::size_t>(i)].y_gap_min;
    return y;
}

// Zero-mean unit-variance scaling for solver conditioning; externally
// invisible (parameters are mapped back to data units).
struct Normalization {
    double mu_x = 0.0, sigma_x = 1.0, mu_y = 0.0, sigma_y = 1.0;
};

Normalization make_normalization(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
    Normalization n;
    n.mu_x = x.mean();
    n.mu_y = y.mean();
    const double sx = std::sqrt((x - n.mu_x).square().mean());
    const double sy = std::sqrt((y - n.mu_y).square().mean());
    if (std::isfinite(sx) && sx > 0.0) n.sigma_x = sx;
    if (std::isfinite(sy) && sy > 0.0) n.sigma_y = sy;
    return n;
}

struct LmOutcome {
    Eigen::VectorXd theta;
    double sse = kInf;
    bool converged = false;
    int iterations = 0;
};

// Damped iterative least squares on residuals r = y - f(theta, x) with
// Marquardt diagonal scaling. Only improving steps are accepted, so the
// outcome's sse never exceeds the sse at theta0.
template <typename Values, typename Jacobian>
LmOutcome run_lm(const Values& values, const Jacobian& jacobian, Eigen::VectorXd theta0,
                 const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, const FitOptions& opts) {
    const auto sse_at = [&](const Eigen::VectorXd& theta) {
        const double s = (y - values(theta, x)).square().sum();
        return std::isfinite(s) ? s : kInf;
    };

    LmOutcome out;
    out.theta = std::move(theta0);
    out.sse = sse_at(out.theta);
    if (out.sse == kInf) return out;  // start lies in an overflow region

    double lambda = 1e-3;
    int small_improvement_streak = 0;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        out.iterations = iter;
        const Eigen::ArrayXd r = y - values(out.theta, x);
        const Eigen::MatrixXd J = jacobian(out.theta, x);
        const Eigen::MatrixXd H = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r.matrix();

        Eigen::MatrixXd damped = H;
        damped.diagonal() += lambda * H.diagonal().cwiseMax(1e-12);
        const Eigen::VectorXd step = damped.ldlt().solve(g);
        if (!step.allFinite()) {
            lambda *= 10.0;
            if (lambda > 1e14) break;
            continue;
        }

        const Eigen::VectorXd proposal = out.theta + step;
        const double proposal_sse = sse_at(proposal);
        if (proposal_sse <= out.sse) {
            const double previous = out.sse;
            const double improvement = previous - proposal_sse;
            out.theta = proposal;
            out.sse = proposal_sse;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (improvement <= opts.relative_sse_tolerance * std::max(previous, 1e-300))
                ++small_improvement_streak;
            else
                small_improvement_streak = 0;
            if (small_improvement_streak >= 2 || step.norm() <= opts.parameter_tolerance) {
                out.converged = true;
                break;
            }
        } else {
            if (step.norm() <= opts.parameter_tolerance) {
                // even the heavily damped step cannot move us: fp floor reached
                out.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e14) break;
        }
    }
    return out;
}

double quantile(std::vector<double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

std::vector<double> sorted_of(const Eigen::ArrayXd& v) {
    std::vector<double> s(v.data(), v.data() + v.size());
    std::sort(s.begin(), s.end());
    return s;
}

// ---- exponential family ---------------------------------------------------

Eigen::ArrayXd exp_values(const Eigen::VectorXd& t, const Eigen::ArrayXd& x) {
    return exponential_value(t[0], t[1], t[2], x);
}

Eigen::MatrixXd exp_jacobian(const Eigen::VectorXd& t, const Eigen::ArrayXd& x) {
    Eigen::MatrixXd J(x.size(), 3);
    const Eigen::ArrayXd e = (t[1] * x).exp();
    J.col(0) = e.matrix();
    J.col(1) = (t[0] * x * e).matrix();
    J.col(2).setOnes();
    return J;
}

std::vector<Eigen::VectorXd> exp_seeds_normalized(const Eigen::ArrayXd& xn,
                                                  const Eigen::ArrayXd& yn, int count) {
    const double ymin = yn.minCoeff();
    const double ymax = yn.maxCoeff();
    double span = ymax - ymin;
    if (!(span > 0.0) || !std::isfinite(span)) span = 1.0;

    const double mx = xn.mean();
    const double sxx = (xn - mx).square().sum();
    const double slope = sxx > 0.0 ? ((xn - mx) * (yn - yn.mean())).sum() / sxx : 0.0;

    std::vector<Eigen::VectorXd> seeds;
    const auto add = [&](double a, double b, double c) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) return;
        Eigen::VectorXd v(3);
        v << a, b, c;
        seeds.push_back(std::move(v));
    };

    // baseline-shifted log-linear fits: guess c, regress ln|y - c| on x
    const auto log_linear = [&](double c0, bool decaying) {
        const Eigen::ArrayXd t = decaying ? (c0 - yn) : (yn - c0);
        if ((t <= 0.0).any()) return;
        const Eigen::ArrayXd lt = t.log();
        double beta = 0.0, alpha = lt.mean();
        if (sxx > 0.0) {
            beta = ((xn - mx) * (lt - lt.mean())).sum() / sxx;
            alpha = lt.mean() - beta * mx;
        }
        const double a = std::exp(alpha);
        add(decaying ? -a : a, beta, c0);
    };
    for (const double d : {0.05, 0.5, 2.0}) log_linear(ymin - d * span, false);
    for (const double d : {0.05, 0.5, 2.0}) log_linear(ymax + d * span, true);

    // linearization a*e^{bx}+c ~ a(1+bx)+c: match the OLS slope at several
    // fixed curvatures (normalized y has zero mean, so c = -a)
    for (const double b0 : {0.3, -0.3, 1.0, -1.0, 2.0, -2.0, 0.05, -0.05, 4.0, -4.0, 0.7, -0.7}) {
        const double a0 = slope / b0;
        add(a0, b0, -a0);
    }
    add(0.0, 0.1, yn.mean());  // flat data

    const std::size_t base = seeds.size();
    for (std::size_t k = 0; seeds.size() < static_cast<std::size_t>(count); ++k) {
        Eigen::VectorXd v = seeds[k % base];
        v[1] *= std::pow(1.5, 1.0 + static_cast<double>(k / base));
        seeds.push_back(std::move(v));
    }
    seeds.resize(static_cast<std::size_t>(count));
    return seeds;
}

Eigen::VectorXd exp_to_original(const Eigen::VectorXd& t, const Normalization& n) {
    Eigen::VectorXd p(3);
    p[0] = n.sigma_y * t[0] * std::exp(-t[1] * n.mu_x / n.sigma_x);
    p[1] = t[1] / n.sigma_x;
    p[2] = n.mu_y + n.sigma_y * t[2];
    return p;
}

// ---- sigmoidal family ------------------------------------------------------

Eigen::ArrayXd sig_values(const Eigen::VectorXd& t, const Eigen::ArrayXd& x) {
    return sigmoid_value(t[0], t[1], t[2], t[3], x);
}

Eigen::MatrixXd sig_jacobian(const Eigen::VectorXd& t, const Eigen::ArrayXd& x) {
    Eigen::MatrixXd J(x.size(), 4);
    const Eigen::ArrayXd s = 1.0 / (1.0 + (-t[1] * (x - t[2])).exp());
    const Eigen::ArrayXd ds = s * (1.0 - s);
    J.col(0) = s.matrix();
    J.col(1) = (t[0] * ds * (x - t[2])).matrix();
    J.col(2) = (-t[0] * t[1] * ds).matrix();
    J.col(3).setOnes();
    return J;
}

std::vector<Eigen::VectorXd> sig_seeds_normalized(const Eigen::ArrayXd& xn,
                                                  const Eigen::ArrayXd& yn, int count) {
    const auto xs = sorted_of(xn);
    const auto ys = sorted_of(yn);
    const double ylo = quantile(ys, 0.05);
    const double yhi = quantile(ys, 0.95);
    double span = yhi - ylo;
    if (!(span > 0.0) || !std::isfinite(span)) span = 1.0;

    // x0 candidates spread across the observed x range; both slope signs
    static constexpr struct {
        double xq;
        double k;
    } kCombos[] = {
        {0.5, 2.0},  {0.5, -2.0}, {0.3, 2.0},  {0.7, 2.0},  {0.3, -2.0}, {0.7, -2.0},
        {0.1, 2.0},  {0.9, 2.0},  {0.1, -2.0}, {0.9, -2.0}, {0.5, 0.7},  {0.5, -0.7},
        {0.5, 6.0},  {0.5, -6.0}, {0.4, 4.0},  {0.6, -4.0},
    };
    constexpr std::size_t kComboCount = sizeof(kCombos) / sizeof(kCombos[0]);

    std::vector<Eigen::VectorXd> seeds;
    for (std::size_t k = 0; seeds.size() < static_cast<std::size_t>(count); ++k) {
        const auto& combo = kCombos[k % kComboCount];
        const double scale = std::pow(1.7, static_cast<double>(k / kComboCount));
        Eigen::VectorXd v(4);
        v << span, combo.k * scale, quantile(xs, combo.xq), ylo;
        seeds.push_back(std::move(v));
    }
    return seeds;
}

Eigen::VectorXd sig_to_original(const Eigen::VectorXd& t, const Normalization& n) {
    Eigen::VectorXd p(4);
    p[0] = n.sigma_y * t[0];
    p[1] = t[1] / n.sigma_x;
    p[2] = n.mu_x + n.sigma_x * t[2];
    p[3] = n.mu_y + n.sigma_y * t[3];
    return p;
}

void canonicalize_sigmoid(Eigen::VectorXd& p) {
    if (p[0] < 0.0) {
        p[3] += p[0];
        p[0] = -p[0];
        p[1] = -p[1];
    }
}

// ---- shared multistart driver ----------------------------------------------

template <typename Values, typename Jacobian, typename MapBack>
RegressionModel fit_multistart(ModelKind kind, const std::vector<IntervalPair>& pairs,
                               const std::vector<Eigen::VectorXd>& seeds_normalized,
                               const Values& values, const Jacobian& jacobian,
                               const MapBack& map_back, const FitOptions& opts,
                               const Eigen::ArrayXd& xn, const Eigen::ArrayXd& yn) {
    std::vector<LmOutcome> outcomes;
    outcomes.reserve(seeds_normalized.size());
    bool any_converged = false;
    for (const auto& seed : seeds_normalized) {
        outcomes.push_back(run_lm(values, jacobian, seed, xn, yn, opts));
        any_converged = any_converged || outcomes.back().converged;
    }

    std::vector<std::size_t> order(outcomes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return outcomes[a].sse < outcomes[b].sse; });

    for (const std::size_t idx : order) {
        Eigen::VectorXd params = map_back(outcomes[idx].theta);
        if (!params.allFinite()) continue;
        RegressionModel model;
        model.kind = kind;
        model.params = std::move(params);
        model.n = pairs.size();
        model.converged = any_converged;
        model.iterations = outcomes[idx].iterations;
        if (kind == ModelKind::sigmoidal) canonicalize_sigmoid(model.params);
        model.sse = model_sse(kind, model.params, pairs);
        return model;
    }
    throw DegenerateDesign("fit produced no finite parameterization");
}

} // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::exponential: return "exponential";
    case ModelKind::sigmoidal: return "sigmoidal";
    }
    return "linear";
}

void FitOptions::validate() const {
    if (max_iterations <= 0 || multistart_count <= 0 || !(relative_sse_tolerance > 0.0) ||
        !(parameter_tolerance > 0.0))
        throw ConfigError("fit options must all be positive");
}

OlsLine ols_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
    if (x.size() != y.size()) throw PreconditionError("ols_line: size mismatch");
    if (x.size() < 2) throw DegenerateDesign("ols_line needs at least 2 points");
    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::ArrayXd xc = x - mx;
    const double sxx = xc.square().sum();
    if (sxx <= 0.0) throw DegenerateDesign("ols_line: x values all identical");
    OlsLine line;
    line.slope = (xc * (y - my)).sum() / sxx;
    line.intercept = my - line.slope * mx;
    line.sse = (y - line.slope * x - line.intercept).square().sum();
    return line;
}

RegressionModel fit_linear(const std::vector<IntervalPair>& pairs) {
    if (pairs.size() < 2) throw DegenerateDesign("fit_linear needs at least 2 pairs");
    const OlsLine line = ols_line(x_of(pairs), y_of(pairs));
    RegressionModel model;
    model.kind = ModelKind::linear;
    model.params = Eigen::Vector2d(line.slope, line.intercept);
    model.sse = line.sse;
    model.n = pairs.size();
    model.converged = true;
    return model;
}

RegressionModel fit_exponential(const std::vector<IntervalPair>& pairs, const FitOptions& opts) {
    opts.validate();
    if (pairs.size() < 4)
        throw PreconditionError("fit_exponential needs at least 4 pairs, got " +
                                std::to_string(pairs.size()));
    const Eigen::ArrayXd x = x_of(pairs);
    const Eigen::ArrayXd y = y_of(pairs);
    const Normalization n = make_normalization(x, y);
    const Eigen::ArrayXd xn = (x - n.mu_x) / n.sigma_x;
    const Eigen::ArrayXd yn = (y - n.mu_y) / n.sigma_y;
    return fit_multistart(
        ModelKind::exponential, pairs, exp_seeds_normalized(xn, yn, opts.multistart_count),
        exp_values, exp_jacobian, [&](const Eigen::VectorXd& t) { return exp_to_original(t, n); },
        opts, xn, yn);
}

RegressionModel fit_sigmoid(const std::vector<IntervalPair>& pairs, const FitOptions& opts) {
    opts.validate();
    if (pairs.size() < 5)
        throw PreconditionError("fit_sigmoid needs at least 5 pairs, got " +
                                std::to_string(pairs.size()));
    const Eigen::ArrayXd x = x_of(pairs);
    const Eigen::ArrayXd y = y_of(pairs);
    if ((y == y[0]).all()) throw DegenerateDesign("fit_sigmoid: y values all identical");
    const Normalization n = make_normalization(x, y);
    const Eigen::ArrayXd xn = (x - n.mu_x) / n.sigma_x;
    const Eigen::ArrayXd yn = (y - n.mu_y) / n.sigma_y;
    return fit_multistart(
        ModelKind::sigmoidal, pairs, sig_seeds_normalized(xn, yn, opts.multistart_count),
        sig_values, sig_jacobian, [&](const Eigen::VectorXd& t) { return sig_to_original(t, n); },
        opts, xn, yn);
}

double predict(const RegressionModel& model, double x_duration_min) {
    const auto& p = model.params;
    switch (model.kind) {
    case ModelKind::linear: return linear_value(p[0], p[1], x_duration_min);
    case ModelKind::exponential: return exponential_value(p[0], p[1], p[2], x_duration_min);
    case ModelKind::sigmoidal: return sigmoid_value(p[0], p[1], p[2], p[3], x_duration_min);
    }
    return 0.0;
}

std::vector<Eigen::VectorXd> exponential_seeds(const std::vector<IntervalPair>& pairs,
                                               const FitOptions& opts) {
    opts.validate();
    const Eigen::ArrayXd x = x_of(pairs);
    const Eigen::ArrayXd y = y_of(pairs);
    const Normalization n = make_normalization(x, y);
    auto seeds = exp_seeds_normalized((x - n.mu_x) / n.sigma_x, (y - n.mu_y) / n.sigma_y,
                                      opts.multistart_count);
    for (auto& s : seeds) s = exp_to_original(s, n);
    return seeds;
}

std::vector<Eigen::VectorXd> sigmoid_seeds(const std::vector<IntervalPair>& pairs,
                                           const FitOptions& opts) {
    opts.validate();
    const Eigen::ArrayXd x = x_of(pairs);
    const Eigen::ArrayXd y = y_of(pairs);
    const Normalization n = make_normalization(x, y);
    auto seeds = sig_seeds_normalized((x - n.mu_x) / n.sigma_x, (y - n.mu_y) / n.sigma_y,
                                      opts.multistart_count);
    for (auto& s : seeds) s = sig_to_original(s, n);
    return seeds;
}

double model_sse(ModelKind kind, const Eigen::VectorXd& params,
                 const std::vector<IntervalPair>& pairs) {
    double sse = 0.0;
    for (const auto& pair : pairs) {
        double value = 0.0;
        switch (kind) {
        case ModelKind::linear:
            value = linear_value(params[0], params[1], pair.x_duration_min);
            break;
        case ModelKind::exponential:
            value = exponential_value(params[0], params[1], params[2], pair.x_duration_min);
            break;
        case ModelKind::sigmoidal:
            value = sigmoid_value(params[0], params[1], params[2], params[3], pair.x_duration_min);
            break;
        }
        const double r = pair.y_gap_min - value;
        sse += r * r;
    }
    return std::isfinite(sse) ? sse : kInf;
}

} // namespace geyser
