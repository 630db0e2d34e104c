#ifndef CSCC_LOGISTIC_HPP
#define CSCC_LOGISTIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "errors.hpp"
#include "matrix.hpp"

namespace cscc {

struct LogisticOptions {
    double lambda = 1.0;     // L2 penalty on non-intercept weights
    double tol = 1e-6;       // stop when the gradient infinity-norm is <= tol
    int max_iter = 5000;
    double armijo_c = 1e-4;
    double shrink = 0.5;
};

/// L2-penalised negative log-likelihood over a design whose first weight is
/// an unpenalised intercept:
///   f(w) = sum_i [log(1 + exp(z_i)) - y_i z_i] + lambda/2 * |w_1..d|^2,
///   z_i = w_0 + x_i . w_1..d
class LogisticObjective {
public:
    LogisticObjective(const Matrix& x, std::span<const int> y, double lambda)
        : x_(x), y_(y), lambda_(lambda) {}

    std::size_t dims() const noexcept { return x_.cols() + 1; }

    double value(std::span<const double> w) const { return value_at(w, margins(w)); }

    std::vector<double> gradient(std::span<const double> w) const { return gradient_at(w, margins(w)); }

    /// z_i for every row.
    std::vector<double> margins(std::span<const double> w) const {
        std::vector<double> z(x_.rows());
        for (std::size_t i = 0; i < x_.rows(); ++i) {
            double m = w[0];
            auto row = x_.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) m += w[j + 1] * row[j];
            z[i] = m;
        }
        return z;
    }

    double value_at(std::span<const double> w, std::span<const double> z) const {
        double f = 0.0;
        for (std::size_t i = 0; i < x_.rows(); ++i) {
            // log(1 + e^z) - y z, evaluated without overflow
            f += (z[i] > 0.0 ? z[i] + std::log1p(std::exp(-z[i])) : std::log1p(std::exp(z[i]))) - y_[i] * z[i];
        }
        for (std::size_t j = 1; j < w.size(); ++j) f += 0.5 * lambda_ * w[j] * w[j];
        return f;
    }

    std::vector<double> gradient_at(std::span<const double> w, std::span<const double> z) const {
        std::vector<double> g(w.size(), 0.0);
        for (std::size_t i = 0; i < x_.rows(); ++i) {
            const double r = sigmoid(z[i]) - y_[i];
            g[0] += r;
            auto row = x_.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) g[j + 1] += r * row[j];
        }
        for (std::size_t j = 1; j < w.size(); ++j) g[j] += lambda_ * w[j];
        return g;
    }

private:
    const Matrix& x_;
    std::span<const int> y_;
    double lambda_;
};

/// Fitted logistic regression. Inputs are standardised with the training
/// statistics stored here; zero-variance training columns are dropped.
struct LogisticModel {
    std::size_t input_dims = 0;
    std::vector<std::size_t> kept;  // input columns used, in order
    std::vector<double> mean;       // per kept column
    std::vector<double> scale;      // per kept column
    std::vector<double> weights;    // intercept first, then one per kept column
    double lambda = 1.0;

    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
    std::vector<double> objective_trace;  // objective after every accepted step
    std::vector<std::string> warnings;

    Matrix design(const Matrix& x) const {
        if (x.cols() != input_dims)
            throw DimensionMismatch("model expects " + std::to_string(input_dims) + " features, got " +
                                    std::to_string(x.cols()));
        Matrix z(x.rows(), kept.size());
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < kept.size(); ++j) z(i, j) = (x(i, kept[j]) - mean[j]) / scale[j];
        return z;
    }

    double predict(std::span<const double> x) const {
        if (x.size() != input_dims)
            throw DimensionMismatch("model expects " + std::to_string(input_dims) + " features, got " +
                                    std::to_string(x.size()));
        double z = weights[0];
        for (std::size_t j = 0; j < kept.size(); ++j)
            z += weights[j + 1] * (x[kept[j]] - mean[j]) / scale[j];
        return sigmoid(z);
    }
};

namespace detail {

inline double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

/// Full-batch gradient descent with Armijo backtracking. Hitting max_iter is
/// not an error: the model comes back with converged = false and a warning.
inline LogisticModel fit_logistic(const Matrix& x, std::span<const int> y,
                                  const LogisticOptions& opt = {}) {
    if (x.rows() == 0) throw EmptyInput("cannot fit a logistic model on zero rows");
    if (x.rows() != y.size())
        throw DimensionMismatch(std::to_string(x.rows()) + " feature rows but " + std::to_string(y.size()) +
                                " labels");
    for (int v : y)
        if (v != 0 && v != 1) throw DataError("NonBinaryLabel", "logistic labels must be 0 or 1");
    if (!(opt.lambda >= 0.0)) throw ConfigError("InvalidLambda", "lambda must be >= 0");

    LogisticModel model;
    model.input_dims = x.cols();
    model.lambda = opt.lambda;
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double mu = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            if (!std::isfinite(x(i, c)))
                throw DataError("NonFiniteFeature", "row " + std::to_string(i) + ", column " + std::to_string(c));
            mu += x(i, c);
        }
        mu /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) var += (x(i, c) - mu) * (x(i, c) - mu);
        const double sd = std::sqrt(var / n);
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) {
            model.warnings.push_back("DegenerateFeatures: column " + std::to_string(c) +
                                     " has zero variance and was dropped");
            continue;
        }
        model.kept.push_back(c);
        model.mean.push_back(mu);
        model.scale.push_back(sd);
    }

    const Matrix z = model.design(x);
    const LogisticObjective objective(z, y, opt.lambda);
    std::vector<double> w(objective.dims(), 0.0);
    std::vector<double> margins = objective.margins(w);
    std::vector<double> g = objective.gradient_at(w, margins);
    double f = objective.value_at(w, margins);
    double step = 1.0;
    std::vector<double> trial(w.size());
    std::vector<double> trial_margins;

    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (detail::inf_norm(g) <= opt.tol) break;
        double g2 = 0.0;
        for (double gi : g) g2 += gi * gi;
        step = std::min(step * 2.0, 1e6);
        double f_trial = f;
        bool accepted = false;
        while (step > 1e-20) {
            for (std::size_t j = 0; j < w.size(); ++j) trial[j] = w[j] - step * g[j];
            trial_margins = objective.margins(trial);
            f_trial = objective.value_at(trial, trial_margins);
            if (f_trial <= f - opt.armijo_c * step * g2) {
                accepted = true;
                break;
            }
            step *= opt.shrink;
        }
        if (!accepted) break;  // no descent possible at machine precision
        w.swap(trial);
        margins.swap(trial_margins);
        f = f_trial;
        g = objective.gradient_at(w, margins);
        model.objective_trace.push_back(f);
    }
    model.weights = std::move(w);
    model.iterations = it;
    model.gradient_norm = detail::inf_norm(g);
    model.converged = model.gradient_norm <= opt.tol;
    if (!model.converged)
        model.warnings.push_back("NonConvergence: gradient norm " + std::to_string(model.gradient_norm) +
                                 " after " + std::to_string(it) + " iterations");
    return model;
}

}  // namespace cscc

#endif  // CSCC_LOGISTIC_HPP
