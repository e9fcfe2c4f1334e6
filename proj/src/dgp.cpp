#include "tsms/dgp.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "tsms/errors.hpp"

namespace tsms {

namespace {

std::atomic<bool> g_allow_degenerate{false};
std::atomic<bool> g_degenerate_warned{false};

void warn_degenerate() {
    if (g_allow_degenerate.load()) return;
    if (!g_degenerate_warned.exchange(true)) {
        std::clog << "warning: degenerate error spec (eps == 0) has no positive density; "
                     "estimator theory does not apply\n";
    }
}

}  // namespace

double logistic_cdf(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

void allow_degenerate_errors(bool allow) { g_allow_degenerate.store(allow); }

ErrorSpec ErrorSpec::logistic(double scale) { return ErrorSpec{Family::Logistic, scale, {}}; }

ErrorSpec ErrorSpec::gaussian(double sd) { return ErrorSpec{Family::Gaussian, sd, {}}; }

ErrorSpec ErrorSpec::heteroskedastic_logistic(double base_scale, Vector slope) {
    return ErrorSpec{Family::HeteroskedasticLogistic, base_scale, std::move(slope)};
}

ErrorSpec ErrorSpec::degenerate() { return ErrorSpec{Family::Degenerate, 1.0, {}}; }

void ErrorSpec::validate(std::size_t d) const {
    if (family != Family::Degenerate && !(scale > 0.0 && std::isfinite(scale))) {
        throw ValidationError("error scale must be positive and finite");
    }
    if (family == Family::HeteroskedasticLogistic && static_cast<std::size_t>(slope.size()) != d) {
        throw DimensionError("heteroskedastic slope must have length d");
    }
}

double ErrorSpec::scale_at(std::span<const double> x) const {
    if (family != Family::HeteroskedasticLogistic) return scale;
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += slope[static_cast<Eigen::Index>(j)] * x[j];
    return scale * std::exp(s);
}

double ErrorSpec::cdf(double t, std::span<const double> x) const {
    switch (family) {
        case Family::Logistic:
            return logistic_cdf(t / scale);
        case Family::Gaussian:
            return normal_cdf(t / scale);
        case Family::HeteroskedasticLogistic:
            return logistic_cdf(t / scale_at(x));
        case Family::Degenerate:
            return t > 0.0 ? 1.0 : (t < 0.0 ? 0.0 : 0.5);
    }
    return 0.5;
}

double ErrorSpec::sample(std::span<const double> x, Rng& rng) const {
    switch (family) {
        case Family::Logistic:
        case Family::HeteroskedasticLogistic: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            double u = 0.0;
            do {
                u = unif(rng);
            } while (u <= 0.0);
            return scale_at(x) * std::log(u / (1.0 - u));
        }
        case Family::Gaussian:
            return std::normal_distribution<double>(0.0, scale)(rng);
        case Family::Degenerate:
            return 0.0;
    }
    return 0.0;
}

void Dataset::validate() const {
    if (n() == 0) throw ValidationError("dataset is empty");
    if (static_cast<std::size_t>(X.rows()) != n()) throw DimensionError("y and X row counts differ");
    if (d() < 2) throw DimensionError("dataset needs d >= 2");
    for (std::size_t i = 0; i < n(); ++i) {
        if (X.row(static_cast<Eigen::Index>(i)).norm() >= 1.0) {
            throw ValidationError("row " + std::to_string(i + 1) + " lies outside the open unit ball");
        }
    }
}

void MultiDataset::validate() const {
    if (n() == 0) throw ValidationError("dataset is empty");
    if (J < 2) throw ValidationError("multi-index dataset needs J >= 2");
    if (static_cast<std::size_t>(X.rows()) != n()) throw DimensionError("y and X row counts differ");
    if (X.cols() % static_cast<Eigen::Index>(J) != 0 || d() < 2) {
        throw DimensionError("multi-index covariates must be J blocks of dimension d >= 2");
    }
    for (std::size_t i = 0; i < n(); ++i) {
        for (std::size_t j = 0; j < J; ++j) {
            double norm2 = 0.0;
            for (std::size_t k = 0; k < d(); ++k) norm2 += block(i, j)[k] * block(i, j)[k];
            if (norm2 >= 1.0) {
                throw ValidationError("row " + std::to_string(i + 1) + " block " + std::to_string(j + 1) +
                                      " lies outside the open unit ball");
            }
        }
    }
}

double LinkSpec::operator()(double index) const { return logistic_cdf(index / scale) - 0.5; }

RowMatrix sample_covariates_ball(std::size_t n, std::size_t d, Rng& rng) {
    if (n < 1) throw ValidationError("sample_covariates_ball needs n >= 1");
    if (d < 2) throw DimensionError("sample_covariates_ball needs d >= 2");
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    RowMatrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const double inv_d = 1.0 / static_cast<double>(d);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (;;) {
            double norm2 = 0.0;
            for (Eigen::Index j = 0; j < X.cols(); ++j) {
                X(i, j) = normal(rng);
                norm2 += X(i, j) * X(i, j);
            }
            if (norm2 < 1e-300) continue;
            const double radius = std::pow(unif(rng), inv_d);
            X.row(i) *= radius / std::sqrt(norm2);
            if (X.row(i).squaredNorm() < 1.0) break;
        }
    }
    return X;
}

Dataset simulate_binary(std::size_t n, std::size_t d, const Direction& theta0, const ErrorSpec& err,
                        Rng& rng) {
    if (theta0.dim() != d) throw DimensionError("theta0 dimension differs from d");
    err.validate(d);
    if (err.family == ErrorSpec::Family::Degenerate) warn_degenerate();

    Dataset data;
    data.X = sample_covariates_ball(n, d, rng);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double eps = err.sample(data.point(i), rng);
        data.y[i] = theta0.dot(data.row(i)) + eps >= 0.0 ? 1.0 : 0.0;
    }
    return data;
}

double true_h0(std::span<const double> x, const Direction& theta0, const ErrorSpec& err) {
    if (x.size() != theta0.dim()) throw DimensionError("true_h0: dimension mismatch");
    const double index = theta0.dot(x.data());
    if (index == 0.0) return 0.0;
    return err.cdf(index, x) - 0.5;
}

double true_h0_multi(std::span<const double> x, std::size_t J, const Direction& theta0, const LinkSpec& link) {
    const std::size_t d = theta0.dim();
    if (J == 0 || x.size() != J * d) throw DimensionError("true_h0_multi: dimension mismatch");
    double mean_index = 0.0;
    for (std::size_t j = 0; j < J; ++j) mean_index += theta0.dot(x.data() + j * d);
    return link(mean_index / static_cast<double>(J));
}

MultiDataset simulate_multi_index(std::size_t n, std::size_t J, std::size_t d, const Direction& theta0,
                                  const LinkSpec& link, double noise_sd, Rng& rng) {
    if (J < 2) throw ValidationError("simulate_multi_index needs J >= 2");
    if (theta0.dim() != d) throw DimensionError("theta0 dimension differs from d");
    if (!(noise_sd >= 0.0)) throw ValidationError("noise_sd must be nonnegative");
    if (!(link.scale > 0.0)) throw ValidationError("link scale must be positive");

    MultiDataset data;
    data.J = J;
    data.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(J * d));
    for (std::size_t j = 0; j < J; ++j) {
        data.X.middleCols(static_cast<Eigen::Index>(j * d), static_cast<Eigen::Index>(d)) =
            sample_covariates_ball(n, d, rng);
    }
    std::normal_distribution<double> noise(0.0, 1.0);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        data.y[i] = true_h0_multi(data.point(i), J, theta0, link) + noise_sd * noise(rng);
    }
    return data;
}

double sup_gradient_bound(const Direction& theta0, const ErrorSpec& err, std::size_t points, double step) {
    const std::size_t d = theta0.dim();
    Rng rng(0x5eed0123456789abULL);
    const RowMatrix X = sample_covariates_ball(points, d, rng);
    std::vector<double> plus(d), minus(d);
    double best = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        double norm2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t j = 0; j < d; ++j) plus[j] = minus[j] = X(i, static_cast<Eigen::Index>(j));
            plus[k] += step;
            minus[k] -= step;
            const double g = (true_h0(plus, theta0, err) - true_h0(minus, theta0, err)) / (2.0 * step);
            norm2 += g * g;
        }
        best = std::max(best, std::sqrt(norm2));
    }
    return best;
}

}  // namespace tsms
