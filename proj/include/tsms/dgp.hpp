#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsms/geometry.hpp"

namespace tsms {

/// Distribution of the latent error given X = x. Every family is symmetric
/// about zero for each x, so the conditional median is zero.
struct ErrorSpec {
    enum class Family { Logistic, Gaussian, HeteroskedasticLogistic, Degenerate };

    Family family = Family::Logistic;
    double scale = 1.0;  // logistic scale, Gaussian sd, or heteroskedastic base scale
    Vector slope;        // heteroskedastic only: scale(x) = scale * exp(slope'x)

    static ErrorSpec logistic(double scale = 1.0);
    static ErrorSpec gaussian(double sd = 1.0);
    static ErrorSpec heteroskedastic_logistic(double base_scale, Vector slope);
    /// epsilon == 0. Violates the positive-density requirement; simulating with
    /// it prints a one-time warning unless `allow_degenerate_errors()` was called.
    static ErrorSpec degenerate();

    void validate(std::size_t d) const;
    /// Scale of the error distribution at covariate x.
    double scale_at(std::span<const double> x) const;
    /// P(eps <= t | X = x).
    double cdf(double t, std::span<const double> x) const;
    double sample(std::span<const double> x, Rng& rng) const;
};

/// Silence the degenerate-error warning (test harnesses only).
void allow_degenerate_errors(bool allow = true);

/// Binary-choice sample: y in {0,1}, rows of X strictly inside the unit ball.
struct Dataset {
    std::vector<double> y;
    RowMatrix X;

    std::size_t n() const noexcept { return y.size(); }
    std::size_t d() const noexcept { return static_cast<std::size_t>(X.cols()); }
    const double* row(std::size_t i) const { return X.data() + i * d(); }
    std::span<const double> point(std::size_t i) const { return {row(i), d()}; }
    void validate() const;
};

/// Multi-index sample: J covariate blocks of dimension d per observation,
/// stored row-wise as vec(X_i) = (X_i1', ..., X_iJ').
struct MultiDataset {
    std::vector<double> y;
    RowMatrix X;  // n x (J*d)
    std::size_t J = 2;

    std::size_t n() const noexcept { return y.size(); }
    std::size_t d() const noexcept { return J == 0 ? 0 : static_cast<std::size_t>(X.cols()) / J; }
    const double* block(std::size_t i, std::size_t j) const { return X.data() + i * J * d() + j * d(); }
    std::span<const double> point(std::size_t i) const { return {X.data() + i * J * d(), J * d()}; }
    void validate() const;
};

/// h0(X) = G((1/J) sum_j X_j' theta0), with G(t) = F_logistic(t / scale) - 1/2.
struct LinkSpec {
    double scale = 1.0;
    double operator()(double index) const;
};

RowMatrix sample_covariates_ball(std::size_t n, std::size_t d, Rng& rng);

Dataset simulate_binary(std::size_t n, std::size_t d, const Direction& theta0, const ErrorSpec& err,
                        Rng& rng);

/// h0(x) = E[y - 1/2 | X = x] = F(x'theta0 | x) - 1/2.
double true_h0(std::span<const double> x, const Direction& theta0, const ErrorSpec& err);

/// h0 for the multi-index design; `x` is vec(X_1, ..., X_J).
double true_h0_multi(std::span<const double> x, std::size_t J, const Direction& theta0,
                     const LinkSpec& link);

MultiDataset simulate_multi_index(std::size_t n, std::size_t J, std::size_t d, const Direction& theta0,
                                  const LinkSpec& link, double noise_sd, Rng& rng);

/// Largest central-difference gradient norm of h0 over `points` quasi-random
/// points of the unit ball (fixed internal seed, so refinement is nested).
double sup_gradient_bound(const Direction& theta0, const ErrorSpec& err, std::size_t points,
                          double step = 1e-5);

double logistic_cdf(double t);
double normal_cdf(double t);

}  // namespace tsms
