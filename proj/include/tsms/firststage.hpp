#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tsms/dgp.hpp"
#include "tsms/geometry.hpp"

namespace tsms {

/// Scalar function of a point, used for first-stage fits and oracles alike.
using ScalarField = std::function<double(std::span<const double>)>;

enum class DensityMode { Known, Estimated };

/// (2 pi)^{-d/2} exp(-|u|^2 / 2).
double gaussian_kernel(std::size_t d, std::span<const double> u);

/// Uniform density on the d-dimensional unit ball, pi^{-d/2} Gamma(d/2 + 1).
double ball_density(std::size_t d);

/// Gaussian-kernel regression estimate of E[y - centre | X = x].
///
/// Known mode divides the kernel sum by the uniform ball density; Estimated
/// mode divides by a kernel density estimate and refuses points where that
/// estimate falls below `kDensityFloor` times the reference density.
class FirstStageFit {
public:
    static constexpr double kDensityFloor = 1e-6;

    FirstStageFit(RowMatrix points, std::vector<double> responses, double bandwidth, DensityMode mode,
                  double centre, double reference_density);

    /// Binary-choice fit of h(x) = E[y - 1/2 | x].
    static FirstStageFit binary(const Dataset& data, double bandwidth, DensityMode mode = DensityMode::Known);
    /// Multi-index fit of E[y | vec(X)] with estimated density.
    static FirstStageFit multi_index(const MultiDataset& data, double bandwidth);

    double operator()(std::span<const double> x) const;
    /// Kernel sums at x: numerator sum (y_i - centre) phi, density sum phi,
    /// both scaled by 1 / (n b^D).
    std::pair<double, double> kernel_sums(std::span<const double> x) const;
    double density_estimate(std::span<const double> x) const { return kernel_sums(x).second; }

    /// Fitted values at every sample point. Exploits kernel symmetry, so the
    /// cost is n(n+1)/2 kernel evaluations; values may differ from
    /// operator() at X_i in the last bits because of summation order.
    std::vector<double> at_sample() const;

    ScalarField as_field() const;

    double bandwidth() const noexcept { return bandwidth_; }
    DensityMode mode() const noexcept { return mode_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    std::size_t size() const noexcept { return responses_.size(); }
    double centre() const noexcept { return centre_; }
    double reference_density() const noexcept { return reference_density_; }
    const RowMatrix& points() const noexcept { return points_; }

private:
    double finish(double numerator, double density, bool check_floor) const;

    RowMatrix points_;
    std::vector<double> responses_;  // y_i - centre
    double bandwidth_;
    DensityMode mode_;
    double centre_;
    double reference_density_;
    double scale_;  // 1 / (n b^D)
};

/// Known-density estimate; the fit must be in Known mode.
double nw_estimate(const FirstStageFit& fit, std::span<const double> x);

/// Estimated-density estimate; throws ComputationError ("out-of-support
/// point") when the density estimate is below the floor.
double nw_estimate_with_density(const FirstStageFit& fit, std::span<const double> x);

/// max over grid of |hhat(x) - h0(x)|. Grid rows are points.
double sup_norm_error(const ScalarField& hhat, const ScalarField& h0, const RowMatrix& grid);
double sup_norm_error(const FirstStageFit& fit, const ScalarField& h0, const RowMatrix& grid);

/// Cubic lattice points with spacing 2*radius/(per_axis - 1) restricted to the
/// closed ball of the given radius.
RowMatrix ball_lattice(std::size_t d, double radius, std::size_t per_axis);

}  // namespace tsms
