#pragma once

#include <cstddef>
#include <vector>

#include "tsms/dgp.hpp"
#include "tsms/firststage.hpp"
#include "tsms/geometry.hpp"

namespace tsms {

/// (1/n) sum_i w_i 1{X_i' theta >= 0}.
///
/// Maximum score uses w_i = y_i - 1/2; the two-stage estimator uses cached
/// first-stage values w_i = hhat(X_i). Both are piecewise constant in theta,
/// which is what the exact 2-D solver relies on.
class IndicatorCriterion {
public:
    IndicatorCriterion(RowMatrix X, std::vector<double> weights);

    static IndicatorCriterion maximum_score(const Dataset& data);
    static IndicatorCriterion two_stage(const Dataset& data, const FirstStageFit& fit);
    /// Two-stage criterion with externally supplied weights (e.g. an oracle h0).
    static IndicatorCriterion two_stage(const Dataset& data, std::vector<double> hhat_values);

    double operator()(const Direction& theta) const;

    const RowMatrix& rows() const noexcept { return X_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(X_.cols()); }

private:
    RowMatrix X_;
    std::vector<double> weights_;
};

/// (1/n) sum_i (y_i - 1/2) Phi(X_i' theta / b).
class SmoothedCriterion {
public:
    SmoothedCriterion(const Dataset& data, double bandwidth);
    double operator()(const Direction& theta) const;
    std::size_t dim() const noexcept { return data_->d(); }
    double bandwidth() const noexcept { return bandwidth_; }

private:
    const Dataset* data_;
    double bandwidth_;
};

/// -(1/n) sum_i { [h_i]_+ prod_j 1{X_ij' theta < 0} + [-h_i]_+ prod_j 1{X_ij' theta > 0} }.
class MultiIndexCriterion {
public:
    MultiIndexCriterion(const MultiDataset& data, std::vector<double> hhat_values);
    MultiIndexCriterion(const MultiDataset& data, const FirstStageFit& fit);
    double operator()(const Direction& theta) const;
    std::size_t dim() const noexcept { return data_->d(); }
    const std::vector<double>& weights() const noexcept { return hhat_; }

private:
    const MultiDataset* data_;
    std::vector<double> hhat_;
};

double ms_criterion(const Dataset& data, const Direction& theta);
double sms_criterion(const Dataset& data, const Direction& theta, double bandwidth);
/// Recomputes hhat at every X_i (quadratic cost); build a two-stage
/// IndicatorCriterion once when evaluating at many theta.
double tsms_criterion(const Dataset& data, const FirstStageFit& fit, const Direction& theta);
double tsms_mmi_criterion(const MultiDataset& data, const FirstStageFit& fit, const Direction& theta);

struct IdentityCheck {
    double lhs = 0.0;             // quadrature of hhat(x) 1{x'theta >= 0} p_x over R^2
    double rhs = 0.0;             // smoothed criterion at theta
    double quadrature_delta = 0.0;  // |I_{2m} - I_m| at the final refinement
    std::size_t panels = 0;       // panels along the theta axis at convergence
};

/// Integrates the known-density kernel fit against the half-plane
/// {x' theta >= 0} with composite tensor-product Gauss-Legendre in the frame
/// (theta, theta-perp), doubling the panel count until successive estimates
/// agree to `tolerance`. The domain extends 1 + 8b from the origin in each
/// frame direction. d = 2 only.
IdentityCheck population_identity_check(const Dataset& data, double bandwidth, const Direction& theta,
                                        double tolerance = 1e-7);

}  // namespace tsms
