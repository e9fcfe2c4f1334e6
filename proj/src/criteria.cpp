#include "tsms/criteria.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tsms/errors.hpp"

namespace tsms {

namespace {

void check_dim(std::size_t expected, const Direction& theta) {
    if (theta.dim() != expected) {
        throw DimensionError("criterion: theta has dimension " + std::to_string(theta.dim()) + ", data has " +
                             std::to_string(expected));
    }
}

}  // namespace

IndicatorCriterion::IndicatorCriterion(RowMatrix X, std::vector<double> weights)
    : X_(std::move(X)), weights_(std::move(weights)) {
    if (static_cast<std::size_t>(X_.rows()) != weights_.size()) {
        throw DimensionError("indicator criterion: row and weight counts differ");
    }
    if (weights_.empty()) throw ValidationError("indicator criterion needs at least one observation");
}

IndicatorCriterion IndicatorCriterion::maximum_score(const Dataset& data) {
    std::vector<double> w(data.y);
    for (auto& v : w) v -= 0.5;
    return IndicatorCriterion(data.X, std::move(w));
}

IndicatorCriterion IndicatorCriterion::two_stage(const Dataset& data, const FirstStageFit& fit) {
    if (fit.dim() != data.d()) throw DimensionError("first stage dimension differs from data");
    return IndicatorCriterion(data.X, fit.at_sample());
}

IndicatorCriterion IndicatorCriterion::two_stage(const Dataset& data, std::vector<double> hhat_values) {
    return IndicatorCriterion(data.X, std::move(hhat_values));
}

double IndicatorCriterion::operator()(const Direction& theta) const {
    const std::size_t d = dim();
    check_dim(d, theta);
    const double* x = X_.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i, x += d) {
        if (theta.dot(x) >= 0.0) sum += weights_[i];
    }
    return sum / static_cast<double>(weights_.size());
}

SmoothedCriterion::SmoothedCriterion(const Dataset& data, double bandwidth) : data_(&data), bandwidth_(bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ValidationError("SMS bandwidth must be positive");
    if (data.n() == 0) throw ValidationError("SMS criterion needs at least one observation");
}

double SmoothedCriterion::operator()(const Direction& theta) const {
    check_dim(data_->d(), theta);
    const double scale = 1.0 / (bandwidth_ * std::numbers::sqrt2);
    double sum = 0.0;
    for (std::size_t i = 0; i < data_->n(); ++i) {
        sum += (data_->y[i] - 0.5) * 0.5 * std::erfc(-theta.dot(data_->row(i)) * scale);
    }
    return sum / static_cast<double>(data_->n());
}

MultiIndexCriterion::MultiIndexCriterion(const MultiDataset& data, std::vector<double> hhat_values)
    : data_(&data), hhat_(std::move(hhat_values)) {
    if (data.J < 1) throw ValidationError("multi-index criterion needs J >= 1");
    if (hhat_.size() != data.n()) throw DimensionError("multi-index criterion: one first-stage value per row");
    if (hhat_.empty()) throw ValidationError("multi-index criterion needs at least one observation");
}

MultiIndexCriterion::MultiIndexCriterion(const MultiDataset& data, const FirstStageFit& fit)
    : MultiIndexCriterion(data, fit.at_sample()) {}

double MultiIndexCriterion::operator()(const Direction& theta) const {
    check_dim(data_->d(), theta);
    const std::size_t J = data_->J;
    double penalty = 0.0;
    for (std::size_t i = 0; i < data_->n(); ++i) {
        const double h = hhat_[i];
        if (h == 0.0) continue;
        bool all_negative = true;
        bool all_positive = true;
        for (std::size_t j = 0; j < J; ++j) {
            const double index = theta.dot(data_->block(i, j));
            all_negative = all_negative && index < 0.0;
            all_positive = all_positive && index > 0.0;
        }
        if (h > 0.0 && all_negative) penalty += h;
        if (h < 0.0 && all_positive) penalty -= h;
    }
    return -penalty / static_cast<double>(data_->n());
}

double ms_criterion(const Dataset& data, const Direction& theta) {
    return IndicatorCriterion::maximum_score(data)(theta);
}

double sms_criterion(const Dataset& data, const Direction& theta, double bandwidth) {
    return SmoothedCriterion(data, bandwidth)(theta);
}

double tsms_criterion(const Dataset& data, const FirstStageFit& fit, const Direction& theta) {
    return IndicatorCriterion::two_stage(data, fit)(theta);
}

double tsms_mmi_criterion(const MultiDataset& data, const FirstStageFit& fit, const Direction& theta) {
    return MultiIndexCriterion(data, fit)(theta);
}

namespace {

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 10> kGlNodes = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244, -0.4333953941292472, -0.1488743389816312,
    0.1488743389816312,  0.4333953941292472,  0.6794095682990244,  0.8650633666889845,  0.9739065285171717};
constexpr std::array<double, 10> kGlWeights = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963, 0.2955242247147529,
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806, 0.0666713443086881};

// Composite GL nodes on [lo, hi] with `panels` panels.
void composite_rule(double lo, double hi, std::size_t panels, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    const double width = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * width;
        for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
            nodes.push_back(mid + 0.5 * width * kGlNodes[k]);
            weights.push_back(0.5 * width * kGlWeights[k]);
        }
    }
}

}  // namespace

IdentityCheck population_identity_check(const Dataset& data, double bandwidth, const Direction& theta,
                                        double tolerance) {
    if (data.d() != 2 || theta.dim() != 2) throw DimensionError("population_identity_check needs d = 2");
    const FirstStageFit fit = FirstStageFit::binary(data, bandwidth, DensityMode::Known);
    const double reach = 1.0 + 8.0 * bandwidth;
    const Vector normal = theta.coords();
    Vector along(2);
    along << -normal[1], normal[0];

    std::vector<double> s_nodes, s_weights, t_nodes, t_weights;
    auto integrate = [&](std::size_t panels) {
        composite_rule(0.0, reach, panels, s_nodes, s_weights);
        composite_rule(-reach, reach, 2 * panels, t_nodes, t_weights);
        double total = 0.0;
        std::array<double, 2> x{};
        for (std::size_t a = 0; a < s_nodes.size(); ++a) {
            double row = 0.0;
            for (std::size_t c = 0; c < t_nodes.size(); ++c) {
                x[0] = s_nodes[a] * normal[0] + t_nodes[c] * along[0];
                x[1] = s_nodes[a] * normal[1] + t_nodes[c] * along[1];
                // Known-density numerator sum equals hhat(x) * p_x.
                row += t_weights[c] * fit.kernel_sums(x).first;
            }
            total += s_weights[a] * row;
        }
        return total;
    };

    constexpr std::size_t kMaxPanels = 256;
    std::size_t panels = 2;
    double previous = integrate(panels);
    double delta = 0.0;
    for (;;) {
        panels *= 2;
        const double current = integrate(panels);
        delta = std::abs(current - previous);
        previous = current;
        if (delta < tolerance) break;
        if (panels >= kMaxPanels) {
            throw ComputationError("population identity quadrature did not converge (achieved " +
                                   std::to_string(delta) + ")");
        }
    }
    return IdentityCheck{previous, sms_criterion(data, theta, bandwidth), delta, panels};
}

}  // namespace tsms
