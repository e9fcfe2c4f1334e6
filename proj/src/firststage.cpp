#include "tsms/firststage.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tsms/errors.hpp"

namespace tsms {

double gaussian_kernel(std::size_t d, std::span<const double> u) {
    if (u.size() != d) throw DimensionError("gaussian_kernel: len(u) != d");
    double r2 = 0.0;
    for (double c : u) r2 += c * c;
    return std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(d)) * std::exp(-0.5 * r2);
}

double ball_density(std::size_t d) {
    if (d < 1) throw DimensionError("ball_density needs d >= 1");
    const double half = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, -half) * std::tgamma(half + 1.0);
}

FirstStageFit::FirstStageFit(RowMatrix points, std::vector<double> responses, double bandwidth,
                             DensityMode mode, double centre, double reference_density)
    : points_(std::move(points)),
      responses_(std::move(responses)),
      bandwidth_(bandwidth),
      mode_(mode),
      centre_(centre),
      reference_density_(reference_density) {
    if (responses_.empty()) throw ValidationError("first stage needs a nonempty dataset");
    if (static_cast<std::size_t>(points_.rows()) != responses_.size()) {
        throw DimensionError("first stage: point and response counts differ");
    }
    if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) {
        throw ValidationError("bandwidth must be positive and finite");
    }
    if (!(reference_density_ > 0.0)) throw ValidationError("reference density must be positive");
    for (auto& r : responses_) r -= centre_;
    const double n = static_cast<double>(responses_.size());
    scale_ = std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(dim())) /
             (n * std::pow(bandwidth_, static_cast<double>(dim())));
}

FirstStageFit FirstStageFit::binary(const Dataset& data, double bandwidth, DensityMode mode) {
    return FirstStageFit(data.X, data.y, bandwidth, mode, 0.5, ball_density(data.d()));
}

FirstStageFit FirstStageFit::multi_index(const MultiDataset& data, double bandwidth) {
    const double reference = std::pow(ball_density(data.d()), static_cast<double>(data.J));
    return FirstStageFit(data.X, data.y, bandwidth, DensityMode::Estimated, 0.0, reference);
}

std::pair<double, double> FirstStageFit::kernel_sums(std::span<const double> x) const {
    const std::size_t D = dim();
    if (x.size() != D) throw DimensionError("first stage: evaluation point has wrong dimension");
    const double inv2b2 = 0.5 / (bandwidth_ * bandwidth_);
    double num = 0.0;
    double den = 0.0;
    const double* p = points_.data();
    for (std::size_t i = 0; i < responses_.size(); ++i, p += D) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < D; ++k) {
            const double diff = x[k] - p[k];
            r2 += diff * diff;
        }
        const double w = std::exp(-r2 * inv2b2);
        num += responses_[i] * w;
        den += w;
    }
    return {num * scale_, den * scale_};
}

double FirstStageFit::finish(double numerator, double density, bool check_floor) const {
    if (mode_ == DensityMode::Known) return numerator / reference_density_;
    if (check_floor && !(density >= kDensityFloor * reference_density_)) {
        throw ComputationError("out-of-support point: density estimate " + std::to_string(density) +
                               " below floor");
    }
    return numerator / density;
}

double FirstStageFit::operator()(std::span<const double> x) const {
    const auto [num, den] = kernel_sums(x);
    return finish(num, den, true);
}

std::vector<double> FirstStageFit::at_sample() const {
    const std::size_t n = responses_.size();
    const std::size_t D = dim();
    const double inv2b2 = 0.5 / (bandwidth_ * bandwidth_);
    std::vector<double> num(responses_);  // diagonal terms: kernel weight 1
    std::vector<double> den(n, 1.0);
    const double* base = points_.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = base + i * D;
        const double ri = responses_[i];
        double num_i = 0.0;
        double den_i = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = base + j * D;
            double r2 = 0.0;
            for (std::size_t k = 0; k < D; ++k) {
                const double diff = xi[k] - xj[k];
                r2 += diff * diff;
            }
            const double w = std::exp(-r2 * inv2b2);
            num_i += responses_[j] * w;
            den_i += w;
            num[j] += ri * w;
            den[j] += w;
        }
        num[i] += num_i;
        den[i] += den_i;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = finish(num[i] * scale_, den[i] * scale_, true);
    return out;
}

ScalarField FirstStageFit::as_field() const {
    return [this](std::span<const double> x) { return (*this)(x); };
}

double nw_estimate(const FirstStageFit& fit, std::span<const double> x) {
    if (fit.mode() != DensityMode::Known) throw ValidationError("nw_estimate needs a known-density fit");
    return fit.kernel_sums(x).first / fit.reference_density();
}

double nw_estimate_with_density(const FirstStageFit& fit, std::span<const double> x) {
    const auto [num, den] = fit.kernel_sums(x);
    if (!(den >= FirstStageFit::kDensityFloor * fit.reference_density())) {
        throw ComputationError("out-of-support point: density estimate below floor");
    }
    return num / den;
}

double sup_norm_error(const ScalarField& hhat, const ScalarField& h0, const RowMatrix& grid) {
    if (grid.rows() == 0) throw ValidationError("sup_norm_error needs a nonempty grid");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        std::span<const double> x(grid.data() + i * grid.cols(), static_cast<std::size_t>(grid.cols()));
        worst = std::max(worst, std::abs(hhat(x) - h0(x)));
    }
    return worst;
}

double sup_norm_error(const FirstStageFit& fit, const ScalarField& h0, const RowMatrix& grid) {
    return sup_norm_error(fit.as_field(), h0, grid);
}

RowMatrix ball_lattice(std::size_t d, double radius, std::size_t per_axis) {
    if (d < 1 || per_axis < 2 || !(radius > 0.0)) throw ValidationError("ball_lattice: bad arguments");
    const double step = 2.0 * radius / static_cast<double>(per_axis - 1);
    std::vector<double> coords;
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> x(d);
    for (;;) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            x[k] = -radius + step * static_cast<double>(idx[k]);
            r2 += x[k] * x[k];
        }
        if (r2 <= radius * radius * (1.0 + 1e-12)) coords.insert(coords.end(), x.begin(), x.end());
        std::size_t k = 0;
        while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
        if (k == d) break;
    }
    RowMatrix grid(static_cast<Eigen::Index>(coords.size() / d), static_cast<Eigen::Index>(d));
    std::copy(coords.begin(), coords.end(), grid.data());
    return grid;
}

}  // namespace tsms
