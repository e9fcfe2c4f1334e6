#include "tsms/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "tsms/errors.hpp"

namespace tsms {

Direction::Direction(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw DimensionError("direction needs d >= 2, got d = " + std::to_string(coords_.size()));
    }
    const double norm = coords_.norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        throw ValidationError("direction is not unit norm (norm = " + std::to_string(norm) + ")");
    }
}

Direction Direction::normalized(const Vector& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ValidationError("cannot normalize a zero or non-finite vector");
    }
    return Direction(v / norm);
}

Direction Direction::from_angle(double radians) {
    Vector v(2);
    v << std::cos(radians), std::sin(radians);
    return Direction(std::move(v));
}

double Direction::dot(const double* x) const noexcept {
    double s = 0.0;
    for (Eigen::Index j = 0; j < coords_.size(); ++j) s += coords_[j] * x[j];
    return s;
}

Direction unit_sphere_sample(std::size_t d, Rng& rng) {
    if (d < 2) throw DimensionError("unit_sphere_sample needs d >= 2");
    std::normal_distribution<double> normal;
    Vector v(static_cast<Eigen::Index>(d));
    double norm2 = 0.0;
    do {
        for (auto& c : v) c = normal(rng);
        norm2 = v.squaredNorm();
    } while (norm2 < 1e-300);
    return Direction::normalized(v);
}

Vector tangent_project(const Direction& theta0, const Direction& theta) {
    if (theta0.dim() != theta.dim()) {
        throw DimensionError("tangent_project: dimension mismatch");
    }
    const Vector diff = theta.coords() - theta0.coords();
    return diff - theta0.coords() * theta0.coords().dot(diff);
}

OrthonormalFrame change_basis(const Direction& theta0) {
    const auto d = static_cast<Eigen::Index>(theta0.dim());
    Eigen::Index pivot = 0;
    theta0.coords().cwiseAbs().maxCoeff(&pivot);

    Matrix frame(d, d);
    frame.col(0) = theta0.coords();
    Eigen::Index next = 1;
    for (Eigen::Index k = 0; k < d; ++k) {
        if (k == pivot) continue;
        Vector v = Vector::Unit(d, k);
        // Two passes of modified Gram-Schmidt keep TᵀT = I to ~1e-15.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index c = 0; c < next; ++c) v -= frame.col(c) * frame.col(c).dot(v);
        }
        frame.col(next++) = v.normalized();
    }
    return OrthonormalFrame{std::move(frame)};
}

namespace {

// Positive root of x^(s+1) = x + 1.
double generalized_golden_ratio(std::size_t s) {
    double x = 2.0;
    for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(s + 1));
    return x;
}

double inverse_normal_cdf(double u) {
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

}  // namespace

std::vector<Direction> sphere_grid(std::size_t d, std::size_t resolution) {
    if (d < 2) throw DimensionError("sphere_grid needs d >= 2");
    if (resolution < 4) throw ValidationError("sphere_grid needs resolution >= 4");

    std::vector<Direction> grid;
    grid.reserve(resolution);
    const double count = static_cast<double>(resolution);

    if (d == 2) {
        for (std::size_t k = 0; k < resolution; ++k) {
            grid.push_back(Direction::from_angle(2.0 * std::numbers::pi * static_cast<double>(k) / count));
        }
        return grid;
    }

    if (d == 3) {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t k = 0; k < resolution; ++k) {
            const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * static_cast<double>(k);
            Vector v(3);
            v << r * std::cos(phi), r * std::sin(phi), z;
            grid.push_back(Direction::normalized(v));
        }
        return grid;
    }

    const double g = generalized_golden_ratio(d);
    std::vector<double> alpha(d);
    for (std::size_t j = 0; j < d; ++j) alpha[j] = std::pow(1.0 / g, static_cast<double>(j + 1));
    Vector v(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < resolution; ++k) {
        for (std::size_t j = 0; j < d; ++j) {
            double u = 0.5 + static_cast<double>(k + 1) * alpha[j];
            u -= std::floor(u);
            u = std::clamp(u, 1e-12, 1.0 - 1e-12);
            v[static_cast<Eigen::Index>(j)] = inverse_normal_cdf(u);
        }
        grid.push_back(Direction::normalized(v));
    }
    return grid;
}

double angle_of(const Direction& theta) {
    if (theta.dim() != 2) throw DimensionError("angle_of needs d = 2");
    double a = std::atan2(theta[1], theta[0]);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi) a = 0.0;
    return a;
}

double angular_distance(const Direction& a, const Direction& b) {
    if (a.dim() != b.dim()) throw DimensionError("angular_distance: dimension mismatch");
    // atan2 form stays accurate for nearly (anti)parallel vectors.
    const double cross = (a.coords() - b.coords() * b.coords().dot(a.coords())).norm();
    return std::atan2(cross, a.coords().dot(b.coords()));
}

Direction rotate_towards(const Direction& theta0, const Vector& tangent, double delta) {
    const double angle = 2.0 * std::asin(std::clamp(delta / 2.0, -1.0, 1.0));
    return Direction::normalized(theta0.coords() * std::cos(angle) + tangent * std::sin(angle));
}

Vector random_tangent(const Direction& theta0, Rng& rng) {
    std::normal_distribution<double> normal;
    const auto d = static_cast<Eigen::Index>(theta0.dim());
    Vector v(d);
    double norm = 0.0;
    do {
        for (auto& c : v) c = normal(rng);
        v -= theta0.coords() * theta0.coords().dot(v);
        norm = v.norm();
    } while (norm < 1e-12);
    return v / norm;
}

}  // namespace tsms
