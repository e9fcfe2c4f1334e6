#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace tsms {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Rng = std::mt19937_64;

/// A point on the unit sphere S^{d-1}, d >= 2.
///
/// Constructing from coordinates checks the unit-norm invariant; use
/// `normalized` to project an arbitrary nonzero vector onto the sphere.
class Direction {
public:
    static constexpr double kNormTolerance = 1e-12;

    explicit Direction(Vector coords);
    static Direction normalized(const Vector& v);
    /// Angle `radians` on the unit circle.
    static Direction from_angle(double radians);

    const Vector& coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(coords_.size()); }
    double operator[](std::size_t i) const { return coords_[static_cast<Eigen::Index>(i)]; }
    double dot(const double* x) const noexcept;

    friend bool operator==(const Direction& a, const Direction& b) {
        return a.coords_ == b.coords_;
    }

private:
    Vector coords_;
};

/// d x d orthonormal matrix whose first column is a given direction.
struct OrthonormalFrame {
    Matrix columns;
};

Direction unit_sphere_sample(std::size_t d, Rng& rng);

/// (I - theta0 theta0') (theta - theta0).
Vector tangent_project(const Direction& theta0, const Direction& theta);

/// Gram-Schmidt completion of theta0 against the canonical basis, skipping
/// the canonical vector most parallel to theta0.
OrthonormalFrame change_basis(const Direction& theta0);

/// Deterministic quasi-uniform point set on S^{d-1}. For d = 2 this is the
/// exact angular lattice 2*pi*k/resolution; for d = 3 a Fibonacci spiral;
/// for d >= 4 an additive-recurrence (Kronecker) sequence pushed through the
/// inverse normal CDF and normalized.
std::vector<Direction> sphere_grid(std::size_t d, std::size_t resolution);

/// Counter-clockwise angle of a 2-D direction in [0, 2*pi).
double angle_of(const Direction& theta);

/// Angle between two directions of equal dimension, in [0, pi].
double angular_distance(const Direction& a, const Direction& b);

/// Direction at Euclidean distance `delta` from theta0 along the unit tangent
/// vector `tangent` (which must be orthogonal to theta0).
Direction rotate_towards(const Direction& theta0, const Vector& tangent, double delta);

/// Uniformly distributed unit vector in the tangent space at theta0.
Vector random_tangent(const Direction& theta0, Rng& rng);

}  // namespace tsms
