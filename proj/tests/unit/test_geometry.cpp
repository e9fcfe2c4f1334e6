#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tsms/errors.hpp"
#include "tsms/geometry.hpp"

using namespace tsms;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) out[k++] = x;
    return out;
}

}  // namespace

TEST_CASE("Direction validates the unit norm") {
    CHECK_NOTHROW(Direction(vec({1.0, 0.0})));
    CHECK_THROWS_AS(Direction(vec({1.0, 1.0})), ValidationError);
    CHECK_THROWS_AS(Direction(vec({1.0})), DimensionError);
    CHECK_THROWS_AS(Direction::normalized(vec({0.0, 0.0})), ValidationError);
    const Direction d = Direction::normalized(vec({3.0, 4.0}));
    CHECK(d[0] == doctest::Approx(0.6));
    CHECK(d[1] == doctest::Approx(0.8));
}

TEST_CASE("unit_sphere_sample") {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) CHECK(std::abs(unit_sphere_sample(2, rng).coords().norm() - 1.0) < 1e-12);

    Rng a(7), b(7);
    CHECK(unit_sphere_sample(5, a) == unit_sphere_sample(5, b));

    Rng c(3);
    Vector mean = Vector::Zero(3);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) mean += unit_sphere_sample(3, c).coords();
    mean /= draws;
    for (int j = 0; j < 3; ++j) CHECK(std::abs(mean[j]) < 0.02);
    CHECK_THROWS_AS(unit_sphere_sample(1, c), DimensionError);
}

TEST_CASE("tangent_project examples") {
    const Direction e1(vec({1.0, 0.0}));
    const Direction e2(vec({0.0, 1.0}));
    CHECK(tangent_project(e1, e1).norm() == 0.0);
    const Vector t = tangent_project(e1, e2);
    CHECK(t[0] == doctest::Approx(0.0));
    CHECK(t[1] == doctest::Approx(1.0));
}

TEST_CASE("tangent_project is orthogonal and satisfies the norm identity") {
    Rng rng(5);
    for (std::size_t d : {2u, 3u, 6u}) {
        for (int k = 0; k < 200; ++k) {
            const Direction t0 = unit_sphere_sample(d, rng);
            const Direction t = unit_sphere_sample(d, rng);
            const Vector p = tangent_project(t0, t);
            CHECK(std::abs(p.dot(t0.coords())) < 1e-10);
            const double dist2 = (t.coords() - t0.coords()).squaredNorm();
            CHECK(std::abs(p.squaredNorm() - dist2 * (1.0 - 0.25 * dist2)) < 1e-10);
        }
    }
}

TEST_CASE("change_basis") {
    const OrthonormalFrame id = change_basis(Direction(vec({1.0, 0.0})));
    CHECK((id.columns - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        const Direction t4 = unit_sphere_sample(4, rng);
        const Matrix T = change_basis(t4).columns;
        const Vector first = T.transpose() * t4.coords();
        CHECK(std::abs(first[0] - 1.0) < 1e-12);
        CHECK(first.tail(3).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((T.transpose() * T - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

        const Direction t3 = unit_sphere_sample(3, rng);
        CHECK(std::abs(std::abs(change_basis(t3).columns.determinant()) - 1.0) < 1e-10);

        const Matrix T3 = change_basis(t3).columns;
        const Vector x = Vector::Random(3);
        CHECK((T3 * (T3.transpose() * x) - x).norm() < 1e-10);
    }

    // near-canonical direction
    const Direction nearly = Direction::normalized(vec({1.0, 1e-14, -1e-14}));
    const Matrix T = change_basis(nearly).columns;
    CHECK((T.transpose() * T - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sphere_grid d=2 quarter turns") {
    const auto g = sphere_grid(2, 4);
    REQUIRE(g.size() == 4);
    const double expect[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(g[k][0] - expect[k][0]) < 1e-15);
        CHECK(std::abs(g[k][1] - expect[k][1]) < 1e-15);
    }
}

TEST_CASE("sphere_grid d=3 points are distinct") {
    const auto g = sphere_grid(3, 1000);
    REQUIRE(g.size() == 1000);
    double best = 10.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            best = std::min(best, (g[i].coords() - g[j].coords()).norm());
    CHECK(best > 0.0);
}

TEST_CASE("sphere_grid d=2 covering radius") {
    const auto g = sphere_grid(2, 360);
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 2000; ++k) {
        const Direction t = Direction::from_angle(u(rng));
        double nearest = 10.0;
        for (const auto& p : g) nearest = std::min(nearest, angular_distance(p, t));
        CHECK(nearest <= std::numbers::pi / 360 + 1e-12);
    }
}

TEST_CASE("sphere_grid is deterministic and unit norm") {
    for (std::size_t d : {2u, 3u, 4u, 7u}) {
        const auto a = sphere_grid(d, 500);
        const auto b = sphere_grid(d, 500);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k] == b[k]);
            CHECK(std::abs(a[k].coords().norm() - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(sphere_grid(2, 0), ValidationError);
}

TEST_CASE("sphere_grid d>=4 covers the sphere roughly uniformly") {
    const auto g = sphere_grid(4, 8192);
    Vector mean = Vector::Zero(4);
    for (const auto& p : g) mean += p.coords();
    mean /= static_cast<double>(g.size());
    CHECK(mean.cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("angles") {
    CHECK(angle_of(Direction::from_angle(1.0)) == doctest::Approx(1.0));
    CHECK(angle_of(Direction::from_angle(-0.5)) == doctest::Approx(2 * std::numbers::pi - 0.5));
    const Direction a(vec({1.0, 0.0}));
    const Direction b(vec({-1.0, 0.0}));
    CHECK(angular_distance(a, b) == doctest::Approx(std::numbers::pi));
    CHECK(angular_distance(a, a) == 0.0);
}

TEST_CASE("rotate_towards lands at the requested distance") {
    Rng rng(9);
    for (std::size_t d : {2u, 3u, 5u}) {
        const Direction t0 = unit_sphere_sample(d, rng);
        for (double delta : {0.0, 0.025, 0.3, 1.5}) {
            const Vector tan = random_tangent(t0, rng);
            CHECK(std::abs(tan.dot(t0.coords())) < 1e-12);
            CHECK(std::abs(tan.norm() - 1.0) < 1e-12);
            const Direction t = rotate_towards(t0, tan, delta);
            CHECK(std::abs((t.coords() - t0.coords()).norm() - delta) < 1e-12);
        }
    }
}
