#include "knnfe/knn.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace knnfe;

namespace {

PointSet line_points(std::initializer_list<double> xs) {
    std::vector<double> coords(xs);
    return PointSet(1, std::move(coords));
}

PointSet random_points(std::mt19937_64& rng, std::size_t m, std::size_t d,
                       bool snap = false) {
    std::vector<double> coords(m * d);
    for (double& c : coords) {
        c = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        if (snap) c = std::round(c * 10.0) / 10.0;
    }
    return PointSet(d, std::move(coords));
}

} // namespace

TEST_CASE("unit ball volume") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(unit_ball_volume(2) == doctest::Approx(3.14159265358979324).epsilon(1e-14));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.18879020478639098).epsilon(1e-14));
    CHECK(unit_ball_volume(6) ==
          doctest::Approx(std::pow(3.14159265358979324, 3.0) / 6.0).epsilon(1e-13));
    CHECK_THROWS_AS(unit_ball_volume(0), std::invalid_argument);
}

TEST_CASE("knn distance on a hand-enumerable line") {
    const PointSet pts = line_points({0.0, 1.0, 3.0});
    KnnIndex index(pts);
    const double q = 0.0;
    const std::span<const double> query(&q, 1);
    CHECK(index.knn_distance(query, 1, 0) == 1.0);
    CHECK(index.knn_distance(query, 2, 0) == 3.0);
    CHECK(knn_distance_brute(pts, query, 1, 0) == 1.0);
    CHECK_THROWS_AS(index.knn_distance(query, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(index.knn_distance(query, 0, 0), std::invalid_argument);
}

TEST_CASE("duplicate points give zero distance") {
    const PointSet pts = line_points({2.0, 2.0, 5.0});
    KnnIndex index(pts);
    const double q = 2.0;
    CHECK(index.knn_distance(std::span<const double>(&q, 1), 1, 0) == 0.0);
}

TEST_CASE("self volumes on the line example") {
    const PointSet pts = line_points({0.0, 1.0, 3.0});
    const auto u1 = self_knn_volumes(pts, 1);
    // (m-1) V_1 r^1 with V_1 = 2
    CHECK(u1[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(u1[1] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(u1[2] == doctest::Approx(8.0).epsilon(1e-14));
    const auto u2 = self_knn_volumes(pts, 2);
    CHECK(u2[0] == doctest::Approx(12.0).epsilon(1e-14));
    CHECK_THROWS_AS(self_knn_volumes(pts, 3), std::invalid_argument);

    const PointSet dup = line_points({2.0, 2.0, 5.0});
    CHECK(self_knn_volumes(dup, 1)[0] == 0.0);
}

TEST_CASE("cross volumes on the line example") {
    const PointSet x = line_points({0.0});
    const PointSet y = line_points({1.0, 2.0});
    const auto v1 = cross_knn_volumes(x, y, 1);
    CHECK(v1[0] == doctest::Approx(4.0).epsilon(1e-14));
    const auto v2 = cross_knn_volumes(x, y, 2);
    CHECK(v2[0] == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(cross_knn_volumes(x, y, 3), std::invalid_argument);

    const PointSet x2(2, {0.0, 0.0});
    CHECK_THROWS_AS(cross_knn_volumes(x2, y, 1), std::invalid_argument);

    const PointSet coincide = line_points({1.0});
    CHECK(cross_knn_volumes(coincide, y, 1)[0] == 0.0);
}

TEST_CASE("r_k is monotone in k, volumes likewise") {
    std::mt19937_64 rng(11);
    const PointSet pts = random_points(rng, 120, 3);
    KnnIndex index(pts);
    for (std::size_t i = 0; i < pts.size(); i += 7) {
        double prev = 0.0;
        for (std::size_t k = 1; k <= 8; ++k) {
            const double r = index.knn_distance(pts.row(i), k, i);
            CHECK(r >= prev);
            prev = r;
        }
    }
    const auto u3 = self_knn_volumes(pts, 3);
    const auto u4 = self_knn_volumes(pts, 4);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(u3[i] <= u4[i]);
}

TEST_CASE("scaling all coordinates by c scales volumes by c^d") {
    std::mt19937_64 rng(13);
    const std::size_t d = 3;
    const PointSet pts = random_points(rng, 60, d);
    const double c = 2.75;
    std::vector<double> scaled = pts.coords();
    for (double& v : scaled) v *= c;
    const PointSet pts_scaled(d, std::move(scaled));
    const auto u = self_knn_volumes(pts, 2);
    const auto us = self_knn_volumes(pts_scaled, 2);
    const double factor = std::pow(c, static_cast<double>(d));
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(us[i] == doctest::Approx(factor * u[i]).epsilon(1e-12));
}

TEST_CASE("index and brute force agree exactly, ties included") {
    std::mt19937_64 rng(17);
    for (int inst = 0; inst < 40; ++inst) {
        const std::size_t d = 1 + rng() % 5;
        const std::size_t k = 1 + rng() % 9;
        const std::size_t m = k + 2 + rng() % 300;
        const PointSet pts = random_points(rng, m, d, inst % 2 == 0);
        KnnIndex index(pts);
        for (std::size_t i = 0; i < m; i += 3)
            CHECK(index.knn_distance(pts.row(i), k, i) ==
                  knn_distance_brute(pts, pts.row(i), k, i));
        std::vector<double> q(d, 0.3);
        CHECK(index.knn_distance(q, k) == knn_distance_brute(pts, q, k));
    }
}

TEST_CASE("neighbors come back sorted by (distance, index)") {
    const PointSet pts(1, {0.0, 1.0, -1.0, 2.0, 1.0});
    KnnIndex index(pts);
    const double q = 0.0;
    const auto nb = index.knn(std::span<const double>(&q, 1), 4);
    REQUIRE(nb.size() == 4);
    CHECK(nb[0].index == 0); // distance 0
    CHECK(nb[1].dist == 1.0);
    CHECK(nb[1].index == 1); // tie at distance 1 resolves by index: 1 < 2 < 4
    CHECK(nb[2].dist == 1.0);
    CHECK(nb[2].index == 2);
    CHECK(nb[3].dist == 1.0);
    CHECK(nb[3].index == 4);
}
