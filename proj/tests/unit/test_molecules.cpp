#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curvlab/molecules.hpp"

using namespace curvlab;
using std::numbers::pi;

TEST_CASE("parametrization") {
    PhasePoint p = curvelet_parametrization({3, -2, 1, 0}, 1.0, 0.5);
    CHECK(p.s == 8.0);
    CHECK(p.theta == doctest::Approx(pi - 2 * pi / 4));
    CHECK(std::hypot(p.x1, p.x2) == doctest::Approx(1.0 / 8.0));
    CHECK_THROWS_AS(curvelet_parametrization({3, 2, 0, 0}, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(curvelet_parametrization({-1, 0, 0, 0}, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("index distance properties") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_point = [&] {
        PhasePoint p;
        p.s = std::exp2(8 * u(rng));
        p.theta = pi * u(rng);
        p.x1 = 2 * u(rng) - 1;
        p.x2 = 2 * u(rng) - 1;
        return p;
    };
    for (int i = 0; i < 500; ++i) {
        PhasePoint p = random_point(), q = random_point();
        for (double a : {0.0, 0.5, 1.0}) {
            CHECK(index_distance(p, p, a) == 1.0);
            double w = index_distance(p, q, a);
            CHECK(w >= std::max(p.s / q.s, q.s / p.s));
            // orientations are identified modulo pi
            PhasePoint r = q;
            r.theta = q.theta + pi;
            CHECK(distance_terms(p, r, a).angular == doctest::Approx(distance_terms(p, q, a).angular));
            DistanceTerms t = distance_terms(p, q, a);
            CHECK(t.angular >= 0.0);
            CHECK(t.spatial >= 0.0);
            CHECK(t.directional >= 0.0);
            // the first two terms and the scale ratio are symmetric
            DistanceTerms s = distance_terms(q, p, a);
            CHECK(s.angular == doctest::Approx(t.angular));
            CHECK(s.spatial == doctest::Approx(t.spatial));
        }
    }
    PhasePoint bad;
    bad.s = 0.0;
    CHECK_THROWS_AS(index_distance(bad, bad, 0.5), std::invalid_argument);
    PhasePoint ok;
    CHECK_THROWS_AS(index_distance(ok, ok, 1.5), std::invalid_argument);
}

TEST_CASE("consistency sums match a brute-force evaluation") {
    const double a = 0.5, k = 3.0;
    auto A = enumerate_curvelet_points(1.0, a, 4.0, 1.0);
    auto B = enumerate_curvelet_points(0.5, a, 4.0, 1.0);
    double sup_a = 0.0, sup_b = 0.0;
    for (const auto& p : A) {
        double s = 0.0;
        for (const auto& q : B) s += std::pow(index_distance(p, q, a), -k);
        sup_a = std::max(sup_a, s);
    }
    for (const auto& q : B) {
        double s = 0.0;
        for (const auto& p : A) s += std::pow(index_distance(p, q, a), -k);
        sup_b = std::max(sup_b, s);
    }
    ConsistencyReport rep = consistency_sum(1.0, 0.5, a, k, 4.0, {1.0});
    REQUIRE(rep.levels.size() == 1);
    CHECK(rep.levels[0].sup_a == doctest::Approx(sup_a).epsilon(1e-12));
    CHECK(rep.levels[0].sup_b == doctest::Approx(sup_b).epsilon(1e-12));
    CHECK(rep.levels[0].count_a == A.size());
    CHECK(rep.levels[0].count_b == B.size());
}

TEST_CASE("consistency of a system with itself") {
    ConsistencyReport rep = consistency_sum(1.0, 1.0, 0.5, 3.0, 8.0, {1.0, 2.0});
    for (const auto& l : rep.levels) {
        CHECK(l.count_a == l.count_b);
        // the directional term uses the first point's orientation, so the two sups differ slightly
        CHECK(std::fabs(l.sup_a - l.sup_b) <= 0.02 * l.sup_a);
        CHECK(l.sup_a >= 1.0);
    }
    CHECK(std::fabs(rep.final_growth) < 0.1);
    CHECK_THROWS_AS(consistency_sum(1.0, 1.0, 0.5, 3.0, 8.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(consistency_sum(1.0, 1.0, 0.5, -1.0, 8.0, {1.0}), std::invalid_argument);
}
