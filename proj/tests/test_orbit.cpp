#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "kleinorbit/orbit.hpp"

using namespace kleinorbit;
using Catch::Matchers::WithinAbs;

namespace {

GeneratorSet unit_inversion_set() {
    GeneratorSet g;
    g.generators = {inversion_in(GenCircle::unit())};
    g.labels = {"u"};
    return g;
}

}  // namespace

TEST_CASE("orbit of a line under one inversion") {
    GeneratorSet gens = unit_inversion_set();
    GenCircle seed = GenCircle::line(Complex(1.0, 0.0), -2.0);  // Re z = 1
    REQUIRE_THAT(seed.eval(Complex(1.0, 5.0)), WithinAbs(0.0, 1e-12));

    OrbitSet orbit = enumerate_orbit(gens, seed);
    REQUIRE(orbit.items.size() == 2);
    CHECK(orbit.stats.perDepth[0] == 1);
    CHECK(orbit.stats.perDepth[1] == 1);
    CHECK_FALSE(orbit.truncated);

    // The image of Re z = 1 under z -> 1/conj(z) is the circle |z - 1/2| = 1/2.
    GenCircle expected = GenCircle::from_center_radius(Complex(0.5, 0.0), 0.5);
    const OrbitItem& image = orbit.items[1];
    CHECK(image.depth == 1);
    CHECK(image.firstWord == "u");
    CHECK(coefficient_distance(image.circle, expected) < 1e-12);

    ClosureReport rep = closure_check(gens, orbit, 200);
    CHECK(rep.samples == 200);
    CHECK(rep.misses == 0);
    CHECK(rep.prunedMisses == 0);
}

TEST_CASE("orbit under the identity alone has a single item") {
    GeneratorSet gens;
    gens.generators = {MoebiusMap::identity()};
    gens.labels = {"e"};
    OrbitSet orbit = enumerate_orbit(gens, GenCircle::unit());
    CHECK(orbit.items.size() == 1);
    CHECK(orbit.stats.dedupHits >= 1);
}

TEST_CASE("generator set and configuration validation") {
    GeneratorSet empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

    GeneratorSet bad;
    bad.generators = {MoebiusMap::from_matrix(Complex(2.0, 0.0), Complex(0.0, 0.0),
                                              Complex(0.0, 0.0), Complex(1.0, 0.0), true)};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    GeneratorSet ok = unit_inversion_set();
    OrbitConfig cfg;
    cfg.maxDepth = 0;
    CHECK_THROWS_AS(enumerate_orbit(ok, GenCircle::unit(), cfg), std::invalid_argument);
    cfg = OrbitConfig{};
    cfg.dedupEpsilon = 0.0;
    CHECK_THROWS_AS(enumerate_orbit(ok, GenCircle::unit(), cfg), std::invalid_argument);
    cfg = OrbitConfig{};
    cfg.minDiameter = 2.0;
    CHECK_THROWS_AS(enumerate_orbit(ok, GenCircle::unit(), cfg), std::invalid_argument);
}

TEST_CASE("mirror recovery inverts inversion_in") {
    std::mt19937_64 rng(20240517);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> rad(0.05, 4.0);
    for (int i = 0; i < 1000; ++i) {
        GenCircle c = GenCircle::from_center_radius(Complex(coord(rng), coord(rng)), rad(rng));
        GenCircle back = recover_mirror(inversion_in(c));
        CHECK(coefficient_distance(back, c) < 1e-10);
    }
    // Lines are mirrors too.
    GenCircle axis = GenCircle::real_axis();
    CHECK(coefficient_distance(recover_mirror(inversion_in(axis)), axis) < 1e-12);

    // The antipodal map is an anti-involution but fixes no circle.
    MoebiusMap antipodal = MoebiusMap::from_matrix(
        Complex(0.0, 0.0), Complex(-1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0), true);
    CHECK_THROWS_AS(recover_mirror(antipodal), std::invalid_argument);
    CHECK_THROWS_AS(recover_mirror(MoebiusMap::scaling(2.0)), std::invalid_argument);
}

TEST_CASE("quadrilateral orbit grows and accumulates on the limit circle") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    GeneratorSet gens = quad_generators(d);
    GenCircle exotic = exotic_circle(d);
    GenCircle limit = limit_circle(d);

    OrbitConfig cfg;
    cfg.maxDepth = 8;
    OrbitSet orbit = enumerate_orbit(gens, exotic, cfg);
    REQUIRE_FALSE(orbit.truncated);

    for (int k = 0; k + 1 <= cfg.maxDepth; ++k) {
        CHECK(orbit.stats.perDepth[k + 1] > orbit.stats.perDepth[k]);
    }

    std::vector<double> minDist(cfg.maxDepth + 1, 1e300);
    for (const OrbitItem& item : orbit.items) {
        minDist[item.depth] = std::min(minDist[item.depth], circle_distance(item.circle, limit));
    }
    for (int k = 1; k <= cfg.maxDepth; ++k) {
        CHECK(minDist[k] < minDist[k - 1]);
    }
}

TEST_CASE("orbit enumeration is independent of the worker count") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    GeneratorSet gens = quad_generators(d);
    OrbitConfig cfg;
    cfg.maxDepth = 6;
    OrbitSet one = enumerate_orbit(gens, exotic_circle(d), cfg, 1);
    OrbitSet four = enumerate_orbit(gens, exotic_circle(d), cfg, 4);
    OrbitSet seven = enumerate_orbit(gens, exotic_circle(d), cfg, 7);

    REQUIRE(one.items.size() == four.items.size());
    REQUIRE(one.items.size() == seven.items.size());
    for (std::size_t i = 0; i < one.items.size(); ++i) {
        CHECK(one.items[i].circle.coeffs() == four.items[i].circle.coeffs());
        CHECK(one.items[i].depth == four.items[i].depth);
        CHECK(one.items[i].firstWord == four.items[i].firstWord);
        CHECK(one.items[i].circle.coeffs() == seven.items[i].circle.coeffs());
        CHECK(one.items[i].firstWord == seven.items[i].firstWord);
    }
    CHECK(one.stats.pruned == four.stats.pruned);
    CHECK(one.stats.dedupHits == four.stats.dedupHits);
}

TEST_CASE("closure certification on a quadrilateral orbit") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    GeneratorSet gens = quad_generators(d);
    OrbitConfig cfg;
    cfg.maxDepth = 7;
    OrbitSet orbit = enumerate_orbit(gens, exotic_circle(d), cfg);
    REQUIRE_FALSE(orbit.truncated);

    ClosureReport rep = closure_check(gens, orbit, 1000);
    CHECK(rep.samples == 1000);
    CHECK(rep.misses == 0);

    OrbitConfig tiny = cfg;
    tiny.maxItems = 10;
    OrbitSet cut = enumerate_orbit(gens, exotic_circle(d), tiny);
    REQUIRE(cut.truncated);
    CHECK_THROWS_AS(closure_check(gens, cut, 10), std::domain_error);
}

TEST_CASE("retained orbit items are pairwise separated") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    GeneratorSet gens = quad_generators(d);
    OrbitConfig cfg;
    cfg.maxDepth = 4;
    OrbitSet orbit = enumerate_orbit(gens, exotic_circle(d), cfg);
    for (std::size_t i = 0; i < orbit.items.size(); ++i) {
        for (std::size_t j = i + 1; j < orbit.items.size(); ++j) {
            CHECK(coefficient_distance(orbit.items[i].circle, orbit.items[j].circle) >
                  cfg.dedupEpsilon / 2.0);
        }
    }
}

TEST_CASE("each deeper item is the image of a shallower one") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    GeneratorSet gens = quad_generators(d);
    OrbitConfig cfg;
    cfg.maxDepth = 4;
    OrbitSet orbit = enumerate_orbit(gens, exotic_circle(d), cfg);

    for (const OrbitItem& item : orbit.items) {
        if (item.depth == 0) continue;
        bool found = false;
        // Side inversions are involutions, so applying any generator to the
        // item and matching at lower depth also certifies the forward image.
        for (const MoebiusMap& g : gens.generators) {
            GenCircle pre = apply_circle(g, item.circle);
            for (const OrbitItem& other : orbit.items) {
                if (other.depth >= item.depth) continue;
                if (coefficient_distance(other.circle, pre) <= cfg.dedupEpsilon) {
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        CHECK(found);
    }
}

TEST_CASE("limit clouds flatten exactly when the datum is Fuchsian") {
    OrbitConfig cfg;
    cfg.maxDepth = 12;

    QuadGroupData fuchs = solve_quadrilateral(3, 2.0, 2.0);
    REQUIRE(is_fuchsian(fuchs));
    LimitCloud round = approximate_limit_set(quad_generators(fuchs), cfg);
    REQUIRE_FALSE(round.degenerate);
    REQUIRE_FALSE(round.truncated);
    REQUIRE(round.points.size() > 100);
    CircleFit fit = fit_sphere_circle(round.points);
    CHECK(fit.max_deviation < 1e-3);

    GenCircle expected = GenCircle::from_center_radius(Complex(0.0, 0.0), 1.0 / std::sqrt(3.0));
    SpherePoint en = expected.sphere_normal();
    double dot = fit.normal.x * en.x + fit.normal.y * en.y + fit.normal.z * en.z;
    CHECK_THAT(std::abs(dot), WithinAbs(1.0, 1e-6));
    CHECK_THAT(std::abs(fit.offset), WithinAbs(std::abs(expected.sphere_offset()), 1e-4));

    QuadGroupData bent = solve_quadrilateral(3, 2.0, 1.5);
    LimitCloud warped = approximate_limit_set(quad_generators(bent), cfg);
    REQUIRE(warped.points.size() > 1000);
    CHECK(fit_sphere_circle(warped.points).max_deviation > 1e-2);
    CHECK(max_nearest_neighbor_gap(warped.points, 0.02) < 0.02);
}

TEST_CASE("limit cloud of a mirrorless set is flagged degenerate") {
    GeneratorSet gens;
    gens.generators = {MoebiusMap::scaling(2.0)};
    gens.labels = {"s"};
    LimitCloud cloud = approximate_limit_set(gens);
    CHECK(cloud.points.empty());
    CHECK(cloud.degenerate);
}

TEST_CASE("limit cloud points are sorted deterministically") {
    QuadGroupData d = solve_quadrilateral(3, 2.0, 1.5);
    OrbitConfig cfg;
    cfg.maxDepth = 8;
    LimitCloud a = approximate_limit_set(quad_generators(d), cfg);
    LimitCloud b = approximate_limit_set(quad_generators(d), cfg);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
        CHECK(a.points[i].z == b.points[i].z);
        if (i > 0) {
            bool ordered = a.points[i - 1].x < a.points[i].x ||
                           (a.points[i - 1].x == a.points[i].x &&
                            (a.points[i - 1].y < a.points[i].y ||
                             (a.points[i - 1].y == a.points[i].y &&
                              a.points[i - 1].z <= a.points[i].z)));
            CHECK(ordered);
        }
    }
}

TEST_CASE("point-cloud helpers reject unusable input") {
    std::vector<SpherePoint> two = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    CHECK_THROWS_AS(fit_sphere_circle(two), std::invalid_argument);
    std::vector<SpherePoint> one = {{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(max_nearest_neighbor_gap(one, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(max_nearest_neighbor_gap(two, 0.0), std::invalid_argument);
}
