#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace billiard;
using fixtures::pt;
using fixtures::ptf;

TEST_CASE("disk-polygon area: analytic cases") {
    auto p = fixtures::unit_square<Rat>();
    // fully inside
    CHECK(disk_polygon_area(p, ptf<Rat>(1, 2, 1, 2), 0.25) ==
          doctest::Approx(M_PI * 0.0625).epsilon(1e-12));
    // centered at a corner: a quarter disk
    CHECK(disk_polygon_area(p, pt<Rat>(0, 0), 0.5) ==
          doctest::Approx(M_PI * 0.25 / 4).epsilon(1e-12));
    // centered on an edge: a half disk
    CHECK(disk_polygon_area(p, ptf<Rat>(1, 2, 0, 1), 0.25) ==
          doctest::Approx(M_PI * 0.0625 / 2).epsilon(1e-12));
    // disk swallowing the polygon
    CHECK(disk_polygon_area(p, ptf<Rat>(1, 2, 1, 2), 10.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(disk_polygon_area(p, pt<Rat>(0, 0), 0.0), GeometryError);
}

TEST_CASE("disk-polygon area matches a Monte Carlo oracle") {
    auto p = fixtures::right_triangle<double>();
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int inst = 0; inst < 5; ++inst) {
        Point<double> c{u01(rng) * 1.4 - 0.2, u01(rng) * 1.4 - 0.2};
        double r = 0.1 + 0.4 * u01(rng);
        double analytic = disk_polygon_area(p, c, r);
        const int n = 200000;
        int in = 0;
        for (int i = 0; i < n; ++i) {
            double ang = 2 * M_PI * u01(rng);
            double rad = r * std::sqrt(u01(rng));
            Point<double> q{c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)};
            if (p.contains(q)) ++in;
        }
        double mc = M_PI * r * r * static_cast<double>(in) / n;
        double sigma = M_PI * r * r * 0.5 / std::sqrt(static_cast<double>(n));
        CHECK(std::fabs(analytic - mc) < 4 * sigma + 1e-6);
    }
}

TEST_CASE("basis enumeration on the unit square") {
    auto p = fixtures::unit_square<Rat>();
    auto b06 = enumerate_basis(p, 0.6);
    CHECK(b06.size() == 4);  // the four corner disks of diameter 1
    for (const auto& r : b06) {
        CHECK(r.diameter == Fraction(1, 1));
        CHECK(r.area_fraction == doctest::Approx(M_PI / 16).epsilon(1e-12));
    }
    CHECK(enumerate_basis(p, 0.45).size() == 9);  // half-integer centers join
    CHECK_THROWS_AS(enumerate_basis(p, 0.0), GeometryError);
    CHECK_THROWS_AS(enumerate_basis(p, 1.0), GeometryError);

    // every region is nonempty and has a fully reduced center
    for (const auto& r : enumerate_basis(p, 0.3)) {
        CHECK(r.area > 0);
        CHECK(std::gcd(std::abs(r.cx.num), r.cx.den) == 1);
        CHECK(r.diameter.value() > 0.3);
    }
}

TEST_CASE("chord length inside a disk") {
    // horizontal line through the center of a unit disk
    CHECK(chord_disk_length(-2, 0, 2, 0, 0, 0, 1) == doctest::Approx(2.0));
    // miss
    CHECK(chord_disk_length(-2, 5, 2, 5, 0, 0, 1) == 0.0);
    // segment ends inside the disk
    CHECK(chord_disk_length(0, 0, 3, 0, 0, 0, 1) == doctest::Approx(1.0));
    // tangent
    CHECK(chord_disk_length(-2, 1, 2, 1, 0, 0, 1) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("vertical bouncer discrepancy equals pi/16 at epsilon 0.6") {
    auto p = fixtures::unit_square<Rat>();
    auto o = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 2, 1, 2), Dir<Rat>{Rat(0), Rat(1)}, {}}, 10);
    REQUIRE(o.periodic);
    auto rep = discrepancy(p, o, 0.6);
    CHECK(rep.per_region.size() == 4);
    CHECK(rep.sup_discrepancy == doctest::Approx(M_PI / 16).epsilon(1e-9));
    CHECK(rep.well_distributed);  // pi/16 < 0.6
    for (const auto& st : rep.per_region) {
        CHECK(st.length_fraction == doctest::Approx(0.0));  // x=1/2 is tangent to all disks
        CHECK(st.area_fraction == doctest::Approx(M_PI / 16));
    }
}

TEST_CASE("discrepancy windows a periodic orbit to one period") {
    auto p = fixtures::unit_square<Rat>();
    auto o = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 4, 0, 1), Dir<Rat>{Rat(1), Rat(1)}, {}}, 50);
    REQUIRE(o.periodic);
    auto rep = discrepancy(p, o, 0.45);
    CHECK(rep.per_region.size() == 9);
    CHECK(rep.sup_discrepancy < 1.0);
    // the same report from a longer trace is identical (period window)
    auto o2 = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 4, 0, 1), Dir<Rat>{Rat(1), Rat(1)}, {}}, 9,
                    nullptr, false);
    o2.periodic = o.periodic;
    o2.start_on_boundary = o.start_on_boundary;
    auto rep2 = discrepancy(p, o2, 0.45);
    CHECK(rep2.sup_discrepancy == doctest::Approx(rep.sup_discrepancy));
}

TEST_CASE("density of the bouncer line") {
    auto p = fixtures::unit_square<Rat>();
    auto o = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 2, 1, 2), Dir<Rat>{Rat(1), Rat(0)}, {}}, 10);
    auto far = epsilon_dense(p, o, 0.3);
    CHECK_FALSE(far.dense);
    REQUIRE(far.uncovered_witness);
    // the witness really is 0.3 away from the whole orbit, verified exactly
    Rat e2(9, 100);
    for (const auto& l : o.links)
        CHECK(point_segment_dist2(*far.uncovered_witness, l) > e2);

    auto near = epsilon_dense(p, o, 0.51);
    CHECK(near.dense);  // every table point is within 1/2 of the line y = 1/2
    CHECK_FALSE(near.uncovered_witness);
    CHECK_THROWS_AS(epsilon_dense(p, o, 0.0), GeometryError);
}

TEST_CASE("surface-mode density splits links by floor") {
    auto p = fixtures::unit_square<Rat>();
    auto o = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 2, 1, 2), Dir<Rat>{Rat(1), Rat(0)}, {}}, 10);
    auto rep = epsilon_dense(p, o, 0.3, true);
    CHECK_FALSE(rep.dense);
    REQUIRE(rep.witness_floor);
    auto full = epsilon_dense(p, o, 0.51, true);
    // both floors share the same geometric segment, so coverage matches
    CHECK(full.dense);
}

TEST_CASE("A-set scan covers the square near theta = 1") {
    auto p = fixtures::unit_square<Rat>();
    auto rep = scan_A_set(p, 1.0, 0.05, 0.3, 10, 200000);
    CHECK(rep.grid == 10);
    CHECK(rep.points.size() == 100);
    CHECK(!rep.strips.empty());
    CHECK(rep.coverage_fraction == doctest::Approx(1.0));
    CHECK_FALSE(rep.search_stats.budget_exhausted);
}

TEST_CASE("c_epsilon candidates for the square") {
    auto p = fixtures::unit_square<Rat>();
    auto cands = c_epsilon_candidates(p, 0.3, 1);
    CHECK(cands.size() == 2);  // both main-diagonal directions carry witnesses
    for (const auto& c : cands) {
        CHECK((c.direction == Dir<Rat>{Rat(1), Rat(1)} || c.direction == Dir<Rat>{Rat(-1), Rat(1)}));
        REQUIRE(c.witness.periodic);
        // certificate: the witness point is exactly 0.3-far from the orbit
        Rat e2(9, 100);
        for (const auto& l : c.witness.links)
            CHECK(point_segment_dist2(c.witness_point, l) > e2);
    }
}

TEST_CASE("orbit_region_length accumulates per-link chords") {
    auto p = fixtures::unit_square<Rat>();
    auto basis = enumerate_basis(p, 0.45);
    const BasisRegion<Rat>* center = nullptr;
    for (const auto& r : basis)
        if (r.cx == Fraction(1, 2) && r.cy == Fraction(1, 2)) center = &r;
    REQUIRE(center);
    auto o = trace(p, PhasePoint<Rat>{ptf<Rat>(1, 2, 1, 2), Dir<Rat>{Rat(1), Rat(0)}, {}}, 2,
                   nullptr, false);
    // half-radius from the center start plus a full diameter on the way back
    CHECK(orbit_region_length(o, *center) == doctest::Approx(0.75));
}
