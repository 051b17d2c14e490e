#include <doctest.h>

#include <random>

#include "fixtures.hpp"

using namespace billiard;
using fixtures::pt;
using fixtures::ptf;

TEST_CASE("build rejects degenerate input") {
    CHECK_THROWS_AS(Polygon<Rat>::build({pt<Rat>(0, 0), pt<Rat>(1, 0)}), GeometryError);
    CHECK_THROWS_AS(Polygon<Rat>::build({pt<Rat>(0, 0), pt<Rat>(1, 0), pt<Rat>(1, 0)}),
                    GeometryError);
    CHECK_THROWS_AS(Polygon<Rat>::build({pt<Rat>(0, 0), pt<Rat>(1, 1), pt<Rat>(2, 2)}),
                    GeometryError);
    // bowtie
    CHECK_THROWS_AS(
        Polygon<Rat>::build({pt<Rat>(0, 0), pt<Rat>(1, 1), pt<Rat>(1, 0), pt<Rat>(0, 1)}),
        GeometryError);
}

TEST_CASE("clockwise input is normalized to ccw") {
    auto p = Polygon<Rat>::build({pt<Rat>(0, 0), pt<Rat>(0, 1), pt<Rat>(1, 1), pt<Rat>(1, 0)});
    CHECK(p.area() == Rat(1));
    // ccw orientation: every side's inward normal points into the polygon
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto mid = p.side(i).midpoint();
        auto n = rot90ccw(p.side(i).delta());
        Point<Rat> probe{mid.x + n.x / Rat(100), mid.y + n.y / Rat(100)};
        CHECK(p.contains(probe));
    }
}

TEST_CASE("unit square metrics and certification") {
    auto p = fixtures::unit_square<Rat>();
    CHECK(p.size() == 4);
    CHECK(p.area() == Rat(1));
    CHECK(p.diameter() == doctest::Approx(std::sqrt(2.0)));
    auto [lo, hi] = p.bounding_box();
    CHECK(lo == pt<Rat>(0, 0));
    CHECK(hi == pt<Rat>(1, 1));
    CHECK(p.is_convex());
    REQUIRE(p.is_rational());
    for (const auto& f : *p.angle_fractions()) CHECK(f == Fraction(1, 2));
    CHECK(p.side(0).a == p.vertex(0));
    CHECK(p.side_ending_at(0) == 3);
    CHECK(p.side_starting_at(2) == 2);
}

TEST_CASE("right isoceles triangle angles") {
    auto p = fixtures::right_triangle<Rat>();
    REQUIRE(p.is_rational());
    auto fr = *p.angle_fractions();
    CHECK(fr[0] == Fraction(1, 2));
    CHECK(fr[1] == Fraction(1, 4));
    CHECK(fr[2] == Fraction(1, 4));
    CHECK(p.area() == Rat(1, 2));
}

TEST_CASE("L-shape is non-convex with a 3/2 pi reflex angle") {
    auto p = lshape_polygon<Rat>();
    CHECK_FALSE(p.is_convex());
    REQUIRE(p.is_rational());
    auto fr = *p.angle_fractions();
    int reflex = 0;
    for (const auto& f : fr)
        if (f == Fraction(3, 2)) ++reflex;
    CHECK(reflex == 1);
    CHECK(p.area() == Rat(3));
}

TEST_CASE("containment, boundary, vertex queries") {
    auto p = fixtures::unit_square<Rat>();
    CHECK(p.contains(ptf<Rat>(1, 2, 1, 2)));
    CHECK(p.contains(pt<Rat>(0, 0)));  // closed containment
    CHECK_FALSE(p.contains(pt<Rat>(2, 0)));
    CHECK(p.on_boundary(ptf<Rat>(1, 2, 0, 1)));
    CHECK_FALSE(p.on_boundary(ptf<Rat>(1, 2, 1, 2)));
    CHECK(p.vertex_at(pt<Rat>(1, 1)) == 2);
    CHECK_FALSE(p.vertex_at(ptf<Rat>(1, 2, 0, 1)));

    auto l = lshape_polygon<Rat>();
    CHECK(l.contains(ptf<Rat>(1, 2, 3, 2)));
    CHECK_FALSE(l.contains(ptf<Rat>(3, 2, 3, 2)));  // notch
}

TEST_CASE("float-backend certification rejects an irrational triangle") {
    auto p = Polygon<double>::build({{0.0, 0.0}, {1.0, 0.0}, {0.8, 0.9}}, 200);
    CHECK_FALSE(p.is_rational());
    // while a rational shape certifies in the float backend too
    auto sq = fixtures::unit_square<double>();
    CHECK(sq.is_rational());
}

TEST_CASE("best_rational") {
    CHECK(best_rational(0.25, 10) == Fraction(1, 4));
    CHECK(best_rational(1.0 / 3.0, 10) == Fraction(1, 3));
    CHECK(best_rational(0.5, 200) == Fraction(1, 2));
    CHECK(best_rational(1.5, 2) == Fraction(3, 2));
}

TEST_CASE("floor groups of the fixtures") {
    auto sq = fixtures::unit_square<Rat>();
    CHECK(floor_group_order_bound(*sq.angle_fractions()) == 2);
    CHECK(floor_group(sq).size() == 4);  // {id, x-flip, y-flip, point reflection}

    auto tri = fixtures::right_triangle<Rat>();
    CHECK(floor_group_order_bound(*tri.angle_fractions()) == 4);
    CHECK(floor_group(tri).size() == 8);  // dihedral of the square

    // the group is closed and consists of orthogonal linear maps
    for (const auto& g : floor_group(tri)) {
        CHECK(g.t == Vec2<Rat>{Rat(0), Rat(0)});
        CHECK((g.det() == Rat(1) || g.det() == Rat(-1)));
    }
}

TEST_CASE("floor group rejects uncertified polygons") {
    auto p = Polygon<double>::build({{0.0, 0.0}, {1.0, 0.0}, {0.8, 0.9}}, 200);
    CHECK_THROWS_AS(floor_group(p), GeometryError);
    CHECK_THROWS_AS(direction_floors(p, Dir<double>{1.0, 0.0}), GeometryError);
}

TEST_CASE("direction floor closures") {
    auto sq = fixtures::unit_square<Rat>();
    auto f1 = direction_floors(sq, Dir<Rat>{Rat(1), Rat(0)});
    CHECK(f1.floor_count() == 2);  // {(1,0), (-1,0)}
    auto f2 = direction_floors(sq, Dir<Rat>{Rat(1), Rat(2)});
    CHECK(f2.floor_count() == 4);
    // index_of resolves every member and rejects strangers
    for (std::size_t i = 0; i < f2.floor_count(); ++i)
        CHECK(f2.index_of(f2.directions[i]) == i);
    CHECK_FALSE(f2.index_of(Dir<Rat>{Rat(1), Rat(3)}).has_value());

    // closure property: reflecting any floor across any side lands in the set
    std::mt19937 rng(31);
    for (int it = 0; it < 50; ++it) {
        auto d0 = fixtures::random_direction<Rat>(rng);
        auto fl = direction_floors(sq, d0);
        for (const auto& d : fl.directions)
            for (std::size_t s = 0; s < sq.size(); ++s)
                CHECK(fl.index_of(reflect_direction(d, sq.side(s))).has_value());
    }
}
