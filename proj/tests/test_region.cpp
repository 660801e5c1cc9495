#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "regen/codes.hpp"
#include "regen/region.hpp"

using namespace regen;

namespace {
Point2 pt(long xn, long xd, long yn, long yd) {
    return {make_rat(xn, xd), make_rat(yn, yd)};
}
}  // namespace

TEST_CASE("cutset region membership") {
    auto r = cutset_region();
    REQUIRE(r.halfspaces.size() == 4);
    CHECK(contains(r, pt(1, 3, 1, 3)));
    CHECK(contains(r, pt(2, 5, 1, 5)));
    CHECK(!contains(r, pt(1, 4, 1, 4)));
}

TEST_CASE("exact region membership") {
    auto r = exact_region();
    REQUIRE(r.halfspaces.size() == 4);
    Point2 interior = pt(3, 8, 1, 4);
    CHECK(contains(r, interior));
    // Tight on 2a+b >= 1 and 4a+6b >= 3.
    CHECK(r.halfspaces[1].a * interior.x + r.halfspaces[1].b * interior.y == r.halfspaces[1].c);
    CHECK(r.halfspaces[2].a * interior.x + r.halfspaces[2].b * interior.y == r.halfspaces[2].c);
    CHECK(!contains(r, pt(2, 5, 1, 5)));
    CHECK(contains(r, pt(1, 2, 1, 6)));
}

TEST_CASE("cutset bound values") {
    CHECK(cutset_bound_value(pt(1, 3, 1, 3)) == make_rat(1));
    CHECK(cutset_bound_value(pt(1, 2, 1, 6)) == make_rat(1));
    CHECK(cutset_bound_value(pt(1, 1, 1, 1)) == make_rat(3));
    CHECK_THROWS_AS(cutset_bound_value(pt(-1, 1, 0, 1)), std::invalid_argument);
}

TEST_CASE("cutset bound agrees with the four linear constraints") {
    // Dense rational grid over [0,2]^2, step 1/20.
    auto r = cutset_region();
    for (long i = 0; i <= 40; ++i) {
        for (long j = 0; j <= 40; ++j) {
            Point2 p = pt(i, 20, j, 20);
            CHECK((cutset_bound_value(p) >= 1) == contains(r, p));
        }
    }
}

TEST_CASE("vertex enumeration") {
    auto exact = vertices(exact_region());
    REQUIRE(exact.size() == 3);
    CHECK(exact[0] == pt(1, 3, 1, 3));
    CHECK(exact[1] == pt(3, 8, 1, 4));
    CHECK(exact[2] == pt(1, 2, 1, 6));

    auto cutset = vertices(cutset_region());
    REQUIRE(cutset.size() == 3);
    CHECK(cutset[0] == pt(1, 3, 1, 3));
    CHECK(cutset[1] == pt(2, 5, 1, 5));
    CHECK(cutset[2] == pt(1, 2, 1, 6));

    Region2D single{{{make_rat(1), make_rat(0), make_rat(1)}}};
    CHECK_THROWS_AS(vertices(single), std::invalid_argument);
    Region2D parallel{{{make_rat(1), make_rat(0), make_rat(1)},
                       {make_rat(2), make_rat(0), make_rat(1)}}};
    CHECK_THROWS_AS(vertices(parallel), std::invalid_argument);
}

TEST_CASE("exact region is contained in the cutset region") {
    auto outer = cutset_region();
    for (const auto& v : vertices(exact_region())) CHECK(contains(outer, v));
    // And not conversely.
    bool all_inside = true;
    for (const auto& v : vertices(cutset_region()))
        if (!contains(exact_region(), v)) all_inside = false;
    CHECK(!all_inside);
}

TEST_CASE("achievable code points sit on the exact boundary") {
    auto r = exact_region();
    for (CodeId code : {CodeId::MSR, CodeId::MBR, CodeId::INTERIOR}) {
        auto p = code_parameters(code);
        Point2 point{p.alpha_bar, p.beta_bar};
        CHECK(contains(r, point));
        int tight = 0;
        for (const auto& h : r.halfspaces)
            if (h.a * point.x + h.b * point.y == h.c) ++tight;
        CHECK(tight >= 1);
    }
}

TEST_CASE("gap analysis") {
    auto gap = max_gap(cutset_region(), exact_region());
    CHECK(gap.witness == pt(2, 5, 1, 5));
    CHECK(gap.raw_violation == make_rat(1, 5));
    CHECK(gap.violated == HalfSpace{make_rat(4), make_rat(6), make_rat(3)});
    CHECK(gap.gap == make_rat(1, 50));

    auto same_exact = max_gap(exact_region(), exact_region());
    CHECK(same_exact.gap == make_rat(0));
    CHECK(same_exact.raw_violation == make_rat(0));
    auto same_cutset = max_gap(cutset_region(), cutset_region());
    CHECK(same_cutset.gap == make_rat(0));
}

TEST_CASE("csv export and round trip") {
    auto exact = exact_region();
    auto hs_csv = export_region(exact, "halfspaces");
    CHECK(hs_csv ==
          "a,b,c\n"
          "3/1,0/1,1/1\n"
          "2/1,1/1,1/1\n"
          "4/1,6/1,3/1\n"
          "0/1,6/1,1/1\n");
    auto vx_csv = export_region(exact, "vertices");
    CHECK(vx_csv ==
          "alpha_bar,beta_bar\n"
          "1/3,1/3\n"
          "3/8,1/4\n"
          "1/2,1/6\n");

    CHECK(parse_halfspaces_csv(hs_csv) == exact);
    CHECK(parse_vertices_csv(vx_csv) == vertices(exact));
    auto cutset = cutset_region();
    CHECK(parse_halfspaces_csv(export_halfspaces_csv(cutset)) == cutset);

    CHECK_THROWS_AS(export_region(exact, "wat"), std::invalid_argument);
    CHECK_THROWS_AS(export_halfspaces_csv(Region2D{}), std::invalid_argument);
    CHECK_THROWS_AS(parse_halfspaces_csv("nope\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_halfspaces_csv("a,b,c\n1/1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_halfspaces_csv("a,b,c\n0/1,0/1,1/1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_halfspaces_csv("a,b,c\n"), std::invalid_argument);
}

TEST_CASE("rational wire format") {
    CHECK(format_rat(make_rat(6, -4)) == "-3/2");
    CHECK(parse_rat("14/21") == make_rat(2, 3));
    CHECK(parse_rat("5") == make_rat(5));
    CHECK(format_rat(parse_rat("-0")) == "0/1");
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
}
