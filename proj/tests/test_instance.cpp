#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "tep/instance.hpp"

using namespace tep;
using tep::testing::fixture;

TEST_CASE("all fixtures parse and round-trip through serialization") {
    for (const char* name : {"fig1_toy", "fig1_variant", "fig2_toy", "garver6"}) {
        const TepInstance a = fixture(name);
        const TepInstance b = parse_instance(serialize_instance(a));
        REQUIRE(a.num_buses() == b.num_buses());
        REQUIRE(a.num_corridors() == b.num_corridors());
        CHECK(a.sigma == b.sigma);
        CHECK(a.default_angle_limit == b.default_angle_limit);
        for (int i = 0; i < a.num_buses(); ++i) {
            CHECK(a.buses[i].demand == b.buses[i].demand);
            CHECK(a.buses[i].gen_capacity == b.buses[i].gen_capacity);
            CHECK(a.buses[i].gen_cost == b.buses[i].gen_cost);
        }
        for (int c = 0; c < a.num_corridors(); ++c) {
            CHECK(a.corridors[c].from_bus == b.corridors[c].from_bus);
            CHECK(a.corridors[c].to_bus == b.corridors[c].to_bus);
            CHECK(a.corridors[c].angle_limit == b.corridors[c].angle_limit);
            REQUIRE(a.corridors[c].existing.size() == b.corridors[c].existing.size());
            REQUIRE(a.corridors[c].candidates.size() == b.corridors[c].candidates.size());
            for (size_t k = 0; k < a.corridors[c].candidates.size(); ++k) {
                CHECK(a.corridors[c].candidates[k].reactance ==
                      b.corridors[c].candidates[k].reactance);
                CHECK(a.corridors[c].candidates[k].build_cost ==
                      b.corridors[c].candidates[k].build_cost);
            }
        }
        // serialization itself is deterministic
        CHECK(serialize_instance(a) == serialize_instance(b));
    }
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK_THROWS_AS(parse_instance("not json"), ParseError);
    CHECK_THROWS_AS(parse_instance("{}"), ParseError); // missing header field
    CHECK_THROWS_AS(parse_instance(R"({"default_angle_limit": 0.4})"), ParseError);
    CHECK_THROWS_AS(
        parse_instance(
            R"({"default_angle_limit": 0.4, "buses": [{"id": "zero"}], "corridors": []})"),
        ParseError);
    CHECK_THROWS_AS(
        parse_instance(
            R"({"default_angle_limit": 0.4,
                "buses": [{"id": 0, "demand": 0.0, "gen_capacity": 1.0}], "corridors": []})"),
        ParseError); // gen_cost missing
}

TEST_CASE("validation collects every violation into one error") {
    const std::string doc = R"({
      "default_angle_limit": 0.4,
      "buses": [
        {"id": 0, "demand": 2.0, "gen_capacity": 1.0, "gen_cost": 1.0},
        {"id": 2, "demand": 0.0, "gen_capacity": 0.0, "gen_cost": 0.0}
      ],
      "corridors": [
        {"from": 1, "to": 0, "existing": [{"x": -0.1, "capacity": 0.0}], "candidates": []}
      ]
    })";
    try {
        parse_instance(doc);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("reactance must be > 0") != std::string::npos);
        CHECK(msg.find("capacity must be > 0") != std::string::npos);
        CHECK(msg.find("'from' must be < 'to'") != std::string::npos);
        CHECK(msg.find("unique and dense") != std::string::npos);
        CHECK(msg.find("below total demand") != std::string::npos);
    }
}

TEST_CASE("duplicate corridors are rejected") {
    const std::string doc = R"({
      "default_angle_limit": 0.4,
      "buses": [
        {"id": 0, "demand": 0.0, "gen_capacity": 1.0, "gen_cost": 1.0},
        {"id": 1, "demand": 0.5, "gen_capacity": 0.0, "gen_cost": 0.0}
      ],
      "corridors": [
        {"from": 0, "to": 1, "existing": [{"x": 0.1, "capacity": 1.0}], "candidates": []},
        {"from": 0, "to": 1, "existing": [{"x": 0.2, "capacity": 1.0}], "candidates": []}
      ]
    })";
    CHECK_THROWS_AS(parse_instance(doc), ValidationError);
}

TEST_CASE("susceptance derives as -1/x and mismatching explicit b is rejected") {
    const std::string ok = R"({
      "default_angle_limit": 0.4,
      "buses": [
        {"id": 0, "demand": 0.0, "gen_capacity": 1.0, "gen_cost": 1.0},
        {"id": 1, "demand": 0.5, "gen_capacity": 0.0, "gen_cost": 0.0}
      ],
      "corridors": [
        {"from": 0, "to": 1,
         "existing": [{"x": 0.1, "capacity": 1.0}, {"x": 0.2, "capacity": 1.0, "b": -5.0}],
         "candidates": []}
      ]
    })";
    const TepInstance inst = parse_instance(ok);
    CHECK(inst.corridors[0].existing[0].susceptance == doctest::Approx(-10.0));
    CHECK(inst.corridors[0].existing[1].susceptance == doctest::Approx(-5.0));

    std::string bad = ok;
    bad.replace(bad.find("-5.0"), 4, "-4.0");
    CHECK_THROWS_AS(parse_instance(bad), ValidationError);
}

TEST_CASE("corridor_between is order-insensitive") {
    const TepInstance inst = fixture("fig1_variant");
    CHECK(inst.corridor_between(0, 1) == 0);
    CHECK(inst.corridor_between(1, 0) == 0);
    CHECK(inst.corridor_between(1, 2) == 2);
    CHECK(inst.corridor_between(0, 3) == -1);
}

TEST_CASE("established subgraph keeps only corridors with existing lines") {
    const TepInstance inst = fixture("fig2_toy");
    const EstablishedGraph g = established_subgraph(inst);
    CHECK(g.edges.size() == 7); // (1,5) and (2,3) are expansion corridors
    for (const auto& e : g.edges) {
        CHECK(inst.corridors[e.corridor].established());
        CHECK(e.weight == doctest::Approx(0.1)); // all existing lines x=0.1, cap=1
    }
}

TEST_CASE("established edge weight is the minimum x*capacity over existing lines") {
    const std::string doc = R"({
      "default_angle_limit": 0.4,
      "buses": [
        {"id": 0, "demand": 0.0, "gen_capacity": 1.0, "gen_cost": 1.0},
        {"id": 1, "demand": 0.5, "gen_capacity": 0.0, "gen_cost": 0.0}
      ],
      "corridors": [
        {"from": 0, "to": 1,
         "existing": [{"x": 0.3, "capacity": 1.0}, {"x": 0.1, "capacity": 2.0}],
         "candidates": []}
      ]
    })";
    const EstablishedGraph g = established_subgraph(parse_instance(doc));
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].weight == doctest::Approx(0.2)); // min(0.3, 0.2)
}

TEST_CASE("shortest distances on fig1_variant") {
    const TepInstance inst = fixture("fig1_variant");
    const EstablishedGraph g = established_subgraph(inst);
    const auto from0 = shortest_distances(g, 0);
    CHECK(from0[1] == doctest::Approx(0.1));
    CHECK(from0[2] == doctest::Approx(0.3));
    const auto from1 = shortest_distances(g, 1);
    CHECK(from1[2] == doctest::Approx(0.4)); // via bus 0; (1,2) is expansion-only
}

TEST_CASE("garver6 bus 5 is disconnected in the established subgraph") {
    const TepInstance inst = fixture("garver6");
    const auto dist = shortest_distances(established_subgraph(inst), 5);
    for (int b = 0; b < 5; ++b) CHECK(std::isinf(dist[b]));
    CHECK(dist[5] == 0.0);
}

TEST_CASE("load_instance raises on a missing file") {
    CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), UsageError);
}
