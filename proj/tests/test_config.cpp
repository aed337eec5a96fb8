#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmt/experiment.hpp"
#include "qmt/expr.hpp"

using namespace qmt;
using nlohmann::json;

TEST_CASE("objective expression grammar") {
    CHECK(compile_objective("x")(0.7) == 0.7);
    CHECK(compile_objective("2 * x + 1")(3.0) == 7.0);
    CHECK(compile_objective("abs(x - 0.5)")(0.25) == 0.25);
    CHECK(compile_objective("min(x, 1 - x)")(0.75) == 0.25);
    CHECK(compile_objective("max(0.2, x * x)")(0.1) == 0.2);
    CHECK(compile_objective("-x + 1")(0.4) == 0.6);
    CHECK(compile_objective("(x + 1) * (x - 1)")(2.0) == 3.0);

    CHECK_THROWS_AS(compile_objective("x +"), std::invalid_argument);
    CHECK_THROWS_AS(compile_objective("min(x)"), std::invalid_argument);
    CHECK_THROWS_AS(compile_objective("y"), std::invalid_argument);
    CHECK_THROWS_AS(compile_objective("x 1"), std::invalid_argument);
}

TEST_CASE("finite space json round trip") {
    const json j{{"points", {"a", "b"}}, {"matrix", {{0.0, 1.0}, {2.0, 0.0}}}};
    const auto space = finite_space_from_json(j);
    CHECK(space.at(1, 0) == 2.0);
    CHECK(finite_space_to_json(space) == j);
    CHECK_THROWS_AS(finite_space_from_json(json{{"points", {"a"}}}), std::invalid_argument);
}

TEST_CASE("extensional map json round trip") {
    const Universe u = Universe::finite({"a", "b"});
    const json j{{"images", {{"a", {"a", "b"}}, {"b", json::array()}}}};
    const auto map = extensional_map_from_json(j, u);
    CHECK(map.table()[0] == std::vector<std::size_t>{0, 1});
    CHECK(map.table()[1].empty());
    CHECK(extensional_map_to_json(map) == j);
    CHECK_THROWS_AS(
        extensional_map_from_json(json{{"images", {{"z", json::array()}}}}, u),
        std::invalid_argument);
}

TEST_CASE("preorder json with closure") {
    const json j{{"points", {"a", "b", "c"}},
                 {"edges", json::array({json::array({"a", "b"}), json::array({"b", "c"})})},
                 {"closure", true}};
    const auto order = preorder_from_json(j);
    CHECK(order.leq(Point::finite(0), Point::finite(2)));  // transitive closure
    CHECK(order.leq(Point::finite(1), Point::finite(1)));  // reflexive closure
    CHECK_FALSE(order.leq(Point::finite(2), Point::finite(0)));
    const auto map = level_set_map(order);
    CHECK(map.table()[2] == std::vector<std::size_t>{0, 1, 2});
    CHECK(map.table()[0] == std::vector<std::size_t>{0});
}

TEST_CASE("utility json with extended values") {
    const Universe u = Universe::finite({"a", "b", "c"});
    const auto phi = utility_from_json(
        json{{"values", {{"a", 1.5}, {"b", "inf"}, {"c", "-inf"}}}}, u);
    CHECK(phi(Point::finite(0)) == 1.5);
    CHECK(std::isinf(phi(Point::finite(1))));
    CHECK(phi(Point::finite(1)) > 0);
    CHECK(phi(Point::finite(2)) < 0);
    CHECK_THROWS_AS(
        utility_from_json(json{{"values", {{"a", "huge"}}}}, u), std::invalid_argument);
}

TEST_CASE("points parse against their universe") {
    const Universe fin = Universe::finite({"a", "b"});
    CHECK(point_from_json(json("b"), fin) == Point::finite(1));
    CHECK(point_from_json(json(1), fin) == Point::finite(1));
    CHECK_THROWS_AS(point_from_json(json("z"), fin), std::invalid_argument);

    const Universe iv = Universe::interval(0, 1);
    CHECK(point_from_json(json(0.5), iv) == Point::scalar(0.5));
}

TEST_CASE("remark46 experiment runs to the invariant point") {
    const json config{{"space", {{"builtin", "remark46"}}},
                      {"map", {{"builtin", "interval_0_x"}}},
                      {"rule", {{"kind", "near_sup"}}},
                      {"x0", 1.0},
                      {"budget", 100},
                      {"gap_tol", 1e-9}};
    const auto artifacts = run_experiment(ExperimentConfig::from_json(config));
    CHECK(artifacts.exit_code == 0);
    CHECK(artifacts.summary.at("outcome") == "invariant_point");
    CHECK(artifacts.summary.at("point").get<double>() == 0.0);

    SUBCASE("trace round-trips through jsonl") {
        const auto points = trace_points_from_jsonl(artifacts.trace_jsonl,
                                                    Universe::interval(0.0, 1.0));
        REQUIRE(points.size() == 2);
        CHECK(points[0] == Point::scalar(1.0));
        CHECK(points[1] == Point::scalar(0.0));
    }
    SUBCASE("identical configs yield bit-identical artifacts") {
        const auto again = run_experiment(ExperimentConfig::from_json(config));
        CHECK(again.trace_jsonl == artifacts.trace_jsonl);
        CHECK(again.summary.dump() == artifacts.summary.dump());
        CHECK(again.report.dump() == artifacts.report.dump());
    }
}

TEST_CASE("identity map experiment stops at the start point") {
    const json config{{"space", {{"builtin", "remark46"}}},
                      {"map", {{"builtin", "identity"}}},
                      {"x0", 0.25},
                      {"gap_tol", 1e-9}};
    const auto artifacts = run_experiment(ExperimentConfig::from_json(config));
    CHECK(artifacts.exit_code == 0);
    CHECK(artifacts.summary.at("outcome") == "invariant_point");
    CHECK(artifacts.summary.at("point").get<double>() == 0.25);
    CHECK(artifacts.summary.at("steps").get<int>() == 0);
}

TEST_CASE("descent experiment mirrors the evp demo path") {
    const json config{{"space", {{"builtin", "remark46"}}},
                      {"map", {{"descent", {{"objective", "x"}, {"lambda", 1.0}}}}},
                      {"x0", 1.0},
                      {"budget", 50},
                      {"gap_tol", 1e-9},
                      {"grid", 101}};
    const auto artifacts = run_experiment(ExperimentConfig::from_json(config));
    CHECK(artifacts.exit_code == 0);
    CHECK(artifacts.summary.at("point").get<double>() == 0.0);
}

TEST_CASE("identity map works on vector universes") {
    const json config{
        {"space",
         {{"builtin", "minkowski_gauge"},
          {"halfspaces", json::array({json{{"a", {1.0}}, {"b", 1.0}},
                                      json{{"a", {-1.0}}, {"b", 1.0}}})}}},
        {"map", {{"builtin", "identity"}}},
        {"x0", {0.5}},
        {"budget", 5},
        {"gap_tol", 1e-9}};
    const auto artifacts = run_experiment(ExperimentConfig::from_json(config));
    CHECK(artifacts.exit_code == 0);
    CHECK(artifacts.summary.at("outcome") == "invariant_point");
    CHECK_FALSE(artifacts.summary.at("exact").get<bool>());  // sampler-backed image
}

TEST_CASE("config errors name the offending field") {
    CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(json{{"map", json::object()}}),
                         doctest::Contains("space"), std::invalid_argument);
    const json bad_space{{"space", {{"builtin", "nope"}}},
                         {"map", {{"builtin", "identity"}}},
                         {"x0", 0.0}};
    CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(bad_space)),
                    std::invalid_argument);
    const json bad_file{{"space", {{"finite", "/nonexistent/space.json"}}},
                        {"map", {{"builtin", "identity"}}},
                        {"x0", 0.0}};
    CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(bad_file)),
                    std::invalid_argument);
    const json bad_rule{{"space", {{"builtin", "remark46"}}},
                        {"map", {{"builtin", "identity"}}},
                        {"rule", {{"kind", "near_inf"}}},
                        {"x0", 0.5}};
    CHECK_THROWS_WITH_AS(run_experiment(ExperimentConfig::from_json(bad_rule)),
                         doctest::Contains("phi"), std::invalid_argument);
}
