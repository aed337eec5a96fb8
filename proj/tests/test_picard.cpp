#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qmt/oracle.hpp"
#include "qmt/rng.hpp"

using namespace qmt;

namespace {

SetValuedMap interval_0_x(const QuasiMetricSpace& space) {
    const double lo = space.universe().interval_bounds().lo;
    return SetValuedMap::interval(
        space.universe(), [lo](double) { return lo; }, [](double x) { return x; });
}

Preorder three_chain() {
    const Universe u = Universe::finite({"a", "b", "c"});
    std::vector<bool> leq(9, false);
    for (std::size_t i = 0; i < 3; ++i) leq[i * 3 + i] = true;
    leq[0 * 3 + 1] = leq[0 * 3 + 2] = leq[1 * 3 + 2] = true;
    return Preorder::finite(u, leq);
}

}  // namespace

TEST_CASE("near-sup selection on remark46") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    // sup over [0, 0.5] of q(0.5, .) is 0.5, attained at 0; the slack allows
    // anything in [0, 0.25] but max-then-least picks 0
    const auto next = select_next(map, space, Point::scalar(0.5),
                                  SelectionRule::near_sup({1.0, 0.5}), /*n=*/2);
    REQUIRE(next.has_value());
    CHECK(next->value() == 0.0);
    CHECK(space.distance_unchecked(Point::scalar(0.5), *next) >= 0.5 - 0.25);
}

TEST_CASE("selection on a singleton image returns the point itself") {
    const Universe u = Universe::finite({"a"});
    const auto map = SetValuedMap::extensional(u, {{0}});
    const auto space = FiniteQuasiMetricSpace({"a"}, {0.0}).to_space();
    const auto next = select_next(map, space, Point::finite(0), SelectionRule::near_sup(), 0);
    REQUIRE(next.has_value());
    CHECK(*next == Point::finite(0));
}

TEST_CASE("near-inf selection descends the chain to the attained infimum") {
    const auto order = three_chain();
    const auto map = level_set_map(order);
    const auto phi = Utility::from_values({0, 1, 2});
    const auto space = utility_pseudometric(phi, universe_grid(order.universe(), 0),
                                            order.universe().labels())
                           .to_space();
    const auto next =
        select_next(map, space, Point::finite(2), SelectionRule::near_inf(phi), 0);
    REQUIRE(next.has_value());
    CHECK(*next == Point::finite(0));
}

TEST_CASE("slack schedules are validated") {
    CHECK_THROWS_AS(SelectionRule::near_sup({0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(SelectionRule::near_sup({1.0, 1.0}), std::invalid_argument);
    CHECK(SelectionRule::near_sup({2.0, 0.25}).slack().at(1) == 0.5);
}

TEST_CASE("empty images emit the stop signal") {
    const Universe u = Universe::finite({"a"});
    const auto map = SetValuedMap::extensional(u, {{}});
    const auto space = FiniteQuasiMetricSpace({"a"}, {0.0}).to_space();
    CHECK_FALSE(select_next(map, space, Point::finite(0), SelectionRule::near_sup(), 0)
                    .has_value());
}

TEST_CASE("user choosers are validated against the image") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    const auto bad = SelectionRule::user(
        [](const SetValuedMap&, const QuasiMetricSpace&, const Point&, int) {
            return std::optional<Point>(Point::scalar(0.9));
        });
    CHECK_THROWS_AS(select_next(map, space, Point::scalar(0.5), bad, 0),
                    std::invalid_argument);
    const auto halve = SelectionRule::user(
        [](const SetValuedMap&, const QuasiMetricSpace&, const Point& x, int) {
            return std::optional<Point>(Point::scalar(x.value() / 2.0));
        });
    const auto next = select_next(map, space, Point::scalar(0.5), halve, 0);
    REQUIRE(next.has_value());
    CHECK(next->value() == 0.25);
}

TEST_CASE("iterate on remark46 reaches zero in one step") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    const auto trace = iterate(map, space, Point::scalar(1.0), SelectionRule::near_sup(),
                               /*budget=*/100, /*gap_tol=*/1e-9);
    REQUIRE(trace.length() == 2);
    CHECK(trace.steps[0].x.value() == 1.0);
    CHECK(trace.steps[1].x.value() == 0.0);
    CHECK(*trace.steps[0].sup_gap == 1.0);
    CHECK(*trace.steps[1].sup_gap == 0.0);
    CHECK(*trace.steps[0].step_dist == 1.0);
    CHECK(trace.reason == StopReason::gap_converged);
}

TEST_CASE("identity map converges immediately") {
    const Universe u = Universe::finite({"a", "b"});
    const auto map = SetValuedMap::extensional(u, {{0}, {1}});
    const auto space = FiniteQuasiMetricSpace({"a", "b"}, {0, 1, 1, 0}).to_space();
    const auto trace =
        iterate(map, space, Point::finite(1), SelectionRule::near_sup(), 10, 0.0);
    CHECK(trace.length() == 1);
    CHECK(trace.reason == StopReason::gap_converged);
    CHECK(*trace.steps[0].sup_gap == 0.0);
}

TEST_CASE("nested chain descent with enumeration oracle") {
    // level sets of the 5-chain with descent-cheap distances
    const std::size_t n = 5;
    std::vector<std::string> labels;
    std::vector<double> matrix(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i > j) matrix[i * n + j] = double(i - j);
            if (i < j) matrix[i * n + j] = 1.0;
        }
    }
    std::vector<std::vector<std::size_t>> images(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) images[i].push_back(j);
    }
    const auto space = FiniteQuasiMetricSpace(labels, matrix).to_space();
    const auto map = SetValuedMap::extensional(Universe::finite(labels), images);

    const auto trace =
        iterate(map, space, Point::finite(4), SelectionRule::near_sup(), 20, 0.0);
    CHECK(trace.reason == StopReason::gap_converged);
    CHECK(trace.last() == Point::finite(0));
    for (std::size_t k = 0; k + 1 < trace.length(); ++k) {
        CHECK(*trace.steps[k].sup_gap > *trace.steps[k + 1].sup_gap);
    }
    // oracle: the only point with a singleton self-image is p0
    for (std::size_t i = 0; i < n; ++i) {
        const auto cls = classify_point(map, space, Point::finite(i));
        CHECK((cls.kind == PointClass::invariant) == (i == 0));
    }
}

TEST_CASE("budget exhaustion reports the residual gap") {
    const auto space = make_builtin_space("remark46");
    // constant full-interval images never settle
    const auto map = SetValuedMap::interval(
        space.universe(), [](double) { return 0.0; }, [](double) { return 1.0; });
    const auto trace =
        iterate(map, space, Point::scalar(0.5), SelectionRule::near_sup(), 3, 1e-9);
    CHECK(trace.reason == StopReason::budget_exhausted);
    CHECK(trace.length() == 4);
    CHECK(*trace.steps.back().sup_gap == 1.0);
    CHECK_THROWS_AS(
        iterate(map, space, Point::scalar(0.5), SelectionRule::near_sup(), 0, 1e-9),
        std::invalid_argument);
}

TEST_CASE("trace invariants over random nested instances") {
    for (int k = 0; k < 60; ++k) {
        const auto inst =
            random_instance(2 + k % 5, mix_seed(500, std::uint64_t(k)), InstanceProfile::nested);
        const auto map = inst.map();
        const auto space = inst.quasi_space();
        const auto trace =
            iterate(map, space, Point::finite(0), SelectionRule::near_sup(), 16, -1.0);

        for (std::size_t i = 0; i + 1 < trace.length(); ++i) {
            // Picard membership, exactly
            CHECK(map.contains(trace.steps[i].x, trace.steps[i + 1].x));
            // near-sup contract: chosen step within the slack of the sup
            CHECK(*trace.steps[i].sup_gap - *trace.steps[i].step_dist <=
                  trace.steps[i].slack);
            // nesting along the trace (the maps satisfy transitive nesting)
            const auto& inner = inst.images[trace.steps[i + 1].x.index()];
            const auto& outer = inst.images[trace.steps[i].x.index()];
            CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
        }
    }
}

TEST_CASE("classify_point on remark46") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    CHECK(classify_point(map, space, Point::scalar(0.0)).kind == PointClass::invariant);

    const auto half = classify_point(map, space, Point::scalar(0.5));
    CHECK(half.kind == PointClass::neither);
    REQUIRE(half.witness.has_value());
    CHECK(*half.witness != Point::scalar(0.5));
    CHECK(map.contains(Point::scalar(0.5), *half.witness));
}

TEST_CASE("classify_point on empty images") {
    const Universe u = Universe::finite({"a"});
    const auto map = SetValuedMap::extensional(u, {{}});
    const auto space = FiniteQuasiMetricSpace({"a"}, {0.0}).to_space();
    CHECK(classify_point(map, space, Point::finite(0)).kind == PointClass::nonvariant);
}

TEST_CASE("find_invariant_point on the golden instance") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    const auto result = find_invariant_point(map, space, Point::scalar(1.0),
                                             SelectionRule::near_sup(), 100, 1e-9, 1e-6);
    CHECK(result.outcome == Outcome::invariant_point);
    REQUIRE(result.point.has_value());
    CHECK(result.point->value() == 0.0);
    // soundness: reclassification agrees
    CHECK(classify_point(map, space, *result.point).kind == PointClass::invariant);
}

TEST_CASE("find_invariant_point on the identity map") {
    const Universe u = Universe::finite({"a", "b"});
    const auto map = SetValuedMap::extensional(u, {{0}, {1}});
    const auto space = FiniteQuasiMetricSpace({"a", "b"}, {0, 1, 1, 0}).to_space();
    const auto result = find_invariant_point(map, space, Point::finite(1),
                                             SelectionRule::near_sup(), 10, 0.0, 0.0);
    CHECK(result.outcome == Outcome::invariant_point);
    CHECK(*result.point == Point::finite(1));
}

TEST_CASE("empty image stops classify as nonvariant") {
    const Universe u = Universe::finite({"a", "b"});
    const auto map = SetValuedMap::extensional(u, {{1}, {}});
    const auto space = FiniteQuasiMetricSpace({"a", "b"}, {0, 1, 1, 0}).to_space();
    const auto result = find_invariant_point(map, space, Point::finite(0),
                                             SelectionRule::near_sup(), 10, 0.0, 0.0);
    CHECK(result.outcome == Outcome::nonvariant_point);
    CHECK(*result.point == Point::finite(1));
    CHECK(result.trace.reason == StopReason::empty_image);
}

TEST_CASE("separation failure surfaces as a condition violation") {
    const Universe u = Universe::finite({"a", "b"});
    const auto map = SetValuedMap::extensional(u, {{0, 1}, {0, 1}});
    const auto space = FiniteQuasiMetricSpace({"a", "b"}, {0, 0, 0, 0}).to_space();
    const auto result = find_invariant_point(map, space, Point::finite(0),
                                             SelectionRule::near_sup(), 10, 0.0, 0.0);
    CHECK(result.outcome == Outcome::condition_violation);
    CHECK(result.e_report.at("E4").fails());
}

TEST_CASE("engine outcome matches the exhaustive oracle on 100 nested instances") {
    // the preorder profile draws antisymmetric orders, so every search settles
    int matched = 0;
    for (int k = 0; k < 100; ++k) {
        const auto inst = random_instance(2 + k % 4, mix_seed(900, std::uint64_t(k)),
                                          InstanceProfile::preorder);
        const auto map = inst.map();
        const auto space = inst.quasi_space();
        const auto result = find_invariant_point(map, space, Point::finite(0),
                                                 SelectionRule::near_sup(), 20, 0.0, 0.0);
        REQUIRE(result.point.has_value());
        // oracle: direct table lookup of the invariant/nonvariant definition
        const auto& img = inst.images[result.point->index()];
        const bool invariant = img == std::vector<std::size_t>{result.point->index()};
        const bool nonvariant = img.empty() || invariant;
        if (result.outcome == Outcome::invariant_point ? invariant
            : result.outcome == Outcome::nonvariant_point
                ? nonvariant
                : false) {
            ++matched;
        }
    }
    CHECK(matched == 100);
}

TEST_CASE("near-inf engine lands on the minimal point of the three chain") {
    const auto order = three_chain();
    const auto map = level_set_map(order);
    const auto phi = Utility::from_values({1, 2, 3});
    const auto space = utility_pseudometric(phi, universe_grid(order.universe(), 0),
                                            order.universe().labels())
                           .to_space();
    const auto trace =
        iterate(map, space, Point::finite(2), SelectionRule::near_inf(phi), 16, 0.0);
    CHECK(trace.last() == Point::finite(0));
    CHECK(trace.reason == StopReason::gap_converged);
    // inf-gap metadata is recorded on the arriving step
    REQUIRE(trace.length() >= 2);
    CHECK(trace.steps[1].inf_gap.has_value());
    CHECK(*trace.steps[1].inf_gap == 0.0);
}
