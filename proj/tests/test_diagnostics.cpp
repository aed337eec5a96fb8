#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>

#include "qmt/diagnostics.hpp"
#include "qmt/oracle.hpp"
#include "qmt/rng.hpp"

using namespace qmt;

namespace {

std::vector<Point> harmonic_trace(int count) {
    std::vector<Point> trace;
    for (int n = 1; n <= count; ++n) trace.push_back(Point::scalar(1.0 / n));
    return trace;
}

SetValuedMap interval_0_x(const QuasiMetricSpace& space) {
    const double lo = space.universe().interval_bounds().lo;
    return SetValuedMap::interval(
        space.universe(), [lo](double) { return lo; }, [](double x) { return x; });
}

// Definition-level oracle: the smallest N whose suffix pairs all satisfy the
// bound, scanning each N independently.
std::optional<std::size_t> oracle_cauchy_index(const std::vector<Point>& trace,
                                               const QuasiMetricSpace& space, Direction dir,
                                               double eps) {
    for (std::size_t N = 0; N + 1 < trace.size(); ++N) {
        bool ok = true;
        for (std::size_t n = N; n < trace.size() && ok; ++n) {
            for (std::size_t m = n + 1; m < trace.size(); ++m) {
                const double d = dir == Direction::forward
                                     ? space.distance_unchecked(trace[n], trace[m])
                                     : space.distance_unchecked(trace[m], trace[n]);
                if (!(d < eps)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return N;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("forward Cauchy verdict on the harmonic trace") {
    const auto space = make_builtin_space("remark46");
    const auto trace = harmonic_trace(100);

    const auto oracle_n = oracle_cauchy_index(trace, space, Direction::forward, 0.05);
    REQUIRE(oracle_n.has_value());
    CHECK(*oracle_n == 16);  // frozen: first 0-based index with all later pairs under 0.05

    const auto verdict = is_cauchy(trace, space, Direction::forward, 0.05);
    CHECK(verdict.holds());
    CHECK(verdict.info.at("N").get<std::size_t>() == *oracle_n);
}

TEST_CASE("backward pairs of the harmonic trace never settle") {
    const auto space = make_builtin_space("remark46");
    const auto trace = harmonic_trace(100);
    const auto verdict = is_cauchy(trace, space, Direction::backward, 0.5);
    CHECK(verdict.fails());
    // the witness pair reproduces the violation on its own
    const std::size_t n = verdict.witness.at("n").get<std::size_t>();
    const std::size_t m = verdict.witness.at("m").get<std::size_t>();
    CHECK(space.distance_unchecked(trace[m], trace[n]) == 1.0);
}

TEST_CASE("degenerate and constant traces") {
    const auto space = make_builtin_space("remark46");
    const std::vector<Point> single{Point::scalar(0.5)};
    CHECK(is_cauchy(single, space, Direction::forward, 0.1).status == Status::undetermined);
    CHECK(converges_to(single, space, Point::scalar(0.5), Direction::forward, 0.1).status ==
          Status::undetermined);

    const std::vector<Point> constant(20, Point::scalar(0.5));
    const auto verdict = is_cauchy(constant, space, Direction::forward, 0.05);
    CHECK(verdict.holds());
    CHECK(verdict.info.at("N").get<std::size_t>() == 0);
    // exact zero-comparison mode
    CHECK(is_cauchy(constant, space, Direction::backward, 0.0).holds());
    CHECK_THROWS_AS(is_cauchy(constant, space, Direction::forward, -1.0), std::invalid_argument);
}

TEST_CASE("convergence in one direction only") {
    const auto space = make_builtin_space("remark46");
    const auto trace = harmonic_trace(100);
    CHECK(converges_to(trace, space, Point::scalar(0.0), Direction::forward, 0.05).holds());

    const auto backward = converges_to(trace, space, Point::scalar(0.0), Direction::backward, 0.5);
    CHECK(backward.fails());
    CHECK(backward.witness.at("distance").get<double>() == 1.0);

    const auto wrong = converges_to(trace, space, Point::scalar(0.5), Direction::forward, 0.05);
    CHECK(wrong.fails());

    CHECK(converges_to(trace, space, Point::scalar(0.0), Direction::forward, 0.05, 200).status ==
          Status::undetermined);
}

TEST_CASE("E conditions on the shrinking-interval instance") {
    const auto space = make_builtin_space("remark46");
    const auto map = interval_0_x(space);
    const auto trace = harmonic_trace(100);

    const auto report =
        check_E_conditions(trace, map, space, Point::scalar(0.0), /*tol=*/0.05);
    for (const char* label : {"E1", "E2", "E3", "E4", "E5"}) {
        CAPTURE(label);
        CHECK(report.at(label).holds());
    }
    CHECK(report.overall() == Status::holds);

    SUBCASE("sup-gap along the trace equals the point itself") {
        for (const Point& x : trace) {
            const SupGap gap = sup_distance_over_image(space, x, map.image(x));
            CHECK(gap.value == x.value());
        }
    }
    SUBCASE("non-Picard traces are rejected") {
        const std::vector<Point> bad{Point::scalar(0.2), Point::scalar(0.9)};
        CHECK_THROWS_AS(
            check_E_conditions(bad, map, space, Point::scalar(0.0), 0.05),
            std::invalid_argument);
    }
}

TEST_CASE("sampler-backed sup-gaps never certify E2") {
    // membership stays exact but the sup runs over sampler candidates only
    const auto space = make_builtin_space("remark46");
    const Universe u = space.universe();
    const auto map = SetValuedMap::predicate(
        u, [](const Point& x, const Point& v) { return v.value() <= x.value(); },
        [&u](const Point&) { return universe_grid(u, 101); });
    const std::vector<Point> trace{Point::scalar(0.5), Point::scalar(0.0),
                                   Point::scalar(0.0)};
    const auto report = check_E_conditions(trace, map, space, Point::scalar(0.0), 0.05);
    CHECK(report.at("E2").status == Status::undetermined);
    CHECK(report.at("E3").holds());  // membership checks stay exact
}

TEST_CASE("E conditions on a constant singleton trace") {
    const Universe u = Universe::finite({"c"});
    const auto map = SetValuedMap::extensional(u, {{0}});
    const auto space = FiniteQuasiMetricSpace({"c"}, {0.0}).to_space();
    const std::vector<Point> trace(5, Point::finite(0));
    const auto report = check_E_conditions(trace, map, space, Point::finite(0), 0.0);
    CHECK(report.overall() == Status::holds);
}

TEST_CASE("E1 failure carries a reproducible witness") {
    const auto labels = std::vector<std::string>{"p0", "p1", "p2", "p3"};
    const FiniteQuasiMetricSpace fin(labels, {0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 1, 0});
    const auto space = fin.to_space();
    const auto map = SetValuedMap::extensional(Universe::finite(labels),
                                               {{0, 1}, {1, 2}, {2}, {3}});
    const std::vector<Point> trace{Point::finite(0), Point::finite(1)};
    const auto report = check_E_conditions(trace, map, space, Point::finite(1), 0.0);
    CHECK(report.at("E1").fails());
    const auto& w = report.at("E1").witness;
    const std::size_t n = w.at("n").get<std::size_t>();
    const Point u = Point::finite(w.at("u").get<std::size_t>());
    CHECK(map.contains(trace[n + 1], u));
    CHECK_FALSE(map.contains(trace[n], u));
}

TEST_CASE("F conditions") {
    SUBCASE("interval nesting on remark46") {
        const auto space = make_builtin_space("remark46");
        const auto map = interval_0_x(space);
        const std::vector<std::vector<Point>> traces{harmonic_trace(100)};
        const auto report = check_F_conditions(map, space, traces, /*tol=*/0.05);
        CHECK(report.at("F1").holds());
        CHECK(report.at("F2").holds());
        CHECK(report.at("F4").holds());
    }
    SUBCASE("identity map holds on all four, exactly") {
        const auto labels = std::vector<std::string>{"a", "b", "c"};
        const FiniteQuasiMetricSpace fin(labels, {0, 2, 3, 1, 0, 2, 2, 1, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels),
                                                   {{0}, {1}, {2}});
        const auto report = check_F_conditions(map, fin.to_space(), {}, 0.0);
        for (const char* label : {"F1", "F2", "F3", "F4"}) {
            CAPTURE(label);
            CHECK(report.at(label).holds());
        }
        CHECK(report.at("F1").mode == Mode::exact);
        CHECK(report.at("F4").mode == Mode::exact);
    }
    SUBCASE("a positive-distance two-cycle breaks F4 with a cycle witness") {
        const auto labels = std::vector<std::string>{"a", "b", "c"};
        const FiniteQuasiMetricSpace fin(labels, {0, 1, 1, 1, 0, 1, 1, 1, 0});
        // both a and b map onto {a, b}: transitive nesting holds, the cycle spins
        const auto map = SetValuedMap::extensional(Universe::finite(labels),
                                                   {{0, 1}, {0, 1}, {2}});
        const auto space = fin.to_space();
        const auto report = check_F_conditions(map, space, {}, 0.0);
        CHECK(report.at("F1").holds());
        CHECK(report.at("F4").fails());
        const auto cycle = report.at("F4").witness.at("cycle").get<std::vector<std::size_t>>();
        REQUIRE(cycle.size() >= 2);
        CHECK(cycle.front() == cycle.back());
        // the witness cycle really is a Picard loop with a positive step
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
            CHECK(map.contains(Point::finite(cycle[i]), Point::finite(cycle[i + 1])));
            total += space.distance_unchecked(Point::finite(cycle[i]),
                                              Point::finite(cycle[i + 1]));
        }
        CHECK(total > 0.0);
    }
}

TEST_CASE("A conditions") {
    SUBCASE("identity map on a finite metric space") {
        const auto labels = std::vector<std::string>{"a", "b"};
        const FiniteQuasiMetricSpace fin(labels, {0, 1, 1, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0}, {1}});
        const auto report = check_A_conditions(map, fin.to_space(), 0.0);
        for (const char* label : {"A1", "A2", "A3", "A4"}) {
            CAPTURE(label);
            CHECK(report.at(label).holds());
        }
    }
    SUBCASE("level-set maps satisfy A2 and A3 automatically") {
        for (int k = 0; k < 20; ++k) {
            auto inst = random_instance(5, mix_seed(21, std::uint64_t(k)),
                                        InstanceProfile::nested);
            // symmetrize so the A-system applies
            const std::size_t n = inst.space.size();
            std::vector<double> sym(n * n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    sym[i * n + j] = 0.5 * (inst.space.at(i, j) + inst.space.at(j, i));
                }
            }
            const auto space = FiniteQuasiMetricSpace(inst.space.labels(), sym).to_space();
            const auto report = check_A_conditions(inst.map(), space, 0.0);
            CHECK(report.at("A2").holds());
            CHECK(report.at("A3").holds());
        }
    }
    SUBCASE("a distance-1 two-cycle fails A4") {
        const auto labels = std::vector<std::string>{"a", "b"};
        const FiniteQuasiMetricSpace fin(labels, {0, 1, 1, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0, 1}, {0, 1}});
        const auto report = check_A_conditions(map, fin.to_space(), 0.0);
        CHECK(report.at("A4").fails());
    }
    SUBCASE("asymmetric distances come back undetermined") {
        const auto labels = std::vector<std::string>{"a", "b"};
        const FiniteQuasiMetricSpace fin(labels, {0, 1, 2, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0}, {1}});
        const auto report = check_A_conditions(map, fin.to_space(), 0.0);
        CHECK(report.overall() == Status::undetermined);
        CHECK(report.at("A4").status == Status::undetermined);
    }
}

TEST_CASE("B conditions") {
    SUBCASE("ordinary metric as p on shrinking intervals") {
        const Universe u = Universe::interval(0.0, 1.0);
        const QuasiMetricSpace d(u, [](const Point& x, const Point& y) {
            return std::fabs(x.value() - y.value());
        });
        const auto map = SetValuedMap::interval(
            u, [](double) { return 0.0; }, [](double x) { return x; });
        const TauFunction tau{d, [&d](const Point& x, const Point& y) {
                                  return d.distance_unchecked(x, y);
                              },
                              false};
        const auto trace = harmonic_trace(100);
        const auto report = check_B_conditions(trace, map, tau, Point::scalar(0.0), 0.05);
        for (const char* label : {"B1", "B2", "B3", "B4"}) {
            CAPTURE(label);
            CHECK(report.at(label).holds());
        }
    }
    SUBCASE("constant singleton trace") {
        const auto labels = std::vector<std::string>{"c"};
        const FiniteQuasiMetricSpace fin(labels, {0.0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0}});
        const auto tau = TauFunction::from_matrices(fin, fin, false);
        const std::vector<Point> trace(4, Point::finite(0));
        const auto report = check_B_conditions(trace, map, tau, Point::finite(0), 0.0);
        CHECK(report.overall() == Status::holds);
        CHECK(report.at("B4").holds());
    }
    SUBCASE("candidate missing from an image fails B3") {
        // p vanishes everywhere, so the trace p-converges to the missing point
        const auto labels = std::vector<std::string>{"a", "b"};
        const FiniteQuasiMetricSpace d(labels, {0, 1, 1, 0});
        const FiniteQuasiMetricSpace p(labels, {0, 0, 0, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0}, {1}});
        const auto tau = TauFunction::from_matrices(d, p, true);
        const std::vector<Point> trace{Point::finite(0), Point::finite(0)};
        const auto report = check_B_conditions(trace, map, tau, Point::finite(1), 0.0);
        CHECK(report.at("B3").fails());
        CHECK(report.at("B3").witness.at("n").get<std::size_t>() == 0);
    }
    SUBCASE("without p-convergence everything is undetermined") {
        const auto labels = std::vector<std::string>{"a", "b"};
        const FiniteQuasiMetricSpace d(labels, {0, 1, 1, 0});
        const auto map = SetValuedMap::extensional(Universe::finite(labels), {{0}, {1}});
        const auto tau = TauFunction::from_matrices(d, d, false);
        const std::vector<Point> trace{Point::finite(0), Point::finite(0)};
        const auto report = check_B_conditions(trace, map, tau, Point::finite(1), 0.0);
        CHECK(report.overall() == Status::undetermined);
    }
}

TEST_CASE("C conditions") {
    const Universe u = Universe::finite({"a", "b", "c"});
    std::vector<bool> leq(9, false);
    for (std::size_t i = 0; i < 3; ++i) leq[i * 3 + i] = true;
    leq[0 * 3 + 1] = leq[0 * 3 + 2] = leq[1 * 3 + 2] = true;  // a <= b <= c
    const auto order = Preorder::finite(u, leq);

    SUBCASE("three chain with rank utility") {
        const auto phi = Utility::from_values({0, 1, 2});
        const std::vector<Point> trace{Point::finite(2), Point::finite(0), Point::finite(0)};
        const auto report = check_C_conditions(order, phi, Point::finite(2), trace, 0.0);
        CHECK(report.at("C1").holds());
        CHECK(report.at("C1").info.at("inf").get<double>() == 0.0);
        CHECK(report.at("C2").holds());
        CHECK(report.at("C3").holds());
        CHECK(Point::finite(report.at("C3").info.at("x_star").get<std::size_t>()) ==
              Point::finite(0));
    }
    SUBCASE("single point universe is trivial") {
        const Universe s = Universe::finite({"z"});
        const auto ord = Preorder::finite(s, {true});
        const std::vector<Point> trace{Point::finite(0), Point::finite(0)};
        const auto report =
            check_C_conditions(ord, Utility::from_values({1.0}), Point::finite(0), trace, 0.0);
        CHECK(report.overall() == Status::holds);
    }
    SUBCASE("two distinct value-reaching points break C2") {
        std::vector<bool> wide(9, false);
        for (std::size_t i = 0; i < 3; ++i) wide[i * 3 + i] = true;
        wide[0 * 3 + 2] = wide[1 * 3 + 2] = true;  // a <= c, b <= c
        const auto ord = Preorder::finite(u, wide);
        const auto phi = Utility::from_values({1, 1, 1});
        const std::vector<Point> trace{Point::finite(2), Point::finite(0)};
        const auto report = check_C_conditions(ord, phi, Point::finite(2), trace, 0.0);
        CHECK(report.at("C2").fails());
        const auto& w = report.at("C2").witness;
        CHECK(w.at("z1").get<std::size_t>() != w.at("z2").get<std::size_t>());
    }
    SUBCASE("all-infinite utility fails C1") {
        const double inf = std::numeric_limits<double>::infinity();
        const auto phi = Utility::from_values({inf, inf, inf});
        const std::vector<Point> trace{Point::finite(2)};
        const auto report = check_C_conditions(order, phi, Point::finite(2), trace, 0.0);
        CHECK(report.at("C1").fails());
    }
}

TEST_CASE("tau axioms") {
    const auto labels = std::vector<std::string>{"a", "b", "c", "d"};
    const FiniteQuasiMetricSpace d(labels,
                                   {0, 1, 2, 3, 1, 0, 1, 2, 2, 1, 0, 1, 3, 2, 1, 0});
    const auto pts = universe_grid(Universe::finite(labels), 0);

    SUBCASE("a metric is a tau-function") {
        const auto tau = TauFunction::from_matrices(d, d, false);
        const auto report = check_tau_axioms(tau, pts, 0.0);
        for (const char* label : {"tau1", "tau2", "tau4"}) {
            CAPTURE(label);
            CHECK(report.at(label).holds());
        }
        CHECK(report.at("tau3").status == Status::undetermined);  // no sequence pairs
    }
    SUBCASE("indistancy without coincidence fails tau4") {
        const FiniteQuasiMetricSpace p(labels, std::vector<double>(16, 0.0));
        const auto tau = TauFunction::from_matrices(d, p, true);
        const auto report = check_tau_axioms(tau, pts, 0.0);
        CHECK(report.at("tau1").holds());
        CHECK(report.at("tau4").fails());
        const auto& w = report.at("tau4").witness;
        CHECK(w.at("y").get<std::size_t>() != w.at("z").get<std::size_t>());
    }
    SUBCASE("metric plus one off the diagonal keeps the triangle inequality") {
        std::vector<double> pm = d.matrix();
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i != j) pm[i * 4 + j] += 1.0;
            }
        }
        const auto tau = TauFunction::from_matrices(d, FiniteQuasiMetricSpace(labels, pm), true);
        const auto report = check_tau_axioms(tau, pts, 0.0);
        CHECK(report.at("tau1").holds());
        CHECK(report.at("tau4").holds());
    }
    SUBCASE("tau3 on supplied sequence pairs") {
        const auto tau = TauFunction::from_matrices(d, d, false);
        TauSequencePair pair;
        pair.xs = std::vector<Point>(12, Point::finite(1));
        pair.ys = std::vector<Point>(12, Point::finite(1));
        const std::vector<TauSequencePair> pairs{pair};
        const auto report = check_tau_axioms(tau, pts, 0.0, pairs);
        CHECK(report.at("tau3").holds());
    }
}
