#include "qmt/space.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qmt/rng.hpp"

namespace qmt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double circular_arc(double a, double b) {
    double d = std::fmod(b - a, kTwoPi);
    if (d < 0.0) d += kTwoPi;
    return d;
}

}  // namespace

const char* to_string(Direction d) {
    return d == Direction::forward ? "forward" : "backward";
}

QuasiMetricSpace::QuasiMetricSpace(Universe universe, DistanceFn distance, std::string name)
    : universe_(std::move(universe)), distance_(std::move(distance)), name_(std::move(name)) {
    if (!distance_) throw std::invalid_argument("quasi-metric space needs a distance function");
}

double QuasiMetricSpace::distance(const Point& x, const Point& y) const {
    universe_.require(x, "distance");
    universe_.require(y, "distance");
    return distance_(x, y);
}

QuasiMetricSpace QuasiMetricSpace::conjugate() const {
    DistanceFn base = distance_;
    return QuasiMetricSpace(
        universe_, [base](const Point& x, const Point& y) { return base(y, x); },
        name_.empty() ? "conjugate" : name_ + "_conjugate");
}

bool ball_membership(const QuasiMetricSpace& space, const Ball& ball, const Point& y) {
    if (!(ball.radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
    space.universe().require(ball.center, "ball_membership");
    space.universe().require(y, "ball_membership");
    const double d = ball.direction == Direction::forward
                         ? space.distance_unchecked(ball.center, y)
                         : space.distance_unchecked(y, ball.center);
    return d < ball.radius;
}

FiniteQuasiMetricSpace::FiniteQuasiMetricSpace(std::vector<std::string> labels,
                                               std::vector<double> row_major)
    : labels_(std::move(labels)), matrix_(std::move(row_major)) {
    const std::size_t n = labels_.size();
    if (matrix_.size() != n * n) {
        throw std::invalid_argument("distance matrix is not n x n for the point labels");
    }
    for (double v : matrix_) {
        if (!(v >= 0.0)) throw std::invalid_argument("distance matrix has a negative entry");
    }
}

bool FiniteQuasiMetricSpace::symmetric() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (at(i, j) != at(j, i)) return false;
        }
    }
    return true;
}

bool FiniteQuasiMetricSpace::separated() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (at(i, j) == 0.0 && at(j, i) == 0.0) return false;
        }
    }
    return true;
}

bool FiniteQuasiMetricSpace::strictly_separated() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && at(i, j) == 0.0) return false;
        }
    }
    return true;
}

QuasiMetricSpace FiniteQuasiMetricSpace::to_space() const {
    const std::size_t n = size();
    std::vector<double> m = matrix_;
    return QuasiMetricSpace(
        Universe::finite(labels_),
        [m, n](const Point& x, const Point& y) { return m[x.index() * n + y.index()]; },
        "finite");
}

ConditionReport check_axioms(const FiniteQuasiMetricSpace& space) {
    const std::size_t n = space.size();
    ConditionReport report("AXIOMS");

    Verdict zero = Verdict::pass(Mode::exact, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (space.at(i, i) != 0.0) {
            zero = Verdict::fail(Mode::exact, 0.0,
                                 {{"i", i}, {"value", space.at(i, i)}});
            break;
        }
    }
    report.add("zero_diagonal", zero);

    Verdict triangle = Verdict::pass(Mode::exact, 0.0);
    for (std::size_t i = 0; i < n && triangle.holds(); ++i) {
        for (std::size_t j = 0; j < n && triangle.holds(); ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                const double lhs = space.at(i, k);
                const double rhs = space.at(i, j) + space.at(j, k);
                if (lhs > rhs) {
                    triangle = Verdict::fail(
                        Mode::exact, 0.0,
                        {{"i", i}, {"j", j}, {"k", k}, {"lhs", lhs}, {"rhs", rhs}});
                    break;
                }
            }
        }
    }
    report.add("triangle", triangle);

    Verdict separation = Verdict::pass(Mode::exact, 0.0);
    for (std::size_t i = 0; i < n && separation.holds(); ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (space.at(i, j) == 0.0 && space.at(j, i) == 0.0) {
                separation = Verdict::fail(Mode::exact, 0.0, {{"i", i}, {"j", j}});
                break;
            }
        }
    }
    report.add("separation", separation, /*optional=*/true);

    return report;
}

ConditionReport check_axioms_sampled(const QuasiMetricSpace& space, int triples,
                                     std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    ConditionReport report("AXIOMS");

    Verdict positivity = Verdict::pass(Mode::sampled, tol);
    Verdict zero = Verdict::pass(Mode::sampled, tol);
    Verdict triangle = Verdict::pass(Mode::sampled, tol);

    for (int t = 0; t < triples; ++t) {
        const Point x = sample_point(space.universe(), rng);
        const Point y = sample_point(space.universe(), rng);
        const Point z = sample_point(space.universe(), rng);
        const double qxy = space.distance_unchecked(x, y);
        const double qyz = space.distance_unchecked(y, z);
        const double qxz = space.distance_unchecked(x, z);
        if (positivity.holds() && !(qxy >= 0.0)) {
            positivity = Verdict::fail(Mode::sampled, tol, {{"x", x}, {"y", y}, {"value", qxy}});
        }
        if (zero.holds()) {
            const double qxx = space.distance_unchecked(x, x);
            if (!(qxx <= tol)) {
                zero = Verdict::fail(Mode::sampled, tol, {{"x", x}, {"value", qxx}});
            }
        }
        if (triangle.holds() && qxz > qxy + qyz + tol) {
            triangle = Verdict::fail(
                Mode::sampled, tol,
                {{"x", x}, {"y", y}, {"z", z}, {"lhs", qxz}, {"rhs", qxy + qyz}});
        }
    }
    report.add("positivity", positivity);
    report.add("zero_diagonal", zero);
    report.add("triangle", triangle);
    return report;
}

QuasiMetricSpace make_builtin_space(const std::string& name) {
    if (name == "sorgenfrey") {
        // Easy to file a metal stick down, hard to grow it back.
        return QuasiMetricSpace(
            Universe::real_line(),
            [](const Point& x, const Point& y) {
                return y.value() >= x.value() ? y.value() - x.value() : 1.0;
            },
            name);
    }
    if (name == "one_sided_diff") {
        return QuasiMetricSpace(
            Universe::real_line(),
            [](const Point& x, const Point& y) { return std::max(y.value() - x.value(), 0.0); },
            name);
    }
    if (name == "half_line_log") {
        return QuasiMetricSpace(
            Universe::half_line(),
            [](const Point& x, const Point& y) {
                return std::max(0.0, std::log(y.value() / x.value()));
            },
            name);
    }
    if (name == "circular_railroad") {
        // Counterclockwise arc length on the unit circle.
        return QuasiMetricSpace(
            Universe::circle(),
            [](const Point& x, const Point& y) {
                return x.value() == y.value() ? 0.0 : circular_arc(x.value(), y.value());
            },
            name);
    }
    if (name == "remark46") {
        // Descending is cheap, ascending costs a flat 1; on [0, 1].
        return QuasiMetricSpace(
            Universe::interval(0.0, 1.0),
            [](const Point& x, const Point& y) {
                return x.value() >= y.value() ? x.value() - y.value() : 1.0;
            },
            name);
    }
    throw std::invalid_argument("unknown builtin space '" + name + "'");
}

QuasiMetricSpace make_minkowski_gauge(const std::vector<std::vector<double>>& normals,
                                      const std::vector<double>& offsets) {
    if (normals.empty() || normals.size() != offsets.size()) {
        throw std::invalid_argument("minkowski gauge needs matching halfspace normals/offsets");
    }
    const std::size_t dim = normals.front().size();
    if (dim == 0) throw std::invalid_argument("minkowski gauge needs nonempty normals");
    for (const auto& a : normals) {
        if (a.size() != dim) {
            throw std::invalid_argument("minkowski gauge normals differ in dimension");
        }
    }
    for (double b : offsets) {
        if (!(b > 0.0)) {
            throw std::invalid_argument("minkowski gauge offsets must be positive "
                                        "(0 must be interior to the set)");
        }
    }
    // The gauge of an unbounded set can vanish on nonzero displacements;
    // probe axis and sampled directions for a recession direction.
    std::mt19937_64 rng(0x6d6b67ULL);
    std::vector<std::vector<double>> probes;
    for (std::size_t k = 0; k < dim; ++k) {
        for (double sign : {1.0, -1.0}) {
            std::vector<double> d(dim, 0.0);
            d[k] = sign;
            probes.push_back(std::move(d));
        }
    }
    for (int s = 0; s < 64; ++s) {
        std::vector<double> d(dim);
        for (std::size_t k = 0; k < dim; ++k) d[k] = uniform_in(rng, -1.0, 1.0);
        probes.push_back(std::move(d));
    }
    for (const auto& d : probes) {
        double support = 0.0;
        double norm = 0.0;
        for (double v : d) norm += v * v;
        if (norm == 0.0) continue;
        for (std::size_t i = 0; i < normals.size(); ++i) {
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += normals[i][k] * d[k];
            support = std::max(support, dot / offsets[i]);
        }
        if (!(support > 0.0)) {
            throw std::invalid_argument(
                "minkowski gauge: halfspace intersection is unbounded along a sampled "
                "direction");
        }
    }

    std::vector<std::vector<double>> a = normals;
    std::vector<double> b = offsets;
    std::vector<double> lo(dim, -std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim, std::numeric_limits<double>::infinity());
    return QuasiMetricSpace(
        Universe::box(std::move(lo), std::move(hi)),
        [a, b](const Point& x, const Point& y) {
            double gauge = 0.0;  // the set is bounded, so the max is >= 0 anyway
            for (std::size_t i = 0; i < a.size(); ++i) {
                double dot = 0.0;
                for (std::size_t k = 0; k < a[i].size(); ++k) {
                    dot += a[i][k] * (y.coords()[k] - x.coords()[k]);
                }
                gauge = std::max(gauge, dot / b[i]);
            }
            return gauge;
        },
        "minkowski_gauge");
}

}  // namespace qmt
