#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmt/report.hpp"
#include "qmt/universe.hpp"

namespace qmt {

enum class Direction { forward, backward };

const char* to_string(Direction d);

using DistanceFn = std::function<double(const Point&, const Point&)>;

/// A set together with a nonnegative distance that vanishes on the diagonal
/// and obeys the triangle inequality; symmetry is not assumed, so the two
/// argument orders generally measure different things.
class QuasiMetricSpace {
public:
    QuasiMetricSpace(Universe universe, DistanceFn distance, std::string name = "");

    /// q(x, y). Validates that both points belong to the universe.
    double distance(const Point& x, const Point& y) const;

    /// q(x, y) without membership validation; hot-path variant.
    double distance_unchecked(const Point& x, const Point& y) const { return distance_(x, y); }

    /// Same universe with the argument order swapped. Applying it twice
    /// reproduces the original distance pointwise.
    QuasiMetricSpace conjugate() const;

    const Universe& universe() const { return universe_; }
    const std::string& name() const { return name_; }

private:
    Universe universe_;
    DistanceFn distance_;
    std::string name_;
};

struct Ball {
    Point center;
    double radius = 0.0;
    Direction direction = Direction::forward;
};

/// Forward: q(center, y) < radius. Backward: q(y, center) < radius.
bool ball_membership(const QuasiMetricSpace& space, const Ball& ball, const Point& y);

/// Finite point set with an explicit distance matrix. The constructor
/// validates shape and nonnegativity only; the axioms that make the matrix a
/// quasi-metric are checked by check_axioms so that violations come back as
/// witnesses rather than exceptions.
class FiniteQuasiMetricSpace {
public:
    FiniteQuasiMetricSpace(std::vector<std::string> labels, std::vector<double> row_major);

    std::size_t size() const { return labels_.size(); }
    double at(std::size_t i, std::size_t j) const { return matrix_[i * size() + j]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& matrix() const { return matrix_; }

    bool symmetric() const;

    /// Two-sided separation: q(x,y) = 0 and q(y,x) = 0 only when x = y.
    bool separated() const;

    /// One-sided separation: q(x,y) = 0 iff x = y.
    bool strictly_separated() const;

    QuasiMetricSpace to_space() const;

private:
    std::vector<std::string> labels_;
    std::vector<double> matrix_;
};

/// Exact verdicts for zero-diagonal and the all-triples triangle inequality,
/// plus the two-sided separation property reported as an optional flag (it is
/// not an axiom of a quasi-metric).
ConditionReport check_axioms(const FiniteQuasiMetricSpace& space);

/// Sampled axiom spot-checks for continuous spaces: positivity, zero
/// diagonal and the triangle inequality over seeded random triples.
ConditionReport check_axioms_sampled(const QuasiMetricSpace& space, int triples,
                                     std::uint64_t seed, double tol = 1e-12);

/// Builtin metric catalog: "sorgenfrey", "one_sided_diff", "half_line_log",
/// "circular_railroad", "remark46". The Minkowski gauge needs parameters and
/// has its own factory.
QuasiMetricSpace make_builtin_space(const std::string& name);

/// Gauge of the halfspace intersection {z : a_i . z <= b_i} (all b_i > 0, the
/// set must be bounded with 0 interior): q(x, y) = max_i (a_i . (y-x)) / b_i,
/// clamped at 0.
QuasiMetricSpace make_minkowski_gauge(const std::vector<std::vector<double>>& normals,
                                      const std::vector<double>& offsets);

}  // namespace qmt
