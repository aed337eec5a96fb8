#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qmt/point.hpp"

namespace qmt {

struct FiniteUniverse {
    std::vector<std::string> labels;
};

/// Closed real interval; endpoints may be infinite.
struct IntervalUniverse {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct BoxUniverse {
    std::vector<double> lo, hi;  // per-axis bounds, may be infinite
};

/// Angles in [0, 2*pi).
struct CircleUniverse {};

/// Strictly positive reals.
struct HalfLineUniverse {};

class Universe {
public:
    using Rep = std::variant<FiniteUniverse, IntervalUniverse, BoxUniverse, CircleUniverse,
                             HalfLineUniverse>;

    Universe() : rep_(IntervalUniverse{}) {}
    Universe(Rep rep) : rep_(std::move(rep)) {}  // NOLINT: implicit by design

    static Universe finite(std::vector<std::string> labels) {
        return Universe(FiniteUniverse{std::move(labels)});
    }
    static Universe interval(double lo, double hi) { return Universe(IntervalUniverse{lo, hi}); }
    static Universe real_line() { return Universe(IntervalUniverse{}); }
    static Universe box(std::vector<double> lo, std::vector<double> hi) {
        return Universe(BoxUniverse{std::move(lo), std::move(hi)});
    }
    static Universe circle() { return Universe(CircleUniverse{}); }
    static Universe half_line() { return Universe(HalfLineUniverse{}); }

    bool is_finite() const { return std::holds_alternative<FiniteUniverse>(rep_); }
    bool is_interval() const { return std::holds_alternative<IntervalUniverse>(rep_); }
    bool is_circle() const { return std::holds_alternative<CircleUniverse>(rep_); }
    bool is_half_line() const { return std::holds_alternative<HalfLineUniverse>(rep_); }
    bool is_box() const { return std::holds_alternative<BoxUniverse>(rep_); }
    bool is_scalar() const { return is_interval() || is_circle() || is_half_line(); }

    const IntervalUniverse& interval_bounds() const { return std::get<IntervalUniverse>(rep_); }
    const BoxUniverse& box_bounds() const { return std::get<BoxUniverse>(rep_); }

    /// Number of points of a finite universe.
    std::size_t size() const { return std::get<FiniteUniverse>(rep_).labels.size(); }
    const std::string& label(std::size_t i) const {
        return std::get<FiniteUniverse>(rep_).labels.at(i);
    }
    const std::vector<std::string>& labels() const {
        return std::get<FiniteUniverse>(rep_).labels;
    }

    bool contains(const Point& p) const;

    /// Throws std::invalid_argument naming `who` when p lies outside.
    void require(const Point& p, const char* who) const;

    bool operator==(const Universe& other) const;

private:
    Rep rep_;
};

/// Deterministic evenly spaced points covering the universe (all points of a
/// finite universe). Unbounded directions are truncated to a fixed window.
std::vector<Point> universe_grid(const Universe& u, int n);

/// Seeded uniform sample, again windowed on unbounded universes.
Point sample_point(const Universe& u, std::mt19937_64& rng);

}  // namespace qmt
