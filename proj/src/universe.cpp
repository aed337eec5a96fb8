#include "qmt/universe.hpp"

#include <cmath>
#include <stdexcept>

#include "qmt/rng.hpp"

namespace qmt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Window used to grid/sample unbounded directions.
constexpr double kWindowLo = -10.0;
constexpr double kWindowHi = 10.0;
constexpr double kHalfLineLo = 0.015625;  // 2^-6, exactly representable
constexpr double kHalfLineHi = 10.0;

double clamp_lo(double lo) { return std::isfinite(lo) ? lo : kWindowLo; }
double clamp_hi(double hi) { return std::isfinite(hi) ? hi : kWindowHi; }

}  // namespace

bool Universe::contains(const Point& p) const {
    if (is_finite()) return p.is_finite() && p.index() < size();
    if (is_interval()) {
        if (!p.is_scalar()) return false;
        const auto& b = interval_bounds();
        return p.value() >= b.lo && p.value() <= b.hi;
    }
    if (is_circle()) return p.is_scalar() && p.value() >= 0.0 && p.value() < kTwoPi;
    if (is_half_line()) return p.is_scalar() && p.value() > 0.0;
    const auto& b = box_bounds();
    if (!p.is_vector() || p.coords().size() != b.lo.size()) return false;
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        if (p.coords()[i] < b.lo[i] || p.coords()[i] > b.hi[i]) return false;
    }
    return true;
}

void Universe::require(const Point& p, const char* who) const {
    if (!contains(p)) {
        throw std::invalid_argument(std::string(who) + ": point outside the universe");
    }
}

bool Universe::operator==(const Universe& other) const {
    if (rep_.index() != other.rep_.index()) return false;
    if (is_finite()) return labels() == other.labels();
    if (is_interval()) {
        return interval_bounds().lo == other.interval_bounds().lo &&
               interval_bounds().hi == other.interval_bounds().hi;
    }
    if (is_box()) {
        return box_bounds().lo == other.box_bounds().lo &&
               box_bounds().hi == other.box_bounds().hi;
    }
    return true;
}

std::vector<Point> universe_grid(const Universe& u, int n) {
    std::vector<Point> out;
    if (u.is_finite()) {
        out.reserve(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) out.push_back(Point::finite(i));
        return out;
    }
    if (n < 2) n = 2;
    out.reserve(static_cast<std::size_t>(n));
    if (u.is_interval()) {
        const double lo = clamp_lo(u.interval_bounds().lo);
        const double hi = clamp_hi(u.interval_bounds().hi);
        for (int k = 0; k < n; ++k) {
            out.push_back(Point::scalar(lo + (hi - lo) * k / (n - 1)));
        }
        return out;
    }
    if (u.is_circle()) {
        for (int k = 0; k < n; ++k) out.push_back(Point::scalar(kTwoPi * k / n));
        return out;
    }
    if (u.is_half_line()) {
        for (int k = 0; k < n; ++k) {
            out.push_back(Point::scalar(kHalfLineLo + (kHalfLineHi - kHalfLineLo) * k / (n - 1)));
        }
        return out;
    }
    // Boxes: diagonal grid; per-axis product grids blow up in dimension.
    const auto& b = u.box_bounds();
    for (int k = 0; k < n; ++k) {
        std::vector<double> coords(b.lo.size());
        for (std::size_t i = 0; i < b.lo.size(); ++i) {
            const double lo = clamp_lo(b.lo[i]);
            const double hi = clamp_hi(b.hi[i]);
            coords[i] = lo + (hi - lo) * k / (n - 1);
        }
        out.push_back(Point::vector(std::move(coords)));
    }
    return out;
}

Point sample_point(const Universe& u, std::mt19937_64& rng) {
    if (u.is_finite()) return Point::finite(uniform_below(rng, u.size()));
    if (u.is_interval()) {
        const auto& b = u.interval_bounds();
        return Point::scalar(uniform_in(rng, clamp_lo(b.lo), clamp_hi(b.hi)));
    }
    if (u.is_circle()) return Point::scalar(uniform_in(rng, 0.0, kTwoPi));
    if (u.is_half_line()) return Point::scalar(uniform_in(rng, kHalfLineLo, kHalfLineHi));
    const auto& b = u.box_bounds();
    std::vector<double> coords(b.lo.size());
    for (std::size_t i = 0; i < b.lo.size(); ++i) {
        coords[i] = uniform_in(rng, clamp_lo(b.lo[i]), clamp_hi(b.hi[i]));
    }
    return Point::vector(std::move(coords));
}

}  // namespace qmt
