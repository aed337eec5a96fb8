#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qmt {

/// A point of a universe: an index into a finite label set, a real scalar
/// (intervals, the circle, the half-line), or a real vector (boxes).
/// Equality is exact representation equality; the ordering is only used for
/// deterministic tie-breaking.
class Point {
public:
    Point() = default;

    static Point finite(std::size_t index) {
        Point p;
        p.rep_ = index;
        return p;
    }
    static Point scalar(double value) {
        Point p;
        p.rep_ = value;
        return p;
    }
    static Point vector(std::vector<double> coords) {
        Point p;
        p.rep_ = std::move(coords);
        return p;
    }

    bool is_finite() const noexcept { return std::holds_alternative<std::size_t>(rep_); }
    bool is_scalar() const noexcept { return std::holds_alternative<double>(rep_); }
    bool is_vector() const noexcept { return std::holds_alternative<std::vector<double>>(rep_); }

    std::size_t index() const { return get<std::size_t>("a finite-universe index"); }
    double value() const { return get<double>("a scalar value"); }
    const std::vector<double>& coords() const {
        return get<std::vector<double>>("vector coordinates");
    }

    friend bool operator==(const Point& a, const Point& b) { return a.rep_ == b.rep_; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    friend bool operator<(const Point& a, const Point& b) { return a.rep_ < b.rep_; }

private:
    template <class T>
    const T& get(const char* what) const {
        if (const T* v = std::get_if<T>(&rep_)) return *v;
        throw std::invalid_argument(std::string("point does not hold ") + what);
    }

    std::variant<std::size_t, double, std::vector<double>> rep_;
};

inline void to_json(nlohmann::json& j, const Point& p) {
    if (p.is_finite()) {
        j = p.index();
    } else if (p.is_scalar()) {
        j = p.value();
    } else {
        j = p.coords();
    }
}

}  // namespace qmt
