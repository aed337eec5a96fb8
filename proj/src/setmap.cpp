#include "qmt/setmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qmt/rng.hpp"

namespace qmt {

namespace {

std::vector<Point> interval_grid(const IntervalImage& iv, int grid) {
    std::vector<Point> out;
    if (iv.empty()) return out;
    if (grid < 2 || iv.lo == iv.hi) {
        out.push_back(Point::scalar(iv.lo));
        if (iv.hi != iv.lo) out.push_back(Point::scalar(iv.hi));
        return out;
    }
    out.reserve(static_cast<std::size_t>(grid));
    for (int k = 0; k < grid; ++k) {
        double v = iv.lo + (iv.hi - iv.lo) * k / (grid - 1);
        if (k == grid - 1) v = iv.hi;  // endpoint exactly, no rounding residue
        out.push_back(Point::scalar(v));
    }
    return out;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

bool ImageSet::is_empty() const {
    if (is_interval()) return interval().empty();
    return finite().points.empty();
}

bool ImageSet::contains(const Point& u) const {
    if (is_interval()) {
        const auto& iv = interval();
        return u.is_scalar() && !iv.empty() && u.value() >= iv.lo && u.value() <= iv.hi;
    }
    const auto& pts = finite().points;
    return std::binary_search(pts.begin(), pts.end(), u);
}

std::vector<Point> ImageSet::enumerate(int grid) const {
    if (is_interval()) return interval_grid(interval(), grid);
    return finite().points;
}

SetValuedMap SetValuedMap::extensional(Universe universe,
                                       std::vector<std::vector<std::size_t>> images) {
    if (!universe.is_finite()) {
        throw std::invalid_argument("extensional maps need a finite universe");
    }
    if (images.size() != universe.size()) {
        throw std::invalid_argument("extensional map table size differs from the universe");
    }
    for (auto& img : images) {
        img = sorted_unique(std::move(img));
        if (!img.empty() && img.back() >= universe.size()) {
            throw std::invalid_argument("extensional image point outside the universe");
        }
    }
    return SetValuedMap(std::move(universe), Extensional{std::move(images)});
}

SetValuedMap SetValuedMap::interval(Universe universe, EndpointFn lo, EndpointFn hi) {
    if (!universe.is_scalar()) {
        throw std::invalid_argument("interval maps need a scalar universe");
    }
    if (!lo || !hi) throw std::invalid_argument("interval maps need both endpoint functions");
    return SetValuedMap(std::move(universe), Interval{std::move(lo), std::move(hi)});
}

SetValuedMap SetValuedMap::predicate(Universe universe, MembershipFn member, SamplerFn sampler) {
    if (!member) throw std::invalid_argument("predicate maps need a membership test");
    return SetValuedMap(std::move(universe), Predicate{std::move(member), std::move(sampler)});
}

ImageSet SetValuedMap::image(const Point& x, int grid) const {
    universe_.require(x, "image");
    if (const auto* ext = std::get_if<Extensional>(&rule_)) {
        FiniteImage img;
        img.points.reserve(ext->images[x.index()].size());
        for (std::size_t u : ext->images[x.index()]) img.points.push_back(Point::finite(u));
        return ImageSet{std::move(img), true};
    }
    if (const auto* iv = std::get_if<Interval>(&rule_)) {
        IntervalImage img{iv->lo(x.value()), iv->hi(x.value())};
        if (!img.empty() && (!universe_.contains(Point::scalar(img.lo)) ||
                             !universe_.contains(Point::scalar(img.hi)))) {
            throw std::invalid_argument("interval image endpoint escapes the universe");
        }
        return ImageSet{std::move(img), true};
    }
    const auto& pred = std::get<Predicate>(rule_);
    if (!pred.sampler) {
        throw std::invalid_argument(
            "image is not enumerable: predicate map has no sampler");
    }
    FiniteImage img;
    for (const Point& u : pred.sampler(x)) {
        if (pred.member(x, u)) img.points.push_back(u);
    }
    std::sort(img.points.begin(), img.points.end());
    img.points.erase(std::unique(img.points.begin(), img.points.end()), img.points.end());
    (void)grid;
    return ImageSet{std::move(img), false};
}

bool SetValuedMap::contains(const Point& x, const Point& u) const {
    universe_.require(x, "contains");
    universe_.require(u, "contains");
    if (const auto* ext = std::get_if<Extensional>(&rule_)) {
        const auto& img = ext->images[x.index()];
        return std::binary_search(img.begin(), img.end(), u.index());
    }
    if (const auto* iv = std::get_if<Interval>(&rule_)) {
        const double lo = iv->lo(x.value());
        const double hi = iv->hi(x.value());
        return u.value() >= lo && u.value() <= hi;
    }
    return std::get<Predicate>(rule_).member(x, u);
}

bool SetValuedMap::has_enumerable_images() const {
    if (const auto* pred = std::get_if<Predicate>(&rule_)) return bool(pred->sampler);
    return true;
}

SubsetCheck image_subset(const ImageSet& a, const ImageSet& b,
                         const std::function<bool(const Point&)>& in_b) {
    SubsetCheck check;
    check.exact = a.exact;
    if (a.is_empty()) return check;
    if (a.is_interval()) {
        const auto& ia = a.interval();
        if (b.is_interval()) {
            const auto& ib = b.interval();
            if (ib.empty() || ia.lo < ib.lo || ia.hi > ib.hi) {
                check.holds = false;
                check.witness = Point::scalar(ib.empty() || ia.lo < ib.lo ? ia.lo : ia.hi);
            }
            return check;
        }
        // A nondegenerate interval can never fit inside a finite set: probe
        // distinct interval points until one falls outside b.
        if (ia.lo == ia.hi) {
            if (!in_b(Point::scalar(ia.lo))) {
                check.holds = false;
                check.witness = Point::scalar(ia.lo);
            }
            return check;
        }
        const std::size_t probes = b.finite().points.size() + 2;
        for (std::size_t k = 0; k < probes; ++k) {
            Point u = Point::scalar(ia.lo + (ia.hi - ia.lo) * double(k) / double(probes - 1));
            if (!in_b(u)) {
                check.holds = false;
                check.witness = u;
                return check;
            }
        }
        check.holds = false;
        check.witness = Point::scalar((ia.lo + ia.hi) / 2.0);
        return check;
    }
    for (const Point& u : a.finite().points) {
        if (!in_b(u)) {
            check.holds = false;
            check.witness = u;
            return check;
        }
    }
    return check;
}

SupGap sup_distance_over_image(const QuasiMetricSpace& space, const Point& x, const ImageSet& img,
                               int grid) {
    SupGap gap;
    if (img.is_empty()) return gap;  // sup over the empty set reported as 0
    double best = 0.0;
    if (img.is_interval()) {
        for (const Point& u : img.enumerate(grid)) {
            best = std::max(best, space.distance_unchecked(x, u));
        }
        gap.value = best;
        gap.exact = false;  // grid evaluation; exact only when the sup sits on a grid point
        return gap;
    }
    for (const Point& u : img.finite().points) {
        best = std::max(best, space.distance_unchecked(x, u));
    }
    gap.value = best;
    gap.exact = img.exact;
    gap.sampler_based = !img.exact;
    return gap;
}

Preorder Preorder::finite(Universe universe, std::vector<bool> leq_row_major) {
    if (!universe.is_finite()) {
        throw std::invalid_argument("finite preorders need a finite universe");
    }
    if (leq_row_major.size() != universe.size() * universe.size()) {
        throw std::invalid_argument("preorder relation matrix is not n x n");
    }
    return Preorder(std::move(universe), FiniteRel{std::move(leq_row_major)});
}

Preorder Preorder::scalar_le(Universe universe) {
    if (!universe.is_scalar()) {
        throw std::invalid_argument("scalar_le needs a scalar universe");
    }
    return Preorder(std::move(universe), ScalarLe{});
}

Preorder Preorder::predicate(Universe universe, RelationFn rel) {
    if (!rel) throw std::invalid_argument("predicate preorders need a relation test");
    return Preorder(std::move(universe), PredicateRel{std::move(rel)});
}

bool Preorder::leq(const Point& u, const Point& x) const {
    universe_.require(u, "leq");
    universe_.require(x, "leq");
    if (const auto* fin = std::get_if<FiniteRel>(&rule_)) {
        return fin->leq[u.index() * universe_.size() + x.index()];
    }
    if (std::holds_alternative<ScalarLe>(rule_)) return u.value() <= x.value();
    return std::get<PredicateRel>(rule_).rel(u, x);
}

ConditionReport check_preorder_axioms(const Preorder& order, int samples, std::uint64_t seed) {
    ConditionReport report("PREORDER");
    const bool finite = order.universe().is_finite();
    const Mode mode = finite ? Mode::exact : Mode::sampled;

    std::vector<Point> pts;
    if (finite) {
        pts = universe_grid(order.universe(), 0);
    } else {
        std::mt19937_64 rng(seed);
        pts.reserve(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i) pts.push_back(sample_point(order.universe(), rng));
    }

    Verdict reflexivity = Verdict::pass(mode, 0.0);
    for (const Point& z : pts) {
        if (!order.leq(z, z)) {
            reflexivity = Verdict::fail(mode, 0.0, {{"z", z}});
            break;
        }
    }
    report.add("reflexivity", reflexivity);

    Verdict transitivity = Verdict::pass(mode, 0.0);
    for (const Point& a : pts) {
        for (const Point& b : pts) {
            if (!order.leq(a, b)) continue;
            for (const Point& c : pts) {
                if (order.leq(b, c) && !order.leq(a, c)) {
                    transitivity = Verdict::fail(mode, 0.0, {{"a", a}, {"b", b}, {"c", c}});
                    break;
                }
            }
            if (transitivity.fails()) break;
        }
        if (transitivity.fails()) break;
    }
    report.add("transitivity", transitivity);

    Verdict antisymmetry = Verdict::pass(mode, 0.0);
    for (const Point& a : pts) {
        for (const Point& b : pts) {
            if (a != b && order.leq(a, b) && order.leq(b, a)) {
                antisymmetry = Verdict::fail(mode, 0.0, {{"a", a}, {"b", b}});
                break;
            }
        }
        if (antisymmetry.fails()) break;
    }
    report.add("antisymmetry", antisymmetry, /*optional=*/true);

    return report;
}

Utility Utility::from_values(std::vector<double> values) {
    return Utility{[values = std::move(values)](const Point& p) { return values.at(p.index()); }};
}

Utility Utility::from_function(std::function<double(double)> f) {
    return Utility{[f = std::move(f)](const Point& p) { return f(p.value()); }};
}

Verdict check_monotone(const Utility& phi, const Preorder& order, std::span<const Point> sample) {
    const Mode mode = order.universe().is_finite() ? Mode::exact : Mode::sampled;
    for (const Point& u : sample) {
        for (const Point& x : sample) {
            if (!order.leq(u, x)) continue;
            if (phi(u) > phi(x)) {
                return Verdict::fail(mode, 0.0,
                                     {{"u", u}, {"x", x}, {"phi_u", phi(u)}, {"phi_x", phi(x)}});
            }
        }
    }
    return Verdict::pass(mode, 0.0);
}

TauFunction TauFunction::from_matrices(const FiniteQuasiMetricSpace& base_metric,
                                       const FiniteQuasiMetricSpace& p_matrix, bool weak) {
    if (base_metric.size() != p_matrix.size()) {
        throw std::invalid_argument("base metric and p matrix differ in size");
    }
    if (!base_metric.symmetric()) {
        throw std::invalid_argument("the base of a tau-function must be a symmetric metric");
    }
    const std::size_t n = p_matrix.size();
    std::vector<double> pm = p_matrix.matrix();
    return TauFunction{
        base_metric.to_space(),
        [pm, n](const Point& x, const Point& y) { return pm[x.index() * n + y.index()]; }, weak};
}

SetValuedMap level_set_map(const Preorder& order, int grid) {
    const Universe& u = order.universe();
    if (u.is_finite()) {
        const std::size_t n = u.size();
        std::vector<std::vector<std::size_t>> images(n);
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t v = 0; v < n; ++v) {
                if (order.leq(Point::finite(v), Point::finite(x))) images[x].push_back(v);
            }
        }
        return SetValuedMap::extensional(u, std::move(images));
    }
    if (order.is_scalar_le() && u.is_interval()) {
        const double lo = u.interval_bounds().lo;
        return SetValuedMap::interval(
            u, [lo](double) { return lo; }, [](double x) { return x; });
    }
    // Black-box relation: membership stays exact, enumeration goes through a
    // grid sampler so downstream sup computations are honestly sampled.
    SetValuedMap::SamplerFn sampler;
    if (u.is_scalar() || u.is_box()) {
        Universe uni = u;
        sampler = [uni, grid](const Point&) { return universe_grid(uni, grid); };
    }
    return SetValuedMap::predicate(
        u, [order](const Point& x, const Point& v) { return order.leq(v, x); },
        std::move(sampler));
}

SetValuedMap descent_map(const Utility& objective, const QuasiMetricSpace& space, double lambda,
                         int grid) {
    if (!(lambda > 0.0)) throw std::invalid_argument("descent_map needs lambda > 0");
    const Universe& u = space.universe();
    Utility f = objective;
    if (u.is_finite()) {
        const std::size_t n = u.size();
        std::vector<std::vector<std::size_t>> images(n);
        for (std::size_t xi = 0; xi < n; ++xi) {
            const Point x = Point::finite(xi);
            const double fx = f(x);
            for (std::size_t ui = 0; ui < n; ++ui) {
                const Point v = Point::finite(ui);
                if (f(v) + lambda * space.distance_unchecked(x, v) <= fx) {
                    images[xi].push_back(ui);
                }
            }
        }
        return SetValuedMap::extensional(u, std::move(images));
    }
    Universe uni = u;
    QuasiMetricSpace sp = space;
    return SetValuedMap::predicate(
        u,
        [f, sp, lambda](const Point& x, const Point& v) {
            return f(v) + lambda * sp.distance_unchecked(x, v) <= f(x);
        },
        [uni, grid](const Point&) { return universe_grid(uni, grid); });
}

QuasiMetricSpace tau_to_quasimetric(const TauFunction& tau, int validation_samples,
                                    std::uint64_t seed) {
    const Universe& u = tau.base.universe();
    std::vector<Point> pts;
    if (u.is_finite()) {
        pts = universe_grid(u, 0);
    } else {
        std::mt19937_64 rng(seed);
        pts.reserve(static_cast<std::size_t>(validation_samples));
        for (int i = 0; i < validation_samples; ++i) pts.push_back(sample_point(u, rng));
    }
    for (const Point& x : pts) {
        for (const Point& y : pts) {
            for (const Point& z : pts) {
                if (tau.p(x, z) > tau.p(x, y) + tau.p(y, z)) {
                    throw std::invalid_argument(
                        "tau_to_quasimetric: p violates the triangle inequality on the "
                        "validation set");
                }
            }
        }
    }
    auto p = tau.p;
    return QuasiMetricSpace(
        u, [p](const Point& x, const Point& y) { return x == y ? 0.0 : p(x, y); },
        "tau_induced");
}

FiniteQuasiMetricSpace utility_pseudometric(const Utility& phi, std::span<const Point> base,
                                            std::vector<std::string> labels) {
    const std::size_t n = base.size();
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = phi(base[i]);
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument("utility_pseudometric: utility is infinite at base point " +
                                        std::to_string(i));
        }
    }
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) labels.push_back("u" + std::to_string(i));
    }
    if (labels.size() != n) {
        throw std::invalid_argument("utility_pseudometric: label count differs from base size");
    }
    std::vector<double> matrix(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            matrix[i * n + j] = std::fabs(values[i] - values[j]);
        }
    }
    return FiniteQuasiMetricSpace(std::move(labels), std::move(matrix));
}

}  // namespace qmt
