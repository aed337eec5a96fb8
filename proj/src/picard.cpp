#include "qmt/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmt {

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::empty_image: return "empty_image";
        case StopReason::gap_converged: return "gap_converged";
        case StopReason::budget_exhausted: return "budget_exhausted";
    }
    return "budget_exhausted";
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::invariant_point: return "invariant_point";
        case Outcome::nonvariant_point: return "nonvariant_point";
        case Outcome::budget_exhausted: return "budget_exhausted";
        case Outcome::condition_violation: return "condition_violation";
    }
    return "budget_exhausted";
}

namespace {

void validate_slack(const SlackSchedule& slack) {
    if (!(slack.c > 0.0) || !(slack.r > 0.0) || !(slack.r < 1.0)) {
        throw std::invalid_argument("slack schedule needs c > 0 and 0 < r < 1");
    }
}

}  // namespace

SelectionRule SelectionRule::near_sup(SlackSchedule slack) {
    validate_slack(slack);
    SelectionRule rule;
    rule.kind_ = Kind::near_sup;
    rule.slack_ = slack;
    return rule;
}

SelectionRule SelectionRule::near_inf(Utility phi, SlackSchedule slack) {
    if (!phi.value) throw std::invalid_argument("near_inf selection needs a utility");
    validate_slack(slack);
    SelectionRule rule;
    rule.kind_ = Kind::near_inf;
    rule.slack_ = slack;
    rule.phi_ = std::move(phi);
    return rule;
}

SelectionRule SelectionRule::user(ChooserFn chooser) {
    if (!chooser) throw std::invalid_argument("user selection needs a chooser");
    SelectionRule rule;
    rule.kind_ = Kind::user;
    rule.chooser_ = std::move(chooser);
    return rule;
}

std::vector<Point> PicardTrace::points() const {
    std::vector<Point> pts;
    pts.reserve(steps.size());
    for (const auto& s : steps) pts.push_back(s.x);
    return pts;
}

namespace {

// Deterministic tie-break: best score first, then least point.
Point pick_best(const std::vector<Point>& candidates,
                const std::function<double(const Point&)>& score, bool maximize) {
    const Point* best = &candidates.front();
    double best_score = score(*best);
    for (const Point& u : candidates) {
        const double s = score(u);
        const bool better = maximize ? s > best_score : s < best_score;
        if (better || (s == best_score && u < *best)) {
            best = &u;
            best_score = s;
        }
    }
    return *best;
}

}  // namespace

std::optional<Point> select_next(const SetValuedMap& map, const QuasiMetricSpace& space,
                                 const Point& x, const SelectionRule& rule, int n, int grid) {
    space.universe().require(x, "select_next");
    if (rule.kind() == SelectionRule::Kind::user) {
        auto choice = rule.chooser()(map, space, x, n);
        if (choice && !map.contains(x, *choice)) {
            throw std::invalid_argument("user chooser returned a point outside the image");
        }
        return choice;
    }
    const ImageSet img = map.image(x, grid);  // throws when not enumerable
    if (img.is_empty()) return std::nullopt;
    const auto candidates = img.enumerate(grid);
    if (rule.kind() == SelectionRule::Kind::near_sup) {
        return pick_best(
            candidates, [&](const Point& u) { return space.distance_unchecked(x, u); },
            /*maximize=*/true);
    }
    const Utility& phi = rule.phi();
    return pick_best(candidates, [&](const Point& u) { return phi(u); }, /*maximize=*/false);
}

PicardTrace iterate(const SetValuedMap& map, const QuasiMetricSpace& space, const Point& x0,
                    const SelectionRule& rule, int budget, double gap_tol, int grid) {
    if (budget < 1) throw std::invalid_argument("iterate needs budget >= 1");
    space.universe().require(x0, "iterate");

    PicardTrace trace;
    Point x = x0;
    std::optional<double> prev_inf;  // inf of the utility over the previous image

    for (int n = 0;; ++n) {
        TraceStep step;
        step.x = x;
        step.slack = rule.slack().at(n);
        if (rule.kind() == SelectionRule::Kind::near_inf && prev_inf) {
            const double phi_x = rule.phi()(x);
            // extended-real utilities: record the gap only when well defined
            if (std::isfinite(phi_x) && std::isfinite(*prev_inf)) {
                step.inf_gap = phi_x - *prev_inf;
            }
        }

        ImageSet img;
        bool enumerable = map.has_enumerable_images();
        if (enumerable) img = map.image(x, grid);

        if (enumerable) {
            const SupGap gap = sup_distance_over_image(space, x, img, grid);
            step.sup_gap = gap.value;
            step.sup_gap_exact = gap.exact;
        }

        if (enumerable && img.is_empty()) {
            trace.steps.push_back(std::move(step));
            trace.reason = StopReason::empty_image;
            return trace;
        }
        if (step.sup_gap && gap_tol >= 0.0 && *step.sup_gap <= gap_tol) {
            trace.steps.push_back(std::move(step));
            trace.reason = StopReason::gap_converged;
            return trace;
        }
        if (n == budget) {
            trace.steps.push_back(std::move(step));
            trace.reason = StopReason::budget_exhausted;
            return trace;
        }

        std::optional<Point> next;
        try {
            next = select_next(map, space, x, rule, n, grid);
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument("iterate failed at step " + std::to_string(n) + ": " +
                                        err.what());
        }
        if (!next) {
            trace.steps.push_back(std::move(step));
            trace.reason = StopReason::empty_image;
            return trace;
        }

        step.step_dist = space.distance_unchecked(x, *next);
        if (rule.kind() == SelectionRule::Kind::near_inf && enumerable) {
            double inf = std::numeric_limits<double>::infinity();
            for (const Point& u : img.enumerate(grid)) inf = std::min(inf, rule.phi()(u));
            prev_inf = inf;
        }
        trace.steps.push_back(std::move(step));
        x = *next;
    }
}

Classification classify_point(const SetValuedMap& map, const QuasiMetricSpace& space,
                              const Point& x, int grid) {
    space.universe().require(x, "classify_point");
    Classification cls;
    const ImageSet img = map.image(x, grid);  // throws when unrepresentable
    cls.exact = img.exact;

    if (img.is_interval()) {
        const auto& iv = img.interval();
        if (iv.empty()) {
            cls.kind = PointClass::nonvariant;
        } else if (iv.lo == iv.hi && Point::scalar(iv.lo) == x) {
            cls.kind = PointClass::invariant;
        } else {
            cls.kind = PointClass::neither;
            cls.witness = Point::scalar(Point::scalar(iv.lo) == x ? iv.hi : iv.lo);
            // a witness inside the image distinct from x is definitive
            cls.exact = true;
        }
        return cls;
    }

    const auto& pts = img.finite().points;
    if (pts.empty()) {
        cls.kind = PointClass::nonvariant;
        if (!map.contains(x, x)) return cls;
        // a sampler can miss x itself; membership is exact, so correct for it
        cls.kind = PointClass::invariant;
        return cls;
    }
    for (const Point& u : pts) {
        if (u != x) {
            cls.kind = PointClass::neither;
            cls.witness = u;
            cls.exact = true;
            return cls;
        }
    }
    cls.kind = PointClass::invariant;
    return cls;
}

SearchResult find_invariant_point(const SetValuedMap& map, const QuasiMetricSpace& space,
                                  const Point& x0, const SelectionRule& rule, int budget,
                                  double gap_tol, double epsilon, const CheckOptions& opt) {
    SearchResult result;
    result.trace = iterate(map, space, x0, rule, budget, gap_tol, opt.grid);
    const Point xbar = result.trace.last();
    result.point = xbar;

    const auto points = result.trace.points();
    result.e_report = check_E_conditions(points, map, space, xbar, epsilon, opt);

    switch (result.trace.reason) {
        case StopReason::empty_image: {
            const Classification cls = classify_point(map, space, xbar, opt.grid);
            result.outcome = Outcome::nonvariant_point;
            result.exact = cls.exact;
            break;
        }
        case StopReason::gap_converged: {
            const Classification cls = classify_point(map, space, xbar, opt.grid);
            result.exact = cls.exact;
            if (cls.kind == PointClass::invariant) {
                result.outcome = Outcome::invariant_point;
            } else if (cls.kind == PointClass::nonvariant) {
                result.outcome = Outcome::nonvariant_point;
            } else {
                // the gap vanished yet the image still holds another point:
                // a separation failure the attached report makes visible
                result.outcome = Outcome::condition_violation;
            }
            break;
        }
        case StopReason::budget_exhausted: {
            result.outcome = Outcome::budget_exhausted;
            result.residual_gap = result.trace.steps.back().sup_gap;
            break;
        }
    }
    return result;
}

}  // namespace qmt
