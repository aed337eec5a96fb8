#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include "qmt/diagnostics.hpp"

namespace qmt {

/// Geometric slack schedule s(n) = c * r^n; defaults to 2^-n.
struct SlackSchedule {
    double c = 1.0;
    double r = 0.5;

    double at(int n) const { return c * std::pow(r, n); }
};

/// How the next iterate is chosen inside the current image: near the sup of
/// the one-sided distance, near the inf of a utility, or by a user chooser.
class SelectionRule {
public:
    using ChooserFn = std::function<std::optional<Point>(const SetValuedMap&,
                                                         const QuasiMetricSpace&, const Point&,
                                                         int)>;

    enum class Kind { near_sup, near_inf, user };

    static SelectionRule near_sup(SlackSchedule slack = {});
    static SelectionRule near_inf(Utility phi, SlackSchedule slack = {});
    static SelectionRule user(ChooserFn chooser);

    Kind kind() const { return kind_; }
    const SlackSchedule& slack() const { return slack_; }
    const Utility& phi() const { return phi_; }
    const ChooserFn& chooser() const { return chooser_; }

private:
    SelectionRule() = default;

    Kind kind_ = Kind::near_sup;
    SlackSchedule slack_;
    Utility phi_;
    ChooserFn chooser_;
};

enum class StopReason { empty_image, gap_converged, budget_exhausted };

const char* to_string(StopReason r);

struct TraceStep {
    Point x;
    std::optional<double> step_dist;  // q(x_n, x_{n+1}); absent on the last step
    std::optional<double> sup_gap;    // sup over the image of q(x_n, .)
    bool sup_gap_exact = true;
    std::optional<double> inf_gap;    // near-inf runs: phi(x_n) - inf over previous image
    double slack = 0.0;               // s(n)
};

/// A finite generalized Picard sequence with per-step distances, sup-gap
/// estimates and selection metadata. Consecutive points always satisfy
/// x_{n+1} in the image of x_n.
struct PicardTrace {
    std::vector<TraceStep> steps;
    StopReason reason = StopReason::budget_exhausted;

    std::vector<Point> points() const;
    std::size_t length() const { return steps.size(); }
    const Point& last() const { return steps.back().x; }
};

enum class PointClass { invariant, nonvariant, neither };

struct Classification {
    PointClass kind = PointClass::neither;
    std::optional<Point> witness;  // image member other than the point itself
    bool exact = true;             // false when judged from a sampled image
};

/// Membership slack for one step: the chosen point lies within s(n) of the
/// image's sup distance (near_sup) or inf utility (near_inf). Returns the
/// stop signal (nullopt) on an empty image.
std::optional<Point> select_next(const SetValuedMap& map, const QuasiMetricSpace& space,
                                 const Point& x, const SelectionRule& rule, int n,
                                 int grid = SetValuedMap::kDefaultGrid);

/// Repeats select_next until the image empties, the sup-gap falls to
/// gap_tol, or the step budget runs out. A negative gap_tol disables the
/// gap stop (useful to extend traces past convergence).
PicardTrace iterate(const SetValuedMap& map, const QuasiMetricSpace& space, const Point& x0,
                    const SelectionRule& rule, int budget, double gap_tol,
                    int grid = SetValuedMap::kDefaultGrid);

/// invariant: image == {x}; nonvariant: image within {x} (empty included);
/// neither: a witness image member differing from x.
Classification classify_point(const SetValuedMap& map, const QuasiMetricSpace& space,
                              const Point& x, int grid = SetValuedMap::kDefaultGrid);

enum class Outcome { invariant_point, nonvariant_point, budget_exhausted, condition_violation };

const char* to_string(Outcome o);

struct SearchResult {
    PicardTrace trace;
    Outcome outcome = Outcome::budget_exhausted;
    std::optional<Point> point;         // found point, or best candidate on budget stop
    std::optional<double> residual_gap;  // budget stop only
    ConditionReport e_report;            // E-conditions of the produced trace
    bool exact = true;                   // classification judged on exact images
};

/// Runs iterate and classifies the terminal candidate; the E-condition
/// report for the produced trace is attached either way.
SearchResult find_invariant_point(const SetValuedMap& map, const QuasiMetricSpace& space,
                                  const Point& x0, const SelectionRule& rule, int budget,
                                  double gap_tol, double epsilon,
                                  const CheckOptions& opt = {});

}  // namespace qmt
