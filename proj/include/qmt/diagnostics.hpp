#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qmt/setmap.hpp"

namespace qmt {

/// Knobs shared by the finite-horizon checkers.
struct CheckOptions {
    int window = 10;   // tail window for convergence / limit detection
    int grid = SetValuedMap::kDefaultGrid;
    std::vector<Point> limit_candidates;  // extra candidates for limit scans
    int budget = 20;   // probe-trace length for all-sequences conditions
    // Threshold for detecting a forward/backward limit on continuous spaces;
    // finite universes always use exact zero comparisons instead.
    double limit_epsilon = 1e-6;
};

/// Finite-horizon forward/backward Cauchy verdict: holds when some in-trace
/// index N leaves every later pair within epsilon (the discovered N is
/// reported); fails with the violating pair when even the final pair misses
/// the bound; undetermined on traces too short to exhibit any pair.
/// epsilon == 0 switches to exact zero comparisons (finite-space use).
Verdict is_cauchy(std::span<const Point> trace, const QuasiMetricSpace& space, Direction direction,
                  double epsilon);

/// Tail-window convergence of the one-sided distance to the candidate.
Verdict converges_to(std::span<const Point> trace, const QuasiMetricSpace& space,
                     const Point& candidate, Direction direction, double epsilon, int window = 10);

/// Conditions on one generalized Picard sequence with a common-point
/// candidate: nested images (E1), vanishing sup-gap (E2, rendered as the
/// terminal gap sitting at tol), candidate in every image (E3), at most one
/// forward limit among the scanned candidates (E4, at limit_epsilon), and
/// candidate image contained in every image (E5). Throws if the trace is not
/// a Picard sequence of the map.
ConditionReport check_E_conditions(std::span<const Point> trace, const SetValuedMap& map,
                                   const QuasiMetricSpace& space, const Point& candidate,
                                   double tol, const CheckOptions& opt = {});

/// All-sequences conditions: transitive image nesting (F1), a common point
/// for every vanishing-sup-gap trace (F2), at most one forward limit per
/// forward-Cauchy trace (F3), vanishing step distances (F4). F1 and F4 are
/// exact on finite extensional maps (F4 through cycle analysis of the image
/// graph); F2/F3 are evaluated per supplied trace, or on internally generated
/// probe traces when none are supplied on a finite universe.
ConditionReport check_F_conditions(const SetValuedMap& map, const QuasiMetricSpace& space,
                                   std::span<const std::vector<Point>> traces, double tol,
                                   const CheckOptions& opt = {});

/// Metric-space conditions: closed images (A1), reflexive images (A2),
/// transitive nesting (A3), vanishing step distances along every sequence
/// (A4). Requires a symmetric distance; an asymmetric space yields
/// undetermined verdicts with the reason attached. The closedness flag is
/// caller-supplied on non-finite universes.
ConditionReport check_A_conditions(const SetValuedMap& map, const QuasiMetricSpace& space,
                                   double tol, std::optional<bool> closed_images = std::nullopt,
                                   const CheckOptions& opt = {});

/// The E-system measured with a generalized distance p instead of q: nesting
/// (B1), vanishing p-sup-gap (B2), candidate membership (B3), and the
/// optional strengthening B4 (nonempty candidate image contained in every
/// image). The trace must p-converge to the candidate within the tail
/// window; otherwise all verdicts come back undetermined.
ConditionReport check_B_conditions(std::span<const Point> trace, const SetValuedMap& map,
                                   const TauFunction& tau, const Point& candidate, double tol,
                                   const CheckOptions& opt = {});

/// Preorder-principle conditions for the level-set map of `order`: finite
/// utility infimum over the start level set (C1), no two distinct points of a
/// level set both reaching the level's value (C2), and a common lower bound
/// for the supplied trace (C3, checked only when the trace satisfies the
/// inf-gap decay it presupposes).
ConditionReport check_C_conditions(const Preorder& order, const Utility& phi, const Point& x0,
                                   std::span<const Point> trace, double tol,
                                   const CheckOptions& opt = {});

/// A pair of equal-length sequences used to exercise the tau3 implication.
struct TauSequencePair {
    std::vector<Point> xs, ys;
};

/// tau-function axioms on a finite sample: triangle inequality (tau1), lower
/// semicontinuity (tau2, trivial on finite universes and undetermined
/// otherwise), p-convergence implies d-convergence on the supplied sequence
/// pairs (tau3), and indistancy implies coincidence (tau4).
ConditionReport check_tau_axioms(const TauFunction& tau, std::span<const Point> sample, double tol,
                                 std::span<const TauSequencePair> sequence_pairs = {},
                                 const CheckOptions& opt = {});

}  // namespace qmt
