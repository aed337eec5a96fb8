#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmt/picard.hpp"

namespace qmt {

enum class InstanceProfile { nested, arbitrary, preorder };

const char* to_string(InstanceProfile p);

/// Desk-scale finite test instance: a repaired distance matrix, an
/// extensional map, and optionally the preorder/utility pair that induced it.
struct FiniteInstance {
    FiniteQuasiMetricSpace space;
    std::vector<std::vector<std::size_t>> images;         // extensional table
    std::optional<std::vector<bool>> order;               // leq[u * n + x]
    std::optional<std::vector<double>> phi;               // utility by index
    std::uint64_t seed = 0;
    InstanceProfile profile = InstanceProfile::nested;

    SetValuedMap map() const;
    QuasiMetricSpace quasi_space() const { return space.to_space(); }
    Preorder preorder() const;  // requires order
    Utility utility() const;    // requires phi

    nlohmann::json to_json() const;
    static FiniteInstance from_json(const nlohmann::json& j);
};

/// Seed-deterministic instance generator, 2 <= n <= 8. Distances are drawn
/// as small integers and repaired to a valid quasi-metric by the asymmetric
/// all-pairs shortest-path closure; the nested/preorder profiles derive the
/// map from a random preorder's level sets so transitive nesting holds by
/// construction.
FiniteInstance random_instance(int n, std::uint64_t seed, InstanceProfile profile);

/// In-place min-plus closure: enforces the triangle inequality while
/// preserving nonnegativity, the zero diagonal, and asymmetry.
void metric_closure_repair(std::vector<double>& matrix, std::size_t n);

/// Exact intersection of the extensional images along the trace.
std::vector<std::size_t> intersection_images(const SetValuedMap& map,
                                             std::span<const Point> trace);

struct TheoremCheck {
    enum class Result { verified, precondition_failed, violation };

    Result result = Result::verified;
    std::string detail;           // failed condition or violated conclusion
    std::vector<std::size_t> common_points;  // the computed intersection

    bool verified() const { return result == Result::verified; }
};

/// Checks the common-point conclusion for a trace whose E1-E4 verdicts hold
/// exactly: the image intersection must be exactly {xbar}, and when E5 also
/// holds the image of xbar must lie within {xbar} (with equality when
/// nonempty). Unmet preconditions are reported, not asserted; a violation
/// with met preconditions is a toolkit bug.
TheoremCheck verify_unified_theorem(const FiniteInstance& instance, std::span<const Point> trace,
                                    const Point& xbar, double tol = 0.0);

enum class PropertyId {
    prop42,         // nested images + vanishing sup-gap force forward Cauchy
    prop43,         // a backward common limit upgrades to E3 + E4 under separation
    prop44,         // common points are forward limits on forward-complete spaces
    thm45,          // the all-sequences conditions yield a nonvariant point
    reduction_qiu,  // utility pseudometric reduction reaches a minimal point
    reduction_kq,   // induced quasi-metric from a generalized distance
    thm41_gate      // the common-point conclusion over seeded instances
};

const char* to_string(PropertyId p);
PropertyId property_from_string(const std::string& name);

enum class ExecutionMode { serial, parallel };

struct SweepPlan {
    PropertyId property = PropertyId::prop42;
    int count = 200;
    std::vector<int> sizes = {2, 3, 4, 5, 6};
    std::uint64_t seed = 1;
    int budget = 16;
    ExecutionMode mode = ExecutionMode::serial;
};

struct SweepViolation {
    int job = 0;
    std::uint64_t instance_seed = 0;
    int size = 0;
    std::string detail;
    nlohmann::json dump;  // full instance + trace for replay
};

struct SweepReport {
    PropertyId property = PropertyId::prop42;
    std::uint64_t seed = 0;
    int count = 0;
    std::vector<int> sizes;
    int budget = 0;
    int generated = 0;
    int hypothesis_satisfied = 0;
    int conclusion_verified = 0;
    std::vector<SweepViolation> violations;

    nlohmann::json to_json() const;
};

/// Generates `count` seeded instances, filters the ones whose hypotheses
/// hold exactly, and asserts the respective conclusion on those. The
/// parallel mode fans instances out over OpenMP threads; results are merged
/// in job order, so both modes produce identical reports.
SweepReport run_sweep(const SweepPlan& plan);

/// Re-runs the checks recorded in a sweep violation dump and returns the
/// fresh detail string ("ok" when the conclusion now verifies).
std::string replay_violation(const nlohmann::json& dump);

}  // namespace qmt
