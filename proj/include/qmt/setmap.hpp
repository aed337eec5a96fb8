#pragma once

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qmt/space.hpp"

namespace qmt {

/// Finite list of image points, sorted and duplicate-free.
struct FiniteImage {
    std::vector<Point> points;
};

/// Closed interval [lo, hi] of a scalar universe; empty when lo > hi.
struct IntervalImage {
    double lo = 0.0;
    double hi = -1.0;
    bool empty() const { return lo > hi; }
};

/// One image set of a set-valued map. `exact` is false when the set was
/// produced by a predicate map's sampler and may therefore miss points.
struct ImageSet {
    std::variant<FiniteImage, IntervalImage> rep;
    bool exact = true;

    bool is_empty() const;
    bool contains(const Point& u) const;
    bool is_interval() const { return std::holds_alternative<IntervalImage>(rep); }
    const FiniteImage& finite() const { return std::get<FiniteImage>(rep); }
    const IntervalImage& interval() const { return std::get<IntervalImage>(rep); }

    /// Deterministic candidate points covering the image: the listed points,
    /// or a grid over the interval (endpoints included).
    std::vector<Point> enumerate(int grid) const;
};

/// A map from points to point sets. Extensional maps tabulate finite images,
/// interval maps carry endpoint functions on scalar universes, predicate maps
/// answer membership exactly and enumerate candidates through a sampler.
class SetValuedMap {
public:
    using MembershipFn = std::function<bool(const Point&, const Point&)>;  // (x, u)
    using SamplerFn = std::function<std::vector<Point>(const Point&)>;
    using EndpointFn = std::function<double(double)>;

    static constexpr int kDefaultGrid = 1001;

    static SetValuedMap extensional(Universe universe,
                                    std::vector<std::vector<std::size_t>> images);
    static SetValuedMap interval(Universe universe, EndpointFn lo, EndpointFn hi);
    static SetValuedMap predicate(Universe universe, MembershipFn member,
                                  SamplerFn sampler = nullptr);

    /// The image of x; empty images are a legal return. Throws for predicate
    /// maps without a sampler (their images cannot be enumerated).
    ImageSet image(const Point& x, int grid = kDefaultGrid) const;

    /// u in the image of x; exact for every representation.
    bool contains(const Point& x, const Point& u) const;

    /// False only for predicate maps without a sampler.
    bool has_enumerable_images() const;

    const Universe& universe() const { return universe_; }

    bool is_extensional() const { return std::holds_alternative<Extensional>(rule_); }
    const std::vector<std::vector<std::size_t>>& table() const {
        return std::get<Extensional>(rule_).images;
    }

private:
    struct Extensional {
        std::vector<std::vector<std::size_t>> images;  // sorted index sets
    };
    struct Interval {
        EndpointFn lo, hi;
    };
    struct Predicate {
        MembershipFn member;
        SamplerFn sampler;
    };

    SetValuedMap(Universe u, std::variant<Extensional, Interval, Predicate> rule)
        : universe_(std::move(u)), rule_(std::move(rule)) {}

    Universe universe_;
    std::variant<Extensional, Interval, Predicate> rule_;
};

struct SubsetCheck {
    bool holds = true;
    bool exact = true;
    std::optional<Point> witness;  // a point of `a` outside `b`
};

/// a subseteq b, where membership in b is answered by `in_b` (exact) and the
/// interval/interval case short-circuits through endpoints.
SubsetCheck image_subset(const ImageSet& a, const ImageSet& b,
                         const std::function<bool(const Point&)>& in_b);

struct SupGap {
    double value = 0.0;
    bool exact = true;
    bool computable = true;
    // True when the candidates came from a user sampler: the value may
    // under-estimate the sup, so only verdicts it *fails* are sound.
    bool sampler_based = false;
};

/// sup over the image of the one-sided distance from x; interval images are
/// evaluated on an endpoint-inclusive grid, so the value is exact whenever
/// the sup is attained at a grid point.
SupGap sup_distance_over_image(const QuasiMetricSpace& space, const Point& x,
                               const ImageSet& img, int grid = SetValuedMap::kDefaultGrid);

/// A reflexive transitive relation test u <= x over a universe.
class Preorder {
public:
    using RelationFn = std::function<bool(const Point&, const Point&)>;  // (u, x): u <= x

    static Preorder finite(Universe universe, std::vector<bool> leq_row_major);
    static Preorder scalar_le(Universe universe);
    static Preorder predicate(Universe universe, RelationFn rel);

    bool leq(const Point& u, const Point& x) const;
    const Universe& universe() const { return universe_; }
    bool is_finite_relation() const { return std::holds_alternative<FiniteRel>(rule_); }
    bool is_scalar_le() const { return std::holds_alternative<ScalarLe>(rule_); }

private:
    struct FiniteRel {
        std::vector<bool> leq;  // leq[u * n + x]
    };
    struct ScalarLe {};
    struct PredicateRel {
        RelationFn rel;
    };

    Preorder(Universe u, std::variant<FiniteRel, ScalarLe, PredicateRel> rule)
        : universe_(std::move(u)), rule_(std::move(rule)) {}

    Universe universe_;
    std::variant<FiniteRel, ScalarLe, PredicateRel> rule_;
};

/// Reflexivity and transitivity: exact on finite universes, sampled
/// otherwise. Antisymmetry is reported as an optional flag.
ConditionReport check_preorder_axioms(const Preorder& order, int samples = 64,
                                      std::uint64_t seed = 0);

/// Extended-real-valued function on points; +/-inf are legal values and
/// operations that need finiteness validate before doing arithmetic.
struct Utility {
    std::function<double(const Point&)> value;

    double operator()(const Point& p) const { return value(p); }

    static Utility from_values(std::vector<double> values);  // finite universes, by index
    static Utility from_function(std::function<double(double)> f);  // scalar universes
};

/// phi monotone along the order on the sampled related pairs.
Verdict check_monotone(const Utility& phi, const Preorder& order, std::span<const Point> sample);

/// A generalized distance over a symmetric base metric. `weak` drops the
/// lower-semicontinuity requirement.
struct TauFunction {
    QuasiMetricSpace base;
    std::function<double(const Point&, const Point&)> p;
    bool weak = false;

    static TauFunction from_matrices(const FiniteQuasiMetricSpace& base_metric,
                                     const FiniteQuasiMetricSpace& p_matrix, bool weak = false);
};

/// The level-set map of the order: x maps to {u : u <= x}. Its images always
/// contain x and nest transitively.
SetValuedMap level_set_map(const Preorder& order, int grid = SetValuedMap::kDefaultGrid);

/// x maps to {u : f(u) + lambda * q(x, u) <= f(x)}; the sublevel descent map
/// whose images nest by the triangle inequality.
SetValuedMap descent_map(const Utility& objective, const QuasiMetricSpace& space, double lambda,
                         int grid = SetValuedMap::kDefaultGrid);

/// The induced quasi-metric q(x,y) = p(x,y) off the diagonal and 0 on it.
/// Validates the triangle inequality of p on the sampled/enumerated triples
/// and throws when a violation shows up.
QuasiMetricSpace tau_to_quasimetric(const TauFunction& tau, int validation_samples = 64,
                                    std::uint64_t seed = 0);

/// |phi(x) - phi(y)| over a finite base set. Symmetric, zero on the diagonal,
/// triangle by construction; may vanish off the diagonal. Throws if phi is
/// not finite at a base point.
FiniteQuasiMetricSpace utility_pseudometric(const Utility& phi, std::span<const Point> base,
                                            std::vector<std::string> labels = {});

}  // namespace qmt
