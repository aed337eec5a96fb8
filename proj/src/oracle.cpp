#include "qmt/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "qmt/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qmt {

const char* to_string(InstanceProfile p) {
    switch (p) {
        case InstanceProfile::nested: return "nested";
        case InstanceProfile::arbitrary: return "arbitrary";
        case InstanceProfile::preorder: return "preorder";
    }
    return "nested";
}

const char* to_string(PropertyId p) {
    switch (p) {
        case PropertyId::prop42: return "prop42";
        case PropertyId::prop43: return "prop43";
        case PropertyId::prop44: return "prop44";
        case PropertyId::thm45: return "thm45";
        case PropertyId::reduction_qiu: return "reduction_qiu";
        case PropertyId::reduction_kq: return "reduction_kq";
        case PropertyId::thm41_gate: return "thm41_gate";
    }
    return "prop42";
}

PropertyId property_from_string(const std::string& name) {
    for (PropertyId p : {PropertyId::prop42, PropertyId::prop43, PropertyId::prop44,
                         PropertyId::thm45, PropertyId::reduction_qiu, PropertyId::reduction_kq,
                         PropertyId::thm41_gate}) {
        if (name == to_string(p)) return p;
    }
    throw std::invalid_argument("unknown sweep property '" + name + "'");
}

SetValuedMap FiniteInstance::map() const {
    return SetValuedMap::extensional(Universe::finite(space.labels()), images);
}

Preorder FiniteInstance::preorder() const {
    if (!order) throw std::invalid_argument("instance carries no preorder");
    return Preorder::finite(Universe::finite(space.labels()), *order);
}

Utility FiniteInstance::utility() const {
    if (!phi) throw std::invalid_argument("instance carries no utility");
    return Utility::from_values(*phi);
}

nlohmann::json FiniteInstance::to_json() const {
    const std::size_t n = space.size();
    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(space.at(i, j));
        matrix.push_back(std::move(row));
    }
    nlohmann::json j{{"points", space.labels()},
                     {"matrix", std::move(matrix)},
                     {"images", images},
                     {"seed", seed},
                     {"profile", qmt::to_string(profile)}};
    if (order) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < n; ++k) row.push_back(bool((*order)[i * n + k]));
            rows.push_back(std::move(row));
        }
        j["order"] = std::move(rows);
    }
    if (phi) j["phi"] = *phi;
    return j;
}

FiniteInstance FiniteInstance::from_json(const nlohmann::json& j) {
    const auto labels = j.at("points").get<std::vector<std::string>>();
    const std::size_t n = labels.size();
    std::vector<double> matrix;
    matrix.reserve(n * n);
    for (const auto& row : j.at("matrix")) {
        for (const auto& v : row) matrix.push_back(v.get<double>());
    }
    FiniteInstance inst{FiniteQuasiMetricSpace(labels, std::move(matrix)),
                        j.at("images").get<std::vector<std::vector<std::size_t>>>(),
                        std::nullopt,
                        std::nullopt,
                        j.value("seed", std::uint64_t{0}),
                        InstanceProfile::nested};
    const std::string profile = j.value("profile", "nested");
    for (InstanceProfile p :
         {InstanceProfile::nested, InstanceProfile::arbitrary, InstanceProfile::preorder}) {
        if (profile == qmt::to_string(p)) inst.profile = p;
    }
    if (j.contains("order") && !j.at("order").is_null()) {
        std::vector<bool> leq;
        leq.reserve(n * n);
        for (const auto& row : j.at("order")) {
            for (const auto& v : row) leq.push_back(v.get<bool>());
        }
        inst.order = std::move(leq);
    }
    if (j.contains("phi") && !j.at("phi").is_null()) {
        inst.phi = j.at("phi").get<std::vector<double>>();
    }
    return inst;
}

void metric_closure_repair(std::vector<double>& matrix, std::size_t n) {
    if (matrix.size() != n * n) throw std::invalid_argument("matrix is not n x n");
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                matrix[i * n + j] =
                    std::min(matrix[i * n + j], matrix[i * n + k] + matrix[k * n + j]);
            }
        }
    }
}

namespace {

/// Random partial order as the reflexive-transitive closure of forward edges
/// of a random ranking; optionally polluted with one equivalence pair so the
/// non-antisymmetric path stays exercised.
std::vector<bool> random_order(std::size_t n, std::mt19937_64& rng, bool allow_equivalence) {
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        std::swap(rank[i - 1], rank[uniform_below(rng, i)]);
    }
    std::vector<bool> leq(n * n, false);
    for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = true;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (uniform_below(rng, 3) == 0) leq[rank[a] * n + rank[b]] = true;
        }
    }
    const bool inject = allow_equivalence && n >= 2 && uniform_below(rng, 20) == 0;
    if (inject) {
        const std::size_t u = uniform_below(rng, n);
        std::size_t v = uniform_below(rng, n - 1);
        if (v >= u) ++v;
        leq[u * n + v] = true;
        leq[v * n + u] = true;
    }
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!leq[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (leq[k * n + j]) leq[i * n + j] = true;
            }
        }
    }
    return leq;
}

std::vector<std::vector<std::size_t>> level_sets(const std::vector<bool>& leq, std::size_t n) {
    std::vector<std::vector<std::size_t>> images(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t u = 0; u < n; ++u) {
            if (leq[u * n + x]) images[x].push_back(u);
        }
    }
    return images;
}

}  // namespace

FiniteInstance random_instance(int n, std::uint64_t seed, InstanceProfile profile) {
    if (n < 2 || n > 8) {
        throw std::out_of_range("random_instance needs 2 <= n <= 8");
    }
    const auto un = static_cast<std::size_t>(n);
    std::mt19937_64 rng(seed);

    std::vector<std::string> labels(un);
    for (std::size_t i = 0; i < un; ++i) labels[i] = "p" + std::to_string(i);

    // Small integer distances keep every downstream comparison exact in
    // doubles. Zero entries (possible separation failures) only appear in the
    // arbitrary profile so that the theorem-shaped profiles stay plentiful.
    std::vector<double> matrix(un * un, 0.0);
    for (std::size_t i = 0; i < un; ++i) {
        for (std::size_t j = 0; j < un; ++j) {
            if (i == j) continue;
            if (profile == InstanceProfile::arbitrary && uniform_below(rng, 16) == 0) {
                matrix[i * un + j] = 0.0;
            } else {
                matrix[i * un + j] = 1.0 + double(uniform_below(rng, 9));
            }
        }
    }
    metric_closure_repair(matrix, un);

    FiniteInstance inst{FiniteQuasiMetricSpace(labels, std::move(matrix)),
                        {},
                        std::nullopt,
                        std::nullopt,
                        seed,
                        profile};

    switch (profile) {
        case InstanceProfile::nested: {
            const auto leq = random_order(un, rng, /*allow_equivalence=*/true);
            inst.images = level_sets(leq, un);
            inst.order = leq;
            break;
        }
        case InstanceProfile::preorder: {
            const auto leq = random_order(un, rng, /*allow_equivalence=*/false);
            inst.images = level_sets(leq, un);
            inst.order = leq;
            std::vector<double> phi(un);
            for (std::size_t x = 0; x < un; ++x) {
                phi[x] = double(inst.images[x].size());
            }
            inst.phi = std::move(phi);
            break;
        }
        case InstanceProfile::arbitrary: {
            inst.images.resize(un);
            for (std::size_t x = 0; x < un; ++x) {
                const bool force_empty = uniform_below(rng, 10) == 0;
                if (force_empty) continue;
                for (std::size_t u = 0; u < un; ++u) {
                    if (uniform_below(rng, 2) == 0) inst.images[x].push_back(u);
                }
            }
            break;
        }
    }
    return inst;
}

std::vector<std::size_t> intersection_images(const SetValuedMap& map,
                                             std::span<const Point> trace) {
    if (!map.is_extensional()) {
        throw std::invalid_argument("intersection_images needs an extensional map");
    }
    if (trace.empty()) return {};
    std::vector<std::size_t> common = map.table()[trace.front().index()];
    for (const Point& x : trace) {
        const auto& img = map.table()[x.index()];
        std::vector<std::size_t> next;
        std::set_intersection(common.begin(), common.end(), img.begin(), img.end(),
                              std::back_inserter(next));
        common.swap(next);
        if (common.empty()) break;
    }
    return common;
}

TheoremCheck verify_unified_theorem(const FiniteInstance& instance, std::span<const Point> trace,
                                    const Point& xbar, double tol) {
    TheoremCheck check;
    const SetValuedMap map = instance.map();
    const QuasiMetricSpace space = instance.quasi_space();
    const CheckOptions opt;
    const ConditionReport report = check_E_conditions(trace, map, space, xbar, tol, opt);

    for (const char* label : {"E1", "E2", "E3", "E4"}) {
        if (!report.at(label).holds()) {
            check.result = TheoremCheck::Result::precondition_failed;
            check.detail = label;
            return check;
        }
    }

    // The limit scan behind E4 only sees what the tail window exposes; a
    // violation may be claimed as a bug only when the window is settled,
    // i.e. every window sup-gap already sits at the tolerance.
    const std::size_t window_start =
        trace.size() - std::min<std::size_t>(trace.size(),
                                             static_cast<std::size_t>(std::max(opt.window, 1)));
    for (std::size_t n = window_start; n < trace.size(); ++n) {
        const SupGap gap = sup_distance_over_image(space, trace[n], map.image(trace[n]));
        if (gap.value > tol) {
            check.result = TheoremCheck::Result::precondition_failed;
            check.detail = "E2 (tail window not settled)";
            return check;
        }
    }

    check.common_points = intersection_images(map, trace);
    const std::vector<std::size_t> expected{xbar.index()};
    if (check.common_points != expected) {
        check.result = TheoremCheck::Result::violation;
        check.detail = "common-point set differs from the E3 candidate";
        return check;
    }
    if (report.at("E5").holds()) {
        const auto& img = instance.images[xbar.index()];
        const bool within = img.empty() || img == expected;
        if (!within) {
            check.result = TheoremCheck::Result::violation;
            check.detail = "candidate image is not contained in the candidate singleton";
            return check;
        }
    }
    return check;
}

namespace {

std::size_t pick_start(const FiniteInstance& inst) {
    std::size_t best = 0;
    for (std::size_t x = 1; x < inst.images.size(); ++x) {
        if (inst.images[x].size() > inst.images[best].size()) best = x;
    }
    return best;
}

struct JobOutcome {
    bool hypothesis = false;
    bool verified = false;
    std::string violation;  // empty when none
};

/// Near-sup trace extended past convergence so tail windows see the settled
/// point; exact-zero tolerances throughout (integer-valued instances).
PicardTrace budget_trace(const SetValuedMap& map, const QuasiMetricSpace& space,
                         const FiniteInstance& inst, int budget) {
    return iterate(map, space, Point::finite(pick_start(inst)), SelectionRule::near_sup(), budget,
                   /*gap_tol=*/-1.0);
}

std::vector<double> exact_sup_gaps(const PicardTrace& trace) {
    std::vector<double> gaps;
    gaps.reserve(trace.steps.size());
    for (const auto& s : trace.steps) gaps.push_back(s.sup_gap.value_or(0.0));
    return gaps;
}

JobOutcome job_prop42(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    const SetValuedMap map = inst.map();
    const QuasiMetricSpace space = inst.quasi_space();
    const PicardTrace trace = budget_trace(map, space, inst, budget);
    const auto points = trace.points();
    const ConditionReport report =
        check_E_conditions(points, map, space, points.back(), 0.0);
    if (!report.at("E1").holds() || !report.at("E2").holds()) return out;
    out.hypothesis = true;

    // Tail pairwise distances are bounded by the sup-gaps.
    const auto gaps = exact_sup_gaps(trace);
    for (std::size_t m = 0; m < points.size(); ++m) {
        for (std::size_t n = m + 1; n < points.size(); ++n) {
            const double d = space.distance_unchecked(points[m], points[n]);
            if (d > gaps[m]) {
                out.violation = "pairwise distance exceeds the sup-gap bound at (" +
                                std::to_string(m) + "," + std::to_string(n) + ")";
                return out;
            }
        }
    }
    for (double eps : {0.1, 0.01}) {
        bool long_enough = false;
        for (std::size_t n = 0; n + 1 < gaps.size(); ++n) {
            if (gaps[n] < eps) {
                long_enough = true;
                break;
            }
        }
        if (!long_enough) continue;
        if (!is_cauchy(points, space, Direction::forward, eps).holds()) {
            out.violation = "trace is not forward Cauchy at eps=" + std::to_string(eps);
            return out;
        }
    }
    out.verified = true;
    return out;
}

JobOutcome job_prop43(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    if (!inst.space.strictly_separated()) return out;
    const SetValuedMap map = inst.map();
    const QuasiMetricSpace space = inst.quasi_space();
    const PicardTrace trace = budget_trace(map, space, inst, budget);
    const auto points = trace.points();
    const ConditionReport base =
        check_E_conditions(points, map, space, points.back(), 0.0);
    if (!base.at("E1").holds() || !base.at("E2").holds()) return out;

    // A backward limit lying in every image along the trace.
    const int window = std::min<int>(10, static_cast<int>(points.size()));
    const auto common = intersection_images(map, points);
    std::optional<Point> xbar;
    for (std::size_t c : common) {
        const Point cand = Point::finite(c);
        if (converges_to(points, space, cand, Direction::backward, 0.0, window).holds()) {
            xbar = cand;
            break;
        }
    }
    if (!xbar) return out;
    out.hypothesis = true;

    const ConditionReport report = check_E_conditions(points, map, space, *xbar, 0.0);
    if (!report.at("E3").holds()) {
        out.violation = "E3 does not hold for the backward limit";
        return out;
    }
    if (!report.at("E4").holds()) {
        out.violation = "E4 does not hold despite separation";
        return out;
    }
    out.verified = true;
    return out;
}

JobOutcome job_prop44(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    const SetValuedMap map = inst.map();
    const QuasiMetricSpace space = inst.quasi_space();
    const PicardTrace trace = budget_trace(map, space, inst, budget);
    const auto points = trace.points();
    const ConditionReport report =
        check_E_conditions(points, map, space, points.back(), 0.0);
    if (!report.at("E1").holds() || !report.at("E2").holds()) return out;
    const auto common = intersection_images(map, points);
    if (common.empty()) return out;
    out.hypothesis = true;

    // Every common point is a forward limit: bounded by the sup-gaps and at
    // distance zero from the settled tail.
    const auto gaps = exact_sup_gaps(trace);
    for (std::size_t c : common) {
        const Point cand = Point::finite(c);
        for (std::size_t n = 0; n < points.size(); ++n) {
            const double d = space.distance_unchecked(points[n], cand);
            if (d > gaps[n]) {
                out.violation = "distance to a common point exceeds the sup-gap at step " +
                                std::to_string(n);
                return out;
            }
        }
        if (space.distance_unchecked(points.back(), cand) != 0.0) {
            out.violation = "a common point is not a forward limit of the settled tail";
            return out;
        }
    }
    out.verified = true;
    return out;
}

JobOutcome job_thm45(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    const SetValuedMap map = inst.map();
    const QuasiMetricSpace space = inst.quasi_space();
    const ConditionReport freport = check_F_conditions(map, space, {}, 0.0);
    if (!freport.at("F1").holds() || !freport.at("F4").holds()) return out;
    out.hypothesis = true;

    const SearchResult result =
        find_invariant_point(map, space, Point::finite(pick_start(inst)),
                             SelectionRule::near_sup(), budget, /*gap_tol=*/0.0,
                             /*epsilon=*/0.0);
    if (result.outcome != Outcome::invariant_point &&
        result.outcome != Outcome::nonvariant_point) {
        out.violation = std::string("search ended with ") + to_string(result.outcome);
        return out;
    }
    const Classification cls = classify_point(map, space, *result.point);
    if (result.outcome == Outcome::invariant_point && cls.kind != PointClass::invariant) {
        out.violation = "reported invariant point fails reclassification";
        return out;
    }
    if (result.outcome == Outcome::nonvariant_point && cls.kind == PointClass::neither) {
        out.violation = "reported nonvariant point fails reclassification";
        return out;
    }
    if (!inst.images[result.point->index()].empty() &&
        result.outcome != Outcome::invariant_point) {
        out.violation = "nonempty image should have yielded an invariant point";
        return out;
    }
    out.verified = true;
    return out;
}

JobOutcome job_reduction_qiu(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    const Preorder order = inst.preorder();
    const Utility phi = inst.utility();
    const SetValuedMap levels = level_set_map(order);
    const std::size_t n = inst.space.size();

    const auto base_points = universe_grid(order.universe(), 0);
    const QuasiMetricSpace uspace =
        utility_pseudometric(phi, base_points, inst.space.labels()).to_space();

    const Point x0 = Point::finite(pick_start(inst));
    const PicardTrace trace = iterate(levels, uspace, x0, SelectionRule::near_inf(phi), budget,
                                      /*gap_tol=*/0.0);
    const auto points = trace.points();
    const Point xbar = points.back();

    const ConditionReport creport = check_C_conditions(order, phi, x0, points, 0.0);
    if (!creport.at("C1").holds() || !creport.at("C2").holds() || !creport.at("C3").holds()) {
        return out;
    }
    out.hypothesis = true;

    if (inst.images[xbar.index()] != std::vector<std::size_t>{xbar.index()}) {
        out.violation = "terminal level set differs from the singleton";
        return out;
    }
    // Cross-check against exhaustive minimal-point enumeration.
    std::vector<std::size_t> minimal;
    for (std::size_t u = 0; u < n; ++u) {
        if (inst.images[u] == std::vector<std::size_t>{u}) minimal.push_back(u);
    }
    if (std::find(minimal.begin(), minimal.end(), xbar.index()) == minimal.end()) {
        out.violation = "engine did not land on a minimal point";
        return out;
    }
    if (!levels.contains(x0, xbar)) {
        out.violation = "terminal point escaped the start level set";
        return out;
    }
    const ConditionReport ereport = check_E_conditions(points, levels, uspace, xbar, 0.0);
    for (const char* label : {"E1", "E2", "E3", "E5"}) {
        if (!ereport.at(label).holds()) {
            out.violation = std::string(label) + " fails in the constructed space";
            return out;
        }
    }
    const auto common = intersection_images(levels, points);
    if (common != std::vector<std::size_t>{xbar.index()}) {
        out.violation = "common-point set in the constructed space is not the singleton";
        return out;
    }
    out.verified = true;
    return out;
}

JobOutcome job_reduction_kq(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    out.hypothesis = true;
    const std::size_t n = inst.space.size();

    // Symmetrized base metric, then p = d + c off the diagonal, e on it.
    std::mt19937_64 rng(inst.seed ^ 0x7c6f3bbf6f2d1e4bULL);
    const double c = 0.5 * double(uniform_below(rng, 3));
    const double e = double(uniform_below(rng, 2));
    std::vector<double> dsym(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            dsym[i * n + j] = 0.5 * (inst.space.at(i, j) + inst.space.at(j, i));
        }
    }
    std::vector<double> pmat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            pmat[i * n + j] = i == j ? e : dsym[i * n + j] + c;
        }
    }
    const FiniteQuasiMetricSpace dspace(inst.space.labels(), dsym);
    const FiniteQuasiMetricSpace pspace(inst.space.labels(), pmat);
    const TauFunction tau = TauFunction::from_matrices(dspace, pspace, /*weak=*/true);

    const QuasiMetricSpace induced = tau_to_quasimetric(tau);
    std::vector<double> qmat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            qmat[i * n + j] =
                induced.distance_unchecked(Point::finite(i), Point::finite(j));
            if (qmat[i * n + j] > pmat[i * n + j]) {
                out.violation = "induced quasi-metric exceeds p at a pair";
                return out;
            }
        }
    }
    if (!check_axioms(FiniteQuasiMetricSpace(inst.space.labels(), qmat)).all_hold()) {
        out.violation = "induced quasi-metric fails the axioms";
        return out;
    }

    // The p-system verdicts must imply the induced-metric verdicts.
    const SetValuedMap map = inst.map();
    const PicardTrace trace = budget_trace(map, induced, inst, budget);
    const auto points = trace.points();
    const auto common = intersection_images(map, points);
    // the settled terminal point sits in the intersection whenever images
    // nest, and only it can p-converge; fall back to the least common point
    Point xbar = points.back();
    if (!common.empty() &&
        !std::binary_search(common.begin(), common.end(), points.back().index())) {
        xbar = Point::finite(common.front());
    }
    const ConditionReport breport = check_B_conditions(points, map, tau, xbar, 0.0);
    if (breport.at("B1").status != Status::undetermined) {
        const ConditionReport ereport = check_E_conditions(points, map, induced, xbar, 0.0);
        if (breport.at("B1").status != ereport.at("E1").status) {
            out.violation = "B1 and E1 verdicts disagree";
            return out;
        }
        if (breport.at("B2").holds() && !ereport.at("E2").holds()) {
            out.violation = "B2 holds but E2 does not";
            return out;
        }
        if (breport.at("B3").holds() && !ereport.at("E3").holds()) {
            out.violation = "B3 holds but E3 does not";
            return out;
        }
    }
    out.verified = true;
    return out;
}

JobOutcome job_thm41_gate(const FiniteInstance& inst, int budget) {
    JobOutcome out;
    const SetValuedMap map = inst.map();
    const QuasiMetricSpace space = inst.quasi_space();
    const PicardTrace trace = budget_trace(map, space, inst, budget);
    const auto points = trace.points();
    const auto common = intersection_images(map, points);
    if (common.empty()) return out;

    const TheoremCheck check =
        verify_unified_theorem(inst, points, Point::finite(common.front()), 0.0);
    if (check.result == TheoremCheck::Result::precondition_failed) return out;
    out.hypothesis = true;
    if (check.result == TheoremCheck::Result::violation) {
        out.violation = check.detail;
        return out;
    }
    out.verified = true;
    return out;
}

JobOutcome run_property_job(PropertyId property, const FiniteInstance& inst, int budget) {
    switch (property) {
        case PropertyId::prop42: return job_prop42(inst, budget);
        case PropertyId::prop43: return job_prop43(inst, budget);
        case PropertyId::prop44: return job_prop44(inst, budget);
        case PropertyId::thm45: return job_thm45(inst, budget);
        case PropertyId::reduction_qiu: return job_reduction_qiu(inst, budget);
        case PropertyId::reduction_kq: return job_reduction_kq(inst, budget);
        case PropertyId::thm41_gate: return job_thm41_gate(inst, budget);
    }
    throw std::invalid_argument("unknown property");
}

InstanceProfile profile_for(PropertyId property) {
    switch (property) {
        case PropertyId::reduction_qiu: return InstanceProfile::preorder;
        default: return InstanceProfile::nested;
    }
}

struct JobRecord {
    JobOutcome outcome;
    std::uint64_t seed = 0;
    int size = 0;
};

JobRecord run_job(const SweepPlan& plan, int job) {
    JobRecord rec;
    rec.size = plan.sizes[static_cast<std::size_t>(job) % plan.sizes.size()];
    rec.seed = mix_seed(plan.seed, static_cast<std::uint64_t>(job));
    const FiniteInstance inst = random_instance(rec.size, rec.seed, profile_for(plan.property));
    rec.outcome = run_property_job(plan.property, inst, plan.budget);
    return rec;
}

}  // namespace

nlohmann::json SweepReport::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& violation : violations) {
        v.push_back({{"job", violation.job},
                     {"instance_seed", violation.instance_seed},
                     {"size", violation.size},
                     {"detail", violation.detail},
                     {"dump", violation.dump}});
    }
    return nlohmann::json{{"property", qmt::to_string(property)},
                          {"seed", seed},
                          {"count", count},
                          {"sizes", sizes},
                          {"budget", budget},
                          {"generated", generated},
                          {"hypothesis_satisfied", hypothesis_satisfied},
                          {"conclusion_verified", conclusion_verified},
                          {"violations", std::move(v)}};
}

SweepReport run_sweep(const SweepPlan& plan) {
    if (plan.count < 1) throw std::invalid_argument("sweep count must be positive");
    if (plan.sizes.empty()) throw std::invalid_argument("sweep needs at least one size");
    for (int s : plan.sizes) {
        if (s < 2 || s > 8) throw std::out_of_range("sweep sizes must lie in [2, 8]");
    }

    std::vector<JobRecord> records(static_cast<std::size_t>(plan.count));
    if (plan.mode == ExecutionMode::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < plan.count; ++j) {
            records[static_cast<std::size_t>(j)] = run_job(plan, j);
        }
    } else {
        for (int j = 0; j < plan.count; ++j) {
            records[static_cast<std::size_t>(j)] = run_job(plan, j);
        }
    }

    // Merge in job order: identical output regardless of thread count.
    SweepReport report;
    report.property = plan.property;
    report.seed = plan.seed;
    report.count = plan.count;
    report.sizes = plan.sizes;
    report.budget = plan.budget;
    for (int j = 0; j < plan.count; ++j) {
        const JobRecord& rec = records[static_cast<std::size_t>(j)];
        ++report.generated;
        if (!rec.outcome.hypothesis) continue;
        ++report.hypothesis_satisfied;
        if (rec.outcome.verified) {
            ++report.conclusion_verified;
        } else {
            const FiniteInstance inst =
                random_instance(rec.size, rec.seed, profile_for(plan.property));
            report.violations.push_back(
                {j, rec.seed, rec.size, rec.outcome.violation,
                 nlohmann::json{{"property", qmt::to_string(plan.property)},
                                {"budget", plan.budget},
                                {"instance", inst.to_json()},
                                {"detail", rec.outcome.violation}}});
        }
    }
    return report;
}

std::string replay_violation(const nlohmann::json& dump) {
    const PropertyId property = property_from_string(dump.at("property").get<std::string>());
    const FiniteInstance inst = FiniteInstance::from_json(dump.at("instance"));
    const int budget = dump.value("budget", 16);
    const JobOutcome outcome = run_property_job(property, inst, budget);
    if (!outcome.hypothesis) return "hypothesis no longer satisfied";
    return outcome.violation.empty() ? "ok" : outcome.violation;
}

}  // namespace qmt
