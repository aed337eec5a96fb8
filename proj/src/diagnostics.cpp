#include "qmt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace qmt {

namespace {

// epsilon == 0 switches to exact zero comparisons (finite-space use).
bool below(double d, double epsilon) {
    return epsilon > 0.0 ? d < epsilon : d == 0.0;
}

bool at_most(double d, double tol) {
    return d <= tol;
}

double directed(const QuasiMetricSpace& space, Direction dir, const Point& from,
                const Point& to) {
    return dir == Direction::forward ? space.distance_unchecked(from, to)
                                     : space.distance_unchecked(to, from);
}

void validate_picard(std::span<const Point> trace, const SetValuedMap& map) {
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        if (!map.contains(trace[n], trace[n + 1])) {
            throw std::invalid_argument(
                "trace is not a generalized Picard sequence of the map (step " +
                std::to_string(n) + ")");
        }
    }
}

int tail_start(std::size_t len, int window) {
    const int w = std::min<int>(window, static_cast<int>(len));
    return static_cast<int>(len) - std::max(w, 1);
}

/// Nesting of consecutive (or candidate-vs-all) images along a trace.
Verdict nested_images(std::span<const Point> trace, const SetValuedMap& map, double tol,
                      int grid) {
    bool exact = true;
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        const ImageSet inner = map.image(trace[n + 1], grid);
        const ImageSet outer = map.image(trace[n], grid);
        const Point base = trace[n];
        const auto check = image_subset(
            inner, outer, [&](const Point& u) { return map.contains(base, u); });
        exact = exact && check.exact;
        if (!check.holds) {
            nlohmann::json witness{{"n", n}};
            if (check.witness) witness["u"] = *check.witness;
            return Verdict::fail(exact ? Mode::exact : Mode::sampled, tol, witness);
        }
    }
    return Verdict::pass(exact ? Mode::exact : Mode::sampled, tol);
}

/// Finite-horizon rendering of "the gap sequence tends to zero": the
/// terminal value must already sit at or below the tolerance. A sampler may
/// under-estimate the sup, so sampler-based values can fail but never hold.
Verdict tail_decay(const std::vector<double>& gaps, const std::vector<bool>& exact_flags,
                   double tol, bool terminal_from_sampler = false) {
    if (gaps.empty()) return Verdict::unknown("no gaps recorded", tol);
    const std::size_t last = gaps.size() - 1;
    const Mode mode = exact_flags[last] ? Mode::exact : Mode::sampled;
    if (!at_most(gaps[last], tol)) {
        return Verdict::fail(mode, tol, {{"n", last}, {"gap", gaps[last]}});
    }
    if (terminal_from_sampler) {
        return Verdict::unknown(
            "sup over sampler-provided candidates may under-estimate; cannot certify", tol);
    }
    return Verdict::pass(mode, tol);
}

bool tail_converges(std::span<const Point> trace, const QuasiMetricSpace& space, Direction dir,
                    const Point& candidate, double epsilon, int window) {
    for (std::size_t n = static_cast<std::size_t>(tail_start(trace.size(), window));
         n < trace.size(); ++n) {
        if (!below(directed(space, dir, trace[n], candidate), epsilon)) return false;
    }
    return true;
}

/// Detected forward limits among the candidates; used by E4/F3.
std::vector<Point> detected_forward_limits(std::span<const Point> trace,
                                           const QuasiMetricSpace& space,
                                           std::span<const Point> candidates, double epsilon,
                                           int window) {
    std::vector<Point> limits;
    for (const Point& c : candidates) {
        if (tail_converges(trace, space, Direction::forward, c, epsilon, window)) {
            if (std::find(limits.begin(), limits.end(), c) == limits.end()) limits.push_back(c);
        }
    }
    return limits;
}

std::vector<Point> limit_candidates(std::span<const Point> trace, const QuasiMetricSpace& space,
                                    const CheckOptions& opt, const Point* extra) {
    std::vector<Point> cands;
    if (space.universe().is_finite()) {
        cands = universe_grid(space.universe(), 0);
    } else {
        cands.assign(trace.begin(), trace.end());
        cands.insert(cands.end(), opt.limit_candidates.begin(), opt.limit_candidates.end());
        if (extra) cands.push_back(*extra);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

Verdict at_most_one_limit(std::span<const Point> trace, const QuasiMetricSpace& space,
                          std::span<const Point> candidates, double epsilon, int window,
                          Mode mode, double tol) {
    const auto limits = detected_forward_limits(trace, space, candidates, epsilon, window);
    if (limits.size() >= 2) {
        return Verdict::fail(mode, tol, {{"u", limits[0]}, {"v", limits[1]}});
    }
    nlohmann::json info{{"detected_limits", limits.size()}};
    return Verdict::pass(mode, tol, info);
}

struct GapSeries {
    std::vector<double> values;
    std::vector<bool> exact;
    bool computable = true;
    bool terminal_from_sampler = false;
};

GapSeries sup_gaps(std::span<const Point> trace, const SetValuedMap& map,
                   const QuasiMetricSpace& space, int grid) {
    GapSeries gs;
    if (!map.has_enumerable_images()) {
        gs.computable = false;
        return gs;
    }
    for (const Point& x : trace) {
        const SupGap g = sup_distance_over_image(space, x, map.image(x, grid), grid);
        gs.values.push_back(g.value);
        gs.exact.push_back(g.exact);
        gs.terminal_from_sampler = g.sampler_based;
    }
    return gs;
}

/// All directed cycles of the image graph use zero-distance edges only; this
/// decides the vanishing-step condition for every infinite Picard sequence on
/// a finite extensional map. Returns a witness cycle otherwise.
Verdict zero_cycles_only(const SetValuedMap& map, const QuasiMetricSpace& space, double tol) {
    const auto& images = map.table();
    const std::size_t n = images.size();

    // Kosaraju: first pass finish order, second pass on the transpose.
    std::vector<std::vector<std::size_t>> rev(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : images[i]) rev[j].push_back(i);
    }
    std::vector<int> state(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (state[s] != 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
        state[s] = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < images[v].size()) {
                const std::size_t w = images[v][next++];
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                order.push_back(v);
                stack.pop_back();
            }
        }
    }
    std::vector<int> scc(n, -1);
    int comp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (scc[*it] != -1) continue;
        std::deque<std::size_t> queue{*it};
        scc[*it] = comp;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w : rev[v]) {
                if (scc[w] == -1) {
                    scc[w] = comp;
                    queue.push_back(w);
                }
            }
        }
        ++comp;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : images[i]) {
            if (scc[i] != scc[j]) continue;
            const double d =
                space.distance_unchecked(Point::finite(i), Point::finite(j));
            if (at_most(d, tol)) continue;
            // Close the cycle: a path j -> i inside the component.
            std::vector<std::size_t> parent(n, n);
            std::deque<std::size_t> queue{j};
            parent[j] = j;
            while (!queue.empty() && parent[i] == n) {
                const std::size_t v = queue.front();
                queue.pop_front();
                for (std::size_t w : images[v]) {
                    if (scc[w] == scc[i] && parent[w] == n) {
                        parent[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            std::vector<std::size_t> cycle{i};
            for (std::size_t v = i; v != j; v = parent[v]) cycle.push_back(parent[v]);
            std::reverse(cycle.begin() + 1, cycle.end());
            cycle.push_back(i);
            return Verdict::fail(Mode::exact, tol,
                                 {{"cycle", cycle}, {"edge", {i, j}}, {"distance", d}});
        }
    }
    return Verdict::pass(Mode::exact, tol);
}

/// Greedy farthest-member Picard probes from every start point of a finite
/// extensional map; stand-ins for "each generalized Picard sequence".
std::vector<std::vector<Point>> probe_traces(const SetValuedMap& map,
                                             const QuasiMetricSpace& space, int budget) {
    std::vector<std::vector<Point>> traces;
    const auto& images = map.table();
    for (std::size_t s = 0; s < images.size(); ++s) {
        std::vector<Point> trace{Point::finite(s)};
        std::size_t x = s;
        for (int step = 0; step < budget; ++step) {
            const auto& img = images[x];
            if (img.empty()) break;
            std::size_t best = img.front();
            double best_d = space.distance_unchecked(Point::finite(x), Point::finite(best));
            for (std::size_t u : img) {
                const double d = space.distance_unchecked(Point::finite(x), Point::finite(u));
                if (d > best_d) {
                    best = u;
                    best_d = d;
                }
            }
            trace.push_back(Point::finite(best));
            x = best;
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

/// Transitive image nesting over sampled/enumerated base points (A3/F1).
Verdict transitive_nesting(const SetValuedMap& map, const QuasiMetricSpace& space, double tol,
                           int grid) {
    if (map.is_extensional()) {
        const auto& images = map.table();
        for (std::size_t x = 0; x < images.size(); ++x) {
            for (std::size_t u : images[x]) {
                for (std::size_t w : images[u]) {
                    if (!std::binary_search(images[x].begin(), images[x].end(), w)) {
                        return Verdict::fail(Mode::exact, tol, {{"x", x}, {"u", u}, {"w", w}});
                    }
                }
            }
        }
        return Verdict::pass(Mode::exact, tol);
    }
    if (!map.has_enumerable_images()) {
        return Verdict::unknown("images are not enumerable (predicate map without sampler)", tol);
    }
    const int coarse = std::min(grid, 41);
    for (const Point& x : universe_grid(space.universe(), coarse)) {
        const ImageSet img_x = map.image(x, grid);
        for (const Point& u : img_x.enumerate(coarse)) {
            const auto check =
                image_subset(map.image(u, grid), img_x,
                             [&](const Point& w) { return map.contains(x, w); });
            if (!check.holds) {
                nlohmann::json witness{{"x", x}, {"u", u}};
                if (check.witness) witness["w"] = *check.witness;
                return Verdict::fail(Mode::sampled, tol, witness);
            }
        }
    }
    return Verdict::pass(Mode::sampled, tol);
}

}  // namespace

Verdict is_cauchy(std::span<const Point> trace, const QuasiMetricSpace& space,
                  Direction direction, double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("is_cauchy needs epsilon >= 0");
    const Mode mode = space.universe().is_finite() ? Mode::exact : Mode::sampled;
    if (trace.size() < 2) {
        return Verdict::unknown("trace too short for any pair", epsilon);
    }
    // Smallest N whose suffix pairs all satisfy the bound; N == len-1 would be
    // vacuous, so that case reports the blocking pair instead.
    std::size_t minimal_n = 0;
    nlohmann::json blocking;
    for (std::size_t n = 0; n + 1 < trace.size(); ++n) {
        for (std::size_t m = n + 1; m < trace.size(); ++m) {
            const double d = directed(space, direction, trace[n], trace[m]);
            if (!below(d, epsilon)) {
                minimal_n = n + 1;
                blocking = {{"n", n}, {"m", m}, {"distance", d}};
            }
        }
    }
    if (minimal_n + 1 < trace.size()) {
        return Verdict::pass(mode, epsilon, {{"N", minimal_n}});
    }
    return Verdict::fail(mode, epsilon, blocking);
}

Verdict converges_to(std::span<const Point> trace, const QuasiMetricSpace& space,
                     const Point& candidate, Direction direction, double epsilon, int window) {
    if (epsilon < 0.0) throw std::invalid_argument("converges_to needs epsilon >= 0");
    space.universe().require(candidate, "converges_to");
    const Mode mode = space.universe().is_finite() ? Mode::exact : Mode::sampled;
    if (trace.empty() || trace.size() < static_cast<std::size_t>(window)) {
        return Verdict::unknown("trace shorter than the tail window", epsilon);
    }
    for (std::size_t n = static_cast<std::size_t>(tail_start(trace.size(), window));
         n < trace.size(); ++n) {
        const double d = directed(space, direction, trace[n], candidate);
        if (!below(d, epsilon)) {
            return Verdict::fail(mode, epsilon, {{"n", n}, {"distance", d}});
        }
    }
    return Verdict::pass(mode, epsilon);
}

ConditionReport check_E_conditions(std::span<const Point> trace, const SetValuedMap& map,
                                   const QuasiMetricSpace& space, const Point& candidate,
                                   double tol, const CheckOptions& opt) {
    if (trace.empty()) throw std::invalid_argument("check_E_conditions needs a nonempty trace");
    space.universe().require(candidate, "check_E_conditions");
    validate_picard(trace, map);

    ConditionReport report("E");
    report.add("E1", nested_images(trace, map, tol, opt.grid));

    const GapSeries gaps = sup_gaps(trace, map, space, opt.grid);
    report.add("E2", gaps.computable
                         ? tail_decay(gaps.values, gaps.exact, tol, gaps.terminal_from_sampler)
                         : Verdict::unknown("sup-gap not computable for this image "
                                            "representation",
                                            tol));

    Verdict e3 = Verdict::pass(Mode::exact, tol);
    for (std::size_t n = 0; n < trace.size(); ++n) {
        if (!map.contains(trace[n], candidate)) {
            e3 = Verdict::fail(Mode::exact, tol, {{"n", n}});
            break;
        }
    }
    report.add("E3", e3);

    const bool finite = space.universe().is_finite();
    const double limit_eps = finite ? 0.0 : opt.limit_epsilon;
    const auto cands = limit_candidates(trace, space, opt, &candidate);
    report.add("E4", at_most_one_limit(trace, space, cands, limit_eps, opt.window,
                                       finite ? Mode::exact : Mode::sampled, tol));

    // E5: the candidate's image inside every image along the trace.
    const ImageSet img_bar = map.image(candidate, opt.grid);
    Verdict e5 = Verdict::pass(img_bar.exact ? Mode::exact : Mode::sampled, tol);
    for (std::size_t n = 0; n < trace.size(); ++n) {
        const Point base = trace[n];
        const auto check = image_subset(img_bar, map.image(base, opt.grid),
                                        [&](const Point& u) { return map.contains(base, u); });
        if (!check.holds) {
            nlohmann::json witness{{"n", n}};
            if (check.witness) witness["u"] = *check.witness;
            e5 = Verdict::fail(check.exact ? Mode::exact : Mode::sampled, tol, witness);
            break;
        }
    }
    report.add("E5", e5);

    return report;
}

ConditionReport check_F_conditions(const SetValuedMap& map, const QuasiMetricSpace& space,
                                   std::span<const std::vector<Point>> traces, double tol,
                                   const CheckOptions& opt) {
    ConditionReport report("F");
    report.add("F1", transitive_nesting(map, space, tol, opt.grid));

    std::vector<std::vector<Point>> generated;
    if (traces.empty() && map.is_extensional()) {
        generated = probe_traces(map, space, opt.budget);
        traces = generated;
    }

    // F2: every trace whose sup-gap vanishes admits a common image point.
    Verdict f2 = traces.empty() ? Verdict::unknown("no traces to examine", tol)
                                : Verdict::pass(Mode::sampled, tol);
    int qualifying = 0;
    for (std::size_t t = 0; t < traces.size() && !f2.fails(); ++t) {
        const auto& tr = traces[t];
        if (tr.empty()) continue;
        const GapSeries gaps = sup_gaps(tr, map, space, opt.grid);
        if (!gaps.computable) {
            f2 = Verdict::unknown("sup-gap not computable for this image representation", tol);
            break;
        }
        if (!tail_decay(gaps.values, gaps.exact, tol).holds()) continue;
        ++qualifying;
        bool found = false;
        if (map.is_extensional()) {
            std::vector<std::size_t> common = map.table()[tr.front().index()];
            for (const Point& x : tr) {
                const auto& img = map.table()[x.index()];
                std::vector<std::size_t> next;
                std::set_intersection(common.begin(), common.end(), img.begin(), img.end(),
                                      std::back_inserter(next));
                common.swap(next);
            }
            found = !common.empty();
        } else {
            for (const Point& c : map.image(tr.back(), opt.grid).enumerate(opt.grid)) {
                bool in_all = true;
                for (const Point& x : tr) {
                    if (!map.contains(x, c)) {
                        in_all = false;
                        break;
                    }
                }
                if (in_all) {
                    found = true;
                    break;
                }
            }
        }
        if (!found) f2 = Verdict::fail(Mode::sampled, tol, {{"trace", t}});
    }
    if (f2.holds() && qualifying == 0) {
        f2 = Verdict::unknown("no trace with a vanishing sup-gap among the samples", tol);
    }
    report.add("F2", f2);

    // F3: at most one forward limit per forward-Cauchy trace.
    const double limit_eps = space.universe().is_finite() ? 0.0 : opt.limit_epsilon;
    Verdict f3 = traces.empty() ? Verdict::unknown("no traces to examine", tol)
                                : Verdict::pass(Mode::sampled, tol);
    int cauchy_count = 0;
    for (std::size_t t = 0; t < traces.size() && !f3.fails(); ++t) {
        const auto& tr = traces[t];
        if (tr.size() < 2 || !is_cauchy(tr, space, Direction::forward, tol).holds()) continue;
        ++cauchy_count;
        const auto cands = limit_candidates(tr, space, opt, nullptr);
        Verdict v =
            at_most_one_limit(tr, space, cands, limit_eps, opt.window, Mode::sampled, tol);
        if (v.fails()) {
            v.witness["trace"] = t;
            f3 = v;
        }
    }
    if (f3.holds() && cauchy_count == 0) {
        f3 = Verdict::unknown("no forward Cauchy trace among the samples", tol);
    }
    report.add("F3", f3);

    // F4: exact cycle analysis on finite extensional maps, else per-trace.
    if (map.is_extensional()) {
        report.add("F4", zero_cycles_only(map, space, tol));
    } else {
        Verdict f4 = traces.empty() ? Verdict::unknown("no traces to examine", tol)
                                    : Verdict::pass(Mode::sampled, tol);
        for (std::size_t t = 0; t < traces.size() && f4.holds(); ++t) {
            const auto& tr = traces[t];
            for (std::size_t n = static_cast<std::size_t>(tail_start(tr.size(), opt.window));
                 n + 1 < tr.size(); ++n) {
                const double d = space.distance_unchecked(tr[n], tr[n + 1]);
                if (!at_most(d, tol)) {
                    f4 = Verdict::fail(Mode::sampled, tol,
                                       {{"trace", t}, {"n", n}, {"distance", d}});
                    break;
                }
            }
        }
        report.add("F4", f4);
    }
    return report;
}

ConditionReport check_A_conditions(const SetValuedMap& map, const QuasiMetricSpace& space,
                                   double tol, std::optional<bool> closed_images,
                                   const CheckOptions& opt) {
    ConditionReport report("A");
    const bool finite = space.universe().is_finite();

    bool symmetric = true;
    const auto probe = universe_grid(space.universe(), std::min(opt.grid, 32));
    for (const Point& x : probe) {
        for (const Point& y : probe) {
            if (std::fabs(space.distance_unchecked(x, y) - space.distance_unchecked(y, x)) >
                tol) {
                symmetric = false;
                break;
            }
        }
        if (!symmetric) break;
    }
    if (!symmetric) {
        for (const char* label : {"A1", "A2", "A3", "A4"}) {
            report.add(label,
                       Verdict::unknown("distance is not symmetric; the A-system is stated "
                                        "for metric spaces",
                                        tol));
        }
        return report;
    }

    if (finite) {
        report.add("A1", Verdict::pass(Mode::exact, tol,
                                       {{"note", "every subset of a finite space is closed"}}));
    } else if (closed_images.has_value()) {
        report.add("A1", *closed_images
                             ? Verdict::pass(Mode::sampled, tol, {{"source", "caller flag"}})
                             : Verdict::fail(Mode::sampled, tol, {{"closed_images", false}}));
    } else {
        report.add("A1", Verdict::unknown("closedness of black-box images is not decidable", tol));
    }

    Verdict a2 = Verdict::pass(finite ? Mode::exact : Mode::sampled, tol);
    for (const Point& x : finite ? universe_grid(space.universe(), 0)
                                 : universe_grid(space.universe(), std::min(opt.grid, 101))) {
        if (!map.contains(x, x)) {
            a2 = Verdict::fail(finite ? Mode::exact : Mode::sampled, tol, {{"x", x}});
            break;
        }
    }
    report.add("A2", a2);

    report.add("A3", transitive_nesting(map, space, tol, opt.grid));

    if (map.is_extensional()) {
        report.add("A4", zero_cycles_only(map, space, tol));
    } else {
        report.add("A4", Verdict::unknown(
                             "all-sequences step decay needs an extensional map or probe "
                             "traces; see the F-system checker",
                             tol));
    }
    return report;
}

ConditionReport check_B_conditions(std::span<const Point> trace, const SetValuedMap& map,
                                   const TauFunction& tau, const Point& candidate, double tol,
                                   const CheckOptions& opt) {
    if (trace.empty()) throw std::invalid_argument("check_B_conditions needs a nonempty trace");
    validate_picard(trace, map);

    ConditionReport report("B");
    bool p_converges = true;
    for (std::size_t n = static_cast<std::size_t>(tail_start(trace.size(), opt.window));
         n < trace.size(); ++n) {
        if (!at_most(tau.p(trace[n], candidate), tol)) {
            p_converges = false;
            break;
        }
    }
    if (!p_converges) {
        for (const char* label : {"B1", "B2", "B3"}) {
            report.add(label, Verdict::unknown(
                                  "trace does not converge to the candidate with respect to p "
                                  "within the tail window",
                                  tol));
        }
        report.add("B4", Verdict::unknown("see B1", tol), /*optional=*/true);
        return report;
    }

    report.add("B1", nested_images(trace, map, tol, opt.grid));

    // B2: sup of p over the image, along the tail.
    Verdict b2 = Verdict::pass(Mode::exact, tol);
    if (!map.has_enumerable_images()) {
        b2 = Verdict::unknown("sup not computable for this image representation", tol);
    } else {
        std::vector<double> gaps;
        std::vector<bool> exact;
        bool terminal_sampler = false;
        for (const Point& x : trace) {
            const ImageSet img = map.image(x, opt.grid);
            double sup = 0.0;
            for (const Point& u : img.enumerate(opt.grid)) sup = std::max(sup, tau.p(x, u));
            gaps.push_back(sup);
            exact.push_back(img.exact && !img.is_interval());
            terminal_sampler = !img.exact;
        }
        b2 = tail_decay(gaps, exact, tol, terminal_sampler);
    }
    report.add("B2", b2);

    Verdict b3 = Verdict::pass(Mode::exact, tol);
    for (std::size_t n = 0; n < trace.size(); ++n) {
        if (!map.contains(trace[n], candidate)) {
            b3 = Verdict::fail(Mode::exact, tol, {{"n", n}});
            break;
        }
    }
    report.add("B3", b3);

    // B4 strengthens the conclusion when it holds; reported separately.
    const ImageSet img_bar = map.image(candidate, opt.grid);
    Verdict b4;
    if (img_bar.is_empty()) {
        b4 = Verdict::fail(img_bar.exact ? Mode::exact : Mode::sampled, tol,
                           {{"reason", "candidate image is empty"}});
    } else {
        b4 = Verdict::pass(img_bar.exact ? Mode::exact : Mode::sampled, tol);
        for (std::size_t n = 0; n < trace.size(); ++n) {
            const Point base = trace[n];
            const auto check =
                image_subset(img_bar, map.image(base, opt.grid),
                             [&](const Point& u) { return map.contains(base, u); });
            if (!check.holds) {
                nlohmann::json witness{{"n", n}};
                if (check.witness) witness["u"] = *check.witness;
                b4 = Verdict::fail(check.exact ? Mode::exact : Mode::sampled, tol, witness);
                break;
            }
        }
    }
    report.add("B4", b4, /*optional=*/true);
    return report;
}

ConditionReport check_C_conditions(const Preorder& order, const Utility& phi, const Point& x0,
                                   std::span<const Point> trace, double tol,
                                   const CheckOptions& opt) {
    order.universe().require(x0, "check_C_conditions");
    const SetValuedMap levels = level_set_map(order, opt.grid);
    const bool finite = order.universe().is_finite();
    const Mode mode = finite ? Mode::exact : Mode::sampled;

    ConditionReport report("C");

    const ImageSet s0 = levels.image(x0, opt.grid);
    const auto s0_points = s0.enumerate(opt.grid);
    const Mode inf_mode = (s0.exact && !s0.is_interval()) ? Mode::exact : Mode::sampled;

    double inf = std::numeric_limits<double>::infinity();
    for (const Point& u : s0_points) inf = std::min(inf, phi(u));
    Verdict c1;
    if (s0_points.empty()) {
        c1 = Verdict::fail(inf_mode, tol, {{"reason", "level set of x0 is empty"}});
    } else if (!std::isfinite(inf)) {
        c1 = Verdict::fail(inf_mode, tol,
                           {{"inf", inf > 0 ? "inf" : "-inf"}});
    } else {
        c1 = Verdict::pass(inf_mode, tol, {{"inf", inf}});
    }
    report.add("C1", c1);

    // C2: no level set may contain two distinct points reaching the level's
    // utility value.
    std::vector<Point> base_points;
    if (finite) {
        base_points = s0_points;
    } else {
        base_points.assign(trace.begin(), trace.end());
        base_points.push_back(x0);
    }
    Verdict c2 = Verdict::pass(mode, tol);
    for (const Point& x : base_points) {
        const double fx = phi(x);
        if (!std::isfinite(fx)) continue;
        std::vector<Point> reaching;
        for (const Point& z : levels.image(x, opt.grid).enumerate(opt.grid)) {
            if (phi(z) >= fx) {
                reaching.push_back(z);
                if (reaching.size() == 2) break;
            }
        }
        if (reaching.size() == 2) {
            c2 = Verdict::fail(mode, tol, {{"x", x}, {"z1", reaching[0]}, {"z2", reaching[1]}});
            break;
        }
    }
    report.add("C2", c2);

    // C3 presupposes the inf-gap decay of the supplied trace.
    Verdict c3;
    if (trace.size() < 2) {
        c3 = Verdict::unknown("trace too short to exhibit the inf-gap decay", tol);
    } else {
        validate_picard(trace, levels);
        // horizon rendering of the inf-gap decay: the final gap sits at tol
        const std::size_t last = trace.size() - 1;
        double prev_inf = std::numeric_limits<double>::infinity();
        for (const Point& u : levels.image(trace[last - 1], opt.grid).enumerate(opt.grid)) {
            prev_inf = std::min(prev_inf, phi(u));
        }
        const bool decays = at_most(phi(trace[last]) - prev_inf, tol);
        if (!decays) {
            c3 = Verdict::unknown("trace does not satisfy the inf-gap decay hypothesis", tol);
        } else {
            std::vector<Point> candidates;
            if (finite) {
                candidates = universe_grid(order.universe(), 0);
            } else {
                candidates.assign(trace.begin(), trace.end());
                candidates.insert(candidates.end(), opt.limit_candidates.begin(),
                                  opt.limit_candidates.end());
            }
            std::optional<Point> found;
            for (const Point& c : candidates) {
                bool in_all = true;
                for (const Point& x : trace) {
                    if (!levels.contains(x, c)) {
                        in_all = false;
                        break;
                    }
                }
                if (in_all) {
                    found = c;
                    break;
                }
            }
            c3 = found ? Verdict::pass(mode, tol, {{"x_star", *found}})
                       : Verdict::fail(mode, tol, {{"searched", candidates.size()}});
        }
    }
    report.add("C3", c3);
    return report;
}

ConditionReport check_tau_axioms(const TauFunction& tau, std::span<const Point> sample,
                                 double tol, std::span<const TauSequencePair> sequence_pairs,
                                 const CheckOptions& opt) {
    ConditionReport report("TAU");
    const bool finite = tau.base.universe().is_finite();
    const Mode mode = finite ? Mode::exact : Mode::sampled;

    Verdict tau1 = Verdict::pass(mode, tol);
    for (const Point& x : sample) {
        for (const Point& y : sample) {
            for (const Point& z : sample) {
                if (tau.p(x, z) > tau.p(x, y) + tau.p(y, z) + tol) {
                    tau1 = Verdict::fail(mode, tol,
                                         {{"x", x},
                                          {"y", y},
                                          {"z", z},
                                          {"lhs", tau.p(x, z)},
                                          {"rhs", tau.p(x, y) + tau.p(y, z)}});
                    break;
                }
            }
            if (tau1.fails()) break;
        }
        if (tau1.fails()) break;
    }
    report.add("tau1", tau1);

    report.add("tau2",
               finite ? Verdict::pass(Mode::exact, tol,
                                      {{"note", "every function on a finite space is lower "
                                                "semicontinuous"}})
                      : Verdict::unknown("lower semicontinuity of black-box p is not testable",
                                         tol),
               /*optional=*/tau.weak);

    Verdict tau3 = sequence_pairs.empty()
                       ? Verdict::unknown("no sequence pairs supplied", tol)
                       : Verdict::pass(Mode::sampled, tol);
    for (std::size_t k = 0; k < sequence_pairs.size() && !tau3.fails(); ++k) {
        const auto& pair = sequence_pairs[k];
        if (pair.xs.size() != pair.ys.size() || pair.xs.size() < 2) continue;
        const std::size_t start =
            static_cast<std::size_t>(tail_start(pair.xs.size(), opt.window));
        bool hyp = true;
        for (std::size_t n = start; n < pair.xs.size() && hyp; ++n) {
            if (!at_most(tau.p(pair.xs[n], pair.ys[n]), tol)) hyp = false;
            double sup = 0.0;
            for (std::size_t m = n + 1; m < pair.xs.size(); ++m) {
                sup = std::max(sup, tau.p(pair.xs[n], pair.xs[m]));
            }
            if (n + 1 < pair.xs.size() && !at_most(sup, tol)) hyp = false;
        }
        if (!hyp) continue;
        for (std::size_t n = start; n < pair.xs.size(); ++n) {
            const double d = tau.base.distance_unchecked(pair.xs[n], pair.ys[n]);
            if (!at_most(d, tol)) {
                tau3 = Verdict::fail(Mode::sampled, tol,
                                     {{"pair", k}, {"n", n}, {"d", d}});
                break;
            }
        }
    }
    report.add("tau3", tau3);

    Verdict tau4 = Verdict::pass(mode, tol);
    for (const Point& x : sample) {
        for (const Point& y : sample) {
            if (!at_most(tau.p(x, y), tol)) continue;
            for (const Point& z : sample) {
                if (y != z && at_most(tau.p(x, z), tol)) {
                    tau4 = Verdict::fail(mode, tol, {{"x", x}, {"y", y}, {"z", z}});
                    break;
                }
            }
            if (tau4.fails()) break;
        }
        if (tau4.fails()) break;
    }
    report.add("tau4", tau4);

    return report;
}

}  // namespace qmt
