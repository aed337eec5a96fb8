#include "qmt/experiment.hpp"

#include <stdexcept>

#include "qmt/expr.hpp"

namespace qmt {

namespace {

QuasiMetricSpace load_space(const nlohmann::json& spec) {
    if (spec.contains("finite")) {
        return finite_space_from_json(read_json_file(spec.at("finite").get<std::string>()))
            .to_space();
    }
    if (!spec.contains("builtin")) {
        throw std::invalid_argument("space spec needs \"builtin\" or \"finite\"");
    }
    const std::string name = spec.at("builtin").get<std::string>();
    if (name == "minkowski_gauge") {
        std::vector<std::vector<double>> normals;
        std::vector<double> offsets;
        for (const auto& h : spec.at("halfspaces")) {
            normals.push_back(h.at("a").get<std::vector<double>>());
            offsets.push_back(h.at("b").get<double>());
        }
        return make_minkowski_gauge(normals, offsets);
    }
    return make_builtin_space(name);
}

SetValuedMap load_map(const nlohmann::json& spec, const QuasiMetricSpace& space, int grid) {
    if (spec.contains("builtin")) {
        const std::string name = spec.at("builtin").get<std::string>();
        if (name == "interval_0_x") {
            if (!space.universe().is_interval()) {
                throw std::invalid_argument("map \"interval_0_x\" needs an interval universe");
            }
            const double lo = space.universe().interval_bounds().lo;
            return SetValuedMap::interval(
                space.universe(), [lo](double) { return lo; }, [](double x) { return x; });
        }
        if (name == "identity") {
            if (space.universe().is_finite()) {
                std::vector<std::vector<std::size_t>> images(space.universe().size());
                for (std::size_t i = 0; i < images.size(); ++i) images[i] = {i};
                return SetValuedMap::extensional(space.universe(), std::move(images));
            }
            if (space.universe().is_scalar()) {
                return SetValuedMap::interval(
                    space.universe(), [](double x) { return x; }, [](double x) { return x; });
            }
            return SetValuedMap::predicate(
                space.universe(), [](const Point& x, const Point& u) { return u == x; },
                [](const Point& x) { return std::vector<Point>{x}; });
        }
        throw std::invalid_argument("unknown builtin map '" + name + "'");
    }
    if (spec.contains("extensional")) {
        return extensional_map_from_json(
            read_json_file(spec.at("extensional").get<std::string>()), space.universe());
    }
    if (spec.contains("level_set_of")) {
        return level_set_map(
            preorder_from_json(read_json_file(spec.at("level_set_of").get<std::string>())), grid);
    }
    if (spec.contains("descent")) {
        const auto& d = spec.at("descent");
        const double lambda = d.value("lambda", 1.0);
        Utility objective;
        if (d.at("objective").is_string() && !space.universe().is_finite()) {
            objective = Utility::from_function(
                compile_objective(d.at("objective").get<std::string>()));
        } else {
            objective = utility_from_json(d.at("objective"), space.universe());
        }
        return descent_map(objective, space, lambda, grid);
    }
    throw std::invalid_argument(
        "map spec needs \"builtin\", \"extensional\", \"level_set_of\" or \"descent\"");
}

SelectionRule load_rule(const nlohmann::json& spec, const QuasiMetricSpace& space) {
    SlackSchedule slack;
    if (spec.contains("slack")) {
        slack.c = spec.at("slack").value("c", 1.0);
        slack.r = spec.at("slack").value("r", 0.5);
        if (!(slack.c > 0.0) || !(slack.r > 0.0) || !(slack.r < 1.0)) {
            throw std::invalid_argument("slack schedule needs c > 0 and 0 < r < 1");
        }
    }
    const std::string kind = spec.value("kind", "near_sup");
    if (kind == "near_sup") return SelectionRule::near_sup(slack);
    if (kind == "near_inf") {
        if (!spec.contains("phi")) {
            throw std::invalid_argument("near_inf rule needs \"phi\"");
        }
        Utility phi;
        if (spec.at("phi").is_string() && !space.universe().is_finite()) {
            phi = Utility::from_function(compile_objective(spec.at("phi").get<std::string>()));
        } else if (spec.at("phi").is_string()) {
            phi = utility_from_json(read_json_file(spec.at("phi").get<std::string>()),
                                    space.universe());
        } else {
            phi = utility_from_json(spec.at("phi"), space.universe());
        }
        return SelectionRule::near_inf(std::move(phi), slack);
    }
    throw std::invalid_argument("unknown rule kind '" + kind + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig config;
    if (!j.contains("space")) throw std::invalid_argument("config needs \"space\"");
    if (!j.contains("map")) throw std::invalid_argument("config needs \"map\"");
    if (!j.contains("x0")) throw std::invalid_argument("config needs \"x0\"");
    config.space_spec = j.at("space");
    config.map_spec = j.at("map");
    config.rule_spec = j.value("rule", nlohmann::json{{"kind", "near_sup"}});
    config.x0 = j.at("x0");
    config.budget = j.value("budget", 100);
    config.gap_tol = j.value("gap_tol", 1e-9);
    config.epsilon = j.value("epsilon", 1e-6);
    config.grid = j.value("grid", SetValuedMap::kDefaultGrid);
    config.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("out")) {
        const auto& out = j.at("out");
        if (out.contains("trace")) config.trace_path = out.at("trace").get<std::string>();
        if (out.contains("summary")) config.summary_path = out.at("summary").get<std::string>();
        if (out.contains("report")) config.report_path = out.at("report").get<std::string>();
    }
    return config;
}

LoadedExperiment load_experiment(const ExperimentConfig& config) {
    QuasiMetricSpace space = load_space(config.space_spec);
    SetValuedMap map = load_map(config.map_spec, space, config.grid);
    SelectionRule rule = load_rule(config.rule_spec, space);
    Point x0 = point_from_json(config.x0, space.universe());
    space.universe().require(x0, "config x0");
    return LoadedExperiment{std::move(space), std::move(map), std::move(rule), std::move(x0)};
}

ExperimentArtifacts run_experiment(const ExperimentConfig& config) {
    const LoadedExperiment exp = load_experiment(config);
    CheckOptions opt;
    opt.grid = config.grid;

    const SearchResult result = find_invariant_point(exp.map, exp.space, exp.x0, exp.rule,
                                                     config.budget, config.gap_tol,
                                                     config.epsilon, opt);

    ExperimentArtifacts artifacts;
    artifacts.trace_jsonl = trace_to_jsonl(result.trace);
    artifacts.summary = search_result_to_json(result);
    artifacts.report = result.e_report.to_json();
    switch (result.outcome) {
        case Outcome::invariant_point:
        case Outcome::nonvariant_point: artifacts.exit_code = 0; break;
        case Outcome::budget_exhausted: artifacts.exit_code = 2; break;
        case Outcome::condition_violation: artifacts.exit_code = 3; break;
    }

    if (config.trace_path) write_text_file(*config.trace_path, artifacts.trace_jsonl);
    if (config.summary_path) {
        write_text_file(*config.summary_path, artifacts.summary.dump(2) + "\n");
    }
    if (config.report_path) {
        write_text_file(*config.report_path, artifacts.report.dump(2) + "\n");
    }
    return artifacts;
}

}  // namespace qmt
