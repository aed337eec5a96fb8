#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmt/experiment.hpp"
#include "qmt/expr.hpp"

namespace {

using nlohmann::json;

int cmd_check_space(const std::string& finite_path, const std::string& builtin,
                    const std::string& params_path, int triples, std::uint64_t seed, double tol) {
    qmt::ConditionReport report;
    if (!finite_path.empty()) {
        report = qmt::check_axioms(qmt::finite_space_from_json(qmt::read_json_file(finite_path)));
    } else if (builtin == "minkowski_gauge") {
        const json params = qmt::read_json_file(params_path);
        std::vector<std::vector<double>> normals;
        std::vector<double> offsets;
        for (const auto& h : params.at("halfspaces")) {
            normals.push_back(h.at("a").get<std::vector<double>>());
            offsets.push_back(h.at("b").get<double>());
        }
        report = qmt::check_axioms_sampled(qmt::make_minkowski_gauge(normals, offsets), triples,
                                           seed, tol);
    } else if (!builtin.empty()) {
        report = qmt::check_axioms_sampled(qmt::make_builtin_space(builtin), triples, seed, tol);
    } else {
        std::cerr << "check-space: pass --finite or --builtin\n";
        return 1;
    }
    std::cout << report.to_json().dump(2) << "\n";
    return report.all_hold() ? 0 : 1;
}

qmt::ExperimentConfig config_from_cli(const std::string& config_path, const json& overrides) {
    json j = config_path.empty() ? json::object() : qmt::read_json_file(config_path);
    for (const auto& [key, value] : overrides.items()) j[key] = value;
    return qmt::ExperimentConfig::from_json(j);
}

// A point argument is either a number ("0.5") or a finite-universe label.
json parse_point_arg(const std::string& text) {
    const json parsed = json::parse(text, nullptr, false);
    return parsed.is_discarded() ? json(text) : parsed;
}

int cmd_verify(const std::string& system, const std::string& config_path,
               const std::string& trace_path, const json& candidate_json,
               const std::string& order_path, const std::string& phi_path,
               const std::string& tau_path, const std::string& base_path, double tol) {
    qmt::ConditionReport report;
    if (system == "C") {
        // The C-system runs on a preorder + utility; no space/map config.
        const qmt::Preorder order = qmt::preorder_from_json(qmt::read_json_file(order_path));
        const qmt::Utility phi =
            qmt::utility_from_json(qmt::read_json_file(phi_path), order.universe());
        if (candidate_json.is_null()) {
            std::cerr << "verify: system C needs --candidate (the start point x0)\n";
            return 1;
        }
        const qmt::Point x0 = qmt::point_from_json(candidate_json, order.universe());
        const auto points =
            qmt::trace_points_from_jsonl(qmt::read_text_file(trace_path), order.universe());
        report = qmt::check_C_conditions(order, phi, x0, points, tol);
    } else {
        json j = qmt::read_json_file(config_path);
        if (!j.contains("x0")) j["x0"] = candidate_json.is_null() ? json(0.0) : candidate_json;
        const qmt::LoadedExperiment exp =
            qmt::load_experiment(qmt::ExperimentConfig::from_json(j));
        const auto points =
            qmt::trace_points_from_jsonl(qmt::read_text_file(trace_path), exp.space.universe());

        if (system == "E" || system == "B") {
            if (candidate_json.is_null()) {
                std::cerr << "verify: systems E and B need --candidate\n";
                return 1;
            }
            const qmt::Point candidate =
                qmt::point_from_json(candidate_json, exp.space.universe());
            if (system == "E") {
                report = qmt::check_E_conditions(points, exp.map, exp.space, candidate, tol);
            } else {
                const auto base = qmt::finite_space_from_json(qmt::read_json_file(base_path));
                const auto pmat = qmt::finite_space_from_json(qmt::read_json_file(tau_path));
                report = qmt::check_B_conditions(
                    points, exp.map, qmt::TauFunction::from_matrices(base, pmat, true),
                    candidate, tol);
            }
        } else if (system == "F") {
            std::vector<std::vector<qmt::Point>> traces;
            if (!points.empty()) traces.push_back(points);
            report = qmt::check_F_conditions(exp.map, exp.space, traces, tol);
        } else if (system == "A") {
            report = qmt::check_A_conditions(exp.map, exp.space, tol);
        } else {
            std::cerr << "verify: unknown system '" << system << "' (use A|B|C|E|F)\n";
            return 1;
        }
    }
    std::cout << report.to_json().dump(2) << "\n";
    return report.all_hold() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-metric toolkit: spaces, set-valued maps, Picard searches, checkers"};
    app.require_subcommand(1);

    // check-space
    auto* check = app.add_subcommand("check-space", "check the axioms of a space");
    std::string finite_path, builtin_name, params_path;
    int triples = 10000;
    std::uint64_t seed = 1;
    double tol = 1e-12;
    check->add_option("--finite", finite_path, "finite space JSON path");
    check->add_option("--builtin", builtin_name, "builtin space name");
    check->add_option("--params", params_path, "builtin parameter JSON (minkowski_gauge)");
    check->add_option("--triples", triples, "sampled triples");
    check->add_option("--seed", seed, "sampling seed");
    check->add_option("--tol", tol, "sampling tolerance");

    // iterate
    auto* iterate_cmd = app.add_subcommand("iterate", "run an invariant-point search");
    std::string config_path;
    json overrides = json::object();
    std::string x0_str, out_trace, out_summary, out_report;
    std::optional<int> budget_opt;
    std::optional<double> gap_tol_opt, epsilon_opt;
    std::optional<std::uint64_t> seed_opt;
    iterate_cmd->add_option("--config", config_path, "experiment config JSON");
    iterate_cmd->add_option("--x0", x0_str, "start point (overrides config)");
    iterate_cmd->add_option("--budget", budget_opt, "max steps");
    iterate_cmd->add_option("--gap-tol", gap_tol_opt, "sup-gap stop tolerance");
    iterate_cmd->add_option("--epsilon", epsilon_opt, "limit-detection epsilon");
    iterate_cmd->add_option("--seed", seed_opt, "config seed");
    iterate_cmd->add_option("--out-trace", out_trace, "trace JSONL path");
    iterate_cmd->add_option("--out-summary", out_summary, "summary JSON path");
    iterate_cmd->add_option("--out-report", out_report, "condition report JSON path");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check a condition system on a trace");
    std::string system, trace_path, candidate_str, order_path, phi_path, tau_path, base_path;
    double verify_tol = 1e-6;
    verify_cmd->add_option("--system", system, "A|B|C|E|F")->required();
    verify_cmd->add_option("--config", config_path, "experiment config JSON");
    verify_cmd->add_option("--trace", trace_path, "trace JSONL path")->required();
    verify_cmd->add_option("--candidate", candidate_str,
                           "common-point candidate (start point for system C)");
    verify_cmd->add_option("--order", order_path, "preorder JSON (system C)");
    verify_cmd->add_option("--phi", phi_path, "utility JSON (system C)");
    verify_cmd->add_option("--tau", tau_path, "p matrix JSON (system B)");
    verify_cmd->add_option("--base", base_path, "base metric matrix JSON (system B)");
    verify_cmd->add_option("--tol", verify_tol, "check tolerance");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a property sweep");
    std::string property = "prop42";
    int count = 200;
    std::vector<int> sizes = {2, 3, 4, 5, 6};
    std::uint64_t sweep_seed = 1;
    int sweep_budget = 16;
    bool serial = false;
    std::string out_sweep, dump_dir;
    sweep_cmd->add_option("--property", property,
                          "prop42|prop43|prop44|thm45|reduction_qiu|reduction_kq|thm41_gate");
    sweep_cmd->add_option("--count", count, "instances");
    sweep_cmd->add_option("--sizes", sizes, "point counts, e.g. --sizes 2 3 4");
    sweep_cmd->add_option("--seed", sweep_seed, "master seed");
    sweep_cmd->add_option("--budget", sweep_budget, "trace budget");
    sweep_cmd->add_flag("--serial", serial, "serial reference path (no worker fan-out)");
    sweep_cmd->add_option("--out", out_sweep, "sweep report JSON path");
    sweep_cmd->add_option("--dump-dir", dump_dir, "directory for violation dumps");

    // demo-evp
    auto* evp_cmd = app.add_subcommand("demo-evp",
                                       "descent-map search for a closed-form objective");
    std::string evp_space = "remark46", objective = "x";
    double lambda = 1.0;
    double evp_x0 = 1.0;
    int evp_budget = 100;
    double evp_gap_tol = 1e-9;
    evp_cmd->add_option("--space", evp_space, "builtin scalar space");
    evp_cmd->add_option("--objective", objective, "objective expression in x");
    evp_cmd->add_option("--lambda", lambda, "descent weight (> 0)");
    evp_cmd->add_option("--x0", evp_x0, "start point");
    evp_cmd->add_option("--budget", evp_budget, "max steps");
    evp_cmd->add_option("--gap-tol", evp_gap_tol, "sup-gap stop tolerance");
    evp_cmd->add_option("--out-trace", out_trace, "trace JSONL path");
    evp_cmd->add_option("--out-summary", out_summary, "summary JSON path");

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "re-run a sweep violation dump");
    std::string dump_path;
    replay_cmd->add_option("--dump", dump_path, "violation dump JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            return cmd_check_space(finite_path, builtin_name, params_path, triples, seed, tol);
        }
        if (iterate_cmd->parsed()) {
            if (!x0_str.empty()) overrides["x0"] = parse_point_arg(x0_str);
            if (budget_opt) overrides["budget"] = *budget_opt;
            if (gap_tol_opt) overrides["gap_tol"] = *gap_tol_opt;
            if (epsilon_opt) overrides["epsilon"] = *epsilon_opt;
            if (seed_opt) overrides["seed"] = *seed_opt;
            json out = json::object();
            if (!out_trace.empty()) out["trace"] = out_trace;
            if (!out_summary.empty()) out["summary"] = out_summary;
            if (!out_report.empty()) out["report"] = out_report;
            if (!out.empty()) overrides["out"] = out;
            const auto artifacts = qmt::run_experiment(config_from_cli(config_path, overrides));
            std::cout << artifacts.summary.dump(2) << "\n";
            return artifacts.exit_code;
        }
        if (verify_cmd->parsed()) {
            const json candidate =
                candidate_str.empty() ? json() : parse_point_arg(candidate_str);
            return cmd_verify(system, config_path, trace_path, candidate, order_path, phi_path,
                              tau_path, base_path, verify_tol);
        }
        if (sweep_cmd->parsed()) {
            qmt::SweepPlan plan;
            plan.property = qmt::property_from_string(property);
            plan.count = count;
            plan.sizes = sizes;
            plan.seed = sweep_seed;
            plan.budget = sweep_budget;
            plan.mode = serial ? qmt::ExecutionMode::serial : qmt::ExecutionMode::parallel;
            const qmt::SweepReport report = qmt::run_sweep(plan);
            const json j = report.to_json();
            std::cout << j.dump(2) << "\n";
            if (!out_sweep.empty()) qmt::write_text_file(out_sweep, j.dump(2) + "\n");
            if (!dump_dir.empty()) {
                for (std::size_t i = 0; i < report.violations.size(); ++i) {
                    qmt::write_text_file(dump_dir + "/violation_" + property + "_" +
                                             std::to_string(report.seed) + "_" +
                                             std::to_string(i) + ".json",
                                         report.violations[i].dump.dump(2) + "\n");
                }
            }
            return report.violations.empty() ? 0 : 1;
        }
        if (evp_cmd->parsed()) {
            json config{{"space", {{"builtin", evp_space}}},
                        {"map", {{"descent", {{"objective", objective}, {"lambda", lambda}}}}},
                        {"rule", {{"kind", "near_sup"}}},
                        {"x0", evp_x0},
                        {"budget", evp_budget},
                        {"gap_tol", evp_gap_tol}};
            json out = json::object();
            if (!out_trace.empty()) out["trace"] = out_trace;
            if (!out_summary.empty()) out["summary"] = out_summary;
            if (!out.empty()) config["out"] = out;
            const auto artifacts =
                qmt::run_experiment(qmt::ExperimentConfig::from_json(config));
            std::cout << artifacts.summary.dump(2) << "\n";
            return artifacts.exit_code;
        }
        if (replay_cmd->parsed()) {
            const std::string verdict = qmt::replay_violation(qmt::read_json_file(dump_path));
            std::cout << verdict << "\n";
            return verdict == "ok" ? 0 : 1;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
