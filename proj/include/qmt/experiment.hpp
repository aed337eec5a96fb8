#pragma once

#include <optional>
#include <string>

#include "qmt/json_io.hpp"

namespace qmt {

/// Declarative experiment: a space, a map over it, a selection rule, and the
/// run parameters. Loadable from one JSON document; every field has a flag
/// counterpart on the command line.
struct ExperimentConfig {
    nlohmann::json space_spec;  // {"builtin": name, ...} | {"finite": path}
    nlohmann::json map_spec;    // {"builtin":"interval_0_x"} | {"extensional": path}
                                // | {"level_set_of": path} | {"descent": {...}}
    nlohmann::json rule_spec;   // {"kind":"near_sup"|"near_inf", ...}
    nlohmann::json x0;
    int budget = 100;
    double gap_tol = 1e-9;
    double epsilon = 1e-6;
    int grid = SetValuedMap::kDefaultGrid;
    std::uint64_t seed = 1;
    std::optional<std::string> trace_path;
    std::optional<std::string> summary_path;
    std::optional<std::string> report_path;

    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentArtifacts {
    std::string trace_jsonl;
    nlohmann::json summary;
    nlohmann::json report;
    int exit_code = 0;  // 0 invariant/nonvariant, 2 budget, 3 condition violation
};

struct LoadedExperiment {
    QuasiMetricSpace space;
    SetValuedMap map;
    SelectionRule rule;
    Point x0;
};

/// Materializes the space/map/rule named by the config. Throws
/// std::invalid_argument naming the offending field.
LoadedExperiment load_experiment(const ExperimentConfig& config);

/// Runs the search described by the config and writes any configured output
/// files. Pure given the config; identical configs yield identical artifacts.
ExperimentArtifacts run_experiment(const ExperimentConfig& config);

}  // namespace qmt
