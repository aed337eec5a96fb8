#pragma once

#include <string>
#include <vector>

#include "qmt/oracle.hpp"

namespace qmt {

// Finite spaces: {"points": ["a", ...], "matrix": [[...], ...]}.
FiniteQuasiMetricSpace finite_space_from_json(const nlohmann::json& j);
nlohmann::json finite_space_to_json(const FiniteQuasiMetricSpace& space);

// Extensional maps: {"images": {"a": ["a", "b"], ...}} over a finite universe.
SetValuedMap extensional_map_from_json(const nlohmann::json& j, const Universe& universe);
nlohmann::json extensional_map_to_json(const SetValuedMap& map);

// Preorders: {"points": [...], "edges": [["u","x"], ...], "closure": true}
// where an edge [u, x] reads u <= x and "closure" applies the
// reflexive-transitive closure of the edge list.
Preorder preorder_from_json(const nlohmann::json& j);

// Utilities over finite universes: {"values": {"a": 1.0, "b": "inf", ...}}.
Utility utility_from_json(const nlohmann::json& j, const Universe& universe);

/// Accepts a finite label or index, a number, or a coordinate array,
/// depending on the universe.
Point point_from_json(const nlohmann::json& j, const Universe& universe);
nlohmann::json point_to_json(const Point& p);

/// One JSON object per line: {"n": k, "x": ..., "step_dist": ..., "sup_gap":
/// ..., "slack": ...} plus "inf_gap" on near-inf runs.
std::string trace_to_jsonl(const PicardTrace& trace);
std::vector<Point> trace_points_from_jsonl(const std::string& text, const Universe& universe);

nlohmann::json search_result_to_json(const SearchResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
nlohmann::json read_json_file(const std::string& path);

}  // namespace qmt
