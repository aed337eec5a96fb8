#include "qmt/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmt {

namespace {

std::size_t label_index(const Universe& universe, const std::string& label) {
    const auto& labels = universe.labels();
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw std::invalid_argument("unknown point label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

FiniteQuasiMetricSpace finite_space_from_json(const nlohmann::json& j) {
    if (!j.contains("points") || !j.contains("matrix")) {
        throw std::invalid_argument("finite space JSON needs \"points\" and \"matrix\"");
    }
    const auto labels = j.at("points").get<std::vector<std::string>>();
    std::vector<double> matrix;
    matrix.reserve(labels.size() * labels.size());
    for (const auto& row : j.at("matrix")) {
        if (row.size() != labels.size()) {
            throw std::invalid_argument("finite space matrix row has the wrong length");
        }
        for (const auto& v : row) matrix.push_back(v.get<double>());
    }
    return FiniteQuasiMetricSpace(labels, std::move(matrix));
}

nlohmann::json finite_space_to_json(const FiniteQuasiMetricSpace& space) {
    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < space.size(); ++k) row.push_back(space.at(i, k));
        matrix.push_back(std::move(row));
    }
    return nlohmann::json{{"points", space.labels()}, {"matrix", std::move(matrix)}};
}

SetValuedMap extensional_map_from_json(const nlohmann::json& j, const Universe& universe) {
    if (!universe.is_finite()) {
        throw std::invalid_argument("extensional maps need a finite universe");
    }
    if (!j.contains("images")) {
        throw std::invalid_argument("extensional map JSON needs \"images\"");
    }
    std::vector<std::vector<std::size_t>> images(universe.size());
    for (const auto& [label, members] : j.at("images").items()) {
        auto& img = images[label_index(universe, label)];
        for (const auto& m : members) img.push_back(label_index(universe, m.get<std::string>()));
    }
    return SetValuedMap::extensional(universe, std::move(images));
}

nlohmann::json extensional_map_to_json(const SetValuedMap& map) {
    const auto& labels = map.universe().labels();
    nlohmann::json images = nlohmann::json::object();
    for (std::size_t x = 0; x < labels.size(); ++x) {
        nlohmann::json members = nlohmann::json::array();
        for (std::size_t u : map.table()[x]) members.push_back(labels[u]);
        images[labels[x]] = std::move(members);
    }
    return nlohmann::json{{"images", std::move(images)}};
}

Preorder preorder_from_json(const nlohmann::json& j) {
    const auto labels = j.at("points").get<std::vector<std::string>>();
    const Universe universe = Universe::finite(labels);
    const std::size_t n = labels.size();
    std::vector<bool> leq(n * n, false);
    for (const auto& edge : j.value("edges", nlohmann::json::array())) {
        if (edge.size() != 2) throw std::invalid_argument("preorder edge must be a pair [u, x]");
        leq[label_index(universe, edge[0].get<std::string>()) * n +
            label_index(universe, edge[1].get<std::string>())] = true;
    }
    if (j.value("closure", false)) {
        for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = true;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!leq[i * n + k]) continue;
                for (std::size_t m = 0; m < n; ++m) {
                    if (leq[k * n + m]) leq[i * n + m] = true;
                }
            }
        }
    }
    return Preorder::finite(universe, std::move(leq));
}

Utility utility_from_json(const nlohmann::json& j, const Universe& universe) {
    if (!universe.is_finite()) {
        throw std::invalid_argument("utility JSON values need a finite universe");
    }
    std::vector<double> values(universe.size(), 0.0);
    for (const auto& [label, v] : j.at("values").items()) {
        double value = 0.0;
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf" || s == "+inf") {
                value = std::numeric_limits<double>::infinity();
            } else if (s == "-inf") {
                value = -std::numeric_limits<double>::infinity();
            } else {
                throw std::invalid_argument("utility value string must be \"inf\" or \"-inf\"");
            }
        } else {
            value = v.get<double>();
        }
        values[label_index(universe, label)] = value;
    }
    return Utility::from_values(std::move(values));
}

Point point_from_json(const nlohmann::json& j, const Universe& universe) {
    if (universe.is_finite()) {
        if (j.is_string()) return Point::finite(label_index(universe, j.get<std::string>()));
        return Point::finite(j.get<std::size_t>());
    }
    if (j.is_array()) return Point::vector(j.get<std::vector<double>>());
    return Point::scalar(j.get<double>());
}

nlohmann::json point_to_json(const Point& p) {
    nlohmann::json j = p;
    return j;
}

std::string trace_to_jsonl(const PicardTrace& trace) {
    std::ostringstream out;
    for (std::size_t n = 0; n < trace.steps.size(); ++n) {
        const TraceStep& s = trace.steps[n];
        nlohmann::json rec{{"n", n}, {"x", s.x}, {"slack", s.slack}};
        rec["step_dist"] = s.step_dist ? nlohmann::json(*s.step_dist) : nlohmann::json();
        rec["sup_gap"] = s.sup_gap ? nlohmann::json(*s.sup_gap) : nlohmann::json();
        if (s.inf_gap) rec["inf_gap"] = *s.inf_gap;
        out << rec.dump() << '\n';
    }
    return out.str();
}

std::vector<Point> trace_points_from_jsonl(const std::string& text, const Universe& universe) {
    std::vector<Point> points;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        points.push_back(point_from_json(rec.at("x"), universe));
    }
    return points;
}

nlohmann::json search_result_to_json(const SearchResult& result) {
    const std::size_t steps =
        result.trace.steps.empty() ? 0 : result.trace.steps.size() - 1;
    nlohmann::json j{{"outcome", to_string(result.outcome)},
                     {"stop_reason", to_string(result.trace.reason)},
                     {"steps", steps},
                     {"exact", result.exact},
                     {"report", result.e_report.to_json()}};
    j["point"] = result.point ? nlohmann::json(*result.point) : nlohmann::json();
    j["residual_gap"] =
        result.residual_gap ? nlohmann::json(*result.residual_gap) : nlohmann::json();
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file '" + path + "'");
    out << content;
}

nlohmann::json read_json_file(const std::string& path) {
    return nlohmann::json::parse(read_text_file(path));
}

}  // namespace qmt
