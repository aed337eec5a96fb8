#include "qmt/report.hpp"

#include <stdexcept>

namespace qmt {

const char* to_string(Status s) {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::undetermined: return "undetermined";
    }
    return "undetermined";
}

const char* to_string(Mode m) {
    return m == Mode::exact ? "exact" : "sampled";
}

nlohmann::json Verdict::to_json() const {
    nlohmann::json j;
    j["status"] = qmt::to_string(status);
    j["mode"] = qmt::to_string(mode);
    j["tolerance"] = tolerance;
    j["witness"] = witness;
    if (!info.is_null()) j["info"] = info;
    if (!reason.empty()) j["reason"] = reason;
    return j;
}

const Verdict& ConditionReport::at(std::string_view label) const {
    for (const auto& e : entries_) {
        if (e.label == label) return e.verdict;
    }
    throw std::out_of_range("no condition labeled '" + std::string(label) + "' in system " +
                            system_);
}

bool ConditionReport::has(std::string_view label) const {
    for (const auto& e : entries_) {
        if (e.label == label) return true;
    }
    return false;
}

Status ConditionReport::overall() const {
    bool any_undetermined = false;
    for (const auto& e : entries_) {
        if (e.optional) continue;
        if (e.verdict.status == Status::fails) return Status::fails;
        if (e.verdict.status == Status::undetermined) any_undetermined = true;
    }
    return any_undetermined ? Status::undetermined : Status::holds;
}

nlohmann::json ConditionReport::to_json() const {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& e : entries_) {
        nlohmann::json c = e.verdict.to_json();
        c["label"] = e.label;
        if (e.optional) c["optional"] = true;
        conditions.push_back(std::move(c));
    }
    return nlohmann::json{{"system", system_},
                          {"overall", qmt::to_string(overall())},
                          {"conditions", std::move(conditions)}};
}

}  // namespace qmt
