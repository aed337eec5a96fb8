#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qmt {

enum class Status { holds, fails, undetermined };
enum class Mode { exact, sampled };

const char* to_string(Status s);
const char* to_string(Mode m);

/// Outcome of a single named condition check. A fails verdict always carries
/// a concrete witness; an undetermined verdict carries the reason.
struct Verdict {
    Status status = Status::undetermined;
    Mode mode = Mode::exact;
    double tolerance = 0.0;
    nlohmann::json witness;  // null unless status == fails
    nlohmann::json info;     // optional extras, e.g. a discovered index
    std::string reason;      // set when status == undetermined

    static Verdict pass(Mode m, double tol, nlohmann::json info = nullptr) {
        Verdict v;
        v.status = Status::holds;
        v.mode = m;
        v.tolerance = tol;
        v.info = std::move(info);
        return v;
    }
    static Verdict fail(Mode m, double tol, nlohmann::json witness) {
        Verdict v;
        v.status = Status::fails;
        v.mode = m;
        v.tolerance = tol;
        v.witness = std::move(witness);
        return v;
    }
    static Verdict unknown(std::string reason, double tol = 0.0) {
        Verdict v;
        v.status = Status::undetermined;
        v.tolerance = tol;
        v.reason = std::move(reason);
        return v;
    }

    bool holds() const { return status == Status::holds; }
    bool fails() const { return status == Status::fails; }

    nlohmann::json to_json() const;
};

/// Per-condition verdicts for one named condition system. Optional entries
/// (reported for information, e.g. a strengthening side condition) do not
/// enter the overall verdict.
class ConditionReport {
public:
    struct Entry {
        std::string label;
        Verdict verdict;
        bool optional = false;
    };

    ConditionReport() = default;
    explicit ConditionReport(std::string system) : system_(std::move(system)) {}

    void add(std::string label, Verdict v, bool optional = false) {
        entries_.push_back({std::move(label), std::move(v), optional});
    }

    const std::string& system() const { return system_; }
    const std::vector<Entry>& entries() const { return entries_; }
    const Verdict& at(std::string_view label) const;
    bool has(std::string_view label) const;

    /// fails if any required condition fails, else undetermined if any
    /// required condition is undetermined, else holds.
    Status overall() const;
    bool all_hold() const { return overall() == Status::holds; }

    nlohmann::json to_json() const;

private:
    std::string system_;
    std::vector<Entry> entries_;
};

}  // namespace qmt
