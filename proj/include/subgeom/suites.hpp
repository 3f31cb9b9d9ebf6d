#pragma once

// Named verification suites. Each suite checks one acceptance criterion with its
// tolerances fixed in suites.cpp; "all" runs every suite in order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgeom/parallel.hpp"

namespace subgeom::suites {

struct SuiteOptions {
    std::optional<int> count;  // overrides the default sample count of the suite
    std::uint64_t seed = 7;
    Exec exec = Exec::Parallel;
};

struct CriterionResult {
    int id = 0;
    std::string suite;
    std::string title;
    bool checks_passed = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    bool budget_applies = true;  // false when the sample count was overridden
    std::string detail;
    nlohmann::json metrics = nlohmann::json::object();

    bool within_budget() const { return !budget_applies || seconds <= budget_seconds; }
    bool passed() const { return checks_passed && within_budget(); }
};

/// Suite names in criterion order, followed by "all".
const std::vector<std::string>& suite_names();

/// Throws PreconditionError("unknown suite ...") for names not in suite_names().
std::vector<CriterionResult> run_suite(const std::string& name, const SuiteOptions& options = {});

/// Deterministic record: wall-clock time is left out so identical runs serialize identically.
nlohmann::json to_json(const CriterionResult& r);

}  // namespace subgeom::suites
