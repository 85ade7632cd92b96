#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fdshock::cli {

struct CriterionResult {
    std::string id;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// When set, each run writes its CSVs and manifest below this directory.
    std::optional<std::filesystem::path> output_dir;
    /// Restrict to these criterion ids; empty runs all.
    std::vector<std::string> only;
};

/// Ids in execution order.
const std::vector<std::string>& criterion_ids();

/// Runs the acceptance criteria; progress goes to `log` when non-null.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log = nullptr);

/// "PASS id (1.2 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace fdshock::cli
