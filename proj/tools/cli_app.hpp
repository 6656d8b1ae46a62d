#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cslprobe/budget.hpp"
#include "cslprobe/config.hpp"
#include "cslprobe/scenarios.hpp"

namespace cslprobe::cli {

/// Values injected by --paper-values in place of the simulated intermediates.
struct ReferenceValues {
    static constexpr double eta_om = 0.32;
    static constexpr double p_om = 8.4e-8;
    static constexpr double p_f = 3.5e-10;
    static constexpr double D = 5.1e5;
};

struct BudgetRun {
    NoiseBudget budget;
    std::optional<NoisePipeline> pipeline;  ///< live mode only
};

/// Budget for a resolved configuration; live mode runs the full scenario chain.
BudgetRun compute_budget(const RunConfig& config);

/// Entry point behind the executable. Returns the process exit code; results
/// go to files under the output directory, summaries to `out`, errors as JSON to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cslprobe::cli
