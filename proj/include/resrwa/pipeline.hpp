#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resrwa/design.hpp"
#include "resrwa/glm.hpp"
#include "resrwa/residualize.hpp"
#include "resrwa/rwa.hpp"
#include "resrwa/selection.hpp"

namespace resrwa {

struct AnalysisConfig {
    std::string response;
    Family family = Family::Gaussian;
    std::vector<VariableSpec> variables;
    /// When false the full upper scope (every main and every eligible
    /// interaction) is analysed without search.
    bool selection = true;
    SelectionOptions selection_options;
};

/// Throws ConfigError when the response is listed as a predictor or no
/// fixed/free variable is given.
void validate_config(const AnalysisConfig& config);

struct AnalysisResult {
    TermSet terms;
    ModelFit fit;
    std::optional<SelectionResult> selection;
    ResidualizedDesign residualized;
    RwaReport report;
};

/// Select, residualize, then weigh. `data` must be complete-case.
AnalysisResult run_pipeline(const ColumnTable& data, const AnalysisConfig& config);

}  // namespace resrwa
