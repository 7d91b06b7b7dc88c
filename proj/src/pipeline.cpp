#include "resrwa/pipeline.hpp"

#include <algorithm>

#include "resrwa/error.hpp"

namespace resrwa {

void validate_config(const AnalysisConfig& config) {
    if (config.response.empty()) throw Error(ErrorKind::ConfigError, "no response column given");
    for (const auto& v : config.variables) {
        if (v.name == config.response) {
            throw Error(ErrorKind::ConfigError, "response '" + config.response + "' is also listed as a predictor");
        }
    }
    const bool any_model_variable = std::any_of(config.variables.begin(), config.variables.end(),
                                                [](const VariableSpec& v) { return v.role != VariableRole::Control; });
    if (!any_model_variable) throw Error(ErrorKind::ConfigError, "at least one fixed or free variable is required");
    try {
        validate_specs(config.variables);
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.detail());
    }
}

AnalysisResult run_pipeline(const ColumnTable& data, const AnalysisConfig& config) {
    validate_config(config);
    const Eigen::VectorXd& y = data.column(config.response);
    validate_response(y, config.family);

    const TermCatalog catalog(data, config.variables);
    AnalysisResult result;
    if (config.selection) {
        result.selection = stepwise_select(catalog, y, config.family, config.selection_options);
        result.terms = result.selection->terms;
        result.fit = result.selection->fit;
    } else {
        result.terms = TermSet{make_scope(catalog).upper};
        result.fit = fit(catalog.design(result.terms.terms()), y, config.family, config.selection_options.irls);
    }

    const DesignMatrix design = catalog.design(result.terms.terms());
    result.residualized = residualize_interactions(design, config.selection_options.execution);
    result.report = relative_weights(result.residualized, y, config.family, config.variables,
                                     config.selection_options.irls);
    return result;
}

}  // namespace resrwa
