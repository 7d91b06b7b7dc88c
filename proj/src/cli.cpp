#include "resrwa/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "resrwa/pipeline.hpp"
#include "resrwa/report.hpp"
#include "resrwa/simulate.hpp"
#include "resrwa/table.hpp"

namespace resrwa {

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::UnsupportedKnotCount:
        case ErrorKind::DuplicateName:
        case ErrorKind::ControlInInteraction:
        case ErrorKind::ConfigError:
            return kExitConfig;
        case ErrorKind::MissingColumn:
        case ErrorKind::DegenerateVariable:
        case ErrorKind::NonBinaryResponse:
        case ErrorKind::ConstantResponse:
        case ErrorKind::MalformedCoefficientTable:
        case ErrorKind::DataError:
            return kExitData;
        case ErrorKind::RankDeficient:
        case ErrorKind::ZeroVarianceColumn:
        case ErrorKind::DegenerateFit:
            return kExitNumerical;
    }
    return kExitNumerical;
}

namespace {

// Non-{0,1} responses are reported against the file line, which differs from
// the row index once incomplete rows have been dropped.
void check_binary_response(const CsvReadResult& csv, const std::string& response) {
    const Eigen::VectorXd& y = csv.table.column(response);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] != 0.0 && y[i] != 1.0) {
            std::ostringstream msg;
            msg << "response '" << response << "' at row " << csv.source_rows[static_cast<std::size_t>(i)]
                << " is " << y[i] << ", expected 0 or 1";
            throw Error(ErrorKind::NonBinaryResponse, msg.str());
        }
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
    out << text;
}

AnalysisOutcome fail(int code, const std::string& message, std::ostream& log) {
    log << "error: " << message << '\n';
    AnalysisOutcome outcome;
    outcome.exit_code = code;
    outcome.message = message;
    return outcome;
}

}  // namespace

AnalysisOutcome run_analysis(const RunConfig& config, std::ostream& out, std::ostream& log, Execution execution) {
    try {
        if (config.input.empty()) throw Error(ErrorKind::ConfigError, "no input file given");
        AnalysisConfig analysis;
        analysis.response = config.response;
        analysis.family = config.family;
        analysis.variables = config.variables;
        analysis.selection = config.selection;
        analysis.selection_options.execution = execution;
        validate_config(analysis);

        const CsvReadResult csv = read_csv_file(config.input);
        log << "read " << csv.rows_read << " rows, " << csv.rows_dropped << " dropped as incomplete, "
            << csv.table.rows() << " used\n";
        if (!csv.table.has(config.response)) {
            throw Error(ErrorKind::MissingColumn, "response column '" + config.response + "' not in input");
        }
        for (const auto& v : config.variables) {
            if (!csv.table.has(v.name)) throw Error(ErrorKind::MissingColumn, "variable '" + v.name + "' not in input");
        }
        if (config.family == Family::Binomial) check_binary_response(csv, config.response);

        const AnalysisResult result = run_pipeline(csv.table, analysis);
        if (result.selection) {
            log << "selection: BIC " << result.selection->initial_bic;
            for (const auto& step : result.selection->trace) log << " -> " << step.move.describe() << " (" << step.bic << ")";
            log << '\n';
        }
        for (const auto w : result.report.warnings) log << "warning: " << to_string(w) << '\n';

        if (!config.output.empty()) {
            write_file(config.output, render(result.report, config.format));
            out << render_table(result.report);
        } else {
            out << render(result.report, config.format);
        }

        AnalysisOutcome outcome;
        outcome.report = result.report;
        return outcome;
    } catch (const Error& e) {
        return fail(exit_code(e.kind()), e.what(), log);
    } catch (const std::exception& e) {
        return fail(kExitNumerical, e.what(), log);
    }
}

RunConfig default_simulation_config(const std::string& model, const std::string& input, Family family) {
    const SimModel m = parse_sim_model(model);
    const int d = m == SimModel::Ishigami ? 8 : kMoonDimension;
    RunConfig config;
    config.input = input;
    config.family = family;
    config.response = family == Family::Gaussian ? "y_g" : "y_b";
    for (int i = 1; i <= d; ++i) config.variables.push_back({"X" + std::to_string(i), VariableRole::Free, 5});
    return config;
}

int run_simulation(const SimulationRequest& request, std::ostream& log) {
    try {
        const SimModel model = parse_sim_model(request.model);
        if (request.n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1, got " + std::to_string(request.n));
        if (request.output.empty()) throw Error(ErrorKind::ConfigError, "no output file given");

        SmallTermTable small;
        if (model != SimModel::Ishigami) {
            small = request.small_terms.empty() ? synthetic_small_terms(request.seed)
                                                : read_small_terms_file(request.small_terms);
        } else if (!request.small_terms.empty()) {
            log << "note: --small-terms ignored for ishigami\n";
        }

        const SimulatedDataset data = simulate(model, static_cast<Eigen::Index>(request.n), request.seed, small);
        std::ofstream out(request.output);
        if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + request.output + "'");
        write_csv(out, data.to_table());
        log << "wrote " << request.n << " rows of " << to_string(model) << " to " << request.output << '\n';

        if (!request.config_out.empty()) {
            std::ofstream cfg(request.config_out);
            if (!cfg) throw Error(ErrorKind::ConfigError, "cannot write '" + request.config_out + "'");
            write_config(cfg, default_simulation_config(request.model, request.output, request.family));
        }
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        // Bad model names and sizes are usage errors here, not data errors.
        return e.kind() == ErrorKind::InvalidArgument ? kExitConfig : exit_code(e.kind());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace resrwa
