#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "resrwa/config.hpp"
#include "resrwa/error.hpp"
#include "resrwa/parallel.hpp"
#include "resrwa/rwa.hpp"

namespace resrwa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

/// Process exit status for a library error.
int exit_code(ErrorKind kind);

struct AnalysisOutcome {
    int exit_code = kExitOk;
    std::optional<RwaReport> report;
    std::string message;  // error text when exit_code != 0
};

/// Reads `config.input`, runs select -> residualize -> weigh and writes the
/// report. The table goes to `out`; when `config.output` is set the chosen
/// format is also written there, otherwise a non-table format replaces the
/// table on `out`. Progress and errors go to `log`.
AnalysisOutcome run_analysis(const RunConfig& config, std::ostream& out, std::ostream& log,
                             Execution execution = Execution::Parallel);

struct SimulationRequest {
    std::string model;
    long long n = 3000;
    std::uint64_t seed = 1;
    std::string output;
    /// Moon only: `term_kind,i,j,coefficient` file. Seeded synthetic terms
    /// are used when empty.
    std::string small_terms;
    /// Optional path for a ready-to-run config describing the output.
    std::string config_out;
    Family family = Family::Gaussian;
};

/// Writes X1..Xd, y_g, y_b. Exit 2 on an unknown model or n < 1.
int run_simulation(const SimulationRequest& request, std::ostream& log);

/// Config for analysing a simulated file: every X column Free with 5 knots.
RunConfig default_simulation_config(const std::string& model, const std::string& input, Family family);

}  // namespace resrwa
