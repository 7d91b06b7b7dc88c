#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resrwa/design.hpp"
#include "resrwa/glm.hpp"

namespace resrwa {

enum class OutputFormat { Table, Csv, Json };

std::string_view to_string(OutputFormat format);

/// Run configuration file. One `key = value` per line, `#` starts a comment:
///
///     input     = ishigami.csv
///     response  = y_g
///     family    = gaussian        # or binomial
///     selection = on              # or off
///     format    = table           # table | csv | json
///     output    = report.json     # optional; stdout when absent
///     seed      = 1               # optional
///     variable  = X1, free, 5     # name, control|fixed|free, knots (1 = linear)
///
/// `variable` may repeat; order is preserved.
struct RunConfig {
    std::string input;
    std::string response;
    Family family = Family::Gaussian;
    std::vector<VariableSpec> variables;
    bool selection = true;
    OutputFormat format = OutputFormat::Table;
    std::string output;
    std::optional<std::uint64_t> seed;
};

Family parse_family(const std::string& text);
VariableRole parse_role(const std::string& text);
OutputFormat parse_format(const std::string& text);

/// Throws ConfigError naming the line on any malformed entry.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

void write_config(std::ostream& out, const RunConfig& config);

}  // namespace resrwa
