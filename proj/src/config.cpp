#include "resrwa/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "resrwa/error.hpp"

namespace resrwa {

std::string_view to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: return "table";
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
    }
    return "table";
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <typename T>
bool parse_integer(const std::string& s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_switch(const std::string& value) {
    const std::string v = lower(value);
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw Error(ErrorKind::ConfigError, "expected on/off, got '" + value + "'");
}

VariableSpec parse_variable(const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(trim(part));
    if (parts.size() < 2 || parts.size() > 3) {
        throw Error(ErrorKind::ConfigError, "variable needs 'name, role[, knots]', got '" + value + "'");
    }
    VariableSpec spec;
    spec.name = parts[0];
    if (spec.name.empty()) throw Error(ErrorKind::ConfigError, "variable with empty name");
    spec.role = parse_role(parts[1]);
    spec.knots = 1;
    if (parts.size() == 3 && !parse_integer(parts[2], spec.knots)) {
        throw Error(ErrorKind::ConfigError, "knot count '" + parts[2] + "' is not an integer");
    }
    return spec;
}

}  // namespace

Family parse_family(const std::string& text) {
    const std::string v = lower(trim(text));
    if (v == "gaussian") return Family::Gaussian;
    if (v == "binomial" || v == "logistic") return Family::Binomial;
    throw Error(ErrorKind::ConfigError, "unknown family '" + text + "' (expected gaussian or binomial)");
}

VariableRole parse_role(const std::string& text) {
    const std::string v = lower(trim(text));
    if (v == "control") return VariableRole::Control;
    if (v == "fixed") return VariableRole::Fixed;
    if (v == "free") return VariableRole::Free;
    throw Error(ErrorKind::ConfigError, "unknown role '" + text + "' (expected control, fixed or free)");
}

OutputFormat parse_format(const std::string& text) {
    const std::string v = lower(trim(text));
    if (v == "table") return OutputFormat::Table;
    if (v == "csv") return OutputFormat::Csv;
    if (v == "json") return OutputFormat::Json;
    throw Error(ErrorKind::ConfigError, "unknown format '" + text + "' (expected table, csv or json)");
}

RunConfig parse_config(std::istream& in) {
    RunConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "expected 'key = value'");
            const std::string key = lower(trim(line.substr(0, eq)));
            const std::string value = trim(line.substr(eq + 1));
            if (key == "input") config.input = value;
            else if (key == "response") config.response = value;
            else if (key == "family") config.family = parse_family(value);
            else if (key == "selection") config.selection = parse_switch(value);
            else if (key == "format") config.format = parse_format(value);
            else if (key == "output") config.output = value;
            else if (key == "variable") config.variables.push_back(parse_variable(value));
            else if (key == "seed") {
                std::uint64_t seed = 0;
                if (!parse_integer(value, seed)) throw Error(ErrorKind::ConfigError, "seed '" + value + "' is not an integer");
                config.seed = seed;
            } else {
                throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
            }
        } catch (const Error& e) {
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": " + e.detail());
        }
    }
    return config;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
    return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& config) {
    if (!config.input.empty()) out << "input = " << config.input << '\n';
    out << "response = " << config.response << '\n';
    out << "family = " << to_string(config.family) << '\n';
    out << "selection = " << (config.selection ? "on" : "off") << '\n';
    out << "format = " << to_string(config.format) << '\n';
    if (!config.output.empty()) out << "output = " << config.output << '\n';
    if (config.seed) out << "seed = " << *config.seed << '\n';
    for (const auto& v : config.variables) {
        std::string role(to_string(v.role));
        std::transform(role.begin(), role.end(), role.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        out << "variable = " << v.name << ", " << role << ", " << v.knots << '\n';
    }
}

}  // namespace resrwa
