#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resrwa/cli.hpp"
#include "resrwa/config.hpp"
#include "resrwa/simulate.hpp"

using namespace resrwa;

namespace {

struct AnalyzeFlags {
    std::string config;
    std::optional<std::string> input;
    std::optional<std::string> response;
    std::optional<std::string> family;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> variables;
    bool no_selection = false;
    bool serial = false;
};

int analyze(const AnalyzeFlags& f) {
    RunConfig config;
    try {
        if (!f.config.empty()) config = parse_config_file(f.config);
        if (f.input) config.input = *f.input;
        if (f.response) config.response = *f.response;
        if (f.family) config.family = parse_family(*f.family);
        if (f.output) config.output = *f.output;
        if (f.format) config.format = parse_format(*f.format);
        if (f.seed) config.seed = f.seed;
        if (f.no_selection) config.selection = false;
        if (!f.variables.empty()) {
            std::string text;
            for (const auto& v : f.variables) text += "variable = " + v + "\n";
            std::istringstream in(text);
            config.variables = parse_config(in).variables;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    const auto outcome =
        run_analysis(config, std::cout, std::cerr, f.serial ? Execution::SerialReference : Execution::Parallel);
    return outcome.exit_code;
}

int export_small_terms(std::uint64_t seed, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write '" << path << "'\n";
        return kExitConfig;
    }
    write_small_terms(out, synthetic_small_terms(seed));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_limit_from_env();

    CLI::App app{"Residualized relative weight analysis"};
    app.require_subcommand(1);

    AnalyzeFlags af;
    auto* an = app.add_subcommand("analyze", "Select a model by BIC and report relative weights");
    an->add_option("--config", af.config, "Run configuration file");
    an->add_option("--input", af.input, "CSV input (overrides config)");
    an->add_option("--response", af.response, "Response column (overrides config)");
    an->add_option("--family", af.family, "gaussian or binomial");
    an->add_option("--output", af.output, "Write the report here in --format");
    an->add_option("--format", af.format, "table, csv or json");
    an->add_option("--seed", af.seed, "Recorded with the run; the analysis itself is deterministic");
    an->add_option("--variable", af.variables, "name,role,knots (repeatable; replaces config variables)");
    an->add_flag("--no-selection", af.no_selection, "Analyse the full model without stepwise search");
    an->add_flag("--serial", af.serial, "Use the serial reference scoring path");

    SimulationRequest sr;
    std::string sim_family = "gaussian";
    auto* sim = app.add_subcommand("simulate", "Generate a benchmark dataset");
    sim->add_option("--model", sr.model, "ishigami, moon-base or moon-c3")->required();
    sim->add_option("--n", sr.n, "Sample size")->capture_default_str();
    sim->add_option("--seed", sr.seed, "Generator seed")->capture_default_str();
    sim->add_option("--output", sr.output, "CSV output")->required();
    sim->add_option("--small-terms", sr.small_terms, "Moon small-term table (term_kind,i,j,coefficient)");
    sim->add_option("--config-out", sr.config_out, "Also write a default analysis config");
    sim->add_option("--family", sim_family, "Family for --config-out")->capture_default_str();

    std::uint64_t terms_seed = 1;
    std::string terms_out;
    auto* st = app.add_subcommand("small-terms", "Write the seeded synthetic Moon small-term table");
    st->add_option("--seed", terms_seed, "Generator seed")->capture_default_str();
    st->add_option("--output", terms_out, "Output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*an) return analyze(af);
    if (*sim) {
        try {
            sr.family = parse_family(sim_family);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitConfig;
        }
        return run_simulation(sr, std::cerr);
    }
    return export_small_terms(terms_seed, terms_out);
}
