#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "resrwa/cli.hpp"
#include "resrwa/table.hpp"

using namespace resrwa;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "resrwa_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("simulation output feeds the analysis with a generated config") {
    const fs::path dir = scratch_dir();
    SimulationRequest req;
    req.model = "ishigami";
    req.n = 3000;
    req.seed = 1;
    req.output = (dir / "ish.csv").string();
    req.config_out = (dir / "ish.cfg").string();
    std::ostringstream log;
    REQUIRE(run_simulation(req, log) == kExitOk);

    const RunConfig config = parse_config_file(req.config_out);
    std::ostringstream out;
    const auto outcome = run_analysis(config, out, log);
    REQUIRE(outcome.exit_code == kExitOk);
    const std::string table = out.str();
    for (const char* row : {"X1 ", "X2 ", "X3 ", "X1 x X3"}) CHECK(table.find(row) != std::string::npos);
    CHECK(table.find("X4") == std::string::npos);
    CHECK(table.find("Interaction") != std::string::npos);
    CHECK(table.find("Free") != std::string::npos);
    CHECK(log.str().find("0 dropped") != std::string::npos);
}

TEST_CASE("simulation is deterministic and sized") {
    const fs::path dir = scratch_dir();
    std::ostringstream log;
    SimulationRequest a{"ishigami", 3000, 1, (dir / "a.csv").string(), "", "", Family::Gaussian};
    SimulationRequest b = a;
    b.output = (dir / "b.csv").string();
    REQUIRE(run_simulation(a, log) == kExitOk);
    REQUIRE(run_simulation(b, log) == kExitOk);
    CHECK(slurp(a.output) == slurp(b.output));

    SimulationRequest m{"moon-c3", 50, 2, (dir / "m.csv").string(), "", "", Family::Gaussian};
    REQUIRE(run_simulation(m, log) == kExitOk);
    CHECK(read_csv_file(m.output).table.cols() == 22);
}

TEST_CASE("simulation usage errors exit 2") {
    const fs::path dir = scratch_dir();
    std::ostringstream log;
    CHECK(run_simulation({"oakley", 10, 1, (dir / "x.csv").string(), "", "", Family::Gaussian}, log) == kExitConfig);
    CHECK(run_simulation({"ishigami", 0, 1, (dir / "x.csv").string(), "", "", Family::Gaussian}, log) == kExitConfig);
}

TEST_CASE("analysis exit codes") {
    const fs::path dir = scratch_dir();
    {
        std::ofstream csv(dir / "bad.csv");
        csv << "x,y\n";
        for (int i = 0; i < 30; ++i) csv << i * 0.1 << ',' << (i == 17 ? 2 : i % 2) << '\n';
    }
    RunConfig config;
    config.input = (dir / "bad.csv").string();
    config.response = "y";
    config.family = Family::Binomial;
    config.variables = {{"x", VariableRole::Free, 1}};
    std::ostringstream out, log;

    auto outcome = run_analysis(config, out, log);
    CHECK(outcome.exit_code == kExitData);
    CHECK(outcome.message.find("row 19") != std::string::npos);

    config.variables.push_back({"y", VariableRole::Free, 1});
    CHECK(run_analysis(config, out, log).exit_code == kExitConfig);

    config.variables = {{"missing", VariableRole::Free, 1}};
    CHECK(run_analysis(config, out, log).exit_code == kExitData);

    config.variables = {{"x", VariableRole::Free, 1}};
    config.input = (dir / "does_not_exist.csv").string();
    CHECK(run_analysis(config, out, log).exit_code == kExitData);

    {
        std::ofstream csv(dir / "dup.csv");
        csv << "a,b,y\n";
        for (int i = 0; i < 30; ++i) csv << i << ',' << 2 * i << ',' << (i * 7 % 5) << '\n';
    }
    config.input = (dir / "dup.csv").string();
    config.family = Family::Gaussian;
    config.selection = false;
    config.variables = {{"a", VariableRole::Free, 1}, {"b", VariableRole::Free, 1}};
    outcome = run_analysis(config, out, log);
    CHECK(outcome.exit_code == kExitNumerical);
    CHECK(outcome.message.find("RankDeficient") != std::string::npos);
}

TEST_CASE("output file gets the requested format") {
    const fs::path dir = scratch_dir();
    std::ostringstream log;
    REQUIRE(run_simulation({"ishigami", 400, 3, (dir / "small.csv").string(), "", "", Family::Gaussian}, log) == kExitOk);
    RunConfig config = default_simulation_config("ishigami", (dir / "small.csv").string(), Family::Gaussian);
    for (auto& v : config.variables) v.knots = 3;
    config.format = OutputFormat::Json;
    config.output = (dir / "small.json").string();
    std::ostringstream out;
    REQUIRE(run_analysis(config, out, log).exit_code == kExitOk);
    CHECK(out.str().find("Weight (%)") != std::string::npos);
    CHECK(slurp(config.output).find("\"terms\"") != std::string::npos);
}

TEST_CASE("error kinds map to exit codes") {
    CHECK(exit_code(ErrorKind::ConfigError) == 2);
    CHECK(exit_code(ErrorKind::UnsupportedKnotCount) == 2);
    CHECK(exit_code(ErrorKind::DataError) == 3);
    CHECK(exit_code(ErrorKind::NonBinaryResponse) == 3);
    CHECK(exit_code(ErrorKind::RankDeficient) == 4);
    CHECK(exit_code(ErrorKind::ZeroVarianceColumn) == 4);
}
