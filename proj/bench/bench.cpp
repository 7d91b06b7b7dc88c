// Serial reference vs parallel candidate scoring.
// Usage: resrwa_bench [--quick] [--repeats N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "resrwa/parallel.hpp"
#include "resrwa/residualize.hpp"
#include "resrwa/selection.hpp"
#include "resrwa/simulate.hpp"

using namespace resrwa;

namespace {

bool g_agree = true;

double median_seconds(int repeats, const std::function<void()>& work) {
    std::vector<double> t;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        work();
        t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

std::vector<VariableSpec> free_specs(int d) {
    std::vector<VariableSpec> specs;
    for (int i = 1; i <= d; ++i) specs.push_back({"X" + std::to_string(i), VariableRole::Free, 5});
    return specs;
}

void row(const char* name, double serial, double parallel, const std::string& agreement) {
    std::printf("%-34s %10.3f %10.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel, agreement.c_str());
}

void stepwise_case(const char* name, const SimulatedDataset& ds, const char* response, Family family, int d, int repeats) {
    const auto table = ds.to_table();
    const TermCatalog catalog(table, free_specs(d));
    const Eigen::VectorXd& y = table.column(response);
    SelectionOptions serial_opts, parallel_opts;
    serial_opts.execution = Execution::SerialReference;
    SelectionResult s, p;
    const double ts = median_seconds(repeats, [&] { s = stepwise_select(catalog, y, family, serial_opts); });
    const double tp = median_seconds(repeats, [&] { p = stepwise_select(catalog, y, family, parallel_opts); });
    g_agree = g_agree && s.terms.active == p.terms.active && std::abs(s.fit.bic - p.fit.bic) < 1e-6;
    char buf[160];
    std::snprintf(buf, sizeof buf, "same terms: %s, |dBIC| %.1e, %zu steps", s.terms.active == p.terms.active ? "yes" : "NO",
                  std::abs(s.fit.bic - p.fit.bic), p.trace.size());
    row(name, ts, tp, buf);
}

void first_step_case(const char* name, const SimulatedDataset& ds, int d, int repeats) {
    const auto table = ds.to_table();
    const TermCatalog catalog(table, free_specs(d));
    const Eigen::VectorXd& y = table.column("y_g");
    const Scope scope = make_scope(catalog);
    const TermSet start = all_mains(scope);
    const auto moves = legal_moves(start, scope);
    SelectionOptions serial_opts, parallel_opts;
    serial_opts.execution = Execution::SerialReference;
    std::vector<std::optional<double>> s, p;
    const double ts = median_seconds(repeats, [&] { s = score_moves(catalog, y, Family::Gaussian, start, moves, serial_opts); });
    const double tp = median_seconds(repeats, [&] { p = score_moves(catalog, y, Family::Gaussian, start, moves, parallel_opts); });
    double gap = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i].has_value() != p[i].has_value()) g_agree = false;
        if (s[i] && p[i]) gap = std::max(gap, std::abs(*s[i] - *p[i]));
    }
    g_agree = g_agree && gap < 1e-6;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu candidates, max |dBIC| %.1e", moves.size(), gap);
    row(name, ts, tp, buf);
}

void residualize_case(const char* name, const SimulatedDataset& ds, int d, int repeats) {
    const auto table = ds.to_table();
    const TermCatalog catalog(table, free_specs(d));
    const Scope scope = make_scope(catalog);
    const DesignMatrix design = catalog.design({scope.upper.begin(), scope.upper.end()});
    ResidualizedDesign s, p;
    const double ts = median_seconds(repeats, [&] { s = residualize_interactions(design, Execution::SerialReference); });
    const double tp = median_seconds(repeats, [&] { p = residualize_interactions(design, Execution::Parallel); });
    g_agree = g_agree && s.design.values == p.design.values;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%td columns, identical: %s", design.cols(), s.design.values == p.design.values ? "yes" : "NO");
    row(name, ts, tp, buf);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    int repeats = 3;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        } else if (std::strcmp(argv[i], "--repeats") == 0 && i + 1 < argc) {
            repeats = std::max(1, std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--quick] [--repeats N]\n", argv[0]);
            return 2;
        }
    }
    apply_thread_limit_from_env();
    if (quick) repeats = 1;
    const Eigen::Index n = quick ? 600 : 3000;
    const Eigen::Index moon_n = quick ? 400 : 1500;

    std::printf("threads %d, n %td (Moon %td), median of %d\n", effective_threads(), n, moon_n, repeats);
    std::printf("%-34s %10s %10s %9s\n", "case", "serial s", "parallel s", "speedup");

    const auto ish = ishigami(n, 1);
    const auto moon_ds = moon(moon_n, 1, SimModel::MoonC3, synthetic_small_terms(1));
    stepwise_case("stepwise Ishigami gaussian", ish, "y_g", Family::Gaussian, 8, repeats);
    stepwise_case("stepwise Ishigami binomial", ish, "y_b", Family::Binomial, 8, repeats);
    first_step_case("first step Moon gaussian", moon_ds, 20, repeats);
    residualize_case("residualize Moon upper scope", moon_ds, 20, repeats);
    if (!quick) stepwise_case("stepwise Moon C3 gaussian", moon_ds, "y_g", Family::Gaussian, 20, 1);
    if (!g_agree) std::printf("serial and parallel paths disagree\n");
    return g_agree ? 0 : 1;
}
