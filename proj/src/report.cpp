#include "resrwa/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace resrwa {

namespace {

const char* r2_label(Family family) { return family == Family::Gaussian ? "R2_O" : "R2_L"; }

std::string kind_name(TermKind kind) {
    switch (kind) {
        case TermKind::ControlMain: return "control";
        case TermKind::Main: return "main";
        case TermKind::Interaction: return "interaction";
    }
    return "main";
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string format_percent(double percent) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", percent);
    return buf;
}

std::string render_table(const RwaReport& report) {
    std::size_t name_w = std::string("Variable").size();
    std::size_t weight_w = std::string("Weight (%)").size();
    for (const auto& t : report.per_term) {
        name_w = std::max(name_w, t.term.label().size());
        weight_w = std::max(weight_w, format_percent(t.percent).size());
    }

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_w)) << "Variable" << " | " << std::right
        << std::setw(static_cast<int>(weight_w)) << "Weight (%)" << " | Type\n";
    out << std::string(name_w, '-') << "-+-" << std::string(weight_w, '-') << "-+-" << std::string(11, '-') << '\n';
    for (const auto& t : report.per_term) {
        out << std::left << std::setw(static_cast<int>(name_w)) << t.term.label() << " | " << std::right
            << std::setw(static_cast<int>(weight_w)) << format_percent(t.percent) << " | " << t.type << '\n';
    }
    out << '\n' << r2_label(report.family) << " = " << fixed4(report.total_r2) << '\n';
    for (const auto w : report.warnings) out << "warning: " << to_string(w) << '\n';
    return out.str();
}

std::string render_csv(const RwaReport& report) {
    std::ostringstream out;
    out << "variable,weight_percent,type,weight\n";
    out << std::setprecision(17);
    for (const auto& t : report.per_term) {
        out << '"' << t.term.label() << "\"," << format_percent(t.percent) << ',' << t.type << ',' << t.weight << '\n';
    }
    return out.str();
}

nlohmann::json report_to_json(const RwaReport& report) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : report.per_term) {
        nlohmann::json factors = nlohmann::json::array({t.term.first});
        if (t.term.is_interaction()) factors.push_back(t.term.second);
        terms.push_back({
            {"variable", t.term.label()},
            {"kind", kind_name(t.term.kind)},
            {"factors", factors},
            {"type", t.type},
            {"weight", t.weight},
            {"percent", t.percent},
            {"percent_display", format_percent(t.percent)},
        });
    }
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto w : report.warnings) warnings.push_back(std::string(to_string(w)));
    return {
        {"family", std::string(to_string(report.family))},
        {"r2_label", r2_label(report.family)},
        {"total_r2", report.total_r2},
        {"total_r2_display", fixed4(report.total_r2)},
        {"weight_sum", report.weight_sum},
        {"terms", terms},
        {"warnings", warnings},
    };
}

std::string render(const RwaReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::Table: return render_table(report);
        case OutputFormat::Csv: return render_csv(report);
        case OutputFormat::Json: return report_to_json(report).dump(2) + "\n";
    }
    return render_table(report);
}

}  // namespace resrwa
