#pragma once

#include <string>

#include <json.hpp>

#include "resrwa/config.hpp"
#include "resrwa/rwa.hpp"

namespace resrwa {

/// Percent value as printed in every rendering (two decimals).
std::string format_percent(double percent);

/// Aligned `Variable | Weight (%) | Type` table followed by the model R^2.
std::string render_table(const RwaReport& report);

/// `variable,weight_percent,type,weight` rows.
std::string render_csv(const RwaReport& report);

/// Document described by docs/report.schema.json.
nlohmann::json report_to_json(const RwaReport& report);

std::string render(const RwaReport& report, OutputFormat format);

}  // namespace resrwa
