#include "resrwa/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "resrwa/error.hpp"

namespace resrwa {

void ColumnTable::add(std::string name, Eigen::VectorXd values) {
    if (has(name)) throw Error(ErrorKind::DuplicateName, "column '" + name + "'");
    if (!columns_.empty() && values.size() != rows()) {
        throw Error(ErrorKind::InvalidArgument, "column '" + name + "' has " +
                                                    std::to_string(values.size()) + " rows, expected " +
                                                    std::to_string(rows()));
    }
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
}

bool ColumnTable::has(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const Eigen::VectorXd& ColumnTable::column(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw Error(ErrorKind::MissingColumn, "no column named '" + name + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
}

ColumnTable ColumnTable::select_rows(const std::vector<Eigen::Index>& rows) const {
    ColumnTable out;
    for (std::size_t c = 0; c < names_.size(); ++c) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) v[static_cast<Eigen::Index>(i)] = columns_[c][rows[i]];
        out.add(names_[c], std::move(v));
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "null";
}

}  // namespace

CsvReadResult read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::DataError, "empty input, expected a header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    for (auto& h : split_line(line)) header.push_back(trim(h));
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].empty()) throw Error(ErrorKind::DataError, "empty column name at position " + std::to_string(i + 1));
        for (std::size_t j = 0; j < i; ++j) {
            if (header[i] == header[j]) throw Error(ErrorKind::DataError, "duplicate column '" + header[i] + "'");
        }
    }

    std::vector<std::vector<double>> cols(header.size());
    CsvReadResult result;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::DataError, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                                  " cells, expected " + std::to_string(header.size()));
        }
        ++result.rows_read;
        std::vector<double> values(cells.size());
        bool complete = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string cell = trim(cells[c]);
            if (is_missing(cell)) {
                complete = false;
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
                throw Error(ErrorKind::DataError, "row " + std::to_string(row) + ", column '" + header[c] +
                                                      "': cannot parse '" + cell + "' as a number");
            }
            values[c] = v;
        }
        if (!complete) {
            ++result.rows_dropped;
            continue;
        }
        for (std::size_t c = 0; c < cells.size(); ++c) cols[c].push_back(values[c]);
        result.source_rows.push_back(row);
    }

    for (std::size_t c = 0; c < header.size(); ++c) {
        result.table.add(header[c], Eigen::Map<const Eigen::VectorXd>(cols[c].data(),
                                                                      static_cast<Eigen::Index>(cols[c].size())));
    }
    return result;
}

CsvReadResult read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::DataError, "cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const ColumnTable& table) {
    const auto& names = table.names();
    for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
    out << '\n';
    std::ostringstream cell;
    cell << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        for (std::size_t c = 0; c < names.size(); ++c) {
            cell.str({});
            cell << table.column(names[c])[i];
            out << (c ? "," : "") << cell.str();
        }
        out << '\n';
    }
}

}  // namespace resrwa
