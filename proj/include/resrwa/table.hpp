#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace resrwa {

/// Named numeric columns of equal length.
class ColumnTable {
public:
    ColumnTable() = default;

    void add(std::string name, Eigen::VectorXd values);

    bool has(const std::string& name) const;
    /// Throws MissingColumn.
    const Eigen::VectorXd& column(const std::string& name) const;

    const std::vector<std::string>& names() const { return names_; }
    std::size_t cols() const { return names_.size(); }
    Eigen::Index rows() const { return columns_.empty() ? 0 : columns_.front().size(); }

    /// Subset of rows, in order.
    ColumnTable select_rows(const std::vector<Eigen::Index>& rows) const;

private:
    std::vector<std::string> names_;
    std::vector<Eigen::VectorXd> columns_;
};

struct CsvReadResult {
    ColumnTable table;
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;  // rows with any missing cell
    std::vector<std::size_t> source_rows;  // file line of each kept row (header = 1)
};

/// Reads a header-row CSV of numeric columns. Empty cells and NA/NaN are
/// treated as missing; those rows are dropped (complete cases). Any other
/// unparsable cell throws DataError naming the row (1-based, header = row 1)
/// and column.
CsvReadResult read_csv(std::istream& in);
CsvReadResult read_csv_file(const std::string& path);

/// Writes every column with round-trip precision.
void write_csv(std::ostream& out, const ColumnTable& table);

}  // namespace resrwa
