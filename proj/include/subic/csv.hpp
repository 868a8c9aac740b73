#pragma once

#include <string>
#include <vector>

namespace subic {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // each row has header.size() cells

  int ncols() const { return static_cast<int>(header.size()); }
  int nrows() const { return static_cast<int>(rows.size()); }
};

CsvTable read_csv(const std::string& path);

// Strict numeric parse; throws DataError naming the cell (1-based data row,
// column name) on empty, trailing-garbage, or non-finite tokens.
double parse_cell(const std::string& token, int row, const std::string& col);

// Shortest round-trip formatting (17 significant digits).
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace subic
