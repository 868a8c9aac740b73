#include "subic/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subic/errors.hpp"

namespace subic {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  t.header = split_line(line);
  if (t.header.empty()) throw DataError("no columns in header: " + path);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw DataError(path + ": line " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  if (t.rows.empty()) throw DataError("no data rows in " + path);
  return t;
}

double parse_cell(const std::string& token, int row, const std::string& col) {
  auto bad = [&](const char* why) {
    return DataError("bad numeric value '" + token + "' at row " + std::to_string(row) +
                     ", column '" + col + "': " + why);
  };
  if (token.empty()) throw bad("empty cell");
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw bad("not a number");
  if (!std::isfinite(v)) throw bad("non-finite");
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  for (const auto& r : rows) {
    for (size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace subic
