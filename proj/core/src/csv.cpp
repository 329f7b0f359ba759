#include "sparsalloc/csv.hpp"

#include <cstdio>
#include <sstream>

#include "sparsalloc/errors.hpp"
#include "sparsalloc/version.hpp"

namespace sparsalloc {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw ShapeError("CsvWriter: row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvWriter::finish(const std::string& metadata) const { return body_ + "# " + metadata + "\n"; }

std::string csv_metadata(std::optional<std::uint64_t> seed, const std::string& extra) {
  std::string s = "seed=" + (seed ? std::to_string(*seed) : std::string("none")) + ", version=" + kVersion;
  if (!extra.empty()) s += ", " + extra;
  return s;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace sparsalloc
