#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sparsalloc {

// Round-trip decimal form of a double ("%.17g").
std::string format_double(double v);

// Accumulates CSV rows; every document ends with "# <metadata>".
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::string finish(const std::string& metadata) const;

 private:
  std::size_t width_;
  std::string body_;
};

// "seed=<seed|none>, version=<x.y.z>[, extra]"
std::string csv_metadata(std::optional<std::uint64_t> seed, const std::string& extra = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
};

// Comment lines (leading '#') are collected separately.
CsvTable parse_csv(const std::string& text);

}  // namespace sparsalloc
