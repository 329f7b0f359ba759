#include <gtest/gtest.h>

#include "sparsalloc/csv.hpp"
#include "sparsalloc/errors.hpp"
#include "sparsalloc/version.hpp"

using namespace sparsalloc;

TEST(Csv, WriterAndMetadata) {
  CsvWriter w({"a", "b"});
  w.row({"1", "x"});
  EXPECT_THROW(w.row({"1"}), ShapeError);
  EXPECT_EQ(w.finish(csv_metadata(5, "S=0.7")), std::string("a,b\n1,x\n# seed=5, version=") + kVersion + ", S=0.7\n");
  EXPECT_EQ(csv_metadata(std::nullopt), std::string("seed=none, version=") + kVersion);
}

TEST(Csv, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, -0.0}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Csv, ParseEmptyTrailingCell) {
  auto t = parse_csv("a,b,c\n1,,\n# note\n");
  EXPECT_EQ(t.rows.at(0), (std::vector<std::string>{"1", "", ""}));
  EXPECT_EQ(t.comments, (std::vector<std::string>{"# note"}));
}
