#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "esym/ingest.hpp"

using namespace esym;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "esym_ingest_test_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("builtin darwin-maize") {
  const Sample s = ingest("darwin-maize");
  CHECK(s.size() == 15);
  double sum = 0.0;
  std::size_t k = 0;
  for (double v : s.values()) {
    sum += v;
    k += v > 0;
  }
  CHECK(sum == 314.0);
  CHECK(k == 13);
  CHECK(s[0] == 49.0);
  CHECK(s[14] == -48.0);
  CHECK(is_builtin_dataset("darwin-maize"));
  CHECK_FALSE(is_builtin_dataset("something-else"));
}

TEST_CASE("newline separated file") {
  TempFile f("1.5\n-2.0\n");
  const Sample s = ingest(f.path);
  CHECK(s.size() == 2);
  CHECK(s[0] == 1.5);
  CHECK(s[1] == -2.0);
}

TEST_CASE("commas, whitespace and comments") {
  TempFile f("# header comment\n1, 2.5,3\n  -4  # trailing comment\n\n");
  const Sample s = ingest(f.path);
  CHECK(s.size() == 4);
  CHECK(s[3] == -4.0);
}

TEST_CASE("parse errors carry the line number") {
  TempFile f("abc\n");
  CHECK_THROWS_WITH_AS(ingest(f.path), doctest::Contains("line 1"), IngestError);

  TempFile g("1.0\n2.0\nnope\n");
  CHECK_THROWS_WITH_AS(ingest(g.path), doctest::Contains("line 3"), IngestError);
}

TEST_CASE("zero values cite the sign convention") {
  TempFile f("1.0\n0\n");
  CHECK_THROWS_WITH_AS(ingest(f.path), doctest::Contains("sign"), IngestError);
}

TEST_CASE("missing and empty inputs") {
  CHECK_THROWS_AS(ingest("definitely_not_here.txt"), IngestError);
  TempFile f("# only comments\n");
  CHECK_THROWS_AS(ingest(f.path), IngestError);
}
