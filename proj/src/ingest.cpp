#include "esym/ingest.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "esym/datasets.hpp"

namespace esym {

bool is_builtin_dataset(const std::string& id) { return id == "darwin-maize"; }

Sample ingest(const std::string& path_or_builtin) {
  if (path_or_builtin == "darwin-maize") {
    return Sample(darwin_maize());
  }

  std::ifstream in(path_or_builtin);
  if (!in) {
    throw IngestError("cannot open input file: " + path_or_builtin);
  }

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      const std::string_view token(line.data() + pos, end - pos);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw IngestError("line " + std::to_string(line_no) + ": cannot parse '" +
                          std::string(token) + "' as a real number");
      }
      if (!std::isfinite(value)) {
        throw IngestError("line " + std::to_string(line_no) + ": value is not finite");
      }
      if (value == 0.0) {
        throw IngestError("line " + std::to_string(line_no) +
                          ": zero observation; a zero has no sign under the symmetry null");
      }
      values.push_back(value);
      pos = end;
    }
  }
  if (values.empty()) {
    throw IngestError("input contains no observations: " + path_or_builtin);
  }
  return Sample(std::move(values));
}

}  // namespace esym
