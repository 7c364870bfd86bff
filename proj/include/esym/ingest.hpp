#pragma once

#include <stdexcept>
#include <string>

#include "esym/sample.hpp"

namespace esym {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loads a sample from a builtin dataset id ("darwin-maize") or a text file
/// with one or more reals per line, separated by commas or whitespace;
/// '#' starts a comment. Unparsable tokens and zero values raise IngestError
/// with the offending line number.
Sample ingest(const std::string& path_or_builtin);

bool is_builtin_dataset(const std::string& id);

}  // namespace esym
