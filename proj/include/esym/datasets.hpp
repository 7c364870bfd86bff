#pragma once

#include <vector>

namespace esym {

/// Darwin's maize differences (eighths of an inch) between cross- and
/// self-fertilised plants of matched pairs; 15 values, builtin id
/// "darwin-maize".
const std::vector<double>& darwin_maize();

}  // namespace esym
