#include "esym/datasets.hpp"

namespace esym {

const std::vector<double>& darwin_maize() {
  static const std::vector<double> values = {49, 23, 56, -67, 28, 24, 8, 41,
                                             75, 16, 14, 60, 6,  29, -48};
  return values;
}

}  // namespace esym
