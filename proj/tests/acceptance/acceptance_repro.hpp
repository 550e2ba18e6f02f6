#pragma once

#include <string>

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Re-runs every scenario from its manifest and seed and compares the
/// produced files byte for byte.
Outcome reproducibility();

}  // namespace acceptance
