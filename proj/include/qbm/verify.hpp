#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbm/config.hpp"
#include "qbm/table.hpp"

namespace qbm {

struct VerifyCheck {
  std::string name;
  double metric = 0;  // observed discrepancy
  double tolerance = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const;
  ResultTable table(const std::string& config_hash) const;
  std::string text() const;
};

/// Fock-space oracle grid, kernel and Phi cross-method checks, spectral and scale identities.
/// With a config, Phi is also cross-checked on its scenario at up to five grid times.
VerifyReport run_verify(std::uint64_t seed, const std::optional<ScenarioConfig>& cfg = std::nullopt);

}  // namespace qbm
