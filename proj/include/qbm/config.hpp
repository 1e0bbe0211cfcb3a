#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbm/errors.hpp"
#include "qbm/kernels.hpp"
#include "qbm/overlap.hpp"
#include "qbm/params.hpp"

namespace qbm {

class ParseError : public Error {
 public:
  ParseError(int line, std::string key, const std::string& reason)
      : Error("line " + std::to_string(line) + (key.empty() ? "" : " (" + key + ")") + ": " + reason),
        line_(line),
        key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string key, std::string reason)
      : Error(key + ": " + reason), key_(std::move(key)), reason_(std::move(reason)) {}
  const std::string& key() const noexcept { return key_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

enum class Product { Kernels, Overlap, Influence, Scales, Verify };

std::string_view product_name(Product p);

inline constexpr const char* kSweepAxes[] = {"M", "Omega", "gamma", "Lambda", "T"};

struct SweepAxis {
  std::string name;  // one of M, Omega, gamma, Lambda, T
  std::vector<double> values;
};

struct ModeSampling {
  double omega_min = 0, omega_max = 0;
  int count = 0;
};

struct ScenarioConfig {
  PhysicalParams params;
  bool natural_units = false;
  // Boundary data of the trajectory pair X, X'.
  double X0 = 1.0, X_end = 0.0, X0_prime = 0.0, X_end_prime = 0.0;
  std::vector<double> t_grid{1.0};
  std::vector<double> tau_grid;          // kernels; defaults to a grid on [0.01, 5] / Lambda
  std::optional<double> separation;      // scales; defaults to lambda_dist
  std::optional<ModeSampling> sampling;  // overlap: adds a sampled macrofraction column
  std::vector<Mode> modes;               // overlap: adds an explicit macrofraction column
  std::optional<SweepAxis> sweep;
  std::vector<Product> outputs;
  MatsubaraConfig matsubara;
  PhiQuadConfig quadrature;
  double influence_rel_tol = 1e-8;
  std::uint64_t seed = 0;

  /// Key-sorted normalized text; the config hash is taken over it.
  std::string canonical() const;
  std::string hash() const;
};

/// Parses the key = value schema documented in the README.
/// Throws ParseError(line, key) for syntax problems and ValidationError(key, reason) for bad values.
ScenarioConfig parse_config(std::string_view text);

/// Parameters with one sweep coordinate applied; throws ValidationError for invalid values.
PhysicalParams with_sweep_value(const PhysicalParams& p, const std::string& axis, double value);

}  // namespace qbm
