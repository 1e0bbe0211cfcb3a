#pragma once

#include <utility>

namespace qbm {

/// Fundamental constants. SI (CODATA 2018) by default.
struct Constants {
  double hbar = 1.054571817e-34;  // J s
  double k_B = 1.380649e-23;      // J/K

  static constexpr Constants si() { return {}; }
  static constexpr Constants natural() { return {1.0, 1.0}; }
};

/// Central oscillator, Lorentz-Drude bath and temperature.
struct PhysicalParams {
  double M = 1.0;       // kg
  double Omega = 1.0;   // rad/s
  double gamma = 0.1;   // 1/s
  double Lambda = 100;  // rad/s
  double T = 10;        // K
  Constants constants{};
};

/// PhysicalParams that passed validate_params. Only constructible through it.
class ValidatedParams {
 public:
  const PhysicalParams& raw() const noexcept { return p_; }
  const Constants& constants() const noexcept { return p_.constants; }

  double M() const noexcept { return p_.M; }
  double Omega() const noexcept { return p_.Omega; }
  double gamma() const noexcept { return p_.gamma; }
  double Lambda() const noexcept { return p_.Lambda; }
  double T() const noexcept { return p_.T; }
  double hbar() const noexcept { return p_.constants.hbar; }
  double k_B() const noexcept { return p_.constants.k_B; }
  double beta() const noexcept { return 1.0 / (p_.constants.k_B * p_.T); }

 private:
  friend ValidatedParams validate_params(const PhysicalParams&);
  explicit ValidatedParams(const PhysicalParams& p) : p_(p) {}
  PhysicalParams p_;
};

/// Throws NonPositiveParameter naming the first offending field.
ValidatedParams validate_params(const PhysicalParams& params);

/// Natural-units scenario (hbar = k_B = 1).
PhysicalParams natural_params(double M, double Omega, double gamma, double Lambda, double T);

struct RegimeReport {
  double r_temp = 0;    // k_B T / (hbar Lambda)
  double r_cutoff = 0;  // Lambda / Omega
  bool in_cl_regime = false;
  std::pair<double, double> thresholds{10.0, 10.0};
};

/// Caldeira-Leggett regime diagnostic: k_B T/hbar >> Lambda >> Omega, with ">>" meaning
/// "ratio exceeds threshold". Thresholds must both exceed 1.
RegimeReport cl_regime_check(const ValidatedParams& params,
                             std::pair<double, double> thresholds = {10.0, 10.0});

}  // namespace qbm
