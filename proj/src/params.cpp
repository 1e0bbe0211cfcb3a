#include "qbm/params.hpp"

#include <cmath>

#include "qbm/errors.hpp"

namespace qbm {

namespace {
void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw NonPositiveParameter(name);
}
}  // namespace

ValidatedParams validate_params(const PhysicalParams& p) {
  require_positive(p.M, "M");
  require_positive(p.Omega, "Omega");
  require_positive(p.gamma, "gamma");
  require_positive(p.Lambda, "Lambda");
  require_positive(p.T, "T");
  require_positive(p.constants.hbar, "hbar");
  require_positive(p.constants.k_B, "k_B");
  return ValidatedParams(p);
}

PhysicalParams natural_params(double M, double Omega, double gamma, double Lambda, double T) {
  return PhysicalParams{M, Omega, gamma, Lambda, T, Constants::natural()};
}

RegimeReport cl_regime_check(const ValidatedParams& params, std::pair<double, double> thresholds) {
  if (!(thresholds.first > 1.0) || !(thresholds.second > 1.0))
    throw DomainError("regime thresholds must exceed 1");
  RegimeReport r;
  r.thresholds = thresholds;
  r.r_temp = params.k_B() * params.T() / (params.hbar() * params.Lambda());
  r.r_cutoff = params.Lambda() / params.Omega();
  r.in_cl_regime = r.r_temp > thresholds.first && r.r_cutoff > thresholds.second;
  return r;
}

}  // namespace qbm
