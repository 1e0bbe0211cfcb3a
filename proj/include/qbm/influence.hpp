#pragma once

#include "qbm/kernels.hpp"
#include "qbm/params.hpp"
#include "qbm/trajectory.hpp"

namespace qbm {

enum class InfluenceMethod { ExactQuadrature, ClLimit };

struct InfluenceResult {
  double re_exponent = 0;  // log |F|, never positive
  double im_exponent = 0;  // phase
  InfluenceMethod method = InfluenceMethod::ExactQuadrature;
};

/// -(1/hbar) int_0^t dtau int_0^tau dtau' Delta(tau) nu(tau - tau') Delta(tau'), nu by quadrature.
double influence_exponent_exact(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                const Constants& c, double rel_tol = 1e-8);

/// -(1/hbar) int_0^t dtau int_0^tau dtau' Delta(tau) eta(tau - tau') Xbar(tau') with the
/// closed-form dissipation kernel. Throws MismatchedTrajectories if t_final or Omega differ.
double influence_phase(const DeltaTrajectory& d, const Trajectory& xbar, const SpectralDensity& sd,
                       const Constants& c);

/// -(gamma / lambda_dB^2) int Delta^2.
double influence_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params);

/// Both exponents for a trajectory pair, real part by the chosen method.
InfluenceResult influence(const Trajectory& x, const Trajectory& x_prime, const ValidatedParams& params,
                          InfluenceMethod method);

}  // namespace qbm
