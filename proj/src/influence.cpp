#include "qbm/influence.hpp"

#include <algorithm>
#include <cmath>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/scales.hpp"
#include "quadratic_form.hpp"

namespace qbm {

double influence_exponent_exact(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                const Constants& c, double rel_tol) {
  if (d.dX0() == 0.0 && d.dX_end() == 0.0) return 0.0;
  if (sd.gamma == 0.0) return 0.0;
  const double rate = std::max(sd.Lambda, 1.0 / (c.hbar * beta));
  const KernelQuadConfig kcfg{std::min(1e-11, 0.01 * rel_tol), 0.0, 4000};
  const double scale = sd.M * sd.gamma * sd.Lambda * std::max(sd.Lambda, 2.0 / (c.hbar * beta));
  const auto form = detail::stationary_quadratic_form(
      [&](double u) { return noise_kernel(u, sd, beta, c, kcfg); }, d, rate, 1e-12 * scale, rel_tol);
  return -form.value / c.hbar;
}

double influence_phase(const DeltaTrajectory& d, const Trajectory& xbar, const SpectralDensity& sd,
                       const Constants& c) {
  if (d.t_final() != xbar.t_final() || d.Omega() != xbar.Omega())
    throw MismatchedTrajectories("Delta and mean trajectory differ in t_final or Omega");
  if (sd.gamma == 0.0) return 0.0;
  const double W = xbar.Omega(), t = xbar.t_final(), L = sd.Lambda;
  // Xbar = P cos(W tau) + Q sin(W tau)
  const double P = xbar.X0();
  const double Q = (xbar.X_end() - P * std::cos(W * t)) / std::sin(W * t);
  if ((P == 0.0 && Q == 0.0) || (d.dX0() == 0.0 && d.dX_end() == 0.0)) return 0.0;

  // int_0^tau exp(-L (tau - s)) Xbar(s) ds in closed form.
  auto memory = [&](double tau) {
    const double decay = std::exp(-L * tau);
    const double c1 = std::cos(W * tau), s1 = std::sin(W * tau);
    const double den = L * L + W * W;
    const double cos_part = (L * c1 + W * s1 - L * decay) / den;
    const double sin_part = (L * s1 - W * c1 + W * decay) / den;
    return P * cos_part + Q * sin_part;
  };
  const double eta0 = sd.M * sd.gamma * L * L;
  numerics::QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.initial_pieces = static_cast<int>(std::clamp(std::ceil(L * t / 8.0), 1.0, 1024.0));
  const double value = numerics::integrate_or_throw([&](double tau) { return d.evaluate(tau) * memory(tau); }, 0.0,
                                                    t, opts, "influence phase");
  return -eta0 * value / c.hbar;
}

double influence_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params) {
  const double l = thermal_de_broglie(params);
  return -params.gamma() / (l * l) * delta_l2(d);
}

InfluenceResult influence(const Trajectory& x, const Trajectory& x_prime, const ValidatedParams& params,
                          InfluenceMethod method) {
  const auto d = delta(x, x_prime);
  const auto xbar = mean_trajectory(x, x_prime);
  const auto sd = SpectralDensity::from(params);
  InfluenceResult r;
  r.method = method;
  r.re_exponent = method == InfluenceMethod::ClLimit
                      ? influence_cl_limit(d, params)
                      : influence_exponent_exact(d, sd, params.beta(), params.constants());
  r.im_exponent = influence_phase(d, xbar, sd, params.constants());
  return r;
}

}  // namespace qbm
