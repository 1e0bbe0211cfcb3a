#include "qbm/trajectory.hpp"

#include <cmath>

#include "qbm/errors.hpp"

namespace qbm {

double x_minus_sin(double x) noexcept {
  if (std::abs(x) > 0.5) return x - std::sin(x);
  // x^3/3! - x^5/5! + ...
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = 0.0;
  for (int k = 1; k < 20 && term != 0.0; ++k) {
    sum += term;
    term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

double sin_minus_x_cos(double x) noexcept {
  if (std::abs(x) > 0.5) return std::sin(x) - x * std::cos(x);
  // sum_k (-1)^(k+1) 2k x^(2k+1) / (2k+1)!
  const double x2 = x * x;
  double power = x * x2 / 6.0;  // x^3/3!
  double sum = 0.0;
  for (int k = 1; k < 20 && power != 0.0; ++k) {
    sum += (k % 2 == 1 ? 1.0 : -1.0) * 2.0 * k * power;
    power *= x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return sum;
}

namespace detail {

BoundaryOscillation::BoundaryOscillation(double y0, double yt, double t_final, double Omega)
    : y0_(y0), yt_(yt), t_(t_final), Omega_(Omega), sin_wt_(std::sin(Omega * t_final)) {
  if (!(t_final > 0.0)) throw DomainError("trajectory time must be positive");
  if (!(Omega > 0.0)) throw NonPositiveParameter("Omega");
  if (!(std::abs(sin_wt_) > kResonanceTolerance))
    throw ResonantBoundaryValue("sin(Omega t) vanishes: boundary-value problem is singular");
}

double BoundaryOscillation::operator()(double tau) const noexcept {
  return (y0_ * std::sin(Omega_ * (t_ - tau)) + yt_ * std::sin(Omega_ * tau)) / sin_wt_;
}

double BoundaryOscillation::derivative(double tau) const noexcept {
  return Omega_ * (-y0_ * std::cos(Omega_ * (t_ - tau)) + yt_ * std::cos(Omega_ * tau)) / sin_wt_;
}

}  // namespace detail

Trajectory boundary_trajectory(double X0, double X_end, double t, double Omega) {
  return Trajectory(X0, X_end, t, Omega);
}

Trajectory endpoint_zero_trajectory(double X0, double t, double Omega) {
  return boundary_trajectory(X0, 0.0, t, Omega);
}

DeltaTrajectory delta(const Trajectory& a, const Trajectory& b) {
  if (a.t_final() != b.t_final() || a.Omega() != b.Omega())
    throw MismatchedTrajectories("trajectories differ in t_final or Omega");
  return DeltaTrajectory(a.X0() - b.X0(), a.X_end() - b.X_end(), a.t_final(), a.Omega());
}

DeltaTrajectory delta_from_boundary(double dX0, double dX_end, double t, double Omega) {
  return DeltaTrajectory(dX0, dX_end, t, Omega);
}

Trajectory mean_trajectory(const Trajectory& a, const Trajectory& b) {
  if (a.t_final() != b.t_final() || a.Omega() != b.Omega())
    throw MismatchedTrajectories("trajectories differ in t_final or Omega");
  return boundary_trajectory(0.5 * (a.X0() + b.X0()), 0.5 * (a.X_end() + b.X_end()), a.t_final(),
                             a.Omega());
}

double delta_l2(const DeltaTrajectory& d) {
  const double W = d.Omega();
  const double x = W * d.t_final();
  const double s = std::sin(x);
  const double a = d.dX0();
  const double b = d.dX_end();
  // int sin^2 = (2x - sin 2x)/(4 W); int sin(W(t-tau)) sin(W tau) = (sin x - x cos x)/(2 W)
  const double squares = x_minus_sin(2.0 * x) / (4.0 * W);
  const double cross = sin_minus_x_cos(x) / W;
  return ((a * a + b * b) * squares + a * b * cross) / (s * s);
}

double no_recoil_ratio(const ValidatedParams& params, double C_k) {
  return C_k / (params.M() * params.Omega() * params.Omega());
}

}  // namespace qbm
