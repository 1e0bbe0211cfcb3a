#pragma once

#include "qbm/params.hpp"

namespace qbm {

/// |sin(Omega t)| at or below this value makes the boundary-value problem singular.
inline constexpr double kResonanceTolerance = 1e-9;

namespace detail {

/// Free-oscillator solution of the boundary-value problem y(0) = y0, y(t) = yt:
///   y(tau) = [y0 sin(Omega (t - tau)) + yt sin(Omega tau)] / sin(Omega t).
class BoundaryOscillation {
 public:
  double start() const noexcept { return y0_; }
  double end() const noexcept { return yt_; }
  double t_final() const noexcept { return t_; }
  double Omega() const noexcept { return Omega_; }

  double operator()(double tau) const noexcept;
  double derivative(double tau) const noexcept;

 protected:
  BoundaryOscillation(double y0, double yt, double t_final, double Omega);
  double y0_, yt_, t_, Omega_, sin_wt_;
};

}  // namespace detail

/// Classical trajectory of the central oscillator between X(0) = X0 and X(t) = X_end.
class Trajectory : public detail::BoundaryOscillation {
 public:
  double X0() const noexcept { return y0_; }
  double X_end() const noexcept { return yt_; }
  double evaluate(double tau) const noexcept { return (*this)(tau); }

 private:
  Trajectory(double X0, double X_end, double t, double Omega)
      : BoundaryOscillation(X0, X_end, t, Omega) {}
  friend Trajectory boundary_trajectory(double, double, double, double);
};

/// Difference Delta(tau) = X_cl(tau) - X'_cl(tau) of two trajectories with common t and Omega.
class DeltaTrajectory : public detail::BoundaryOscillation {
 public:
  double dX0() const noexcept { return y0_; }
  double dX_end() const noexcept { return yt_; }
  double evaluate(double tau) const noexcept { return (*this)(tau); }

 private:
  DeltaTrajectory(double dX0, double dX_end, double t, double Omega)
      : BoundaryOscillation(dX0, dX_end, t, Omega) {}
  friend DeltaTrajectory delta(const Trajectory&, const Trajectory&);
  friend DeltaTrajectory delta_from_boundary(double, double, double, double);
};

/// Throws ResonantBoundaryValue when |sin(Omega t)| <= kResonanceTolerance, DomainError when t <= 0.
Trajectory boundary_trajectory(double X0, double X_end, double t, double Omega);

/// Trajectory that ends at the origin: X(0) = X0, X(t) = 0.
Trajectory endpoint_zero_trajectory(double X0, double t, double Omega);

/// Componentwise difference; throws MismatchedTrajectories unless t_final and Omega agree.
DeltaTrajectory delta(const Trajectory& a, const Trajectory& b);

/// Difference trajectory built directly from boundary differences.
DeltaTrajectory delta_from_boundary(double dX0, double dX_end, double t, double Omega);

/// Mean trajectory (X + X')/2.
Trajectory mean_trajectory(const Trajectory& a, const Trajectory& b);

/// int_0^t Delta(tau)^2 dtau in closed form.
double delta_l2(const DeltaTrajectory& d);

/// C_k / (M Omega^2); the recoil-less approximation needs this to be small.
double no_recoil_ratio(const ValidatedParams& params, double C_k);

/// Cancellation-free helpers shared by the closed forms.
/// x - sin(x)
double x_minus_sin(double x) noexcept;
/// sin(x) - x cos(x)
double sin_minus_x_cos(double x) noexcept;

}  // namespace qbm
