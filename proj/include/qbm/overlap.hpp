#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "qbm/kernels.hpp"
#include "qbm/params.hpp"
#include "qbm/trajectory.hpp"

namespace qbm {

/// One bath oscillator coupled through -X C x.
struct Mode {
  double C = 0;      // coupling
  double m = 1;      // mass
  double omega = 1;  // frequency
};

enum class ModeProvenance { Explicit, SampledFromDensity };

struct ModeSet {
  std::vector<Mode> modes;
  ModeProvenance provenance = ModeProvenance::Explicit;
  double omega_min = 0, omega_max = 0;  // set when sampled
};

/// Checks nonemptiness and positive masses and frequencies.
ModeSet explicit_modes(std::vector<Mode> modes);

/// Relative window |omega - Omega| < kSecularWindow * Omega where the secular form is used.
inline constexpr double kSecularWindow = 1e-6;

/// int_0^t exp(i omega tau) y(tau) dtau for a boundary oscillation, in closed form.
std::complex<double> fourier_moment(double omega, const detail::BoundaryOscillation& y);

/// alpha = -i C / sqrt(2 hbar m omega) * int_0^t exp(i omega tau) X(tau) dtau.
std::complex<double> displacement_amplitude(const Mode& mode, const Trajectory& traj, const Constants& c);

/// log B_k = -C^2/(4 hbar m omega) tanh(hbar omega beta / 2) |int exp(i omega tau) Delta|^2.
double single_mode_log_overlap(const Mode& mode, const DeltaTrajectory& d, double beta, const Constants& c);
double single_mode_overlap(const Mode& mode, const DeltaTrajectory& d, double beta, const Constants& c);

/// Sum of single-mode log overlaps in mode order (compensated).
double macrofraction_log_overlap(const ModeSet& ms, const DeltaTrajectory& d, double beta, const Constants& c);
double macrofraction_overlap(const ModeSet& ms, const DeltaTrajectory& d, double beta, const Constants& c);

/// K modes at bin midpoints of [omega_min, omega_max], m = 1, C^2 = 2 omega J(omega) d_omega.
ModeSet sample_modes_from_density(const SpectralDensity& sd, double omega_min, double omega_max, int K);

/// G(u) = int_u^t Delta(tau) Delta(tau - u) dtau in closed form.
double delta_autocorrelation(const DeltaTrajectory& d, double u);

struct PhiQuadConfig {
  double rel_tol = 1e-9;
  KernelQuadConfig kernel{1e-11, 0.0, 4000};
};

struct PhiValue {
  double value = 0;
  double error = 0;
  long terms = 0;  // Matsubara terms (series path) or outer panels (quadrature path)
};

/// Phi = int_0^t dtau int_0^tau dtau' Delta(tau) phi(tau - tau') Delta(tau'),
/// evaluated as int_0^t phi(u) G(u) du with phi from oscillatory quadrature.
PhiValue phi_functional_quadrature_eval(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                        const Constants& c, const PhiQuadConfig& cfg = {});
double phi_functional_quadrature(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                 const Constants& c, const PhiQuadConfig& cfg = {});

/// Coefficients of int_0^t dtau int_0^tau dtau' Delta(tau) exp(-kappa (tau - tau')) Delta(tau')
///   = [c (dX0^2 + dX^2) + d dX0 dX] / sin^2(Omega t).
struct ExpKernelCoefficients {
  double c = 0, d = 0;
};
ExpKernelCoefficients exp_kernel_coefficients(double kappa, double Omega, double t);
/// The double integral above for a given Delta.
double exp_kernel_functional(double kappa, const DeltaTrajectory& d);

/// Contribution of Matsubara index n to Phi.
double phi_functional_matsubara_term(long n, const DeltaTrajectory& d, const ValidatedParams& params);

/// Phi from the term-by-term closed form, summed with Richardson extrapolation
/// over N, 2N, 4N, ... terms.
PhiValue phi_functional_matsubara_eval(const DeltaTrajectory& d, const ValidatedParams& params,
                                       const MatsubaraConfig& cfg = {});
double phi_functional_matsubara(const DeltaTrajectory& d, const ValidatedParams& params,
                                const MatsubaraConfig& cfg = {});

/// exp[-(gamma / lambda_dist^2) int Delta^2].
double overlap_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params);
double log_overlap_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params);

struct ConditionalSample {
  double weight = 0;
  double X0 = 0;
  std::vector<std::complex<double>> alpha;  // one per mode
};

struct ConditionalEnsemble {
  std::vector<ConditionalSample> samples;
};

/// Displacements of every mode along the endpoint-zero trajectory of each X0.
/// Weights must be nonnegative and sum to 1 within 1e-12.
ConditionalEnsemble conditional_ensemble(const std::vector<std::pair<double, double>>& p_samples, double t,
                                         const ValidatedParams& params, const ModeSet& modes);

}  // namespace qbm
