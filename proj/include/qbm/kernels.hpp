#pragma once

#include <array>
#include <functional>

#include "qbm/params.hpp"

namespace qbm {

/// Lorentz-Drude spectral density J(w) = (2 M gamma / pi) w Lambda^2 / (Lambda^2 + w^2).
struct SpectralDensity {
  double M = 1;
  double gamma = 0;
  double Lambda = 1;

  static SpectralDensity from(const ValidatedParams& p) { return {p.M(), p.gamma(), p.Lambda()}; }
  double operator()(double omega) const noexcept;
  /// int_a^b J(w) dw in closed form.
  double integral(double a, double b) const noexcept;
};

/// w * delta(tau) + A * exp(-r tau) on tau >= 0.
struct StructuredKernel {
  double delta_weight = 0;
  double smooth_amplitude = 0;
  double smooth_rate = 1;

  double smooth(double tau) const noexcept;
  /// int_0^tau K(tau - s) f(s) ds with the one-sided convention: the delta at
  /// the upper endpoint carries its full weight.
  double one_sided_action(const std::function<double(double)>& f, double tau) const;
};

struct MatsubaraConfig {
  double rel_tol = 1e-13;
  long max_terms = 2'000'000;
};

struct KernelQuadConfig {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct KernelValue {
  double value = 0;
  double error = 0;  // absolute error estimate
  long terms = 0;    // Matsubara terms or tail panels used
};

/// Relative gap below which the cutoff is considered to sit on a Matsubara pole.
inline constexpr double kPoleTolerance = 1e-9;

/// nu(tau) = int_0^inf J(w) coth(hbar w beta / 2) cos(w tau) dw.
KernelValue noise_kernel_eval(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                              const KernelQuadConfig& cfg = {});
double noise_kernel(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                    const KernelQuadConfig& cfg = {});

/// eta(tau) = int_0^inf J(w) sin(w tau) dw = M gamma Lambda^2 exp(-Lambda tau).
double dissipation_kernel(double tau, const SpectralDensity& sd);

/// phi(tau) = int_0^inf J(w) tanh(hbar w beta / 2) cos(w tau) dw by oscillatory quadrature.
KernelValue qfi_kernel_quadrature_eval(double tau, const SpectralDensity& sd, double beta,
                                       const Constants& c, const KernelQuadConfig& cfg = {});
double qfi_kernel_quadrature(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                             const KernelQuadConfig& cfg = {});

/// phi(tau) from the fermionic Matsubara series. The exp(-Lambda tau) part of
/// every term is summed in closed form; the exp(-nu_n tau) part is summed
/// until its geometric remainder bound drops below rel_tol.
KernelValue qfi_kernel_matsubara_eval(double tau, const SpectralDensity& sd, double beta,
                                      const Constants& c, const MatsubaraConfig& cfg = {});
double qfi_kernel_matsubara(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                            const MatsubaraConfig& cfg = {});

/// Plain partial sum of the first n_terms Matsubara terms, no tail treatment.
double qfi_kernel_matsubara_partial(double tau, const SpectralDensity& sd, double beta,
                                    const Constants& c, long n_terms);

/// Fermionic Matsubara frequency (2n+1) pi / (hbar beta).
double fermionic_frequency(long n, double beta, const Constants& c);

/// Throws PoleCollision when Lambda coincides with some nu_n to kPoleTolerance.
void check_pole_collision(double Lambda, double beta, const Constants& c);

/// Sum over n >= 0 of 1 / (1 - (nu_n/Lambda)^2), i.e. -(y/2) tan(y) with y = hbar beta Lambda / 2.
double matsubara_cutoff_sum(double Lambda, double beta, const Constants& c);

/// High-temperature noise kernel collapsed to 2 M gamma /(hbar beta) delta(tau).
StructuredKernel noise_kernel_high_t(const ValidatedParams& params);
/// Pre-limit form (2 M gamma Lambda / (hbar beta)) exp(-Lambda tau).
double noise_kernel_high_t_pre_limit(const ValidatedParams& params, double tau);

/// gamma M hbar beta (Lambda^2 delta(tau) - Lambda^3 exp(-Lambda tau) / 2).
StructuredKernel qfi_kernel_high_t(const ValidatedParams& params);

/// Per-frequency spectral coefficients:
///   nu~ = J coth(x), eta~ = J, phi~ = J tanh(x), x = hbar w beta / 2.
struct SpectralCoefficients {
  double nu = 0, eta = 0, phi = 0;
};
SpectralCoefficients spectral_coefficients(double omega, const SpectralDensity& sd, double beta,
                                           const Constants& c);

/// Normalised residuals of phi~ = nu~ th^2, phi~ = eta~ th, nu~ = eta~ cth.
std::array<double, 3> spectral_relation_check(double omega, const SpectralDensity& sd, double beta,
                                              const Constants& c);

}  // namespace qbm
