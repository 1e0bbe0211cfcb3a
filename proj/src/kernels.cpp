#include "qbm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"

namespace qbm {

using std::numbers::pi;

double SpectralDensity::operator()(double omega) const noexcept {
  return 2.0 * M * gamma / pi * omega * Lambda * Lambda / (Lambda * Lambda + omega * omega);
}

double SpectralDensity::integral(double a, double b) const noexcept {
  const double L2 = Lambda * Lambda;
  return M * gamma / pi * L2 * std::log((L2 + b * b) / (L2 + a * a));
}

double StructuredKernel::smooth(double tau) const noexcept {
  return smooth_amplitude * std::exp(-smooth_rate * tau);
}

double StructuredKernel::one_sided_action(const std::function<double(double)>& f, double tau) const {
  numerics::QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.initial_pieces = static_cast<int>(std::clamp(std::ceil(smooth_rate * tau / 4.0), 1.0, 512.0));
  const double conv = numerics::integrate_or_throw(
      [&](double s) { return smooth(tau - s) * f(s); }, 0.0, tau, opts, "one-sided kernel action");
  return delta_weight * f(tau) + conv;
}

namespace {

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double oscillatory_split(const SpectralDensity& sd) { return 5.0 * sd.Lambda; }

KernelValue cosine_transform(const std::function<double(double)>& envelope, double tau, double split,
                             const KernelQuadConfig& cfg, const char* what) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  numerics::FourierOptions opts;
  opts.split = split;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.max_panels = cfg.max_panels;
  auto r = numerics::fourier_integral(envelope, tau, numerics::Trig::Cos, opts);
  if (!r.converged)
    throw QuadratureNoConvergence(std::string(what) + " at tau=" + fmt_g(tau), r.value, r.error);
  return {r.value, r.error, r.panels};
}

}  // namespace

KernelValue noise_kernel_eval(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                              const KernelQuadConfig& cfg) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  if (sd.gamma == 0.0) return {};
  const double half_hb = 0.5 * c.hbar * beta;
  auto envelope = [&](double w) {
    const double x = half_hb * w;
    // J(w) coth(x) -> (2 M gamma / pi) / half_hb as w -> 0
    if (x < 1e-8) return 2.0 * sd.M * sd.gamma / pi * sd.Lambda * sd.Lambda /
                         (sd.Lambda * sd.Lambda + w * w) / half_hb;
    return sd(w) / std::tanh(x);
  };
  return cosine_transform(envelope, tau, oscillatory_split(sd), cfg, "noise kernel");
}

double noise_kernel(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                    const KernelQuadConfig& cfg) {
  return noise_kernel_eval(tau, sd, beta, c, cfg).value;
}

double dissipation_kernel(double tau, const SpectralDensity& sd) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  return sd.M * sd.gamma * sd.Lambda * sd.Lambda * std::exp(-sd.Lambda * tau);
}

KernelValue qfi_kernel_quadrature_eval(double tau, const SpectralDensity& sd, double beta,
                                       const Constants& c, const KernelQuadConfig& cfg) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  if (sd.gamma == 0.0) return {};
  const double half_hb = 0.5 * c.hbar * beta;
  auto envelope = [&](double w) { return sd(w) * std::tanh(half_hb * w); };
  return cosine_transform(envelope, tau, oscillatory_split(sd), cfg, "QFI kernel");
}

double qfi_kernel_quadrature(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                             const KernelQuadConfig& cfg) {
  return qfi_kernel_quadrature_eval(tau, sd, beta, c, cfg).value;
}

double fermionic_frequency(long n, double beta, const Constants& c) {
  return (2.0 * static_cast<double>(n) + 1.0) * pi / (c.hbar * beta);
}

void check_pole_collision(double Lambda, double beta, const Constants& c) {
  const double nu0 = fermionic_frequency(0, beta, c);
  const long n = std::max(0L, std::lround((Lambda / nu0 - 1.0) / 2.0));
  for (long k = std::max(0L, n - 1); k <= n + 1; ++k) {
    const double gap = std::abs(Lambda - fermionic_frequency(k, beta, c)) / Lambda;
    if (gap < kPoleTolerance) throw PoleCollision(static_cast<int>(k), gap);
  }
}

double matsubara_cutoff_sum(double Lambda, double beta, const Constants& c) {
  const double y = 0.5 * c.hbar * beta * Lambda;
  return -0.5 * y * std::tan(y);
}

KernelValue qfi_kernel_matsubara_eval(double tau, const SpectralDensity& sd, double beta,
                                      const Constants& c, const MatsubaraConfig& cfg) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  if (cfg.max_terms < 1 || !(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
    throw DomainError("invalid Matsubara configuration");
  if (sd.gamma == 0.0) return {};
  const double L = sd.Lambda;
  check_pole_collision(L, beta, c);

  const double prefactor = 4.0 * sd.M * sd.gamma * L / (c.hbar * beta);
  const double cutoff_decay = std::exp(-L * tau);
  const double cutoff_sum = matsubara_cutoff_sum(L, beta, c);
  // Ratio of consecutive exp(-nu_n tau) factors.
  const double q = std::exp(-2.0 * pi * tau / (c.hbar * beta));

  numerics::CompensatedSum partial, algebraic;
  for (long n = 0; n < cfg.max_terms; ++n) {
    const double r = fermionic_frequency(n, beta, c) / L;
    const double denom = 1.0 - r * r;
    const double expo = std::exp(-fermionic_frequency(n, beta, c) * tau);
    partial.add((cutoff_decay - r * expo) / denom);
    algebraic.add(1.0 / denom);

    // Remainder of the exp(-nu tau) part once r/(r^2-1) is decreasing.
    const double r_next = fermionic_frequency(n + 1, beta, c) / L;
    if (r_next > 1.5) {
      const double next = r_next * std::exp(-fermionic_frequency(n + 1, beta, c) * tau) /
                          (r_next * r_next - 1.0);
      const double bound = next / (1.0 - q);
      const double total = partial.value() + cutoff_decay * (cutoff_sum - algebraic.value());
      if (bound <= cfg.rel_tol * std::abs(total) || bound == 0.0) {
        return {prefactor * total, prefactor * bound, n + 1};
      }
    }
  }
  throw SeriesNoConvergence("QFI kernel Matsubara series", cfg.max_terms);
}

double qfi_kernel_matsubara(double tau, const SpectralDensity& sd, double beta, const Constants& c,
                            const MatsubaraConfig& cfg) {
  return qfi_kernel_matsubara_eval(tau, sd, beta, c, cfg).value;
}

double qfi_kernel_matsubara_partial(double tau, const SpectralDensity& sd, double beta,
                                    const Constants& c, long n_terms) {
  if (!(tau > 0.0)) throw DivergentAtZero();
  const double L = sd.Lambda;
  check_pole_collision(L, beta, c);
  numerics::CompensatedSum s;
  for (long n = 0; n < n_terms; ++n) {
    const double nu = fermionic_frequency(n, beta, c);
    const double r = nu / L;
    s.add((std::exp(-L * tau) - r * std::exp(-nu * tau)) / (1.0 - r * r));
  }
  return 4.0 * sd.M * sd.gamma * L / (c.hbar * beta) * s.value();
}

StructuredKernel noise_kernel_high_t(const ValidatedParams& p) {
  return {2.0 * p.M() * p.gamma() / (p.hbar() * p.beta()), 0.0, p.Lambda()};
}

double noise_kernel_high_t_pre_limit(const ValidatedParams& p, double tau) {
  return 2.0 * p.M() * p.gamma() * p.Lambda() / (p.hbar() * p.beta()) * std::exp(-p.Lambda() * tau);
}

StructuredKernel qfi_kernel_high_t(const ValidatedParams& p) {
  const double base = p.gamma() * p.M() * p.hbar() * p.beta();
  const double L = p.Lambda();
  return {base * L * L, -0.5 * base * L * L * L, L};
}

SpectralCoefficients spectral_coefficients(double omega, const SpectralDensity& sd, double beta,
                                           const Constants& c) {
  const double j = sd(omega);
  const double th = std::tanh(0.5 * c.hbar * beta * omega);
  return {j / th, j, j * th};
}

std::array<double, 3> spectral_relation_check(double omega, const SpectralDensity& sd, double beta,
                                              const Constants& c) {
  const double th = std::tanh(0.5 * c.hbar * beta * omega);
  const double cth = 1.0 / th;
  const auto k = spectral_coefficients(omega, sd, beta, c);
  auto residual = [](double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  };
  return {residual(k.phi, k.nu * th * th), residual(k.phi, k.eta * th), residual(k.nu, k.eta * cth)};
}

}  // namespace qbm
