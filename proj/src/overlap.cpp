#include "qbm/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qbm/errors.hpp"
#include "qbm/quadrature.hpp"
#include "qbm/scales.hpp"
#include "quadratic_form.hpp"

namespace qbm {

using cplx = std::complex<double>;
using std::numbers::pi;

ModeSet explicit_modes(std::vector<Mode> modes) {
  if (modes.empty()) throw InvalidRange("mode set must not be empty");
  for (const auto& m : modes) {
    if (!(m.m > 0.0)) throw NonPositiveParameter("m_k");
    if (!(m.omega > 0.0)) throw NonPositiveParameter("omega_k");
  }
  return {std::move(modes), ModeProvenance::Explicit, 0.0, 0.0};
}

namespace {

// int_0^t exp(i k tau) dtau = t exp(i k t/2) sinc(k t/2)
cplx exp_moment(double k, double t) {
  const double h = 0.5 * k * t;
  const double sinc = std::abs(h) < 1e-4 ? 1.0 - h * h / 6.0 : std::sin(h) / h;
  return t * std::polar(1.0, h) * sinc;
}

// Secular form of exp_moment for |k t| tiny.
cplx exp_moment_secular(double k, double t) {
  const double kt = k * t;
  return t * cplx(1.0 - kt * kt / 6.0, 0.5 * kt);
}

struct TrigMoments {
  cplx cos_part, sin_part;  // int exp(i w tau) cos(W tau), int exp(i w tau) sin(W tau)
};

TrigMoments trig_moments(double w, double W, double t) {
  if (std::abs(w - W) < 0.5 * W) {
    const cplx plus = exp_moment(w + W, t);
    const cplx minus = std::abs(w - W) < kSecularWindow * W ? exp_moment_secular(w - W, t)
                                                            : exp_moment(w - W, t);
    return {0.5 * (plus + minus), (plus - minus) / cplx(0.0, 2.0)};
  }
  const cplx e = std::polar(1.0, w * t);
  const double c = std::cos(W * t), s = std::sin(W * t);
  const double den = W * W - w * w;
  const cplx I(0.0, 1.0);
  return {(e * (I * w * c + W * s) - I * w) / den, (W - e * (W * c - I * w * s)) / den};
}

}  // namespace

cplx fourier_moment(double omega, const detail::BoundaryOscillation& y) {
  const double W = y.Omega(), t = y.t_final();
  // y = P cos(W tau) + Q sin(W tau)
  const double P = y.start();
  const double Q = (y.end() - y.start() * std::cos(W * t)) / std::sin(W * t);
  if (P == 0.0 && Q == 0.0) return {0.0, 0.0};
  const auto m = trig_moments(omega, W, t);
  return P * m.cos_part + Q * m.sin_part;
}

cplx displacement_amplitude(const Mode& mode, const Trajectory& traj, const Constants& c) {
  const double pref = mode.C / std::sqrt(2.0 * c.hbar * mode.m * mode.omega);
  return cplx(0.0, -pref) * fourier_moment(mode.omega, traj);
}

double single_mode_log_overlap(const Mode& mode, const DeltaTrajectory& d, double beta, const Constants& c) {
  const double f2 = std::norm(fourier_moment(mode.omega, d));
  if (f2 == 0.0 || mode.C == 0.0) return 0.0;
  return -mode.C * mode.C / (4.0 * c.hbar * mode.m * mode.omega) *
         std::tanh(0.5 * c.hbar * mode.omega * beta) * f2;
}

double single_mode_overlap(const Mode& mode, const DeltaTrajectory& d, double beta, const Constants& c) {
  return std::exp(single_mode_log_overlap(mode, d, beta, c));
}

double macrofraction_log_overlap(const ModeSet& ms, const DeltaTrajectory& d, double beta, const Constants& c) {
  numerics::CompensatedSum s;
  for (const auto& m : ms.modes) s.add(single_mode_log_overlap(m, d, beta, c));
  return s.value();
}

double macrofraction_overlap(const ModeSet& ms, const DeltaTrajectory& d, double beta, const Constants& c) {
  return std::exp(macrofraction_log_overlap(ms, d, beta, c));
}

ModeSet sample_modes_from_density(const SpectralDensity& sd, double omega_min, double omega_max, int K) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || !std::isfinite(omega_max) || K < 1)
    throw InvalidRange("need 0 < omega_min < omega_max and K >= 1");
  ModeSet ms;
  ms.provenance = ModeProvenance::SampledFromDensity;
  ms.omega_min = omega_min;
  ms.omega_max = omega_max;
  ms.modes.reserve(static_cast<std::size_t>(K));
  const double dw = (omega_max - omega_min) / K;
  for (int j = 0; j < K; ++j) {
    const double w = omega_min + (j + 0.5) * dw;
    ms.modes.push_back({std::sqrt(2.0 * w * sd(w) * dw), 1.0, w});
  }
  return ms;
}

double delta_autocorrelation(const DeltaTrajectory& d, double u) {
  const double W = d.Omega(), t = d.t_final();
  const double a = d.dX0(), b = d.dX_end();
  const double L = t - u;
  const double WL = W * L;
  // Products of the two sine components, each integrated over the overlap window.
  const double same = 0.5 * (2.0 * L * std::sin(0.5 * W * (t + u)) * std::sin(0.5 * WL) +
                             std::cos(W * t) * x_minus_sin(WL) / W);
  const double cross = sin_minus_x_cos(WL) / W + L * std::sin(W * t) * std::sin(W * u);
  const double s = std::sin(W * t);
  return ((a * a + b * b) * same + a * b * cross) / (s * s);
}

namespace detail {

namespace {

// Dyadic panels [t/2^(k+1), t/2^k] resolve the logarithmic singularity at u = 0.
PhiValue dyadic_pass(const std::function<double(double)>& kernel, const DeltaTrajectory& d, double rate,
                     double kernel_noise, double rel_tol, double panel_abs_tol) {
  PhiValue out;
  const double t = d.t_final();
  auto integrand = [&](double u) { return kernel(u) * delta_autocorrelation(d, u); };
  numerics::QuadOptions opts;
  opts.rel_tol = 0.1 * rel_tol;
  opts.max_intervals = 2000;
  const double g0 = delta_l2(d);  // |G(u)| <= G(0)

  numerics::CompensatedSum total;
  double err = 0;
  int quiet = 0;
  for (int k = 0; k < 400; ++k) {
    const double hi = std::ldexp(t, -k), lo = std::ldexp(t, -k - 1);
    opts.initial_pieces = static_cast<int>(std::clamp(std::ceil(rate * (hi - lo) / 4.0), 1.0, 256.0));
    opts.abs_tol = std::max(panel_abs_tol, kernel_noise * g0 * (hi - lo));
    auto r = numerics::integrate(integrand, lo, hi, opts);
    if (!r.converged) throw QuadratureNoConvergence("kernel quadratic form", total.value(), r.error);
    total.add(r.value);
    err += r.error;
    ++out.terms;
    // The remainder on [0, lo] is about the size of the last panel.
    if (std::abs(r.value) <= 0.05 * rel_tol * std::abs(total.value())) {
      if (++quiet >= 3) {
        out.value = total.value();
        out.error = err + std::abs(r.value);
        return out;
      }
    } else {
      quiet = 0;
    }
  }
  throw QuadratureNoConvergence("kernel quadratic form near u = 0", total.value(), err);
}

}  // namespace

PhiValue stationary_quadratic_form(const std::function<double(double)>& kernel, const DeltaTrajectory& d,
                                   double rate, double kernel_noise, double rel_tol) {
  // A rough pass fixes the absolute scale, so that panels where the kernel is
  // tiny are integrated to an absolute rather than relative target.
  const auto rough = dyadic_pass(kernel, d, rate, kernel_noise, 1e-4, 0.0);
  return dyadic_pass(kernel, d, rate, kernel_noise, rel_tol, 0.02 * rel_tol * std::abs(rough.value));
}

}  // namespace detail

PhiValue phi_functional_quadrature_eval(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                        const Constants& c, const PhiQuadConfig& cfg) {
  if (d.dX0() == 0.0 && d.dX_end() == 0.0) return {};
  if (sd.gamma == 0.0) return {};
  const double rate = std::max(sd.Lambda, 1.0 / (c.hbar * beta));
  const double noise = 1e-12 * sd.M * sd.gamma * sd.Lambda * sd.Lambda;
  return detail::stationary_quadratic_form(
      [&](double u) { return qfi_kernel_quadrature(u, sd, beta, c, cfg.kernel); }, d, rate, noise, cfg.rel_tol);
}

double phi_functional_quadrature(const DeltaTrajectory& d, const SpectralDensity& sd, double beta,
                                 const Constants& c, const PhiQuadConfig& cfg) {
  return phi_functional_quadrature_eval(d, sd, beta, c, cfg).value;
}

ExpKernelCoefficients exp_kernel_coefficients(double kappa, double Omega, double t) {
  const double x = Omega * t;
  const double s = std::sin(x), co = std::cos(x);
  const double k2 = kappa * kappa, k4 = k2 * k2, W2 = Omega * Omega;
  const double A = 1.0 / (1.0 + W2 / k2);
  const double e = std::exp(-kappa * t);
  ExpKernelCoefficients r;
  r.c = A * (x_minus_sin(2.0 * x) / (4.0 * kappa * Omega) - s * s / (2.0 * k2)) +
        A * A * (W2 / k4 - e * (Omega * s / (k2 * kappa) + W2 * co / k4));
  const double lead = Omega * co / k2 + s / kappa;
  r.d = A * sin_minus_x_cos(x) / (Omega * kappa) - A * A * 2.0 * W2 * co / k4 +
        A * A * e * (W2 / k4 + lead * lead);
  return r;
}

double exp_kernel_functional(double kappa, const DeltaTrajectory& d) {
  const auto k = exp_kernel_coefficients(kappa, d.Omega(), d.t_final());
  const double s = std::sin(d.Omega() * d.t_final());
  const double a = d.dX0(), b = d.dX_end();
  return (k.c * (a * a + b * b) + k.d * a * b) / (s * s);
}

namespace {

struct PhiSeries {
  double prefactor;  // 4 M gamma Lambda^2 / (pi sin^2(Omega t))
  double L, Omega, t, beta;
  Constants c;
  double A, B;  // dX0^2 + dX^2, dX0 dX
  ExpKernelCoefficients at_cutoff;

  double term(long n) const {
    const double nu = fermionic_frequency(n, beta, c);
    const double r = L / nu;
    const auto k = exp_kernel_coefficients(nu, Omega, t);
    const double bracket = (k.c - r * at_cutoff.c) * A + (k.d - r * at_cutoff.d) * B;
    return prefactor / (2.0 * n + 1.0) / (1.0 - r * r) * bracket;
  }
};

PhiSeries make_series(const DeltaTrajectory& d, const ValidatedParams& p) {
  const double s = std::sin(d.Omega() * d.t_final());
  PhiSeries ps{4.0 * p.M() * p.gamma() * p.Lambda() * p.Lambda() / (pi * s * s),
               p.Lambda(),
               d.Omega(),
               d.t_final(),
               p.beta(),
               p.constants(),
               d.dX0() * d.dX0() + d.dX_end() * d.dX_end(),
               d.dX0() * d.dX_end(),
               exp_kernel_coefficients(p.Lambda(), d.Omega(), d.t_final())};
  return ps;
}

}  // namespace

double phi_functional_matsubara_term(long n, const DeltaTrajectory& d, const ValidatedParams& params) {
  check_pole_collision(params.Lambda(), params.beta(), params.constants());
  return make_series(d, params).term(n);
}

PhiValue phi_functional_matsubara_eval(const DeltaTrajectory& d, const ValidatedParams& params,
                                       const MatsubaraConfig& cfg) {
  if (cfg.max_terms < 1 || !(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
    throw DomainError("invalid Matsubara configuration");
  if (params.Omega() != d.Omega()) throw MismatchedTrajectories("trajectory Omega differs from params");
  PhiValue out;
  if (d.dX0() == 0.0 && d.dX_end() == 0.0) return out;
  check_pole_collision(params.Lambda(), params.beta(), params.constants());
  const auto series = make_series(d, params);

  // Start the extrapolation once nu_n dominates Lambda and Omega and exp(-nu_n t) is negligible.
  const double nu0 = fermionic_frequency(0, params.beta(), params.constants());
  const double need = std::max({4.0 * params.Lambda(), 4.0 * params.Omega(), 40.0 / series.t});
  long N = std::max(16L, static_cast<long>(std::ceil((need / nu0 - 1.0) / 2.0)) + 1);

  numerics::CompensatedSum sum;
  long n = 0;
  std::vector<double> partials;
  double err = INFINITY;
  while (true) {
    if (N > cfg.max_terms) throw SeriesNoConvergence("Phi functional Matsubara series", cfg.max_terms);
    for (; n < N; ++n) sum.add(series.term(n));
    partials.push_back(sum.value());
    if (partials.size() >= 3) {
      const double est = numerics::richardson_limit(partials, &err);
      if (err <= cfg.rel_tol * std::abs(est) || err == 0.0) {
        out.value = est;
        out.error = err;
        out.terms = N;
        return out;
      }
    }
    N *= 2;
  }
}

double phi_functional_matsubara(const DeltaTrajectory& d, const ValidatedParams& params,
                                const MatsubaraConfig& cfg) {
  return phi_functional_matsubara_eval(d, params, cfg).value;
}

double log_overlap_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params) {
  const double ld = distinguishability_length(params);
  return -params.gamma() / (ld * ld) * delta_l2(d);
}

double overlap_cl_limit(const DeltaTrajectory& d, const ValidatedParams& params) {
  return std::exp(log_overlap_cl_limit(d, params));
}

ConditionalEnsemble conditional_ensemble(const std::vector<std::pair<double, double>>& p_samples, double t,
                                         const ValidatedParams& params, const ModeSet& modes) {
  if (p_samples.empty()) throw DomainError("conditional ensemble needs at least one sample");
  numerics::CompensatedSum total;
  for (const auto& [w, x0] : p_samples) {
    if (!(w >= 0.0)) throw DomainError("ensemble weights must be nonnegative");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw DomainError("ensemble weights must sum to 1");

  ConditionalEnsemble out;
  out.samples.reserve(p_samples.size());
  for (const auto& [w, x0] : p_samples) {
    const auto traj = endpoint_zero_trajectory(x0, t, params.Omega());
    ConditionalSample s{w, x0, {}};
    s.alpha.reserve(modes.modes.size());
    for (const auto& m : modes.modes) s.alpha.push_back(displacement_amplitude(m, traj, params.constants()));
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace qbm
