#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qbm/errors.hpp"
#include "qbm/overlap.hpp"
#include "qbm/scales.hpp"

using namespace qbm;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

const Constants nat = Constants::natural();

cplx moment_oracle(double omega, double y0, double yt, double t, double W) {
  const int pieces = 8 + static_cast<int>(omega * t);
  const double re = oracle::gk_pieces(
      [&](double s) { return std::cos(omega * s) * oracle::oscillator(y0, yt, t, W, s); }, 0, t, pieces);
  const double im = oracle::gk_pieces(
      [&](double s) { return std::sin(omega * s) * oracle::oscillator(y0, yt, t, W, s); }, 0, t, pieces);
  return {re, im};
}

ValidatedParams generic_params() { return validate_params(natural_params(1.0, 1.0, 0.1, 20.0, 20.0)); }

}  // namespace

TEST_CASE("displacement amplitude matches quadrature") {
  const auto x = boundary_trajectory(1.0, 0.5, 2.0, 1.0);
  const Mode mode{0.7, 1.3, 3.0};
  const cplx alpha = displacement_amplitude(mode, x, nat);
  const cplx expect = cplx(0, -1) * mode.C / std::sqrt(2.0 * mode.m * mode.omega) *
                      moment_oracle(3.0, 1.0, 0.5, 2.0, 1.0);
  CHECK(std::abs(alpha - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("fourier moment across branches") {
  const double W = 1.3, t = 1.7;
  const auto x = boundary_trajectory(0.4, -0.9, t, W);
  for (double omega : {0.05, 0.7, 0.9 * W, W * (1 - 1e-3), W * (1 - 1e-7), W, W * (1 + 1e-7), 1.6, 25.0}) {
    CAPTURE(omega);
    const cplx got = fourier_moment(omega, x);
    const cplx expect = moment_oracle(omega, 0.4, -0.9, t, W);
    CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect) + 1e-14);
  }
}

TEST_CASE("displacement amplitude trivial cases") {
  const Mode mode{1.0, 1.0, 2.0};
  CHECK(std::abs(displacement_amplitude(mode, boundary_trajectory(0, 0, 1.0, 1.0), nat)) == 0.0);
  const cplx a1 = displacement_amplitude(mode, boundary_trajectory(0.3, 0.8, 1.0, 1.0), nat);
  const cplx a2 = displacement_amplitude(mode, boundary_trajectory(0.6, 1.6, 1.0, 1.0), nat);
  CHECK(std::abs(a2 - 2.0 * a1) <= 1e-14 * std::abs(a2));
}

TEST_CASE("single mode overlap from two displacement amplitudes") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 3.0), x(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double t = u(rng), W = u(rng);
    if (std::abs(std::sin(W * t)) < 0.05) continue;
    const auto a = boundary_trajectory(x(rng), x(rng), t, W);
    const auto b = boundary_trajectory(x(rng), x(rng), t, W);
    const Mode mode{u(rng), u(rng), u(rng)};
    const double beta = u(rng);
    const cplx da = displacement_amplitude(mode, a, nat) - displacement_amplitude(mode, b, nat);
    const double expect = std::exp(-0.5 * std::norm(da) * std::tanh(0.5 * beta * mode.omega));
    CHECK(single_mode_overlap(mode, delta(a, b), beta, nat) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("single mode overlap limits and beta monotonicity") {
  const Mode mode{1.0, 1.0, 2.0};
  CHECK(single_mode_overlap(mode, delta_from_boundary(0, 0, 1.0, 1.0), 1.0, nat) == 1.0);
  const auto d = delta_from_boundary(1.0, -0.4, 1.0, 1.0);
  CHECK(single_mode_overlap(mode, d, 1e-12, nat) == doctest::Approx(1.0).epsilon(1e-10));
  double prev = 1.0;
  for (double beta : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double b = single_mode_overlap(mode, d, beta, nat);
    CHECK(b > 0.0);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("macrofraction overlap product structure") {
  const auto d = delta_from_boundary(0.8, 0.2, 1.5, 1.0);
  const std::vector<Mode> base{{0.5, 1.0, 0.7}, {1.2, 2.0, 1.9}, {0.3, 0.5, 4.2}};
  const auto one = explicit_modes({base[1]});
  CHECK(macrofraction_overlap(one, d, 2.0, nat) == doctest::Approx(single_mode_overlap(base[1], d, 2.0, nat)));

  auto doubled = base;
  doubled.insert(doubled.end(), base.begin(), base.end());
  const double b = macrofraction_overlap(explicit_modes(base), d, 2.0, nat);
  CHECK(macrofraction_overlap(explicit_modes(doubled), d, 2.0, nat) == doctest::Approx(b * b).epsilon(1e-13));

  CHECK(macrofraction_overlap(explicit_modes(base), delta_from_boundary(0, 0, 1.5, 1.0), 2.0, nat) == 1.0);

  CHECK_THROWS_AS(explicit_modes({}), InvalidRange);
  CHECK_THROWS_AS(explicit_modes({{1.0, 0.0, 1.0}}), NonPositiveParameter);
  CHECK_THROWS_AS(explicit_modes({{1.0, 1.0, -1.0}}), NonPositiveParameter);
}

TEST_CASE("large macrofractions do not underflow in log form") {
  std::vector<Mode> many(20000, Mode{5.0, 1.0, 1.0});
  const auto d = delta_from_boundary(3.0, 2.0, 2.0, 1.0);
  const double lb = macrofraction_log_overlap(explicit_modes(many), d, 5.0, nat);
  CHECK(std::isfinite(lb));
  CHECK(lb == doctest::Approx(20000 * single_mode_log_overlap(many[0], d, 5.0, nat)).epsilon(1e-12));
}

TEST_CASE("mode sampling") {
  const SpectralDensity sd{1.0, 0.3, 5.0};
  const double w0 = 2.0, dw = 0.1;
  const auto one = sample_modes_from_density(sd, w0 - 0.5 * dw, w0 + 0.5 * dw, 1);
  REQUIRE(one.modes.size() == 1);
  CHECK(one.modes[0].omega == doctest::Approx(w0));
  CHECK(one.modes[0].m == 1.0);
  CHECK(one.modes[0].C * one.modes[0].C == doctest::Approx(2 * w0 * sd(w0) * dw).epsilon(1e-13));
  CHECK(one.provenance == ModeProvenance::SampledFromDensity);

  const double exact = sd.integral(0.5, 30.0);
  double prev_err = 0;
  for (int K : {16, 32, 64, 128, 256}) {
    const auto ms = sample_modes_from_density(sd, 0.5, 30.0, K);
    double s = 0;
    for (const auto& m : ms.modes) s += m.C * m.C / (2 * m.m * m.omega);
    const double err = std::abs(s - exact) / exact;
    // Midpoint rule: the error shrinks about fourfold, so relative error at least halves.
    if (prev_err > 0) CHECK(err <= 0.5 * prev_err);
    prev_err = err;
  }

  CHECK_THROWS_AS(sample_modes_from_density(sd, 0.0, 1.0, 4), InvalidRange);
  CHECK_THROWS_AS(sample_modes_from_density(sd, 2.0, 1.0, 4), InvalidRange);
  CHECK_THROWS_AS(sample_modes_from_density(sd, 0.1, 1.0, 0), InvalidRange);
}

TEST_CASE("delta autocorrelation closed form") {
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  CHECK(delta_autocorrelation(d, 0.0) == doctest::Approx(delta_l2(d)).epsilon(1e-14));
  for (double u : {1e-9, 0.01, 0.7, 1.5, 1.999}) {
    const double expect =
        oracle::gk([&](double s) { return oracle::oscillator(1, 0.3, 2, 1, s) * oracle::oscillator(1, 0.3, 2, 1, s - u); },
                   u, 2.0);
    CHECK(oracle::close(delta_autocorrelation(d, u), expect, 1e-12, 1e-15));
  }
  CHECK(delta_autocorrelation(d, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("exponential-kernel double integral") {
  for (double kappa : {0.3, 2.0, 40.0}) {
    for (auto [a, b] : {std::pair{1.0, 0.3}, {0.0, 1.0}, {-0.5, 0.8}}) {
      const auto d = delta_from_boundary(a, b, 2.0, 1.0);
      const double expect = oracle::gk(
          [&](double tau) {
            return oracle::oscillator(a, b, 2, 1, tau) *
                   oracle::gk([&](double s) { return std::exp(-kappa * (tau - s)) * oracle::oscillator(a, b, 2, 1, s); },
                              0, tau, 1e-14);
          },
          0, 2.0, 1e-14);
      CAPTURE(kappa);
      CHECK(oracle::close(exp_kernel_functional(kappa, d), expect, 1e-11));
    }
  }
}

TEST_CASE("Phi functional generic scenario") {
  const auto p = generic_params();
  const auto sd = SpectralDensity::from(p);
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  const double q = phi_functional_quadrature(d, sd, p.beta(), nat);
  const double m = phi_functional_matsubara(d, p);
  CHECK(m > 0.0);
  CHECK(std::abs(q - m) <= 1e-6 * m);
}

TEST_CASE("Phi functional per-term oracle") {
  const auto p = generic_params();
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  const double L = p.Lambda();
  for (long n : {0L, 1L, 3L}) {
    const double nu = (2.0 * n + 1.0) * pi / p.beta();
    const double r = nu / L;
    const double pre = 4.0 * p.M() * p.gamma() * L / p.beta() / (1.0 - r * r);
    // Delta(s) = [a sin(-W s + W t) + b sin(W s)] / sin(W t); kernel = pre (e^{-L u} - r e^{-nu u})
    auto inner = [&](double tau) {
      auto conv = [&](double rate) {
        return (1.0 * oracle::exp_sin_convolution(rate, -1.0, 2.0, tau) +
                0.3 * oracle::exp_sin_convolution(rate, 1.0, 0.0, tau)) / std::sin(2.0);
      };
      return pre * (conv(L) - r * conv(nu));
    };
    const double expect =
        oracle::gk_pieces([&](double tau) { return oracle::oscillator(1, 0.3, 2, 1, tau) * inner(tau); }, 0, 2.0, 8);
    CAPTURE(n);
    CHECK(oracle::close(phi_functional_matsubara_term(n, d, p), expect, 1e-8));
  }
}

TEST_CASE("Phi functional trivial properties") {
  const auto p = generic_params();
  const auto sd = SpectralDensity::from(p);
  const auto zero = delta_from_boundary(0, 0, 2.0, 1.0);
  CHECK(phi_functional_matsubara(zero, p) == 0.0);
  CHECK(phi_functional_quadrature(zero, sd, p.beta(), nat) == 0.0);

  const auto d = delta_from_boundary(0.4, -0.7, 2.0, 1.0);
  const auto d3 = delta_from_boundary(1.2, -2.1, 2.0, 1.0);
  CHECK(phi_functional_matsubara(d3, p) == doctest::Approx(9 * phi_functional_matsubara(d, p)).epsilon(1e-10));
  CHECK(phi_functional_quadrature(d3, sd, p.beta(), nat) ==
        doctest::Approx(9 * phi_functional_quadrature(d, sd, p.beta(), nat)).epsilon(1e-8));

  CHECK_THROWS_AS(phi_functional_matsubara(delta_from_boundary(1, 1, 2.0, 1.5), p), MismatchedTrajectories);
}

TEST_CASE("Phi functional is nonnegative and decreases with temperature") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    const double W = 0.5 + u(rng), t = 0.3 + 2.0 * u(rng);
    if (std::abs(std::sin(W * t)) < 0.1) continue;
    const double L = 5.0 + 30.0 * u(rng), T = 1.0 + 30.0 * u(rng);
    const auto d = delta_from_boundary(2 * u(rng) - 1, 2 * u(rng) - 1, t, W);
    const auto p = validate_params(natural_params(1.0, W, 0.2, L, T));
    const auto p_hot = validate_params(natural_params(1.0, W, 0.2, L, 1.5 * T));
    const double phi = phi_functional_matsubara(d, p);
    CHECK(phi >= -1e-12 * p.M() * p.gamma() * L * L);
    CHECK(phi_functional_matsubara(d, p_hot) < phi);
  }
}

TEST_CASE("sampled macrofraction approaches Phi") {
  const auto p = generic_params();
  const auto sd = SpectralDensity::from(p);
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  const double phi = phi_functional_matsubara(d, p);
  double prev = INFINITY;
  for (int K : {64, 128, 256, 512}) {
    const double W = 64.0 * pi / d.t_final() * std::sqrt(K / 64.0);
    const auto ms = sample_modes_from_density(sd, 1e-9 * W, W, K);
    const double err = std::abs(-macrofraction_log_overlap(ms, d, p.beta(), nat) - phi);
    CHECK(err < prev / 1.8);
    prev = err;
  }
  CHECK(prev < 5e-3 * phi);
}

TEST_CASE("CL-limit overlap") {
  const auto p = generic_params();
  CHECK(overlap_cl_limit(delta_from_boundary(0, 0, 2.0, 1.0), p) == 1.0);
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  const double ld = distinguishability_length(p);
  CHECK(log_overlap_cl_limit(d, p) == doctest::Approx(-p.gamma() / (ld * ld) * delta_l2(d)));
  const auto cold = validate_params(natural_params(1.0, 1.0, 0.1, 20.0, 5.0));
  CHECK(log_overlap_cl_limit(d, cold) == doctest::Approx(4 * log_overlap_cl_limit(d, p)).epsilon(1e-13));
  CHECK(overlap_cl_limit(d, p) == doctest::Approx(std::exp(log_overlap_cl_limit(d, p))));
}

TEST_CASE("conditional ensemble") {
  const auto p = generic_params();
  const auto modes = explicit_modes({{0.5, 1.0, 0.7}, {1.2, 2.0, 3.0}});
  const auto zero = conditional_ensemble({{1.0, 0.0}}, 2.0, p, modes);
  REQUIRE(zero.samples.size() == 1);
  for (auto a : zero.samples[0].alpha) CHECK(std::abs(a) == 0.0);

  const auto pm = conditional_ensemble({{0.5, 0.8}, {0.5, -0.8}}, 2.0, p, modes);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(pm.samples[0].alpha[k] + pm.samples[1].alpha[k]) <= 1e-15);

  const auto gen = conditional_ensemble({{0.2, 0.3}, {0.5, -1.1}, {0.3, 2.0}}, 2.0, p, modes);
  for (const auto& s : gen.samples) {
    const auto traj = endpoint_zero_trajectory(s.X0, 2.0, p.Omega());
    for (std::size_t k = 0; k < modes.modes.size(); ++k)
      CHECK(s.alpha[k] == displacement_amplitude(modes.modes[k], traj, nat));
  }

  CHECK_THROWS_AS(conditional_ensemble({{0.6, 0.0}, {0.6, 1.0}}, 2.0, p, modes), DomainError);
  CHECK_THROWS_AS(conditional_ensemble({{1.5, 0.0}, {-0.5, 1.0}}, 2.0, p, modes), DomainError);
  CHECK_THROWS_AS(conditional_ensemble({{1.0, 1.0}}, pi, p, modes), ResonantBoundaryValue);
}
