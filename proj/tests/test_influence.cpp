#include <cmath>
#include <random>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "qbm/errors.hpp"
#include "qbm/influence.hpp"
#include "qbm/overlap.hpp"
#include "qbm/scales.hpp"

using namespace qbm;

namespace {
const Constants nat = Constants::natural();
}

TEST_CASE("influence phase against quadrature-evaluated dissipation kernel") {
  const SpectralDensity sd{1.0, 0.2, 5.0};
  const double t = 1.5, W = 1.0;
  const auto x = boundary_trajectory(1.0, 0.2, t, W);
  const auto xp = boundary_trajectory(-0.3, 0.7, t, W);
  const auto d = delta(x, xp);
  const auto xbar = mean_trajectory(x, xp);

  boost::math::quadrature::ooura_fourier_sin<double> sine;
  auto eta = [&](double u) { return sine.integrate([&](double w) { return sd(w); }, u).first; };
  // -int_0^t du eta(u) int_u^t Delta(tau) Xbar(tau - u) dtau
  auto H = [&](double u) {
    return oracle::gk([&](double tau) { return d.evaluate(tau) * xbar.evaluate(tau - u); }, u, t, 1e-14);
  };
  const double expect = -oracle::gk([&](double u) { return eta(u) * H(u); }, 1e-12, t, 1e-11);
  CHECK(oracle::close(influence_phase(d, xbar, sd, nat), expect, 1e-8));
}

TEST_CASE("influence phase trivial cases") {
  const SpectralDensity sd{1.0, 0.2, 5.0};
  const auto x = boundary_trajectory(0.5, 0.5, 1.0, 1.0);
  CHECK(influence_phase(delta(x, x), x, sd, nat) == 0.0);
  const auto zero = boundary_trajectory(0, 0, 1.0, 1.0);
  CHECK(influence_phase(delta_from_boundary(1, 2, 1.0, 1.0), zero, sd, nat) == 0.0);
  CHECK_THROWS_AS(influence_phase(delta_from_boundary(1, 2, 1.0, 1.0), boundary_trajectory(1, 1, 1.2, 1.0), sd, nat),
                  MismatchedTrajectories);
  CHECK_THROWS_AS(influence_phase(delta_from_boundary(1, 2, 1.0, 1.0), boundary_trajectory(1, 1, 1.0, 2.0), sd, nat),
                  MismatchedTrajectories);
}

TEST_CASE("exact influence exponent against frequency-domain form") {
  // -Re = (1/2hbar) int J coth(hbar beta w / 2) |int e^{iw tau} Delta|^2 dw
  const SpectralDensity sd{1.0, 0.3, 5.0};
  const double beta = 0.7, t = 1.0, W = 1.0, a = 1.0, b = -0.4;
  const auto d = delta_from_boundary(a, b, t, W);
  auto integrand = [&](double w) {
    return 0.5 * sd(w) / std::tanh(0.5 * beta * w) * std::norm(fourier_moment(w, d));
  };
  const double wmax = 4000.0;
  // Tail: J ~ 2 M gamma Lambda^2 / (pi w), |F|^2 averages (a^2 + b^2) / w^2.
  const double tail = sd.M * sd.gamma * sd.Lambda * sd.Lambda / std::numbers::pi * (a * a + b * b) / (2 * wmax * wmax);
  const double expect = -(oracle::gk(integrand, 1e-12, 20.0, 1e-13) +
                          oracle::gk_pieces(integrand, 20.0, wmax, 1000, 1e-12) + tail);
  CHECK(oracle::close(influence_exponent_exact(d, sd, beta, nat), expect, 1e-7));
}

TEST_CASE("exact influence exponent properties") {
  const SpectralDensity sd{1.0, 0.3, 5.0};
  CHECK(influence_exponent_exact(delta_from_boundary(0, 0, 1.0, 1.0), sd, 1.0, nat) == 0.0);
  const auto d = delta_from_boundary(0.6, 0.2, 1.0, 1.0);
  const auto d2 = delta_from_boundary(1.2, 0.4, 1.0, 1.0);
  const double re = influence_exponent_exact(d, sd, 1.0, nat);
  CHECK(re < 0.0);
  CHECK(influence_exponent_exact(d2, sd, 1.0, nat) == doctest::Approx(4 * re).epsilon(1e-7));
}

TEST_CASE("decoherence grows with temperature") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 6; ++i) {
    const double W = 0.5 + u(rng), t = 0.3 + 1.5 * u(rng);
    if (std::abs(std::sin(W * t)) < 0.1) continue;
    const SpectralDensity sd{1.0, 0.2, 3.0 + 10.0 * u(rng)};
    const auto d = delta_from_boundary(2 * u(rng) - 1, 2 * u(rng) - 1, t, W);
    const double beta = 0.2 + 2.0 * u(rng);
    CHECK(influence_exponent_exact(d, sd, beta / 1.5, nat) < influence_exponent_exact(d, sd, beta, nat));
  }
}

TEST_CASE("CL-limit influence exponent") {
  const auto p = validate_params(natural_params(1.0, 1.0, 0.1, 20.0, 20.0));
  CHECK(influence_cl_limit(delta_from_boundary(0, 0, 2.0, 1.0), p) == 0.0);
  const auto d = delta_from_boundary(1.0, 0.3, 2.0, 1.0);
  const auto hot = validate_params(natural_params(1.0, 1.0, 0.1, 20.0, 60.0));
  CHECK(influence_cl_limit(d, hot) == doctest::Approx(3 * influence_cl_limit(d, p)).epsilon(1e-13));

  // Nearly constant Delta: |F| = 1/e at the decoherence time.
  const double sep = 0.05;
  const double tdec = decoherence_time(p, sep);
  const auto flat = delta_from_boundary(sep, sep, tdec, 1e-4 / tdec);
  CHECK(std::exp(influence_cl_limit(flat, validate_params(natural_params(1.0, 1e-4 / tdec, 0.1, 20.0, 20.0)))) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("influence wrapper") {
  const auto p = validate_params(natural_params(1.0, 1.0, 0.1, 5.0, 2.0));
  const auto x = boundary_trajectory(1.0, 0.2, 1.5, 1.0);
  const auto xp = boundary_trajectory(-0.3, 0.7, 1.5, 1.0);
  const auto sd = SpectralDensity::from(p);
  const auto exact = influence(x, xp, p, InfluenceMethod::ExactQuadrature);
  CHECK(exact.method == InfluenceMethod::ExactQuadrature);
  CHECK(exact.re_exponent == doctest::Approx(influence_exponent_exact(delta(x, xp), sd, p.beta(), nat)));
  CHECK(exact.im_exponent == doctest::Approx(influence_phase(delta(x, xp), mean_trajectory(x, xp), sd, nat)));
  const auto cl = influence(x, xp, p, InfluenceMethod::ClLimit);
  CHECK(cl.re_exponent == doctest::Approx(influence_cl_limit(delta(x, xp), p)));
  CHECK(cl.im_exponent == exact.im_exponent);
}
