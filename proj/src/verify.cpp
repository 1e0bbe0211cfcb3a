#include "qbm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "qbm/fock.hpp"
#include "qbm/kernels.hpp"
#include "qbm/overlap.hpp"
#include "qbm/scales.hpp"

namespace qbm {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

ResultTable VerifyReport::table(const std::string& config_hash) const {
  ResultTable t;
  t.name = "verify";
  t.config_hash = config_hash;
  t.columns = {"check", "metric", "tolerance", "passed"};
  for (std::size_t i = 0; i < checks.size(); ++i)
    t.add_row({static_cast<double>(i), checks[i].metric, checks[i].tolerance, checks[i].passed ? 1.0 : 0.0});
  return t;
}

std::string VerifyReport::text() const {
  std::string out;
  char buf[256];
  for (std::size_t i = 0; i < checks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%3zu %-4s %-58s %.3e (tol %.1e)\n", i, checks[i].passed ? "ok" : "FAIL",
                  checks[i].name.c_str(), checks[i].metric, checks[i].tolerance);
    out += buf;
  }
  return out;
}

namespace {

void add(VerifyReport& r, std::string name, double metric, double tol) {
  r.checks.push_back({std::move(name), metric, tol, std::isfinite(metric) && metric <= tol});
}

std::string label(const char* fmt, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

std::string label(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

void fock_grid(VerifyReport& r) {
  using cplx = std::complex<double>;
  for (double nbar : {0.0, 0.5, 2.0}) {
    for (double gap : {0.0, 0.3, 1.0}) {
      const double th = nbar == 0.0 ? 1.0 : std::tanh(0.5 * std::log1p(1.0 / nbar));
      const cplx a(0.4, -0.2), b = a + cplx(0.6 * gap, 0.8 * gap);
      const int dim = policy_dimension(nbar, std::max(std::norm(a), std::norm(b)));
      const auto th_state = thermal_state(nbar, dim);
      const ComplexMatrix Da = displacement_matrix(a, dim), Db = displacement_matrix(b, dim);
      const DensityMatrix rho{Da * th_state.entries * Da.adjoint()}, sigma{Db * th_state.entries * Db.adjoint()};
      const double numeric = generalized_overlap_numeric(rho, sigma);
      add(r, label("fock oracle nbar=%g |dalpha|=%g", nbar, gap), rel(numeric, std::exp(-0.5 * gap * gap * th)), 1e-6);
    }
  }
}

void kernel_grid(VerifyReport& r) {
  const Constants nat = Constants::natural();
  const SpectralDensity sd{1.0, 1.0, 1.0};
  for (double lt : {0.1, 1.0, 5.0}) {
    for (double hbl : {0.1, 1.0, 10.0}) {
      const double beta = hbl;
      const double m = qfi_kernel_matsubara(lt, sd, beta, nat);
      const double q = qfi_kernel_quadrature(lt, sd, beta, nat);
      add(r, label("qfi kernel matsubara vs quadrature Lt=%g hbL=%g", lt, hbl), rel(m, q), 1e-6);
    }
  }
}

void phi_check(VerifyReport& r, const ValidatedParams& p, const DeltaTrajectory& d, const std::string& name,
               const MatsubaraConfig& mcfg = {}, const PhiQuadConfig& qcfg = {}) {
  const auto sd = SpectralDensity::from(p);
  const double m = phi_functional_matsubara(d, p, mcfg);
  const double q = phi_functional_quadrature(d, sd, p.beta(), p.constants(), qcfg);
  add(r, name, rel(m, q), 1e-6);
}

void identities(VerifyReport& r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Constants nat = Constants::natural();
  double worst_spec = 0, worst_gdp = 0;
  for (int i = 0; i < 100; ++i) {
    const SpectralDensity sd{std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng))};
    const double omega = std::pow(10.0, u(rng)), beta = std::pow(10.0, u(rng));
    for (double x : spectral_relation_check(omega, sd, beta, nat)) worst_spec = std::max(worst_spec, x);

    const auto p = validate_params(PhysicalParams{std::pow(10.0, u(rng)), 1.0, 0.1, std::pow(10.0, 3 * u(rng)),
                                                  std::pow(10.0, u(rng)), nat});
    worst_gdp = std::max(worst_gdp, rel(distinguishability_length(p) * thermal_de_broglie(p),
                                        p.hbar() / (p.M() * p.Lambda())));
  }
  add(r, "spectral relations, 100 random (omega, beta)", worst_spec, 1e-12);
  add(r, "gain-disturbance identity, 100 random parameter sets", worst_gdp, 1e-12);
}

}  // namespace

VerifyReport run_verify(std::uint64_t seed, const std::optional<ScenarioConfig>& cfg) {
  VerifyReport r;
  fock_grid(r);
  kernel_grid(r);
  phi_check(r, validate_params(natural_params(1.0, 1.0, 0.1, 20.0, 20.0)), delta_from_boundary(1.0, 0.3, 2.0, 1.0),
            "Phi matsubara vs quadrature, generic scenario");
  identities(r, seed);
  if (cfg) {
    const auto p = validate_params(cfg->params);
    const std::size_t n = std::min<std::size_t>(5, cfg->t_grid.size());
    for (std::size_t i = 0; i < n; ++i) {
      const double t = cfg->t_grid[i];
      const auto d = delta_from_boundary(cfg->X0 - cfg->X0_prime, cfg->X_end - cfg->X_end_prime, t, p.Omega());
      if (d.dX0() == 0.0 && d.dX_end() == 0.0) continue;
      phi_check(r, p, d, label("Phi matsubara vs quadrature, config t=%g", t), cfg->matsubara, cfg->quadrature);
    }
  }
  return r;
}

}  // namespace qbm
