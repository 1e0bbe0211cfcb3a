#include "qbm/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "qbm/influence.hpp"
#include "qbm/kernels.hpp"
#include "qbm/overlap.hpp"
#include "qbm/scales.hpp"

namespace qbm {

namespace {

using Rows = std::vector<std::vector<double>>;

std::vector<std::string> columns_for(Product p, const ScenarioConfig& cfg) {
  std::vector<std::string> cols;
  if (cfg.sweep) cols.push_back(cfg.sweep->name);
  switch (p) {
    case Product::Kernels:
      cols.insert(cols.end(), {"tau", "nu", "eta", "phi_matsubara", "phi_quadrature"});
      break;
    case Product::Overlap:
      cols.insert(cols.end(), {"t", "B_exact", "B_cl_limit", "Phi", "n_terms"});
      if (cfg.sampling) cols.push_back("B_sampled_modes");
      if (!cfg.modes.empty()) cols.push_back("B_explicit_modes");
      break;
    case Product::Influence:
      cols.insert(cols.end(), {"t", "re_exponent_exact", "re_exponent_cl", "im_exponent"});
      break;
    case Product::Scales:
      cols.insert(cols.end(), {"lambda_dB", "lambda_dist", "t_dec", "t_dist", "length_ratio", "time_ratio",
                               "gain_disturbance_product", "separation_d"});
      break;
    case Product::Verify:
      break;
  }
  return cols;
}

Rows compute(Product product, const ScenarioConfig& cfg, const ValidatedParams& p, std::optional<double> sweep_value) {
  Rows rows;
  auto start_row = [&] {
    std::vector<double> r;
    if (sweep_value) r.push_back(*sweep_value);
    return r;
  };
  const auto sd = SpectralDensity::from(p);
  const auto& c = p.constants();
  switch (product) {
    case Product::Kernels: {
      auto grid = cfg.tau_grid;
      if (grid.empty()) {
        for (int i = 0; i < 50; ++i) grid.push_back((0.02 + 0.1 * i) / p.Lambda());
      }
      for (double tau : grid) {
        auto r = start_row();
        r.insert(r.end(), {tau, noise_kernel(tau, sd, p.beta(), c), dissipation_kernel(tau, sd),
                           qfi_kernel_matsubara(tau, sd, p.beta(), c, cfg.matsubara),
                           qfi_kernel_quadrature(tau, sd, p.beta(), c)});
        rows.push_back(std::move(r));
      }
      break;
    }
    case Product::Overlap: {
      std::optional<ModeSet> sampled, explicit_set;
      if (cfg.sampling) sampled = sample_modes_from_density(sd, cfg.sampling->omega_min, cfg.sampling->omega_max,
                                                            cfg.sampling->count);
      if (!cfg.modes.empty()) explicit_set = explicit_modes(cfg.modes);
      for (double t : cfg.t_grid) {
        const auto d = delta_from_boundary(cfg.X0 - cfg.X0_prime, cfg.X_end - cfg.X_end_prime, t, p.Omega());
        const auto phi = phi_functional_matsubara_eval(d, p, cfg.matsubara);
        auto r = start_row();
        r.insert(r.end(), {t, std::exp(-phi.value / p.hbar()), overlap_cl_limit(d, p), phi.value,
                           static_cast<double>(phi.terms)});
        if (sampled) r.push_back(macrofraction_overlap(*sampled, d, p.beta(), c));
        if (explicit_set) r.push_back(macrofraction_overlap(*explicit_set, d, p.beta(), c));
        rows.push_back(std::move(r));
      }
      break;
    }
    case Product::Influence: {
      for (double t : cfg.t_grid) {
        const auto x = boundary_trajectory(cfg.X0, cfg.X_end, t, p.Omega());
        const auto xp = boundary_trajectory(cfg.X0_prime, cfg.X_end_prime, t, p.Omega());
        const auto d = delta(x, xp);
        auto r = start_row();
        r.insert(r.end(), {t, influence_exponent_exact(d, sd, p.beta(), c, cfg.influence_rel_tol),
                           influence_cl_limit(d, p), influence_phase(d, mean_trajectory(x, xp), sd, c)});
        rows.push_back(std::move(r));
      }
      break;
    }
    case Product::Scales: {
      const double sep = cfg.separation ? *cfg.separation : distinguishability_length(p);
      const auto s = gap_report(p, sep);
      auto r = start_row();
      r.insert(r.end(), {s.lambda_dB, s.lambda_dist, s.t_dec, s.t_dist, s.length_ratio, s.time_ratio,
                         s.gain_disturbance_product, s.separation_d});
      rows.push_back(std::move(r));
      break;
    }
    case Product::Verify:
      break;
  }
  return rows;
}

[[noreturn]] void rethrow_annotated(std::exception_ptr ep, const std::string& where) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(e.what()) + " [" + where + "]");
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + " [" + where + "]");
  }
}

std::string coordinate(const SweepAxis& axis, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", axis.name.c_str(), v);
  return buf;
}

}  // namespace

std::vector<ResultTable> run_scenario(const ScenarioConfig& cfg, unsigned threads) {
  std::vector<Product> products;
  for (auto p : cfg.outputs)
    if (p != Product::Verify) products.push_back(p);

  const std::size_t points = cfg.sweep ? cfg.sweep->values.size() : 1;
  // slots[point][product]
  std::vector<std::vector<Rows>> slots(points, std::vector<Rows>(products.size()));
  std::vector<std::exception_ptr> errors(points);

  auto work = [&](std::size_t i) {
    try {
      std::optional<double> v;
      PhysicalParams raw = cfg.params;
      if (cfg.sweep) {
        v = cfg.sweep->values[i];
        raw = with_sweep_value(raw, cfg.sweep->name, *v);
      }
      const auto p = validate_params(raw);
      for (std::size_t k = 0; k < products.size(); ++k) slots[i][k] = compute(products[k], cfg, p, v);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < points; ++i)
    if (errors[i]) {
      if (cfg.sweep) rethrow_annotated(errors[i], "sweep " + coordinate(*cfg.sweep, cfg.sweep->values[i]));
      std::rethrow_exception(errors[i]);
    }

  std::vector<ResultTable> tables;
  const std::string hash = cfg.hash();
  for (std::size_t k = 0; k < products.size(); ++k) {
    ResultTable t;
    t.name = std::string(product_name(products[k]));
    t.config_hash = hash;
    t.columns = columns_for(products[k], cfg);
    for (std::size_t i = 0; i < points; ++i)
      for (auto& row : slots[i][k]) t.add_row(std::move(row));
    tables.push_back(std::move(t));
  }
  return tables;
}

PlotSpec default_plot(const ResultTable& table) {
  PlotSpec s;
  s.title = table.name;
  const bool swept = !table.columns.empty() &&
                     std::find(std::begin(kSweepAxes), std::end(kSweepAxes), table.columns.front()) != std::end(kSweepAxes);
  if (swept) s.group = table.columns.front();
  if (table.name == "overlap") {
    s.x = "t";
    s.y = {"B_exact", "B_cl_limit"};
  } else if (table.name == "influence") {
    s.x = "t";
    s.y = {"re_exponent_exact", "re_exponent_cl"};
  } else if (table.name == "kernels") {
    s.x = "tau";
    s.y = {"nu", "eta", "phi_matsubara"};
  } else if (table.name == "scales") {
    s.x = swept ? table.columns.front() : "separation_d";
    s.y = {"length_ratio"};
    s.group.clear();
  } else if (table.name == "verify") {
    s.x = "check";
    s.y = {"metric", "tolerance"};
    s.log_y = true;
  } else {
    s.x = table.columns.front();
  }
  return s;
}

}  // namespace qbm
