#include "qbm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>

#include "qbm/table.hpp"

namespace qbm {

std::string_view product_name(Product p) {
  switch (p) {
    case Product::Kernels: return "kernels";
    case Product::Overlap: return "overlap";
    case Product::Influence: return "influence";
    case Product::Scales: return "scales";
    case Product::Verify: return "verify";
  }
  return "?";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct Line {
  int number;
  std::string key;
  std::string value;
};

double to_number(const Line& l, std::string_view text) {
  const std::string s(trim(text));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError(l.number, l.key, "expected a number, got '" + s + "'");
  return v;
}

std::vector<double> to_numbers(const Line& l, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text, ',')) out.push_back(to_number(l, item));
  return out;
}

// "a:b:n" (n evenly spaced points) or "v1, v2, ...".
std::vector<double> to_grid(const Line& l) {
  if (l.value.find(':') == std::string::npos) return to_numbers(l, l.value);
  const auto parts = split_list(l.value, ':');
  if (parts.size() != 3) throw ParseError(l.number, l.key, "range must be start:stop:count");
  const double a = to_number(l, parts[0]), b = to_number(l, parts[1]), n = to_number(l, parts[2]);
  if (n < 1 || n != std::floor(n) || n > 1e6) throw ValidationError(l.key, "count must be a positive integer");
  const int count = static_cast<int>(n);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
  if (count > 1) out.back() = b;
  return out;
}

const std::set<std::string> kSweepable(std::begin(kSweepAxes), std::end(kSweepAxes));

void check_params(const PhysicalParams& p) {
  try {
    validate_params(p);
  } catch (const NonPositiveParameter& e) {
    throw ValidationError(e.name(), "must be strictly positive");
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

}  // namespace

PhysicalParams with_sweep_value(const PhysicalParams& p, const std::string& axis, double value) {
  PhysicalParams q = p;
  if (axis == "M") q.M = value;
  else if (axis == "Omega") q.Omega = value;
  else if (axis == "gamma") q.gamma = value;
  else if (axis == "Lambda") q.Lambda = value;
  else if (axis == "T") q.T = value;
  else throw ValidationError("sweep", "unknown axis '" + axis + "'");
  check_params(q);
  return q;
}

ScenarioConfig parse_config(std::string_view text) {
  std::map<std::string, Line> seen;
  std::vector<Line> mode_lines;
  int number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    auto raw = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    start = pos == std::string_view::npos ? text.size() + 1 : pos + 1;
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, std::string(line), "expected key = value");
    Line l{number, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))};
    if (l.key.empty()) throw ParseError(number, "", "empty key");
    if (l.value.empty()) throw ParseError(number, l.key, "empty value");
    if (l.key == "mode") {
      mode_lines.push_back(l);
      continue;
    }
    if (seen.count(l.key)) throw ParseError(number, l.key, "duplicate key");
    seen.emplace(l.key, l);
  }

  ScenarioConfig cfg;
  auto take = [&](const std::string& key) -> const Line* {
    auto it = seen.find(key);
    return it == seen.end() ? nullptr : &it->second;
  };

  if (const Line* l = take("units")) {
    if (l->value == "natural") cfg.natural_units = true;
    else if (l->value != "si") throw ValidationError("units", "must be si or natural");
  }
  auto& p = cfg.params;
  for (auto [key, field] : {std::pair{"M", &p.M}, {"Omega", &p.Omega}, {"gamma", &p.gamma}, {"Lambda", &p.Lambda},
                            {"T", &p.T}}) {
    const Line* l = take(key);
    if (!l) throw ValidationError(key, "required");
    *field = to_number(*l, l->value);
  }
  cfg.params.constants = cfg.natural_units ? Constants::natural() : Constants::si();
  check_params(cfg.params);

  for (auto [key, field] : {std::pair{"X0", &cfg.X0}, {"X_end", &cfg.X_end}, {"X0_prime", &cfg.X0_prime},
                            {"X_end_prime", &cfg.X_end_prime}})
    if (const Line* l = take(key)) *field = to_number(*l, l->value);

  if (const Line* l = take("t")) cfg.t_grid = to_grid(*l);
  for (double t : cfg.t_grid)
    if (!(t > 0.0)) throw ValidationError("t", "times must be positive");
  if (const Line* l = take("tau")) {
    cfg.tau_grid = to_grid(*l);
    for (double t : cfg.tau_grid)
      if (!(t > 0.0)) throw ValidationError("tau", "lags must be positive");
  }
  if (const Line* l = take("separation")) {
    cfg.separation = to_number(*l, l->value);
    if (!(*cfg.separation > 0.0)) throw ValidationError("separation", "must be strictly positive");
  }
  if (const Line* l = take("modes")) {
    const auto parts = split_list(l->value, ':');
    if (parts.size() != 3) throw ParseError(l->number, l->key, "expected omega_min:omega_max:count");
    ModeSampling s{to_number(*l, parts[0]), to_number(*l, parts[1]), 0};
    const double n = to_number(*l, parts[2]);
    if (!(s.omega_min > 0.0 && s.omega_max > s.omega_min))
      throw ValidationError("modes", "need 0 < omega_min < omega_max");
    if (n < 1 || n != std::floor(n) || n > 1e7) throw ValidationError("modes", "count must be a positive integer");
    s.count = static_cast<int>(n);
    cfg.sampling = s;
  }
  for (const auto& l : mode_lines) {
    const auto v = to_numbers(l, l.value);
    if (v.size() != 3) throw ParseError(l.number, l.key, "expected C, m, omega");
    if (!(v[1] > 0.0 && v[2] > 0.0)) throw ValidationError("mode", "mass and frequency must be positive");
    cfg.modes.push_back({v[0], v[1], v[2]});
  }
  if (const Line* l = take("sweep")) {
    const auto colon = l->value.find(':');
    if (colon == std::string::npos) throw ParseError(l->number, l->key, "expected name: v1, v2, ...");
    SweepAxis axis{std::string(trim(std::string_view(l->value).substr(0, colon))),
                   to_numbers(*l, std::string_view(l->value).substr(colon + 1))};
    if (!kSweepable.count(axis.name)) throw ValidationError("sweep", "unknown axis '" + axis.name + "'");
    for (double v : axis.values) with_sweep_value(cfg.params, axis.name, v);
    cfg.sweep = std::move(axis);
  }
  {
    const Line* l = take("outputs");
    if (!l) throw ValidationError("outputs", "required");
    for (auto item : split_list(l->value, ',')) {
      Product p;
      if (item == "kernels") p = Product::Kernels;
      else if (item == "overlap") p = Product::Overlap;
      else if (item == "influence") p = Product::Influence;
      else if (item == "scales") p = Product::Scales;
      else if (item == "verify") p = Product::Verify;
      else throw ValidationError("outputs", "unknown product '" + std::string(item) + "'");
      if (std::find(cfg.outputs.begin(), cfg.outputs.end(), p) == cfg.outputs.end()) cfg.outputs.push_back(p);
    }
  }
  if (const Line* l = take("matsubara_rel_tol")) cfg.matsubara.rel_tol = to_number(*l, l->value);
  if (const Line* l = take("matsubara_max_terms")) {
    const double n = to_number(*l, l->value);
    if (n < 1 || n != std::floor(n) || n > 1e9)
      throw ValidationError("matsubara_max_terms", "must be a positive integer");
    cfg.matsubara.max_terms = static_cast<long>(n);
  }
  if (const Line* l = take("quad_rel_tol")) cfg.quadrature.rel_tol = to_number(*l, l->value);
  if (const Line* l = take("influence_rel_tol")) cfg.influence_rel_tol = to_number(*l, l->value);
  for (auto [key, v] : {std::pair{"matsubara_rel_tol", cfg.matsubara.rel_tol}, {"quad_rel_tol", cfg.quadrature.rel_tol},
                        {"influence_rel_tol", cfg.influence_rel_tol}})
    if (!(v > 0.0 && v < 1.0)) throw ValidationError(key, "must lie in (0, 1)");
  if (const Line* l = take("seed")) {
    const double s = to_number(*l, l->value);
    if (s < 0 || s != std::floor(s) || s > 9.0e15) throw ValidationError("seed", "must be a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }

  static const std::set<std::string> known{"units", "M", "Omega", "gamma", "Lambda", "T", "X0", "X_end", "X0_prime",
                                           "X_end_prime", "t", "tau", "separation", "modes", "sweep", "outputs",
                                           "matsubara_rel_tol", "matsubara_max_terms", "quad_rel_tol",
                                           "influence_rel_tol", "seed"};
  for (const auto& [key, l] : seen)
    if (!known.count(key)) throw ParseError(l.number, key, "unknown key");
  return cfg;
}

std::string ScenarioConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["units"] = natural_units ? "natural" : "si";
  kv["M"] = fmt(params.M);
  kv["Omega"] = fmt(params.Omega);
  kv["gamma"] = fmt(params.gamma);
  kv["Lambda"] = fmt(params.Lambda);
  kv["T"] = fmt(params.T);
  kv["X0"] = fmt(X0);
  kv["X_end"] = fmt(X_end);
  kv["X0_prime"] = fmt(X0_prime);
  kv["X_end_prime"] = fmt(X_end_prime);
  kv["t"] = fmt_list(t_grid);
  if (!tau_grid.empty()) kv["tau"] = fmt_list(tau_grid);
  if (separation) kv["separation"] = fmt(*separation);
  if (sampling) kv["modes"] = fmt(sampling->omega_min) + ":" + fmt(sampling->omega_max) + ":" + fmt(sampling->count);
  if (!modes.empty()) {
    std::string m;
    for (const auto& md : modes) m += (m.empty() ? "" : ";") + fmt(md.C) + "," + fmt(md.m) + "," + fmt(md.omega);
    kv["mode"] = m;
  }
  if (sweep) kv["sweep"] = sweep->name + ":" + fmt_list(sweep->values);
  std::string outs;
  for (auto p : outputs) outs += (outs.empty() ? "" : ",") + std::string(product_name(p));
  kv["outputs"] = outs;
  kv["matsubara_rel_tol"] = fmt(matsubara.rel_tol);
  kv["matsubara_max_terms"] = std::to_string(matsubara.max_terms);
  kv["quad_rel_tol"] = fmt(quadrature.rel_tol);
  kv["influence_rel_tol"] = fmt(influence_rel_tol);
  kv["seed"] = std::to_string(seed);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string ScenarioConfig::hash() const { return fnv1a_hex(canonical()); }

}  // namespace qbm
