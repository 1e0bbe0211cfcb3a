#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qbm/config.hpp"
#include "qbm/errors.hpp"
#include "qbm/scales.hpp"
#include "qbm/scenario.hpp"
#include "qbm/table.hpp"
#include "qbm/verify.hpp"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kConvergence = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  std::string format = "csv";
  bool natural_units = false;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

qbm::ScenarioConfig load(const Options& o) {
  auto cfg = qbm::parse_config(qbm::read_file(o.config));
  if (o.natural_units) {
    cfg.natural_units = true;
    cfg.params.constants = qbm::Constants::natural();
  }
  return cfg;
}

void write_tables(const std::vector<qbm::ResultTable>& tables, const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw qbm::IoError("cannot create output directory " + o.out + ": " + ec.message());
  const std::string stamp = utc_timestamp();
  for (const auto& t : tables) {
    const auto base = (std::filesystem::path(o.out) / t.name).string();
    if (o.format == "csv" || o.format == "both") {
      qbm::emit_csv(t, base + ".csv", stamp);
      std::cout << "wrote " << base << ".csv (" << t.rows.size() << " rows)\n";
    }
    if (o.format == "svg" || o.format == "both") {
      qbm::emit_svg(t, qbm::default_plot(t), base + ".svg");
      std::cout << "wrote " << base << ".svg\n";
    }
  }
}

int run_products(const Options& o, std::optional<qbm::Product> only, bool require_sweep) {
  auto cfg = load(o);
  if (require_sweep && !cfg.sweep) throw qbm::ValidationError("sweep", "required by the sweep subcommand");
  if (only) cfg.outputs = {*only};
  const auto tables = qbm::run_scenario(cfg, o.threads);
  write_tables(tables, o);
  for (const auto& t : tables)
    if (t.name == "scales" && !cfg.sweep && t.rows.size() == 1) {
      const auto& r = t.rows.front();
      qbm::ScalesReport s{r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7]};
      std::cout << qbm::scales_text(s);
    }
  bool failed = false;
  if (std::find(cfg.outputs.begin(), cfg.outputs.end(), qbm::Product::Verify) != cfg.outputs.end()) {
    const auto report = qbm::run_verify(cfg.seed, cfg);
    std::cout << report.text();
    write_tables({report.table(cfg.hash())}, o);
    failed = !report.all_passed();
  }
  return failed ? kVerifyFailed : kOk;
}

int run_verify_command(const Options& o) {
  std::optional<qbm::ScenarioConfig> cfg;
  if (!o.config.empty()) cfg = load(o);
  const std::uint64_t seed = o.seed_given ? o.seed : cfg ? cfg->seed : 0;
  const auto report = qbm::run_verify(seed, cfg);
  std::cout << report.text();
  const std::string hash = cfg ? cfg->hash() : qbm::fnv1a_hex("verify seed=" + std::to_string(seed));
  write_tables({report.table(hash)}, o);
  const bool ok = report.all_passed();
  std::cout << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoherence and environmental distinguishability of a damped oscillator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qbm::kToolVersion));
  Options o;

  auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "scenario config file (key = value)");
    if (config_required) c->required();
    c->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--format", o.format, "csv, svg or both")
        ->check(CLI::IsMember({"csv", "svg", "both"}))
        ->capture_default_str();
    sub->add_flag("--natural-units", o.natural_units, "use hbar = k_B = 1");
    sub->add_option("--threads", o.threads, "worker threads for sweeps (0 = all cores)");
  };

  struct Cmd {
    const char* name;
    const char* help;
    std::optional<qbm::Product> product;
  };
  const Cmd cmds[] = {{"kernels", "noise, dissipation and QFI kernels on a lag grid", qbm::Product::Kernels},
                      {"overlap", "environmental overlap versus time", qbm::Product::Overlap},
                      {"influence", "influence functional exponents versus time", qbm::Product::Influence},
                      {"scales", "length and time scales of the resolution gap", qbm::Product::Scales},
                      {"sweep", "every configured output over the sweep axis", std::nullopt}};
  std::vector<std::pair<CLI::App*, const Cmd*>> product_subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    common(sub, true);
    product_subs.emplace_back(sub, &c);
  }
  auto* verify = app.add_subcommand("verify", "oracle and cross-method checks; exit 1 on any failure");
  common(verify, false);
  verify->add_option("--seed", o.seed, "seed for randomized identity checks")->each([&](const std::string&) {
    o.seed_given = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (verify->parsed()) return run_verify_command(o);
    for (auto [sub, cmd] : product_subs)
      if (sub->parsed()) return run_products(o, cmd->product, cmd->product == std::nullopt);
  } catch (const qbm::ParseError& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return kConfigError;
  } catch (const qbm::ValidationError& e) {
    std::cerr << "config validation error: " << e.what() << "\n";
    return kConfigError;
  } catch (const qbm::ConvergenceError& e) {
    std::cerr << "numerical convergence failure: " << e.what() << "\n";
    return kConvergence;
  } catch (const qbm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
