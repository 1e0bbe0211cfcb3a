#include "qbm/scales.hpp"

#include <cmath>
#include <cstdio>

#include "qbm/errors.hpp"

namespace qbm {

namespace {
void require_separation(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw NonPositiveSeparation();
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace

double thermal_de_broglie(const ValidatedParams& p) {
  return p.hbar() / std::sqrt(2.0 * p.M() * p.k_B() * p.T());
}

double distinguishability_length(const ValidatedParams& p) {
  return std::sqrt(2.0 * p.k_B() * p.T() / p.M()) / p.Lambda();
}

double decoherence_time(const ValidatedParams& p, double d) {
  require_separation(d);
  const double r = thermal_de_broglie(p) / d;
  return r * r / p.gamma();
}

double distinguishability_time(const ValidatedParams& p, double d) {
  require_separation(d);
  const double r = distinguishability_length(p) / d;
  return r * r / p.gamma();
}

ScalesReport gap_report(const ValidatedParams& p, double d) {
  require_separation(d);
  ScalesReport r;
  r.separation_d = d;
  r.lambda_dB = thermal_de_broglie(p);
  r.lambda_dist = distinguishability_length(p);
  r.t_dec = decoherence_time(p, d);
  r.t_dist = distinguishability_time(p, d);
  r.length_ratio = 2.0 * p.k_B() * p.T() / (p.hbar() * p.Lambda());
  r.time_ratio = r.length_ratio * r.length_ratio;
  r.gain_disturbance_product = p.hbar() / (p.M() * p.Lambda());
  return r;
}

std::string scales_csv_header() {
  return "lambda_dB,lambda_dist,t_dec,t_dist,length_ratio,time_ratio,gain_disturbance_product,separation_d";
}

std::string scales_csv_row(const ScalesReport& r) {
  return fmt(r.lambda_dB) + "," + fmt(r.lambda_dist) + "," + fmt(r.t_dec) + "," + fmt(r.t_dist) + "," +
         fmt(r.length_ratio) + "," + fmt(r.time_ratio) + "," + fmt(r.gain_disturbance_product) + "," +
         fmt(r.separation_d);
}

std::string scales_text(const ScalesReport& r) {
  char buf[640];
  std::snprintf(buf, sizeof buf,
                "separation d             %.6e\n"
                "thermal de Broglie       %.6e\n"
                "distinguishability len   %.6e\n"
                "decoherence time         %.6e\n"
                "distinguishability time  %.6e\n"
                "length ratio             %.6f\n"
                "time ratio               %.6f\n"
                "gain x disturbance       %.6e\n",
                r.separation_d, r.lambda_dB, r.lambda_dist, r.t_dec, r.t_dist, r.length_ratio,
                r.time_ratio, r.gain_disturbance_product);
  return buf;
}

}  // namespace qbm
