#pragma once

#include <string>

#include "qbm/params.hpp"

namespace qbm {

struct ScalesReport {
  double lambda_dB = 0;
  double lambda_dist = 0;
  double t_dec = 0;
  double t_dist = 0;
  double length_ratio = 0;  // lambda_dist / lambda_dB
  double time_ratio = 0;    // t_dist / t_dec
  double gain_disturbance_product = 0;  // lambda_dist * lambda_dB
  double separation_d = 0;
};

/// sqrt(hbar^2 / (2 M k_B T))
double thermal_de_broglie(const ValidatedParams& p);
/// sqrt(2 k_B T / (M Lambda^2))
double distinguishability_length(const ValidatedParams& p);
/// (1/gamma) (lambda_dB / d)^2; throws NonPositiveSeparation for d <= 0.
double decoherence_time(const ValidatedParams& p, double d);
/// (1/gamma) (lambda_dist / d)^2; throws NonPositiveSeparation for d <= 0.
double distinguishability_time(const ValidatedParams& p, double d);

ScalesReport gap_report(const ValidatedParams& p, double d);

std::string scales_csv_header();
std::string scales_csv_row(const ScalesReport& r);
std::string scales_text(const ScalesReport& r);

}  // namespace qbm
