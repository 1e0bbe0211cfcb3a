#pragma once

#include <complex>

#include <Eigen/Dense>

#include "qbm/overlap.hpp"
#include "qbm/params.hpp"
#include "qbm/trajectory.hpp"

namespace qbm {

using ComplexMatrix = Eigen::MatrixXcd;

struct TruncationPolicy {
  double trace_deficit_tol = 1e-12;
  int hard_max_dim = 600;
};

/// Truncated single-mode density matrix in the Fock basis.
struct DensityMatrix {
  ComplexMatrix entries;
  int dim() const { return static_cast<int>(entries.rows()); }
  double trace() const { return entries.trace().real(); }
};

/// Mean thermal occupation 1 / (exp(hbar beta omega) - 1).
double thermal_occupation(double omega, double beta, const Constants& c);

/// Weight of the thermal distribution at n >= dim, (nbar / (nbar + 1))^dim.
double thermal_tail(double nbar, int dim);

/// Weight of a coherent state |alpha> at n >= dim (Poisson tail).
double displaced_vacuum_tail(double abs_alpha_sq, int dim);

/// Diagonal thermal state; no renormalization. Throws TruncationTooSmall if the trace deficit exceeds tolerance.
DensityMatrix thermal_state(double nbar, int dim, const TruncationPolicy& policy = {});

/// exp(alpha a^dag - conj(alpha) a) on the truncated ladder. Exactly unitary.
/// Throws TruncationTooSmall if the displaced vacuum leaks past dim - 1.
ComplexMatrix displacement_matrix(std::complex<double> alpha, int dim, const TruncationPolicy& policy = {});

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)) by eigendecomposition, clamping eigenvalues below 1e-12 lambda_max.
double generalized_overlap_numeric(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Smallest dimension meeting both tail criteria, starting from
/// ceil(n + 8 sqrt(n + 1)) with n = nbar + max |alpha|^2. Throws TruncationTooSmall past hard_max_dim.
int policy_dimension(double nbar, double max_abs_alpha_sq, const TruncationPolicy& policy = {});

/// D(alpha) thermal(nbar) D(alpha)^dag with alpha from the mode's displacement amplitude.
DensityMatrix conditional_state(const Mode& mode, const Trajectory& traj, double nbar, int dim, const Constants& c,
                                const TruncationPolicy& policy = {});

/// <N> = Tr(N rho).
double mean_occupation(const DensityMatrix& rho);

struct OracleReport {
  double b_numeric = 0, b_analytic = 0;
  double abs_error = 0, rel_error = 0;
  int dim = 0;
  double thermal_tail = 0, displaced_tail = 0;
};

/// Numeric overlap of the two conditional states against the closed form.
/// dim <= 0 selects the dimension by policy.
OracleReport oracle_vs_analytic(const Mode& mode, const Trajectory& a, const Trajectory& b, double beta, int dim,
                                const Constants& c, const TruncationPolicy& policy = {});

}  // namespace qbm
