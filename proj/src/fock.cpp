#include "qbm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "qbm/errors.hpp"

namespace qbm {

using cplx = std::complex<double>;

namespace {

constexpr double kClamp = 1e-12;

// Square root of a density matrix; eigenvalues below -kClamp * lambda_max mean the input is not PSD.
Eigen::MatrixXcd density_sqrt(const ComplexMatrix& m, const char* name) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -kClamp * top) throw DomainError(std::string(name) + " has a negative eigenvalue");
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::sqrt(std::max(ev[i], 0.0));
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void check_density(const DensityMatrix& r, const char* name) {
  const auto& m = r.entries;
  if (m.rows() != m.cols() || m.rows() == 0) throw DomainError(std::string(name) + " is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(name) + " is not Hermitian");
  if (r.trace() > 1.0 + 1e-10) throw DomainError(std::string(name) + " has trace above one");
}

}  // namespace

double thermal_occupation(double omega, double beta, const Constants& c) {
  return 1.0 / std::expm1(c.hbar * beta * omega);
}

double thermal_tail(double nbar, int dim) {
  if (nbar == 0.0) return 0.0;
  return std::pow(nbar / (nbar + 1.0), dim);
}

double displaced_vacuum_tail(double abs_alpha_sq, int dim) {
  if (abs_alpha_sq == 0.0 || dim <= 0) return dim <= 0 ? 1.0 : 0.0;
  return boost::math::gamma_p(static_cast<double>(dim), abs_alpha_sq);
}

DensityMatrix thermal_state(double nbar, int dim, const TruncationPolicy& policy) {
  if (dim < 1) throw DomainError("dim must be at least 1");
  if (!(nbar >= 0.0)) throw DomainError("nbar must be nonnegative");
  const double deficit = thermal_tail(nbar, dim);
  if (deficit > policy.trace_deficit_tol)
    throw TruncationTooSmall("thermal trace deficit " + std::to_string(deficit) + " at dim " + std::to_string(dim));
  DensityMatrix r{ComplexMatrix::Zero(dim, dim)};
  const double q = nbar / (nbar + 1.0);
  double p = 1.0 / (nbar + 1.0);
  for (int n = 0; n < dim; ++n) {
    r.entries(n, n) = p;
    p *= q;
  }
  return r;
}

ComplexMatrix displacement_matrix(cplx alpha, int dim, const TruncationPolicy& policy) {
  if (dim < 1) throw DomainError("dim must be at least 1");
  const double tail = displaced_vacuum_tail(std::norm(alpha), dim);
  if (tail > policy.trace_deficit_tol)
    throw TruncationTooSmall("displaced vacuum weight " + std::to_string(tail) + " beyond dim " + std::to_string(dim));
  if (alpha == cplx(0.0)) return ComplexMatrix::Identity(dim, dim);
  // H = i (alpha a^dag - conj(alpha) a) is Hermitian and D = exp(-i H).
  ComplexMatrix H = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    H(n, n - 1) = cplx(0, 1) * alpha * s;
    H(n - 1, n) = cplx(0, -1) * std::conj(alpha) * s;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
  Eigen::VectorXcd phase(dim);
  for (int i = 0; i < dim; ++i) phase[i] = std::polar(1.0, -es.eigenvalues()[i]);
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

double generalized_overlap_numeric(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("dims " + std::to_string(rho.dim()) + " and " + std::to_string(sigma.dim()));
  check_density(rho, "rho");
  check_density(sigma, "sigma");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the sum of singular values of sqrt(rho) sqrt(sigma).
  const ComplexMatrix prod = density_sqrt(rho.entries, "rho") * density_sqrt(sigma.entries, "sigma");
  Eigen::BDCSVD<ComplexMatrix> svd(prod);
  const double b = svd.singularValues().sum();
  return std::clamp(b, 0.0, 1.0);
}

int policy_dimension(double nbar, double max_abs_alpha_sq, const TruncationPolicy& policy) {
  const double n = nbar + max_abs_alpha_sq;
  int dim = std::max(1, static_cast<int>(std::ceil(n + 8.0 * std::sqrt(n + 1.0))));
  while (thermal_tail(nbar, dim) > policy.trace_deficit_tol ||
         displaced_vacuum_tail(max_abs_alpha_sq, dim) > policy.trace_deficit_tol) {
    if (++dim > policy.hard_max_dim)
      throw TruncationTooSmall("policy dimension exceeds hard_max_dim " + std::to_string(policy.hard_max_dim));
  }
  return dim;
}

DensityMatrix conditional_state(const Mode& mode, const Trajectory& traj, double nbar, int dim, const Constants& c,
                                const TruncationPolicy& policy) {
  const cplx alpha = displacement_amplitude(mode, traj, c);
  const auto th = thermal_state(nbar, dim, policy);
  const ComplexMatrix D = displacement_matrix(alpha, dim, policy);
  DensityMatrix r{D * th.entries * D.adjoint()};
  r.entries = 0.5 * (r.entries + r.entries.adjoint()).eval();
  return r;
}

double mean_occupation(const DensityMatrix& rho) {
  double s = 0;
  for (int n = 0; n < rho.dim(); ++n) s += n * rho.entries(n, n).real();
  return s;
}

OracleReport oracle_vs_analytic(const Mode& mode, const Trajectory& a, const Trajectory& b, double beta, int dim,
                                const Constants& c, const TruncationPolicy& policy) {
  const double nbar = thermal_occupation(mode.omega, beta, c);
  const double a2 = std::max(std::norm(displacement_amplitude(mode, a, c)), std::norm(displacement_amplitude(mode, b, c)));
  OracleReport r;
  r.dim = dim > 0 ? dim : policy_dimension(nbar, a2, policy);
  r.thermal_tail = thermal_tail(nbar, r.dim);
  r.displaced_tail = displaced_vacuum_tail(a2, r.dim);
  r.b_numeric = generalized_overlap_numeric(conditional_state(mode, a, nbar, r.dim, c, policy),
                                            conditional_state(mode, b, nbar, r.dim, c, policy));
  r.b_analytic = single_mode_overlap(mode, delta(a, b), beta, c);
  r.abs_error = std::abs(r.b_numeric - r.b_analytic);
  r.rel_error = r.abs_error / r.b_analytic;
  return r;
}

}  // namespace qbm
