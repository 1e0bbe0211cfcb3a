#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qbm::numerics {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0;
  double error = 0;  // estimated absolute error
  double l1 = 0;     // integral of |f|, sets the round-off floor
  long evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  int initial_pieces = 1;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
/// Stops when error <= max(abs_tol, rel_tol*|I|) or when the error reaches the
/// round-off floor of the integrand's L1 norm.
QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opts = {});

/// Same as integrate() but throws QuadratureNoConvergence when not converged.
double integrate_or_throw(const RealFn& f, double a, double b, const QuadOptions& opts,
                          const char* what);

enum class Trig { Cos, Sin };

struct FourierOptions {
  /// Split point: adaptive quadrature on [0, split], zero-to-zero panels beyond.
  double split = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 2000;
};

struct FourierResult {
  double value = 0;
  double error = 0;
  int panels = 0;  // number of tail panels consumed by the accelerator
  bool converged = false;
};

/// int_0^inf f(w) cos(w tau) dw (or sin) for an envelope f that decays
/// monotonically beyond `split`. The tolerance never drops below the
/// round-off floor set by the L1 norm of the integrand on [0, split]. The tail is integrated panel by panel between
/// consecutive zeros of the trigonometric factor and the alternating panel
/// series is summed with Euler / van Wijngaarden averaging.
FourierResult fourier_integral(const RealFn& f, double tau, Trig kind, const FourierOptions& opts);

/// Euler (repeated-averaging) transform of an alternating series given its
/// terms. Returns the accelerated sum and writes an error estimate.
double euler_sum(std::span<const double> terms, double* error_estimate = nullptr);

/// Richardson extrapolation of partial sums S(N_j), N_j = N_0 * 2^j, whose
/// remainder has an asymptotic expansion in integer powers of 1/N.
/// Returns the best estimate of the limit; writes the difference of the last
/// two diagonal entries as an error estimate.
double richardson_limit(std::span<const double> partial_sums, double* error_estimate = nullptr);

/// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

}  // namespace qbm::numerics
