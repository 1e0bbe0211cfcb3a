#pragma once

#include <functional>

#include "qbm/overlap.hpp"

namespace qbm::detail {

/// int_0^t dtau int_0^tau dtau' Delta(tau) k(tau - tau') Delta(tau') = int_0^t k(u) G(u) du
/// for a kernel k that may be log-singular at u = 0 and varies on the scale 1/rate.
/// kernel_noise is the absolute accuracy of k; panels are not refined below it.
PhiValue stationary_quadratic_form(const std::function<double(double)>& kernel, const DeltaTrajectory& d,
                                   double rate, double kernel_noise, double rel_tol);

}  // namespace qbm::detail
