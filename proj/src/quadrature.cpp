#include "qbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qbm/errors.hpp"

namespace qbm::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double a, b;
  double value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One 15-point Kronrod / 7-point Gauss panel with the QUADPACK error heuristic.
Panel gk15(const RealFn& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  std::array<double, 15> fv{};
  fv[0] = f(c);
  for (std::size_t i = 1; i < x.size(); ++i) {
    fv[2 * i - 1] = f(c - h * x[i]);
    fv[2 * i] = f(c + h * x[i]);
  }
  double rk = fv[0] * wk[0];
  double rg = fv[0] * wg[0];
  double rabs = std::abs(fv[0]) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double s = fv[2 * i - 1] + fv[2 * i];
    rk += wk[i] * s;
    rabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 0) rg += wg[i / 2] * s;
  }
  const double mean = 0.5 * rk;
  double rasc = wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < x.size(); ++i)
    rasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  double err = std::abs((rk - rg) * h);
  rasc *= std::abs(h);
  rabs *= std::abs(h);
  if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
  if (rabs > std::numeric_limits<double>::min() / (50 * kEps)) err = std::max(50 * kEps * rabs, err);
  return {a, b, rk * h, err, rabs};
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

QuadResult integrate(const RealFn& f, double a, double b, const QuadOptions& opts) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Panel> heap;
  const int pieces = std::max(1, opts.initial_pieces);
  double value = 0, error = 0, l1 = 0;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * i / pieces;
    const double hi = i + 1 == pieces ? b : a + (b - a) * (i + 1) / pieces;
    Panel p = gk15(f, lo, hi);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push(p);
  }
  out.evaluations = 15L * pieces;

  auto tolerance = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 100 * kEps * l1});
  };

  int count = pieces;
  bool stuck = false;
  while (error > tolerance() && count < opts.max_intervals) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 100 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      stuck = true;
      break;
    }
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  // Re-accumulate exactly to avoid drift in the running totals.
  CompensatedSum v, e, n;
  while (!heap.empty()) {
    v.add(heap.top().value);
    e.add(heap.top().error);
    n.add(heap.top().l1);
    heap.pop();
  }
  value = v.value();
  error = e.value();
  l1 = n.value();
  out.value = sign * value;
  out.error = error;
  out.l1 = l1;
  out.converged = !stuck && error <= tolerance();
  return out;
}

double integrate_or_throw(const RealFn& f, double a, double b, const QuadOptions& opts,
                          const char* what) {
  QuadResult r = integrate(f, a, b, opts);
  if (!r.converged) throw QuadratureNoConvergence(what, r.value, r.error);
  return r.value;
}

double euler_sum(std::span<const double> terms, double* error_estimate) {
  const std::size_t n = terms.size();
  if (n == 0) {
    if (error_estimate) *error_estimate = 0;
    return 0;
  }
  std::vector<double> row(n);
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    s.add(terms[i]);
    row[i] = s.value();
  }
  double prev = row[n - 1];
  for (std::size_t m = 1; m < n; ++m) {
    prev = row[0];
    for (std::size_t i = 0; i + m < n; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
  }
  if (error_estimate) *error_estimate = n > 1 ? std::abs(row[0] - prev) : std::abs(terms[0]);
  return row[0];
}

double richardson_limit(std::span<const double> partial_sums, double* error_estimate) {
  const std::size_t n = partial_sums.size();
  if (n == 0) {
    if (error_estimate) *error_estimate = 0;
    return 0;
  }
  // table[j] holds the current column entry for row j.
  std::vector<double> prev(partial_sums.begin(), partial_sums.end());
  std::vector<double> diag{prev[0]};
  for (std::size_t k = 1; k < n; ++k) {
    const double factor = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
    std::vector<double> cur(n - k);
    for (std::size_t j = 0; j + k < n; ++j) cur[j] = prev[j + 1] + (prev[j + 1] - prev[j]) / factor;
    diag.push_back(cur.back());
    prev = std::move(cur);
  }
  const double best = diag.back();
  if (error_estimate) {
    *error_estimate = diag.size() > 1 ? std::abs(best - diag[diag.size() - 2])
                                      : std::numeric_limits<double>::infinity();
  }
  return best;
}

FourierResult fourier_integral(const RealFn& f, double tau, Trig kind, const FourierOptions& opts) {
  const double pi = std::numbers::pi;
  auto trig = [kind](double x) { return kind == Trig::Cos ? std::cos(x) : std::sin(x); };
  const double period = pi / tau;  // distance between consecutive zeros
  // First zero of the trigonometric factor at or beyond the requested split.
  const double offset = kind == Trig::Cos ? 0.5 : 0.0;
  const double z0 = (std::ceil(opts.split / period - offset) + offset) * period;
  // A sliver shorter than a quarter period is absorbed into the head.
  const double split = z0 - opts.split < 0.25 * period ? z0 : opts.split;

  FourierResult out;

  // Head: [0, split], cut into panels no wider than one half-period.
  QuadOptions head_opts;
  head_opts.rel_tol = 0.1 * opts.rel_tol;
  head_opts.abs_tol = 0.1 * opts.abs_tol;
  head_opts.initial_pieces =
      static_cast<int>(std::clamp(std::ceil(split / period), 4.0, 8192.0));
  head_opts.max_intervals = head_opts.initial_pieces + 20000;
  QuadResult head = integrate([&](double w) { return f(w) * trig(w * tau); }, 0.0, split, head_opts);

  QuadResult bridge;
  if (z0 > split) {
    QuadOptions bopts;
    bopts.rel_tol = 0.1 * opts.rel_tol;
    if (z0 > 4.0 * split) {
      // Non-oscillatory stretch spanning decades: integrate in log(w).
      const double span = std::log(z0 / split);
      bopts.initial_pieces = static_cast<int>(std::clamp(std::ceil(span), 1.0, 2000.0));
      bopts.max_intervals = bopts.initial_pieces + 4000;
      bridge = integrate(
          [&](double s) {
            const double w = split * std::exp(s);
            return f(w) * trig(w * tau) * w;
          },
          0.0, span, bopts);
    } else {
      bridge = integrate([&](double w) { return f(w) * trig(w * tau); }, split, z0, bopts);
    }
  } else {
    bridge.converged = true;
  }

  QuadOptions popts;
  popts.rel_tol = 1e-13;
  popts.max_intervals = 200;
  std::vector<double> terms;
  terms.reserve(64);
  double estimate = 0, prev_estimate = 0, accel_err = 0;
  int agree = 0;
  const double base = head.value + bridge.value;
  const double floor = 100 * std::numeric_limits<double>::epsilon() * (head.l1 + bridge.l1);
  for (int j = 0; j < opts.max_panels; ++j) {
    const double lo = z0 + j * period;
    QuadResult p = integrate([&](double w) { return f(w) * trig(w * tau); }, lo, lo + period, popts);
    terms.push_back(p.value);
    estimate = euler_sum(terms, &accel_err);
    const double tol = std::max({opts.abs_tol, opts.rel_tol * std::abs(base + estimate), floor});
    if (j >= 4) {
      if (std::abs(estimate - prev_estimate) <= 0.25 * tol) {
        if (++agree >= 2) {
          out.converged = true;
          break;
        }
      } else {
        agree = 0;
      }
    }
    prev_estimate = estimate;
  }
  out.panels = static_cast<int>(terms.size());
  out.value = base + estimate;
  out.error = head.error + bridge.error + std::max(std::abs(estimate - prev_estimate), accel_err);
  out.converged = out.converged && head.converged && bridge.converged;
  return out;
}

}  // namespace qbm::numerics
