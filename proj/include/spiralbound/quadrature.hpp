#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiralbound::quadrature {

/// Result of an adaptive integration. When `converged` is false, `worst_a`
/// and `worst_b` bracket the subinterval that resisted refinement.
struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  double worst_a = 0.0;
  double worst_b = 0.0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK G7K15).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double a, b;
  double value;
  double error;
};

}  // namespace detail

/// One Gauss-Kronrod 7/15 panel on [a,b]. The error estimate follows the
/// QUADPACK rescaling against the integral of |f - mean|.
template <class F>
double gauss_kronrod_15(F&& f, double a, double b, double* abs_err = nullptr) {
  using namespace detail;
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);

  double fv[15];
  const double fc = f(c);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double x = hl * kXgk[j];
    fv[j] = f(c - x);
    fv[j + 7] = f(c + x);
    const double sum = fv[j] + fv[j + 7];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[j + 7]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[j + 7] - mean));
  resasc *= std::abs(hl);
  resabs *= std::abs(hl);

  double err = std::abs((resk - resg) * hl);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);
  if (abs_err) *abs_err = err;
  return resk * hl;
}

/// Globally adaptive integration: worst panel first, deterministic tie-break
/// on the left endpoint.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 0.0, std::size_t max_panels = 20000) {
  QuadResult out;
  if (a == b) return out;

  auto worse = [](const detail::Panel& p, const detail::Panel& q) {
    if (p.error != q.error) return p.error < q.error;
    return p.a > q.a;
  };
  std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(worse)>
      heap(worse);

  double err0 = 0.0;
  const double v0 = gauss_kronrod_15(f, a, b, &err0);
  heap.push({a, b, v0, err0});
  double total = v0, total_err = err0;

  const double min_width = std::abs(b - a) * 1e-14;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    const detail::Panel p = heap.top();
    if (heap.size() >= max_panels || std::abs(p.b - p.a) < min_width) {
      out.converged = false;
      out.worst_a = p.a;
      out.worst_b = p.b;
      break;
    }
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    double e1 = 0.0, e2 = 0.0;
    const double v1 = gauss_kronrod_15(f, p.a, m, &e1);
    const double v2 = gauss_kronrod_15(f, m, p.b, &e2);
    total += v1 + v2 - p.value;
    total_err += e1 + e2 - p.error;
    heap.push({p.a, m, v1, e1});
    heap.push({m, p.b, v2, e2});
  }
  out.value = total;
  out.error = total_err;
  return out;
}

/// Throwing wrapper used where non-convergence is a hard error.
template <class F>
double integrate_or_throw(F&& f, double a, double b, double rel_tol,
                          const char* what) {
  QuadResult q = integrate(f, a, b, rel_tol);
  if (!q.converged)
    throw std::runtime_error(std::string(what) +
                             ": quadrature did not converge on [" +
                             std::to_string(q.worst_a) + ", " +
                             std::to_string(q.worst_b) + "]");
  return q.value;
}

}  // namespace spiralbound::quadrature
