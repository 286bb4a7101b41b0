#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace exlab {

struct QuadratureResult {
  double value = 0;
  double error = 0;  // last Richardson increment
  int doublings = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const QuadratureResult& last)
      : std::runtime_error("quadrature failed to converge, last residual " +
                           std::to_string(last.error)),
        last_(last) {}
  const QuadratureResult& last() const { return last_; }

 private:
  QuadratureResult last_;
};

/// Composite Simpson on doubling panel counts, reusing evaluations through
/// the trapezoid refinement; stops when successive Simpson values differ by
/// less than abs_tol.
inline QuadratureResult integrate_doubling_simpson(const std::function<double(double)>& f,
                                                   double a, double b, double abs_tol,
                                                   int max_doublings = 22) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double trap = 0.5 * (b - a) * (f(a) + f(b));
  double simpson_prev = trap;
  long n = 1;  // panels in the trapezoid rule
  for (int d = 1; d <= max_doublings; ++d) {
    const double h = (b - a) / double(n);
    double mid = 0;
    for (long i = 0; i < n; ++i) mid += f(a + (double(i) + 0.5) * h);
    const double trap_next = 0.5 * (trap + h * mid);
    const double simpson = (4.0 * trap_next - trap) / 3.0;
    res.value = simpson;
    res.error = std::abs(simpson - simpson_prev);
    res.doublings = d;
    if (d >= 3 && res.error < abs_tol) {
      res.converged = true;
      return res;
    }
    simpson_prev = simpson;
    trap = trap_next;
    n *= 2;
  }
  return res;
}

/// Simpson doubling with a relative stopping rule, for positive integrands.
inline QuadratureResult integrate_doubling_simpson_rel(const std::function<double(double)>& f,
                                                       double a, double b, double rel_tol,
                                                       int max_doublings = 26) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  double trap = 0.5 * (b - a) * (f(a) + f(b));
  double simpson_prev = trap;
  long n = 1;
  for (int d = 1; d <= max_doublings; ++d) {
    const double h = (b - a) / double(n);
    double mid = 0;
    for (long i = 0; i < n; ++i) mid += f(a + (double(i) + 0.5) * h);
    const double trap_next = 0.5 * (trap + h * mid);
    const double simpson = (4.0 * trap_next - trap) / 3.0;
    res.value = simpson;
    res.error = std::abs(simpson - simpson_prev);
    res.doublings = d;
    if (d >= 3 && res.error <= rel_tol * std::abs(simpson) + 1e-300) {
      res.converged = true;
      return res;
    }
    simpson_prev = simpson;
    trap = trap_next;
    n *= 2;
  }
  return res;
}

/// Positive integrand over [0, upper], split into dyadic panels [0,1], [1,2],
/// [2,4], ...; each panel resolved to rel_tol so the total inherits it.
inline double integrate_dyadic(const std::function<double(double)>& f, double upper,
                               double rel_tol) {
  double total = 0;
  double lo = 0, hi = std::min(1.0, upper);
  for (;;) {
    auto r = integrate_doubling_simpson_rel(f, lo, hi, rel_tol);
    if (!r.converged) throw QuadratureError(r);
    total += r.value;
    if (hi >= upper) break;
    lo = hi;
    hi = std::min(2 * hi, upper);
  }
  return total;
}

}  // namespace exlab
