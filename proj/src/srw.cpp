#include "exlab/srw.hpp"

#include <cmath>
#include <stdexcept>

namespace exlab {

static double log_poisson_pmf(double lambda, double n) {
  return n * std::log(lambda) - lambda - std::lgamma(n + 1);
}

double poisson_tail(double lambda, Index m) {
  if (m <= 0) return 1.0;
  if (lambda <= 0) return 0.0;
  double sum = 0;
  // terms decrease once n > lambda; below the mode add everything
  for (Index n = m;; ++n) {
    const double p = std::exp(log_poisson_pmf(lambda, double(n)));
    sum += p;
    if (double(n) > lambda && (p < 1e-18 * sum || p < 5e-324)) break;
    if (n > m + Index(10 * lambda) + 200) break;
  }
  return std::min(sum, 1.0);
}

Index srw_window(double t, double tol) {
  const double lambda = 2 * t;
  Index r = Index(lambda) + 1;
  while (poisson_tail(lambda, r) >= tol) {
    r += std::max<Index>(4, Index(std::sqrt(lambda)));
  }
  // tighten back down
  while (r > 1 && poisson_tail(lambda, r - 1) < tol) --r;
  return std::max<Index>(r, 2);
}

Eigen::VectorXd scaled_bessel_row(double z, Index nmax) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nmax + 1);
  if (z <= 0) {
    out[0] = 1.0;
    return out;
  }
  // start above both the requested order and the turning point ~z, where the
  // minimal-solution contamination of the recurrence dies off
  const Index start =
      std::max(nmax, Index(z)) + 40 + Index(2 * std::sqrt(z + double(nmax)));
  Eigen::VectorXd work = Eigen::VectorXd::Zero(start + 2);
  work[start + 1] = 0.0;
  work[start] = 1e-300;
  for (Index n = start; n >= 1; --n) {
    work[n - 1] = work[n + 1] + (2.0 * double(n) / z) * work[n];
    if (work[n - 1] > 1e280) {
      for (Index j = n - 1; j <= start + 1; ++j) work[j] *= 1e-280;
    }
  }
  // e^{-z} (I_0 + 2 sum_{n>=1} I_n) = 1 fixes the scale
  double norm = work[0];
  for (Index n = 1; n <= start; ++n) norm += 2 * work[n];
  for (Index n = 0; n <= nmax; ++n) out[n] = work[n] / norm;
  return out;
}

double srw_kernel_1d(Index x, double t) {
  if (t < 0) throw std::invalid_argument("srw_kernel_1d: negative time");
  const Index ax = std::abs(x);
  if (t == 0) return ax == 0 ? 1.0 : 0.0;
  return scaled_bessel_row(2 * t, ax)[ax];
}

Eigen::VectorXd srw_row_1d(double t, Index radius) {
  if (t < 0) throw std::invalid_argument("srw_row_1d: negative time");
  if (t == 0) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(radius + 1);
    out[0] = 1.0;
    return out;
  }
  return scaled_bessel_row(2 * t, radius);
}

double torus_axis_kernel(Index dx, double t, Index L) {
  if (t == 0) return mod_floor(dx, L) == 0 ? 1.0 : 0.0;
  const Index r = mod_floor(dx, L);
  const Index jmin = 6;
  Eigen::VectorXd row;  // grown on demand
  auto p = [&](Index n) {
    if (row.size() <= n) row = srw_row_1d(t, n + 4 * L);
    return row[n];
  };
  double sum = p(r);
  for (Index j = 1;; ++j) {
    const double inc = p(r + j * L) + p(std::abs(r - j * L));
    sum += inc;
    if (j >= jmin && inc < 1e-14) break;
  }
  return sum;
}

double torus_axis_kernel_spectral(Index dx, double t, Index L) {
  const double r = double(mod_floor(dx, L));
  double sum = 0;
  for (Index m = 0; m < L; ++m) {
    const double w = 2 * M_PI * double(m) / double(L);
    sum += std::cos(w * r) * std::exp(-2 * t * (1 - std::cos(w)));
  }
  return sum / double(L);
}

Eigen::VectorXd torus_axis_row(double t, Index L) {
  Eigen::VectorXd out(L);
  for (Index r = 0; r < L; ++r) out[r] = torus_axis_kernel(r, t, L);
  return out;
}

double torus_return_probability(double t, Index L, int d) {
  double axis = 0;
  for (Index m = 0; m < L; ++m) {
    const double w = 2 * M_PI * double(m) / double(L);
    axis += std::exp(-2 * t * (1 - std::cos(w)));
  }
  axis /= double(L);
  double out = 1;
  for (int a = 0; a < d; ++a) out *= axis;
  return out;
}

double srw_kernel(const Pt& x, const Pt& y, double t, const Geometry& g) {
  if (t < 0) throw std::invalid_argument("srw_kernel: negative time");
  double out = 1;
  for (int a = 0; a < g.dim; ++a) {
    const Index dx = x[a] - y[a];
    out *= g.is_torus() ? torus_axis_kernel(dx, t, g.side) : srw_kernel_1d(dx, t);
  }
  return out;
}

double product_kernel_rw(const Config& x, const Config& y, double t, const Geometry& g) {
  if (x.k() != y.k()) throw std::invalid_argument("product_kernel_rw: arity mismatch");
  double out = 1;
  for (int i = 0; i < x.k(); ++i) out *= srw_kernel(x.pos[i], y.pos[i], t, g);
  return out;
}

}  // namespace exlab
