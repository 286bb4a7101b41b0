#include "exlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exlab/quadrature.hpp"
#include "exlab/srw.hpp"

namespace exlab {

const StateIndex& KernelWorkspace::states(int k) const {
  auto it = cache_.find(k);
  if (it == cache_.end()) {
    Entry e;
    e.idx = std::make_unique<StateIndex>(windowed_ ? StateIndex::windowed(k, g_, window_, budget_)
                                                   : StateIndex::torus(k, g_, budget_));
    it = cache_.emplace(k, std::move(e)).first;
  }
  return *it->second.idx;
}

const SpMat& KernelWorkspace::generator(int k) const {
  const StateIndex& idx = states(k);
  auto& entry = cache_.at(k);
  if (!entry.gen) entry.gen = std::make_unique<SpMat>(build_generator(idx));
  return *entry.gen;
}

KernelRow KernelWorkspace::row(const Config& x, double t, double series_tol) const {
  return exclusion_kernel_exact(x, t, states(x.k()), generator(x.k()), series_tol);
}

Config shift_e11(const Config& x) {
  Config out = x;
  out.pos[0][0] += 1;
  return out;
}

double gradient_pair(const GradientProbe& probe, const KernelWorkspace& ws) {
  const Geometry& g = ws.geometry();
  const Pt xi = probe.xa.pos[std::size_t(probe.i)];
  const Pt xj = probe.xb.pos[std::size_t(probe.j)];
  if (!are_neighbors(g, xi, xj)) return 0.0;

  Config xa_swapped = probe.xa;
  xa_swapped.pos[std::size_t(probe.i)] = xj;
  Config xb_swapped = probe.xb;
  xb_swapped.pos[std::size_t(probe.j)] = xi;

  const StateIndex& ia = ws.states(probe.xa.k());
  const StateIndex& ib = ws.states(probe.xb.k());
  const std::int64_t ya = ia.index(probe.ya), yb = ib.index(probe.yb);
  if (ya < 0 || yb < 0) throw std::invalid_argument("gradient_pair: target not enumerated");

  const double fa = ws.row(xa_swapped, probe.t1).p[ya] - ws.row(probe.xa, probe.t1).p[ya];
  const double fb = ws.row(xb_swapped, probe.t2).p[yb] - ws.row(probe.xb, probe.t2).p[yb];
  return fa * fb;
}

// Euclidean distance between state `sites` and config `x`, coordinate-wise
// minimal representatives on the torus.
static double state_distance(const StateIndex& idx, const std::int32_t* sites, const Config& x) {
  const Geometry& g = idx.geometry();
  double s = 0;
  for (int i = 0; i < idx.k(); ++i) {
    const Pt p = idx.site(sites[i]);
    const Pt d = displacement(g, p, x.pos[std::size_t(i)]);
    for (int a = 0; a < g.dim; ++a) s += double(d[a]) * double(d[a]);
  }
  return std::sqrt(s);
}

BoundReport grad_bound_scan(const KernelWorkspace& ws, int k, double theta,
                            const std::vector<double>& t_grid, const std::vector<Config>& bases) {
  const StateIndex& idx = ws.states(k);
  const int d = ws.geometry().dim;
  const double expo = double(k) * d + theta;

  BoundReport rep;
  rep.theta = theta;
  rep.k = k;
  rep.geometry = ws.geometry();

  for (std::size_t b = 0; b < bases.size(); ++b) {
    const Config& x = bases[b];
    const Config xs = shift_e11(x);
    if (idx.index(x) < 0) throw std::invalid_argument("grad_bound_scan: base not in S^k");
    if (idx.index(xs) < 0) {
      ++rep.skipped;
      continue;
    }
    for (double t : t_grid) {
      const KernelRow ra = ws.row(x, t);
      const KernelRow rb = ws.row(xs, t);
      ProbeSummary ps;
      ps.t = t;
      ps.base = int(b);
      for (std::int64_t y = 0; y < idx.size(); ++y) {
        const double diff = std::abs(ra.p[y] - rb.p[y]);
        const double dist = state_distance(idx, idx.state_sites(y), x);
        const double ratio = diff * std::pow(std::sqrt(t) + dist + 1.0, expo);
        ++rep.probes;
        if (ratio > ps.max_ratio) {
          ps.max_ratio = ratio;
          ps.argmax = y;
        }
      }
      rep.rows.push_back(ps);
      rep.c_fit = std::max(rep.c_fit, ps.max_ratio);
    }
  }
  return rep;
}

double phi_function(double u) {
  const double au = std::abs(u);
  if (au == 0) return 0.0;
  auto g = [au](double w) { return au * w - w * w * std::cosh(w); };
  // g'(w) = au - (2w cosh w + w^2 sinh w); the bracket ends where g' <= 0
  auto h = [](double w) { return 2 * w * std::cosh(w) + w * w * std::sinh(w); };
  double hi = 1.0;
  while (h(hi) < au) hi *= 2;
  double lo = 0.0;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = g(c), fd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, hi); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = g(d);
    }
  }
  return std::max(0.0, g(0.5 * (a + b)));
}

double offdiag_envelope(double t, double dist, int k, int d, double c1, double c2) {
  const double base = c1 / std::pow(std::sqrt(t) + 1.0, double(k) * d);
  if (t <= 1.0) return base;
  const double lt = std::log(t);
  const double u = dist * lt / (c2 * c2 * t);
  return base * std::exp(-c2 * t / (2 * lt * lt) * phi_function(u));
}

double tv_gradient_sum(const KernelWorkspace& ws, const Config& x, double t) {
  const StateIndex& idx = ws.states(x.k());
  const Config xs = shift_e11(x);
  if (idx.index(x) < 0 || idx.index(xs) < 0)
    throw std::invalid_argument("tv_gradient_sum: x or x+e11 not in S^k");
  const KernelRow ra = ws.row(x, t);
  const KernelRow rb = ws.row(xs, t);
  return (ra.p - rb.p).cwiseAbs().sum();
}

double rw_gradient_sum(double t, double tol) {
  if (t < 0) throw std::invalid_argument("rw_gradient_sum: negative time");
  if (t == 0) return 2.0;
  const Index r = srw_window(t, tol / 4) + 2;
  const Eigen::VectorXd row = srw_row_1d(t, r + 1);
  double sum = 0;
  for (Index m = -r - 1; m <= r; ++m) {
    const double a = std::abs(m) <= r + 1 ? row[std::abs(m)] : 0.0;
    const double b = std::abs(m + 1) <= r + 1 ? row[std::abs(m + 1)] : 0.0;
    sum += std::abs(a - b);
  }
  return sum;
}

namespace {

// per-walker vectors A_i[site] = p^rw_s(site, y_i), shared axis rows
std::vector<Eigen::VectorXd> walker_site_vectors(const StateIndex& idx, const Config& y, double s) {
  const Geometry& g = idx.geometry();
  const Index nsites = idx.site_count();
  std::vector<Eigen::VectorXd> out;
  if (g.is_torus()) {
    const Eigen::VectorXd axis = torus_axis_row(s, g.side);
    for (int i = 0; i < y.k(); ++i) {
      Eigen::VectorXd v(nsites);
      for (Index id = 0; id < nsites; ++id) {
        const Pt p = idx.site(id);
        double val = 1;
        for (int a = 0; a < g.dim; ++a)
          val *= axis[mod_floor(p[a] - y.pos[std::size_t(i)][a], g.side)];
        v[id] = val;
      }
      out.push_back(std::move(v));
    }
  } else {
    Index radius = 0;
    for (Index id = 0; id < nsites; ++id) {
      const Pt p = idx.site(id);
      for (int i = 0; i < y.k(); ++i)
        for (int a = 0; a < g.dim; ++a)
          radius = std::max(radius, std::abs(p[a] - y.pos[std::size_t(i)][a]));
    }
    const Eigen::VectorXd row = srw_row_1d(s, radius);
    for (int i = 0; i < y.k(); ++i) {
      Eigen::VectorXd v(nsites);
      for (Index id = 0; id < nsites; ++id) {
        const Pt p = idx.site(id);
        double val = 1;
        for (int a = 0; a < g.dim; ++a)
          val *= row[std::abs(p[a] - y.pos[std::size_t(i)][a])];
        v[id] = val;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

ComparisonResult comparison_identity_check(const KernelWorkspace& ws, const Config& x,
                                           const Config& y, double t, double quad_tol) {
  const int k = x.k();
  const StateIndex& idx = ws.states(k);
  const Geometry& g = ws.geometry();
  const std::int64_t iy = idx.index(y);
  if (idx.index(x) < 0 || iy < 0)
    throw std::invalid_argument("comparison_identity_check: states not enumerated");

  ComparisonResult res;
  res.lhs = product_kernel_rw(x, y, t, g) - ws.row(x, t).p[iy];
  if (t == 0) return res;

  auto integrand = [&](double s) {
    const KernelRow left = ws.row(x, t - s);
    const auto A = walker_site_vectors(idx, y, s);
    double total = 0;
    for (std::int64_t w = 0; w < idx.size(); ++w) {
      const double weight = left.p[w];
      if (weight == 0) continue;
      const std::int32_t* sites = idx.state_sites(w);
      double acc = 0;
      for (int i = 0; i < k; ++i) {
        const Pt pi = idx.site(sites[i]);
        for (int j = i + 1; j < k; ++j) {
          const Pt pj = idx.site(sites[j]);
          if (!are_neighbors(g, pi, pj)) continue;
          double rest = 1;
          for (int l = 0; l < k; ++l)
            if (l != i && l != j) rest *= A[std::size_t(l)][sites[l]];
          const double aii = A[std::size_t(i)][sites[i]], aij = A[std::size_t(i)][sites[j]];
          const double aji = A[std::size_t(j)][sites[i]], ajj = A[std::size_t(j)][sites[j]];
          const double base = aii * ajj;
          // delta^{i,j}, delta^{j,i}, minus the swap
          acc += rest * ((aii * aji - base) + (aij * ajj - base) - (aij * aji - base));
        }
      }
      total += weight * acc;
    }
    return total;
  };

  const QuadratureResult q = integrate_doubling_simpson(integrand, 0.0, t, quad_tol);
  if (!q.converged) throw QuadratureError(q);
  res.rhs = q.value;
  res.quad_error = q.error;
  res.doublings = q.doublings;
  res.residual = std::abs(res.lhs - res.rhs);
  return res;
}

double kernel_difference_sum(const KernelWorkspace& ws, const Config& x, double t) {
  const StateIndex& idx = ws.states(x.k());
  if (idx.index(x) < 0) throw std::invalid_argument("kernel_difference_sum: x not in S^k");
  const KernelRow rl = ws.row(x, t);
  const auto A = walker_site_vectors(idx, x, t);  // walk kernels are symmetric
  double sum = 0;
  for (std::int64_t yi = 0; yi < idx.size(); ++yi) {
    const std::int32_t* sites = idx.state_sites(yi);
    double rw = 1;
    for (int i = 0; i < x.k(); ++i) rw *= A[std::size_t(i)][sites[i]];
    sum += std::abs(rw - rl.p[yi]);
  }
  return sum;
}

double semigroup_composition_bound(const KernelWorkspace& ws, const Config& x, double t) {
  const StateIndex& idx = ws.states(x.k());
  const Config xs = shift_e11(x);
  if (idx.index(x) < 0 || idx.index(xs) < 0)
    throw std::invalid_argument("semigroup_composition_bound: x or x+e11 not in S^k");

  const double tv = tv_gradient_sum(ws, x, t);
  const KernelRow a2 = ws.row(x, 2 * t);
  const KernelRow b2 = ws.row(xs, 2 * t);

  Eigen::VectorXd colmax = Eigen::VectorXd::Zero(idx.size());
  for (std::int64_t w = 0; w < idx.size(); ++w)
    colmax = colmax.cwiseMax(ws.row(idx.config(w), t).p);

  double violation = -std::numeric_limits<double>::infinity();
  for (std::int64_t y = 0; y < idx.size(); ++y)
    violation = std::max(violation, std::abs(a2.p[y] - b2.p[y]) - tv * colmax[y]);
  return violation;
}

}  // namespace exlab
