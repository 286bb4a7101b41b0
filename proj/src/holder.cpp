#include "exlab/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace exlab {

double unit_torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b, int dim) {
  double s = 0;
  for (int ax = 0; ax < dim; ++ax) {
    double d = a[ax] - b[ax];
    d -= std::round(d);
    s += d * d;
  }
  return std::sqrt(s);
}

static void check_eta(double eta) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("holder: eta must lie in (0,1)");
}

double holder_norm(const TorusField& f, double eta) {
  check_eta(eta);
  const Index n = f.size();
  if (n == 0 || f.values.size() != n) throw std::invalid_argument("holder_norm: empty field");
  const Geometry g = f.lattice();
  const Index L = g.side;

  // integer coordinates and a min-image lookup keep the pair scan cheap
  std::vector<std::array<Index, 3>> coord(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const Pt p = site_point(g, i);
    coord[std::size_t(i)] = {p[0], p[1], p[2]};
  }
  std::vector<Index> image(static_cast<std::size_t>(L));
  for (Index r = 0; r < L; ++r) image[std::size_t(r)] = std::abs(min_image(r, L));
  const Index max_sq = 3 * (L / 2 + 1) * (L / 2 + 1);
  std::vector<double> invpow(static_cast<std::size_t>(max_sq) + 1, 0.0);
  for (Index s = 1; s <= max_sq; ++s)
    invpow[std::size_t(s)] = std::pow(std::sqrt(double(s)) / double(L), -eta);

  double sup = f.values.abs().maxCoeff();
  double semi = 0;
  for (Index i = 0; i < n; ++i) {
    const auto& ci = coord[std::size_t(i)];
    const double vi = f.values[i];
    for (Index j = i + 1; j < n; ++j) {
      const auto& cj = coord[std::size_t(j)];
      Index s = 0;
      for (int a = 0; a < f.dim; ++a) {
        const Index d = image[std::size_t(mod_floor(ci[std::size_t(a)] - cj[std::size_t(a)], L))];
        s += d * d;
      }
      semi = std::max(semi, std::abs(vi - f.values[j]) * invpow[std::size_t(s)]);
    }
  }
  return sup + semi;
}

// Offsets within Euclidean range (0, limit_steps) on a grid, positive in the
// lexicographic order so each unordered pair is visited once.
static std::vector<Pt> half_ball_offsets(int dim, Index limit_steps) {
  std::vector<Pt> out;
  const Index m = limit_steps - 1;
  auto push = [&](Pt o) {
    double s = 0;
    for (int a = 0; a < dim; ++a) s += double(o[a]) * double(o[a]);
    if (s > 0 && s < double(limit_steps) * double(limit_steps)) out.push_back(o);
  };
  if (dim == 1) {
    for (Index x = 1; x <= m; ++x) push(Pt{x});
  } else if (dim == 2) {
    for (Index y = -m; y <= m; ++y)
      for (Index x = -m; x <= m; ++x)
        if (y > 0 || (y == 0 && x > 0)) push(Pt{x, y});
  } else {
    for (Index z = -m; z <= m; ++z)
      for (Index y = -m; y <= m; ++y)
        for (Index x = -m; x <= m; ++x)
          if (z > 0 || (z == 0 && y > 0) || (z == 0 && y == 0 && x > 0)) push(Pt{x, y, z});
  }
  return out;
}

double holder_distance(const ScalarField& f, const TorusField& fN, double eta,
                       const HolderDistanceOptions& opt) {
  check_eta(eta);
  const Index n = fN.size();
  if (n == 0 || fN.values.size() != n) throw std::invalid_argument("holder_distance: empty field");

  // term 1: sup over grid of |f - fN|
  double t1 = 0;
  std::vector<double> fg(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    fg[std::size_t(i)] = f(fN.node(i));
    t1 = std::max(t1, std::abs(fg[std::size_t(i)] - fN.values[i]));
  }

  // term 2: sup over grid pairs of the increment mismatch
  double t2 = 0;
  for (Index i = 0; i < n; ++i) {
    const auto xi = fN.node(i);
    for (Index j = i + 1; j < n; ++j) {
      const double r = unit_torus_distance(xi, fN.node(j), fN.dim);
      const double num = std::abs((fg[std::size_t(i)] - fg[std::size_t(j)]) -
                                  (fN.values[i] - fN.values[j]));
      t2 = std::max(t2, num / std::pow(r, eta));
    }
  }

  // term 3: small-scale modulus of f on the refinement grid; pairs closer
  // than the coarse spacing 2^{-N}.
  const int lev = fN.level + opt.refine;
  Geometry fine = Geometry::torus(fN.dim, Index(1) << lev);
  const double h = 1.0 / double(fine.side);
  const Index window = Index(1) << opt.refine;  // |x-y| < 2^{-N}  <=>  steps < 2^refine
  const Index m = fine.volume();

  std::vector<double> fv(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Pt p = site_point(fine, i);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < fN.dim; ++a) x[a] = double(p[a]) * h;
    fv[std::size_t(i)] = f(x);
  }
  const auto offsets = half_ball_offsets(fN.dim, window);
  double t3 = 0;
  for (Index i = 0; i < m; ++i) {
    Pt p = site_point(fine, i);
    for (const Pt& o : offsets) {
      Pt q = p;
      double r2 = 0;
      for (int a = 0; a < fN.dim; ++a) {
        q[a] = mod_floor(p[a] + o[a], fine.side);
        r2 += double(o[a]) * double(o[a]);
      }
      const double r = std::sqrt(r2) * h;
      const Index j = site_index(fine, q);
      t3 = std::max(t3, std::abs(fv[std::size_t(i)] - fv[std::size_t(j)]) / std::pow(r, eta));
    }
  }
  return t1 + t2 + t3;
}

double spacetime_holder_distance(const SpaceTimeField& f, const SpaceTimeField& fN,
                                 const TorusField& grid, double eta, double T,
                                 const SpaceTimeHolderOptions& opt) {
  check_eta(eta);
  if (T <= 0) throw std::invalid_argument("spacetime_holder_distance: T must be positive");
  const Index n = grid.size();
  const int nt = opt.time_steps;
  const double dt = T / double(nt);
  const double cutoff = grid.spacing();  // 2^{-N}

  struct Node {
    double t;
    std::array<double, 3> x;
    double vf, vfN;
  };
  std::vector<Node> nodes;
  nodes.reserve(std::size_t((nt + 1) * n));
  for (int it = 0; it <= nt; ++it) {
    const double t = double(it) * dt;
    for (Index i = 0; i < n; ++i) {
      const auto x = grid.node(i);
      nodes.push_back({t, x, f(t, x), fN(t, x)});
    }
  }

  // term 1: sup |f - fN|; term 3: increment mismatch at parabolic distance
  // >= 2^{-N}.
  double t1 = 0, t3 = 0;
  for (const Node& a : nodes) t1 = std::max(t1, std::abs(a.vf - a.vfN));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    SpaceTimePoint pi{nodes[i].t, nodes[i].x, grid.dim};
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      SpaceTimePoint pj{nodes[j].t, nodes[j].x, grid.dim};
      const double r = parabolic_distance_torus(pi, pj);
      if (r < cutoff) continue;
      const double num =
          std::abs((nodes[i].vf - nodes[j].vf) - (nodes[i].vfN - nodes[j].vfN));
      t3 = std::max(t3, num / std::pow(r, eta));
    }
  }

  // term 2: small-scale modulus of f below parabolic distance 2^{-N},
  // scanned on refined grids (time step ~ 4^{-N}, space step 2^{-(N+refine)}).
  const double dt_fine = cutoff * cutoff / double(opt.time_refine);
  const Index nt_fine = Index(std::ceil(T / dt_fine));
  Geometry fine = Geometry::torus(grid.dim, grid.side() << opt.refine);
  const double h = 1.0 / double(fine.side);
  const Index mspace = fine.volume();
  const Index wspace = Index(1) << opt.refine;  // spatial steps with |dx| < 2^{-N}
  const auto offsets = half_ball_offsets(grid.dim, wspace);
  const Index wtime = Index(opt.time_refine);  // |dt| < 4^{-N}

  auto at = [&](Index it, Index is) {
    Pt p = site_point(fine, is);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) x[a] = double(p[a]) * h;
    return f(std::min(double(it) * dt_fine, T), x);
  };

  double t2 = 0;
  std::vector<double> cur(static_cast<std::size_t>(mspace)), fut(static_cast<std::size_t>(mspace));
  for (Index is = 0; is < mspace; ++is) cur[std::size_t(is)] = at(0, is);
  for (Index it = 0; it <= nt_fine; ++it) {
    const double t = std::min(double(it) * dt_fine, T);
    // equal-time pairs
    for (Index is = 0; is < mspace; ++is) {
      Pt p = site_point(fine, is);
      for (const Pt& o : offsets) {
        Pt q = p;
        double r2 = 0;
        for (int a = 0; a < grid.dim; ++a) {
          q[a] = mod_floor(p[a] + o[a], fine.side);
          r2 += double(o[a]) * double(o[a]);
        }
        const double r = std::sqrt(r2) * h;
        if (r >= cutoff) continue;
        const Index j = site_index(fine, q);
        t2 = std::max(t2, std::abs(cur[std::size_t(is)] - cur[std::size_t(j)]) /
                              std::pow(r, eta));
      }
    }
    // pairs separated in time (all spatial offsets within the parabolic ball)
    for (Index jt = 1; jt < wtime && it + jt <= nt_fine; ++jt) {
      const double s = std::min(double(it + jt) * dt_fine, T);
      const double dtau = s - t;
      for (Index is = 0; is < mspace; ++is) fut[std::size_t(is)] = at(it + jt, is);
      for (Index is = 0; is < mspace; ++is) {
        Pt p = site_point(fine, is);
        const std::array<double, 3> xp = [&] {
          std::array<double, 3> x{0, 0, 0};
          for (int a = 0; a < grid.dim; ++a) x[a] = double(p[a]) * h;
          return x;
        }();
        // same site
        {
          const double r = std::sqrt(dtau);
          if (r > 0 && r < cutoff)
            t2 = std::max(t2, std::abs(cur[std::size_t(is)] - fut[std::size_t(is)]) /
                                  std::pow(r, eta));
        }
        for (const Pt& o : offsets) {
          Pt q = p;
          for (int a = 0; a < grid.dim; ++a) q[a] = mod_floor(p[a] + o[a], fine.side);
          const Index j = site_index(fine, q);
          std::array<double, 3> xq{0, 0, 0};
          for (int a = 0; a < grid.dim; ++a) xq[a] = double(site_point(fine, j)[a]) * h;
          const double r =
              parabolic_distance_torus({t, xp, grid.dim}, {s, xq, grid.dim});
          if (r >= cutoff) continue;
          t2 = std::max(t2, std::abs(cur[std::size_t(is)] - fut[std::size_t(j)]) /
                                std::pow(r, eta));
          t2 = std::max(t2, std::abs(fut[std::size_t(is)] - cur[std::size_t(j)]) /
                                std::pow(r, eta));
        }
      }
    }
    if (it < nt_fine) {
      for (Index is = 0; is < mspace; ++is) cur[std::size_t(is)] = at(it + 1, is);
    }
  }
  return t1 + t2 + t3;
}

}  // namespace exlab
