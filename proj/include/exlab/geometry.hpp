#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace exlab {

using Index = std::int64_t;

/// Lattice site in up to three dimensions; coordinates beyond the active
/// dimension stay zero.
struct Pt {
  std::array<Index, 3> c{0, 0, 0};

  Pt() = default;
  Pt(Index x) { c[0] = x; }
  Pt(Index x, Index y) { c[0] = x, c[1] = y; }
  Pt(Index x, Index y, Index z) { c[0] = x, c[1] = y, c[2] = z; }

  Index& operator[](int a) { return c[a]; }
  Index operator[](int a) const { return c[a]; }
  friend bool operator==(const Pt& a, const Pt& b) { return a.c == b.c; }
  friend bool operator!=(const Pt& a, const Pt& b) { return a.c != b.c; }
  friend bool operator<(const Pt& a, const Pt& b) { return a.c < b.c; }
};

enum class Kind { Infinite, Torus };

/// Z^d or the discrete torus (Z/LZ)^d.
struct Geometry {
  int dim = 1;
  Kind kind = Kind::Torus;
  Index side = 0;  // torus side L, unused for Z^d

  static Geometry torus(int d, Index L) {
    if (d < 1 || d > 3) throw std::invalid_argument("Geometry: dim must be 1..3");
    if (L < 2) throw std::invalid_argument("Geometry: torus side must be >= 2");
    return Geometry{d, Kind::Torus, L};
  }
  static Geometry infinite(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("Geometry: dim must be 1..3");
    return Geometry{d, Kind::Infinite, 0};
  }

  bool is_torus() const { return kind == Kind::Torus; }

  Index volume() const {
    if (!is_torus()) throw std::logic_error("volume: infinite geometry");
    Index v = 1;
    for (int a = 0; a < dim; ++a) v *= side;
    return v;
  }

  friend bool operator==(const Geometry& a, const Geometry& b) {
    return a.dim == b.dim && a.kind == b.kind && a.side == b.side;
  }
};

inline Index mod_floor(Index a, Index m) {
  Index r = a % m;
  return r < 0 ? r + m : r;
}

/// Reduce one coordinate difference into the minimal representative (-L/2, L/2].
inline Index min_image(Index delta, Index L) {
  Index r = mod_floor(delta, L);
  if (2 * r > L) r -= L;
  return r;
}

inline Pt wrap(const Geometry& g, Pt p) {
  if (g.is_torus())
    for (int a = 0; a < g.dim; ++a) p[a] = mod_floor(p[a], g.side);
  return p;
}

/// Coordinate-wise minimal displacement from y to x.
inline Pt displacement(const Geometry& g, const Pt& x, const Pt& y) {
  Pt d;
  for (int a = 0; a < g.dim; ++a) {
    Index delta = x[a] - y[a];
    d[a] = g.is_torus() ? min_image(delta, g.side) : delta;
  }
  return d;
}

inline double norm(const Geometry& g, const Pt& d) {
  double s = 0;
  for (int a = 0; a < g.dim; ++a) s += double(d[a]) * double(d[a]);
  return std::sqrt(s);
}

/// Euclidean distance; on the torus each coordinate is first reduced into
/// (-L/2, L/2].
inline double torus_distance(const Pt& x, const Pt& y, const Geometry& g) {
  return norm(g, displacement(g, x, y));
}

inline bool are_neighbors(const Geometry& g, const Pt& x, const Pt& y) {
  Pt d = displacement(g, x, y);
  Index s = 0;
  for (int a = 0; a < g.dim; ++a) s += std::abs(d[a]);
  return s == 1;
}

/// Linear site index on the torus, axis 0 fastest.
inline Index site_index(const Geometry& g, const Pt& p) {
  Index id = 0;
  for (int a = g.dim - 1; a >= 0; --a) id = id * g.side + mod_floor(p[a], g.side);
  return id;
}

inline Pt site_point(const Geometry& g, Index id) {
  Pt p;
  for (int a = 0; a < g.dim; ++a) {
    p[a] = id % g.side;
    id /= g.side;
  }
  return p;
}

/// Space-time point; x lives in R^d (lattice sites cast to reals, or rescaled
/// torus coordinates).
struct SpaceTimePoint {
  double t = 0;
  std::array<double, 3> x{0, 0, 0};
  int dim = 1;
};

/// max{ sqrt|t|, |x| }, the parabolic space-time norm.
inline double parabolic_norm(const SpaceTimePoint& p) {
  double s = 0;
  for (int a = 0; a < p.dim; ++a) s += p.x[a] * p.x[a];
  return std::max(std::sqrt(std::abs(p.t)), std::sqrt(s));
}

/// Parabolic distance with the spatial part measured on the unit torus
/// (side 1, coordinate-wise minimal representative).
inline double parabolic_distance_torus(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  double s = 0;
  for (int ax = 0; ax < a.dim; ++ax) {
    double d = a.x[ax] - b.x[ax];
    d -= std::round(d);
    s += d * d;
  }
  return std::max(std::sqrt(std::abs(a.t - b.t)), std::sqrt(s));
}

/// k labelled particles; an element of S^k when positions are pairwise
/// distinct.
struct Config {
  std::vector<Pt> pos;

  Config() = default;
  explicit Config(std::vector<Pt> p) : pos(std::move(p)) {}
  int k() const { return int(pos.size()); }
};

inline bool pairwise_distinct(const Geometry& g, const Config& c) {
  for (int i = 0; i < c.k(); ++i)
    for (int j = i + 1; j < c.k(); ++j)
      if (wrap(g, c.pos[i]) == wrap(g, c.pos[j])) return false;
  return true;
}

/// Euclidean distance between k-particle configurations (all k*d coordinates,
/// torus-reduced per coordinate).
inline double config_distance(const Geometry& g, const Config& x, const Config& y) {
  if (x.k() != y.k()) throw std::invalid_argument("config_distance: arity mismatch");
  double s = 0;
  for (int i = 0; i < x.k(); ++i) {
    Pt d = displacement(g, x.pos[i], y.pos[i]);
    for (int a = 0; a < g.dim; ++a) s += double(d[a]) * double(d[a]);
  }
  return std::sqrt(s);
}

}  // namespace exlab
