#pragma once

#include <Eigen/Dense>

#include <functional>

#include "exlab/geometry.hpp"

namespace exlab {

/// Real field on the rescaled torus T_N^d = 2^{-N} (Z/2^N Z)^d, stored at the
/// (2^N)^d grid points, axis 0 fastest.
struct TorusField {
  int level = 1;  // N
  int dim = 1;
  Eigen::ArrayXd values;

  Index side() const { return Index(1) << level; }
  Index size() const {
    Index v = 1;
    for (int a = 0; a < dim; ++a) v *= side();
    return v;
  }
  Geometry lattice() const { return Geometry::torus(dim, side()); }

  double spacing() const { return 1.0 / double(side()); }

  /// Rescaled coordinates of grid node id.
  std::array<double, 3> node(Index id) const {
    Pt p = site_point(lattice(), id);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = double(p[a]) * spacing();
    return x;
  }
};

using ScalarField = std::function<double(const std::array<double, 3>&)>;          // on [0,1)^d
using SpaceTimeField = std::function<double(double, const std::array<double, 3>&)>;

/// Distance between rescaled torus points (unit torus, Euclidean norm of the
/// coordinate-wise minimal representative).
double unit_torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b, int dim);

/// sup|f| + sup_{x != y} |f(x)-f(y)| / |x-y|^eta over the grid, distances in
/// the rescaled torus. Exhaustive pair scan, O(size^2).
double holder_norm(const TorusField& f, double eta);

struct HolderDistanceOptions {
  int refine = 4;  // small-scale sup uses 2^{N+refine} points per axis
};

/// Three-term comparison of a continuum function f with a grid field fN:
///   sup |f - fN|  +  sup |(f(x)-f(y)) - (fN(x)-fN(y))| / |x-y|^eta
///   +  sup_{0 < |x-y| < 2^{-N}} |f(x)-f(y)| / |x-y|^eta,
/// the last sup approximated on the refinement grid.
double holder_distance(const ScalarField& f, const TorusField& fN, double eta,
                       const HolderDistanceOptions& opt = {});

struct SpaceTimeHolderOptions {
  int time_steps = 256;    // coarse grid: time_steps+1 equispaced times in [0, T]
  int refine = 2;          // spatial refinement for the small-scale sup
  int time_refine = 8;     // small-scale time step = 4^{-N} / time_refine
};

/// Parabolic version: sup |f - fN| over the coarse space-time grid, plus the
/// small-scale modulus of f over parabolic balls of radius 2^{-N}, plus the
/// large-scale difference-of-increments term. Both fields are evaluated
/// through callables; fN is only ever queried at grid sites.
double spacetime_holder_distance(const SpaceTimeField& f, const SpaceTimeField& fN,
                                 const TorusField& grid, double eta, double T,
                                 const SpaceTimeHolderOptions& opt = {});

}  // namespace exlab
