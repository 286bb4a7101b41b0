#pragma once

#include <Eigen/Dense>

#include "exlab/geometry.hpp"

namespace exlab {

/// P(N >= m) for N ~ Poisson(lambda), summed directly from the upper tail.
double poisson_tail(double lambda, Index m);

/// Smallest radius R with P(Poisson(2t) >= R) below tol; a continuous-time
/// walk of total rate 2 cannot have moved further than its jump count.
Index srw_window(double t, double tol = 1e-14);

/// Scaled modified Bessel values e^{-z} I_n(z), n = 0..nmax, by normalized
/// downward recurrence. Accurate to ~1e-14 uniformly in n.
Eigen::VectorXd scaled_bessel_row(double z, Index nmax);

/// One-dimensional walk jumping to each neighbour at rate 1 (total rate 2):
/// p_t(x) = e^{-2t} I_|x|(2t).
double srw_kernel_1d(Index x, double t);

/// p_t(0..radius) for the same walk; symmetric in x.
Eigen::VectorXd srw_row_1d(double t, Index radius);

/// Transition probability of the one-axis walk on Z/LZ by image summation
/// over wraps (at least 6 images per side, then until increments fall below
/// 1e-14).
double torus_axis_kernel(Index dx, double t, Index L);

/// Same value through the eigenbasis of the cycle Laplacian; exact for all t.
double torus_axis_kernel_spectral(Index dx, double t, Index L);

/// p_t(x, y) of the d-dimensional walk with rate 1 per incident bond; product
/// of per-axis factors, torus axes wrapped by image summation.
double srw_kernel(const Pt& x, const Pt& y, double t, const Geometry& g);

/// All displacements at once on one torus axis: row[r] = p_t(0, r).
Eigen::VectorXd torus_axis_row(double t, Index L);

/// p_t(0, 0) on (Z/LZ)^d through the spectral form; stable for arbitrarily
/// large t, used by the renormalization integral.
double torus_return_probability(double t, Index L, int d);

/// k independent walkers: prod_i p_t(x_i, y_i). Collisions allowed.
double product_kernel_rw(const Config& x, const Config& y, double t, const Geometry& g);

}  // namespace exlab
