#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <vector>

#include "exlab/geometry.hpp"
#include "exlab/states.hpp"

namespace exlab {

/// Shared cache of enumerated state spaces and their generators, keyed by
/// particle number (one geometry per workspace).
class KernelWorkspace {
 public:
  explicit KernelWorkspace(const Geometry& g, std::int64_t budget = StateIndex::kDefaultBudget)
      : g_(g), budget_(budget) {}
  KernelWorkspace(const Geometry& g, const Box& window,
                  std::int64_t budget = StateIndex::kDefaultBudget)
      : g_(g), window_(window), windowed_(true), budget_(budget) {}

  const Geometry& geometry() const { return g_; }
  const StateIndex& states(int k) const;
  const SpMat& generator(int k) const;
  KernelRow row(const Config& x, double t, double series_tol = 1e-12) const;

 private:
  struct Entry {
    std::unique_ptr<StateIndex> idx;
    std::unique_ptr<SpMat> gen;
  };
  Geometry g_;
  Box window_;
  bool windowed_ = false;
  std::int64_t budget_;
  mutable std::map<int, Entry> cache_;
};

/// One probe of the two-system kernel gradient: labels i in system A and j in
/// system B, times (t1, t2), configurations over the disjoint union.
struct GradientProbe {
  Config xa, xb, ya, yb;
  int i = 0;  // label within A (0-based)
  int j = 0;  // label within B
  double t1 = 0, t2 = 0;
};

/// (p_{t1}(xa^{ij}, ya) - p_{t1}(xa, ya)) (p_{t2}(xb^{ij}, yb) - p_{t2}(xb, yb)),
/// zero unless the two marked particles are nearest neighbours; xa^{ij} moves
/// particle i onto x_j and xb^{ij} moves particle j onto x_i.
double gradient_pair(const GradientProbe& probe, const KernelWorkspace& ws);

struct ProbeSummary {
  double t = 0;
  int base = 0;           // index into the scanned base list
  std::int64_t argmax = -1;  // target state with the largest ratio
  double max_ratio = 0;
};

/// Result of scanning |quantity| * envelope^{-1} over a probe grid.
struct BoundReport {
  double theta = 0;
  int k = 0;
  Geometry geometry;
  double c_fit = 0;
  std::int64_t probes = 0;
  std::int64_t skipped = 0;  // bases whose shifted configuration collides
  std::vector<ProbeSummary> rows;
};

/// Scans |p_t(x,y) - p_t(x+e11,y)| (sqrt t + |x-y| + 1)^{kd+theta} over all
/// enumerated targets y, every t in the grid and every base x. Bases whose
/// shift leaves S^k are skipped and counted.
BoundReport grad_bound_scan(const KernelWorkspace& ws, int k, double theta,
                            const std::vector<double>& t_grid, const std::vector<Config>& bases);

/// Phi(u) = sup_w (u w - w^2 cosh w), evaluated by golden-section search on a
/// bracketed interval. Even in u, zero at zero.
double phi_function(double u);

/// Off-diagonal kernel envelope
///   C1 (sqrt t + 1)^{-kd} exp{ -C2 t / (2 log^2 t) * Phi(|x-y| log t / (C2^2 t)) }
/// for t > 1; for t <= 1 the exponential factor is dropped.
double offdiag_envelope(double t, double dist, int k, int d, double c1, double c2);

/// Total-variation gradient sum over the enumerated space:
///   sum_z |p_t(x, z) - p_t(x+e11, z)|.
double tv_gradient_sum(const KernelWorkspace& ws, const Config& x, double t);

/// Gradient sum of k independent walkers; by the product structure this
/// collapses to the single-axis sum sum_m |p_t(m) - p_t(m+1)| on Z, for every
/// k, d and base configuration.
double rw_gradient_sum(double t, double tol = 1e-12);

struct ComparisonResult {
  double lhs = 0;       // p^rw_t(x,y) - p^l_t(x,y)
  double rhs = 0;       // time integral of the collision/swap correction
  double residual = 0;  // |lhs - rhs|
  double quad_error = 0;
  int doublings = 0;
};

/// Two independent routes to p^rw_t - p^l_t: the kernel difference itself,
/// and the time integral of
///   sum_w p^l_{t-s}(x,w) [ sum_{i != j} 1{|w_i - w_j| = 1}
///       (p^rw_s(delta^{ij} w, y) - p^rw_s(w, y))
///     - sum_{i < j} 1{|w_i - w_j| = 1} (p^rw_s(sigma^{ij} w, y) - p^rw_s(w, y)) ].
ComparisonResult comparison_identity_check(const KernelWorkspace& ws, const Config& x,
                                           const Config& y, double t, double quad_tol = 1e-8);

/// sum_y |p^rw_t(x, y) - p^l_t(x, y)| over the enumerated distinct-position
/// tuples.
double kernel_difference_sum(const KernelWorkspace& ws, const Config& x, double t);

/// Max over y of |p_{2t}(x,y) - p_{2t}(x+e11,y)|
///   - (sum_z |p_t(x,z) - p_t(x+e11,z)|) sup_w p_t(w,y);
/// nonpositive up to roundoff, since it is an exact semigroup inequality.
double semigroup_composition_bound(const KernelWorkspace& ws, const Config& x, double t);

/// x with the first coordinate of the first particle shifted by +1.
Config shift_e11(const Config& x);

}  // namespace exlab
