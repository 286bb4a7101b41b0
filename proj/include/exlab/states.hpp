#pragma once

#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "exlab/geometry.hpp"
#include "exlab/rng.hpp"

namespace exlab {

using SpMat = Eigen::SparseMatrix<double>;

/// Raised when an enumeration would exceed the configured state budget; the
/// message names the required size.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(std::int64_t required, std::int64_t budget)
      : std::runtime_error("state space needs " + std::to_string(required) +
                           " states, budget is " + std::to_string(budget)),
        required_(required) {}
  std::int64_t required() const { return required_; }

 private:
  std::int64_t required_;
};

/// Axis-aligned box of Z^d, both bounds inclusive.
struct Box {
  std::array<Index, 3> lo{0, 0, 0};
  std::array<Index, 3> hi{0, 0, 0};

  static Box centered(int dim, Index radius) {
    Box b;
    for (int a = 0; a < dim; ++a) {
      b.lo[a] = -radius;
      b.hi[a] = radius;
    }
    return b;
  }
  static Box hull(int dim, const std::vector<Config>& configs, Index margin);

  Index extent(int a) const { return hi[a] - lo[a] + 1; }
  bool contains(int dim, const Pt& p) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
  }
};

/// Lexicographic enumeration of ordered k-tuples of pairwise-distinct sites,
/// either on a torus or on a finite window of Z^d. Index 0 is the smallest
/// tuple of site ids.
class StateIndex {
 public:
  static constexpr std::int64_t kDefaultBudget = 2'000'000;

  static StateIndex torus(int k, const Geometry& g, std::int64_t budget = kDefaultBudget);
  static StateIndex windowed(int k, const Geometry& g, const Box& window,
                             std::int64_t budget = kDefaultBudget);

  std::int64_t size() const { return std::int64_t(states_.size()) / k_; }
  int k() const { return k_; }
  const Geometry& geometry() const { return g_; }
  bool is_windowed() const { return !g_.is_torus(); }
  const Box& window() const { return window_; }
  Index site_count() const { return nsites_; }

  Config config(std::int64_t i) const;
  /// Raw site ids of state i, k entries.
  const std::int32_t* state_sites(std::int64_t i) const {
    return states_.data() + std::size_t(i) * std::size_t(k_);
  }
  /// -1 when the configuration is not enumerated (collision, outside window).
  std::int64_t index(const Config& c) const;

  Pt site(Index id) const;
  Index site_id(const Pt& p) const;  // -1 outside the window
  /// Neighbouring site id along axis/dir, or -1 when the move leaves the
  /// window (suppressed bond).
  Index neighbor(Index id, int axis, int dir) const;

 private:
  StateIndex() = default;
  void enumerate(std::int64_t budget);
  std::uint64_t pack(const std::int32_t* sites) const;

  int k_ = 1;
  Geometry g_;
  Box window_;
  Index nsites_ = 0;
  std::vector<std::int32_t> states_;  // size() * k site ids
  std::unordered_map<std::uint64_t, std::int32_t> lookup_;
};

/// Rate matrix of the labelled exclusion process on the enumerated space:
/// one unit-rate transition per bond touching at least one particle, diagonal
/// balancing the row. Symmetric, off-diagonals in {0,1}.
SpMat build_generator(const StateIndex& idx);

/// Uniform bound on every exit rate (each of k particles meets 2d bonds).
inline double uniformization_rate(const StateIndex& idx) {
  return 2.0 * idx.geometry().dim * idx.k();
}

struct KernelRow {
  std::int64_t base = -1;
  double t = 0;
  Eigen::VectorXd p;
  /// Certified mass unaccounted for: Poisson series tail, plus the window
  /// escape bound on Z^d. Zero tail means exact to series tolerance.
  double tail = 0;
};

/// Row of e^{tL} by uniformization: Poisson mixture of powers of
/// P = I + L/Lambda, truncated once the Poisson tail drops below series_tol.
KernelRow exclusion_kernel_exact(const Config& x, double t, const StateIndex& idx,
                                 const SpMat& gen, double series_tol = 1e-12);

/// All rows at once (small spaces only).
Eigen::MatrixXd exclusion_kernel_matrix(double t, const StateIndex& idx, const SpMat& gen,
                                        double series_tol = 1e-12);

struct McKernel {
  std::vector<Config> targets;
  std::vector<double> prob;
  std::vector<double> stderr_;
  std::int64_t samples = 0;
};

/// Empirical kernel from labelled-process replicas, with binomial standard
/// errors.
McKernel exclusion_kernel_mc(const Geometry& g, const Config& x, double t,
                             const std::vector<Config>& targets, std::int64_t samples,
                             RngStream stream);

/// Margin such that the probability of any of k particles drifting that far
/// within time t is below tol (Poisson event-count bound).
Index escape_margin(int k, int dim, double t, double tol = 1e-10);

/// Window escape probability bound for a base configuration inside a box.
double window_tail_bound(const StateIndex& idx, const Config& x, double t);

}  // namespace exlab
