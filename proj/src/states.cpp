#include "exlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exlab/exclusion.hpp"
#include "exlab/srw.hpp"

namespace exlab {

Box Box::hull(int dim, const std::vector<Config>& configs, Index margin) {
  Box b;
  bool first = true;
  for (const auto& c : configs)
    for (const auto& p : c.pos) {
      for (int a = 0; a < dim; ++a) {
        if (first) {
          b.lo[a] = b.hi[a] = p[a];
        } else {
          b.lo[a] = std::min(b.lo[a], p[a]);
          b.hi[a] = std::max(b.hi[a], p[a]);
        }
      }
      first = false;
    }
  if (first) throw std::invalid_argument("Box::hull: no points");
  for (int a = 0; a < dim; ++a) {
    b.lo[a] -= margin;
    b.hi[a] += margin;
  }
  return b;
}

StateIndex StateIndex::torus(int k, const Geometry& g, std::int64_t budget) {
  if (!g.is_torus()) throw std::invalid_argument("StateIndex::torus: geometry is not a torus");
  if (k < 1 || k > 4) throw std::invalid_argument("StateIndex: k must be 1..4");
  StateIndex idx;
  idx.k_ = k;
  idx.g_ = g;
  idx.nsites_ = g.volume();
  idx.enumerate(budget);
  return idx;
}

StateIndex StateIndex::windowed(int k, const Geometry& g, const Box& window, std::int64_t budget) {
  if (g.is_torus()) throw std::invalid_argument("StateIndex::windowed: geometry must be Z^d");
  if (k < 1 || k > 4) throw std::invalid_argument("StateIndex: k must be 1..4");
  StateIndex idx;
  idx.k_ = k;
  idx.g_ = g;
  idx.window_ = window;
  Index n = 1;
  for (int a = 0; a < g.dim; ++a) n *= window.extent(a);
  idx.nsites_ = n;
  idx.enumerate(budget);
  return idx;
}

void StateIndex::enumerate(std::int64_t budget) {
  std::int64_t count = 1;
  for (int i = 0; i < k_; ++i) count *= (nsites_ - i);
  if (count > budget) throw CapacityError(count, budget);
  states_.reserve(std::size_t(count) * std::size_t(k_));
  lookup_.reserve(std::size_t(count) * 2);

  std::vector<std::int32_t> tuple(static_cast<std::size_t>(k_));
  std::vector<bool> used(std::size_t(nsites_), false);
  // depth-first lexicographic enumeration
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == k_) {
      const auto id = std::int32_t(states_.size() / std::size_t(k_));
      states_.insert(states_.end(), tuple.begin(), tuple.end());
      lookup_.emplace(pack(tuple.data()), id);
      return;
    }
    for (Index s = 0; s < nsites_; ++s) {
      if (used[std::size_t(s)]) continue;
      used[std::size_t(s)] = true;
      tuple[std::size_t(depth)] = std::int32_t(s);
      self(self, depth + 1);
      used[std::size_t(s)] = false;
    }
  };
  rec(rec, 0);
}

std::uint64_t StateIndex::pack(const std::int32_t* sites) const {
  std::uint64_t key = 0;
  for (int i = 0; i < k_; ++i) key = key * std::uint64_t(nsites_) + std::uint64_t(sites[i]);
  return key;
}

Pt StateIndex::site(Index id) const {
  if (g_.is_torus()) return site_point(g_, id);
  Pt p;
  for (int a = 0; a < g_.dim; ++a) {
    p[a] = window_.lo[a] + id % window_.extent(a);
    id /= window_.extent(a);
  }
  return p;
}

Index StateIndex::site_id(const Pt& p) const {
  if (g_.is_torus()) return site_index(g_, p);
  if (!window_.contains(g_.dim, p)) return -1;
  Index id = 0;
  for (int a = g_.dim - 1; a >= 0; --a) id = id * window_.extent(a) + (p[a] - window_.lo[a]);
  return id;
}

Index StateIndex::neighbor(Index id, int axis, int dir) const {
  Pt p = site(id);
  p[axis] += dir;
  if (g_.is_torus()) return site_index(g_, p);
  return site_id(p);
}

Config StateIndex::config(std::int64_t i) const {
  Config c;
  c.pos.reserve(std::size_t(k_));
  for (int j = 0; j < k_; ++j) c.pos.push_back(site(states_[std::size_t(i) * k_ + j]));
  return c;
}

std::int64_t StateIndex::index(const Config& c) const {
  if (c.k() != k_) return -1;
  std::array<std::int32_t, 4> sites{};
  for (int j = 0; j < k_; ++j) {
    const Index id = site_id(g_.is_torus() ? wrap(g_, c.pos[std::size_t(j)]) : c.pos[std::size_t(j)]);
    if (id < 0) return -1;
    sites[std::size_t(j)] = std::int32_t(id);
  }
  for (int a = 0; a < k_; ++a)
    for (int b = a + 1; b < k_; ++b)
      if (sites[std::size_t(a)] == sites[std::size_t(b)]) return -1;
  const auto it = lookup_.find(pack(sites.data()));
  return it == lookup_.end() ? -1 : it->second;
}

SpMat build_generator(const StateIndex& idx) {
  const int k = idx.k();
  const int dim = idx.geometry().dim;
  const std::int64_t n = idx.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(n) * std::size_t(2 * dim * k + 1));

  std::array<std::int32_t, 4> sites{};
  std::array<std::int32_t, 4> moved{};
  std::vector<std::pair<Index, int>> bonds;  // (representative site id, axis)
  for (std::int64_t s = 0; s < n; ++s) {
    const Config c = idx.config(s);
    for (int j = 0; j < k; ++j) sites[std::size_t(j)] = std::int32_t(idx.site_id(c.pos[std::size_t(j)]));

    // bonds touching at least one particle, deduplicated
    bonds.clear();
    for (int j = 0; j < k; ++j) {
      for (int a = 0; a < dim; ++a) {
        bonds.emplace_back(Index(sites[std::size_t(j)]), a);
        const Index back = idx.neighbor(sites[std::size_t(j)], a, -1);
        if (back >= 0) bonds.emplace_back(back, a);
      }
    }
    std::sort(bonds.begin(), bonds.end());
    bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());

    double exit = 0;
    for (const auto& [rep, axis] : bonds) {
      const Index other = idx.neighbor(rep, axis, +1);
      if (other < 0) continue;  // bond sticks out of the window: suppressed
      int at_rep = -1, at_other = -1;
      for (int j = 0; j < k; ++j) {
        if (sites[std::size_t(j)] == std::int32_t(rep)) at_rep = j;
        if (sites[std::size_t(j)] == std::int32_t(other)) at_other = j;
      }
      if (at_rep < 0 && at_other < 0) continue;
      moved = sites;
      if (at_rep >= 0) moved[std::size_t(at_rep)] = std::int32_t(other);
      if (at_other >= 0) moved[std::size_t(at_other)] = std::int32_t(rep);
      std::int64_t target = -1;
      {
        Config mc;
        mc.pos.reserve(std::size_t(k));
        for (int j = 0; j < k; ++j) mc.pos.push_back(idx.site(moved[std::size_t(j)]));
        target = idx.index(mc);
      }
      if (target < 0) throw std::logic_error("build_generator: swap left the state space");
      trip.emplace_back(int(target), int(s), 1.0);
      exit += 1.0;
    }
    trip.emplace_back(int(s), int(s), -exit);
  }
  SpMat gen(static_cast<int>(n), static_cast<int>(n));
  gen.setFromTriplets(trip.begin(), trip.end());
  gen.makeCompressed();
  return gen;
}

namespace {

// Poisson(lambda) pmf cut at the point where the cumulative tail drops below
// tol; weights returned unnormalized.
std::vector<double> poisson_weights(double lambda, double tol) {
  if (lambda <= 0) return {1.0};
  std::vector<double> w;
  double cum = 0;
  for (Index n = 0;; ++n) {
    const double p = std::exp(n * std::log(lambda) - lambda - std::lgamma(double(n) + 1));
    w.push_back(p);
    cum += p;
    if (cum >= 1.0 - tol && double(n) > lambda) break;
    if (n > Index(10 * lambda) + 400) break;
  }
  return w;
}

}  // namespace

KernelRow exclusion_kernel_exact(const Config& x, double t, const StateIndex& idx,
                                 const SpMat& gen, double series_tol) {
  if (t < 0) throw std::invalid_argument("exclusion_kernel_exact: negative time");
  const std::int64_t base = idx.index(x);
  if (base < 0) throw std::invalid_argument("exclusion_kernel_exact: state not enumerated");
  const std::int64_t n = idx.size();
  const double lambda = uniformization_rate(idx);

  KernelRow row;
  row.base = base;
  row.t = t;
  row.p = Eigen::VectorXd::Zero(n);
  if (t == 0) {
    row.p[base] = 1.0;
    return row;
  }

  const auto w = poisson_weights(lambda * t, series_tol);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[base] = 1.0;
  double used = 0;
  for (std::size_t m = 0; m < w.size(); ++m) {
    if (m > 0) {
      // v <- (I + L/lambda) v, one uniformized step
      Eigen::VectorXd lv = gen * v;
      v += lv / lambda;
    }
    row.p += w[m] * v;
    used += w[m];
  }
  row.tail = std::max(0.0, 1.0 - used);
  if (idx.is_windowed()) row.tail += window_tail_bound(idx, x, t);
  return row;
}

Eigen::MatrixXd exclusion_kernel_matrix(double t, const StateIndex& idx, const SpMat& gen,
                                        double series_tol) {
  const std::int64_t n = idx.size();
  Eigen::MatrixXd out(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    out.col(i) = exclusion_kernel_exact(idx.config(i), t, idx, gen, series_tol).p;
  return out;
}

McKernel exclusion_kernel_mc(const Geometry& g, const Config& x, double t,
                             const std::vector<Config>& targets, std::int64_t samples,
                             RngStream stream) {
  if (samples <= 0) throw std::invalid_argument("exclusion_kernel_mc: need samples");
  if (t < 0) throw std::invalid_argument("exclusion_kernel_mc: negative time");
  std::vector<std::int64_t> hits(targets.size(), 0);
  Rng rng(stream);
  for (std::int64_t r = 0; r < samples; ++r) {
    LabelledState s{g, x};
    simulate_labelled(s, t, rng);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      bool match = true;
      for (int i = 0; i < x.k() && match; ++i)
        match = wrap(g, s.config.pos[std::size_t(i)]) == wrap(g, targets[j].pos[std::size_t(i)]);
      if (match) ++hits[j];
    }
  }
  McKernel out;
  out.targets = targets;
  out.samples = samples;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const double p = double(hits[j]) / double(samples);
    out.prob.push_back(p);
    out.stderr_.push_back(std::sqrt(std::max(p * (1 - p), 1.0 / double(samples)) / double(samples)));
  }
  return out;
}

Index escape_margin(int k, int dim, double t, double tol) {
  const double lambda = 2.0 * dim * k * t;
  Index m = Index(lambda) + 1;
  while (poisson_tail(lambda, m) >= tol) m += std::max<Index>(4, Index(std::sqrt(lambda)));
  while (m > 1 && poisson_tail(lambda, m - 1) < tol) --m;
  return m;
}

double window_tail_bound(const StateIndex& idx, const Config& x, double t) {
  Index margin = std::numeric_limits<Index>::max();
  for (const auto& p : x.pos)
    for (int a = 0; a < idx.geometry().dim; ++a)
      margin = std::min({margin, p[a] - idx.window().lo[a], idx.window().hi[a] - p[a]});
  const double lambda = 2.0 * idx.geometry().dim * idx.k() * t;
  return poisson_tail(lambda, margin);
}

}  // namespace exlab
