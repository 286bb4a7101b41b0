#include "exlab/exclusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace exlab {

OccupationField sample_bernoulli_field(const Geometry& g, double rho, Rng& rng) {
  if (!(rho > 0 && rho < 1)) throw std::invalid_argument("sample_bernoulli_field: rho in (0,1)");
  if (!g.is_torus()) throw std::invalid_argument("sample_bernoulli_field: torus only");
  OccupationField eta{g, std::vector<std::uint8_t>(std::size_t(g.volume()))};
  for (auto& b : eta.bits) b = rng.bernoulli(rho) ? 1 : 0;
  return eta;
}

LabelledState swap_sigma(const Pt& x, const Pt& y, const LabelledState& s) {
  if (!are_neighbors(s.g, x, y)) throw std::invalid_argument("swap_sigma: sites not neighbours");
  LabelledState out = s;
  const Pt wx = wrap(s.g, x), wy = wrap(s.g, y);
  for (auto& p : out.config.pos) {
    const Pt w = wrap(s.g, p);
    if (w == wx)
      p = wy;
    else if (w == wy)
      p = wx;
  }
  return out;
}

Config sigma_labels(const Config& w, int i, int j) {
  Config out = w;
  std::swap(out.pos[std::size_t(i)], out.pos[std::size_t(j)]);
  return out;
}

Config map_delta(int i, int j, const Config& w) {
  if (i == j) throw std::invalid_argument("map_delta: labels must differ");
  Config out = w;
  out.pos[std::size_t(j)] = out.pos[std::size_t(i)];
  return out;
}

static void record(EventLog* log, double t, const Pt& site, int axis) {
  if (log && log->events.size() < log->max_events) log->events.push_back({t, site, axis});
}

void simulate_unlabelled(OccupationField& eta, double T, Rng& rng, EventLog* log) {
  if (T < 0) throw std::invalid_argument("simulate_unlabelled: negative horizon");
  const Geometry& g = eta.g;
  if (!g.is_torus()) throw std::invalid_argument("simulate_unlabelled: torus only");
  const Index nsites = g.volume();
  const Index nbonds = Index(g.dim) * nsites;  // bond id = site * dim + axis
  double t = 0;
  for (;;) {
    t += rng.exponential(double(nbonds));
    if (t > T) break;
    const Index bond = Index(rng.uniform_index(std::uint64_t(nbonds)));
    const Index s = bond / g.dim;
    const int axis = int(bond % g.dim);
    Pt p = site_point(g, s);
    Pt q = p;
    q[axis] = mod_floor(q[axis] + 1, g.side);
    const auto is = std::size_t(s), iq = std::size_t(site_index(g, q));
    std::swap(eta.bits[is], eta.bits[iq]);
    record(log, t, p, axis);
  }
}

namespace {

// canonical bond key: (axis, representative site coords)
struct BondKey {
  std::array<Index, 4> v;
  friend bool operator<(const BondKey& a, const BondKey& b) { return a.v < b.v; }
  friend bool operator==(const BondKey& a, const BondKey& b) { return a.v == b.v; }
};

BondKey bond_key(const Geometry& g, Pt rep, int axis) {
  rep = wrap(g, rep);
  return BondKey{{Index(axis), rep[0], rep[1], rep[2]}};
}

}  // namespace

void simulate_labelled(LabelledState& s, double T, Rng& rng, EventLog* log) {
  if (T < 0) throw std::invalid_argument("simulate_labelled: negative horizon");
  const Geometry& g = s.g;
  if (!pairwise_distinct(g, s.config)) throw std::invalid_argument("simulate_labelled: collision in initial state");
  const int k = s.config.k();
  std::vector<BondKey> active;
  active.reserve(std::size_t(2 * g.dim * k));
  double t = 0;
  for (;;) {
    active.clear();
    for (int i = 0; i < k; ++i) {
      const Pt p = s.config.pos[std::size_t(i)];
      for (int a = 0; a < g.dim; ++a) {
        active.push_back(bond_key(g, p, a));  // {p, p+e_a}
        Pt m = p;
        m[a] -= 1;
        active.push_back(bond_key(g, m, a));  // {p-e_a, p}
      }
    }
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());

    t += rng.exponential(double(active.size()));
    if (t > T) break;
    const BondKey bk = active[rng.uniform_index(active.size())];
    const int axis = int(bk.v[0]);
    Pt x{bk.v[1], bk.v[2], bk.v[3]};
    Pt y = x;
    y[axis] += 1;
    s = swap_sigma(x, y, s);
    record(log, t, x, axis);
  }
}

double occupancy_covariance_oracle(const Geometry& g, const Pt& x, double t, double rho,
                                   std::int64_t samples, Rng& rng) {
  if (!(rho > 0 && rho < 1)) throw std::invalid_argument("occupancy_covariance_oracle: rho in (0,1)");
  if (t < 0) throw std::invalid_argument("occupancy_covariance_oracle: negative time");
  const Pt target = wrap(g, x);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Pt w{};  // walker from the origin, rate 1 per incident bond
    double s = 0;
    const double rate = 2.0 * g.dim;
    for (;;) {
      s += rng.exponential(rate);
      if (s > t) break;
      const auto dir = rng.uniform_index(std::uint64_t(2 * g.dim));
      const int axis = int(dir / 2);
      w[axis] += (dir % 2 == 0) ? 1 : -1;
      w = wrap(g, w);
    }
    if (w == target) ++hits;
  }
  return rho * (1 - rho) * double(hits) / double(samples);
}

SsepTrajectory::SsepTrajectory(OccupationField eta0, RngStream stream)
    : eta_(std::move(eta0)), rng_(stream) {
  if (!eta_.g.is_torus()) throw std::invalid_argument("SsepTrajectory: torus only");
  total_rate_ = double(Index(eta_.g.dim) * eta_.g.volume());
  next_event_ = rng_.exponential(total_rate_);
}

void SsepTrajectory::advance_to(double t) {
  if (t < time_) throw std::invalid_argument("SsepTrajectory: cannot rewind");
  const Geometry& g = eta_.g;
  while (next_event_ <= t) {
    const Index nbonds = Index(g.dim) * g.volume();
    const Index bond = Index(rng_.uniform_index(std::uint64_t(nbonds)));
    const Index s = bond / g.dim;
    const int axis = int(bond % g.dim);
    Pt p = site_point(g, s);
    Pt q = p;
    q[axis] = mod_floor(q[axis] + 1, g.side);
    std::swap(eta_.bits[std::size_t(s)], eta_.bits[std::size_t(site_index(g, q))]);
    next_event_ += rng_.exponential(total_rate_);
  }
  time_ = t;
}

}  // namespace exlab
