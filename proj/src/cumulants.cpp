#include "exlab/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace exlab {

double fluctuation_field(const ScalarField& f, const OccupationField& eta, int level, double rho) {
  const Geometry& g = eta.g;
  const double h = 1.0 / double(Index(1) << level);
  if (g.side != (Index(1) << level)) throw std::invalid_argument("fluctuation_field: level/side mismatch");
  const double weight = std::pow(2.0, -0.5 * level * g.dim);  // 2^{-Nd} * 2^{Nd/2}
  double sum = 0;
  for (Index id = 0; id < g.volume(); ++id) {
    const Pt p = site_point(g, id);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) x[a] = double(p[a]) * h;
    sum += f(x) * (double(eta.bits[std::size_t(id)]) - rho);
  }
  return weight * sum;
}

VarianceCheck stationary_variance_check(const ScalarField& f, int level, int dim, double rho,
                                        std::int64_t samples, RngStream stream) {
  if (samples < 1000) throw std::invalid_argument("stationary_variance_check: need >= 1000 samples");
  const Geometry g = Geometry::torus(dim, Index(1) << level);
  Rng rng(stream);

  double m1 = 0, m2 = 0, m4 = 0;
  std::vector<double> ys(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) {
    const OccupationField eta = sample_bernoulli_field(g, rho, rng);
    ys[std::size_t(i)] = fluctuation_field(f, eta, level, rho);
    m1 += ys[std::size_t(i)];
  }
  m1 /= double(samples);
  for (double y : ys) {
    const double c = y - m1;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m2 /= double(samples);
  m4 /= double(samples);

  VarianceCheck out;
  out.samples = samples;
  out.empirical = m2 * double(samples) / double(samples - 1);

  const double h = 1.0 / double(g.side);
  double riemann = 0;
  for (Index id = 0; id < g.volume(); ++id) {
    const Pt p = site_point(g, id);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) x[a] = double(p[a]) * h;
    const double v = f(x);
    riemann += v * v;
  }
  riemann /= double(g.volume());
  out.limit = rho * (1 - rho) * riemann;
  if (riemann == 0) throw std::invalid_argument("stationary_variance_check: degenerate test function");

  const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / double(samples));
  out.z_score = se > 0 ? (out.empirical - out.limit) / se : 0.0;
  return out;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> current;
  auto rec = [&](auto&& self, int next) -> void {
    if (next == k) {
      out.push_back(current);
      return;
    }
    for (auto& block : current) {
      block.push_back(next);
      self(self, next + 1);
      block.pop_back();
    }
    current.push_back({next});
    self(self, next + 1);
    current.pop_back();
  };
  rec(rec, 0);
  return out;
}

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// kappa from per-subset moment means: moments[mask] = E[prod_{i in mask} v_i]
double kappa_from_subset_moments(const std::vector<double>& moments, int k,
                                 const std::vector<std::vector<std::vector<int>>>& partitions) {
  double kappa = 0;
  for (const auto& pi : partitions) {
    double prod = 1;
    for (const auto& block : pi) {
      int mask = 0;
      for (int i : block) mask |= 1 << i;
      prod *= moments[std::size_t(mask)];
    }
    const int m = int(pi.size());
    kappa += ((m - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(m - 1) * prod;
  }
  return kappa;
}

}  // namespace

void cumulant_from_samples(const Eigen::MatrixXd& samples, int batches, double* estimate,
                           double* stderr_out) {
  const std::int64_t n = samples.rows();
  const int k = int(samples.cols());
  if (k < 2 || k > 4) throw std::invalid_argument("cumulant_from_samples: order must be 2..4");
  if (batches < 2 || n < batches) throw std::invalid_argument("cumulant_from_samples: bad batching");

  const int nmask = 1 << k;
  const auto partitions = set_partitions(k);

  // per-batch subset-product means
  const std::int64_t per = n / batches;  // trailing remainder ignored, keeps batches equal
  std::vector<std::vector<double>> bm(std::size_t(batches), std::vector<double>(std::size_t(nmask), 0.0));
  for (int b = 0; b < batches; ++b) {
    auto& m = bm[std::size_t(b)];
    for (std::int64_t r = 0; r < per; ++r) {
      const auto row = samples.row(b * per + r);
      for (int mask = 1; mask < nmask; ++mask) {
        double prod = 1;
        for (int i = 0; i < k; ++i)
          if (mask & (1 << i)) prod *= row[i];
        m[std::size_t(mask)] += prod;
      }
    }
    for (int mask = 1; mask < nmask; ++mask) m[std::size_t(mask)] /= double(per);
    m[0] = 1.0;
  }

  std::vector<double> pooled(std::size_t(nmask), 0.0);
  for (const auto& m : bm)
    for (int mask = 0; mask < nmask; ++mask) pooled[std::size_t(mask)] += m[std::size_t(mask)];
  for (auto& v : pooled) v /= double(batches);

  *estimate = kappa_from_subset_moments(pooled, k, partitions);

  // jackknife over batches
  std::vector<double> loo(static_cast<std::size_t>(batches));
  double loo_mean = 0;
  for (int b = 0; b < batches; ++b) {
    std::vector<double> m(static_cast<std::size_t>(nmask));
    for (int mask = 0; mask < nmask; ++mask)
      m[std::size_t(mask)] =
          (pooled[std::size_t(mask)] * batches - bm[std::size_t(b)][std::size_t(mask)]) /
          double(batches - 1);
    loo[std::size_t(b)] = kappa_from_subset_moments(m, k, partitions);
    loo_mean += loo[std::size_t(b)];
  }
  loo_mean /= double(batches);
  double var = 0;
  for (double v : loo) var += (v - loo_mean) * (v - loo_mean);
  *stderr_out = std::sqrt(var * double(batches - 1) / double(batches));
}

CumulantQuery joint_cumulant(const std::vector<CumulantPoint>& points, int level, int dim,
                             double rho, RngStream stream, const CumulantOptions& opt) {
  const int k = int(points.size());
  if (k < 2 || k > 4) throw std::invalid_argument("joint_cumulant: order must be 2..4");
  if (opt.batches < 30) throw std::invalid_argument("joint_cumulant: need >= 30 batches");
  if (opt.samples < 4 * opt.batches) throw std::invalid_argument("joint_cumulant: too few samples");

  const Geometry g = Geometry::torus(dim, Index(1) << level);
  const double speed = std::pow(4.0, level);  // raw time = 2^{2N} t
  const double scale = opt.rescale ? std::pow(2.0, 0.5 * dim * level) : 1.0;

  // raw observation offsets and sites
  std::vector<double> offs(static_cast<std::size_t>(k));
  std::vector<std::size_t> sites(static_cast<std::size_t>(k));
  double tmin = points[0].t;
  for (const auto& p : points) tmin = std::min(tmin, p.t);
  for (int i = 0; i < k; ++i) {
    offs[std::size_t(i)] = (points[std::size_t(i)].t - tmin) * speed;
    Pt site;
    for (int a = 0; a < dim; ++a) {
      const double c = points[std::size_t(i)].x[std::size_t(a)] * double(g.side);
      const double r = std::round(c);
      if (std::abs(c - r) > 1e-9) throw std::invalid_argument("joint_cumulant: point off the 2^{-N} grid");
      site[a] = Index(r);
    }
    sites[std::size_t(i)] = std::size_t(site_index(g, wrap(g, site)));
  }
  double span = 0;
  for (double o : offs) span = std::max(span, o);
  const double window = span + opt.window_gap;

  // sorted read schedule within a window
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return offs[std::size_t(a)] < offs[std::size_t(b)]; });

  const std::int64_t per = opt.samples / opt.batches;
  Eigen::MatrixXd samples(per * opt.batches, k);
  for (int b = 0; b < opt.batches; ++b) {
    Rng init(RngStream{stream.seed, stream.stream * 1000003ull + std::uint64_t(b) * 2 + 1});
    SsepTrajectory traj(sample_bernoulli_field(g, rho, init),
                        RngStream{stream.seed, stream.stream * 1000003ull + std::uint64_t(b) * 2});
    for (std::int64_t w = 0; w < per; ++w) {
      const double base = double(w) * window;
      for (int i : order) {
        traj.advance_to(base + offs[std::size_t(i)]);
        samples(b * per + w, i) =
            scale * (double(traj.field().bits[sites[std::size_t(i)]]) - rho);
      }
    }
  }

  CumulantQuery out;
  out.points = points;
  out.samples = per * opt.batches;
  out.batches = opt.batches;
  cumulant_from_samples(samples, opt.batches, &out.estimate, &out.stderr_);
  return out;
}

double cumulant_envelope(const std::vector<CumulantPoint>& points, int level, int dim,
                         double constant) {
  const int k = int(points.size());
  if (k < 2 || k > 6) throw std::invalid_argument("cumulant_envelope: order must be 2..6");
  const double floor_dist = std::pow(2.0, -level);

  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0;
  do {
    double prod = 1;
    for (int i = 0; i < k; ++i) {
      const auto& a = points[std::size_t(perm[std::size_t(i)])];
      const auto& b = points[std::size_t(perm[std::size_t((i + 1) % k)])];
      const double dx = unit_torus_distance(a.x, b.x, dim);
      const double dt = std::abs(a.t - b.t);
      prod *= std::pow(std::sqrt(dt) + std::max(dx, floor_dist), -0.5 * dim);
    }
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return constant * sum;
}

double cumulant_envelope_unrescaled(const std::vector<CumulantPoint>& points, int dim,
                                    double constant) {
  const int k = int(points.size());
  if (k < 2 || k > 6) throw std::invalid_argument("cumulant_envelope_unrescaled: order must be 2..6");
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  double sum = 0;
  do {
    double prod = 1;
    for (int i = 0; i < k; ++i) {
      const auto& a = points[std::size_t(perm[std::size_t(i)])];
      const auto& b = points[std::size_t(perm[std::size_t((i + 1) % k)])];
      double dx2 = 0;
      for (int ax = 0; ax < dim; ++ax) {
        const double d = a.x[std::size_t(ax)] - b.x[std::size_t(ax)];
        dx2 += d * d;
      }
      prod *= std::pow(1.0 + std::abs(a.t - b.t) + dx2, -0.25 * dim);
    }
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return constant * sum;
}

EnvelopeRatioReport envelope_ratio_scan(const std::vector<std::vector<CumulantPoint>>& configs,
                                        const std::vector<int>& levels, int dim, double rho,
                                        RngStream stream, const CumulantOptions& opt) {
  EnvelopeRatioReport rep;
  rep.levels = levels;
  std::uint64_t task = 0;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    double c_fit = 0;
    for (std::size_t ci = 0; ci < configs.size(); ++ci, ++task) {
      const auto q = joint_cumulant(configs[ci], levels[li], dim, rho,
                                    RngStream{stream.seed, stream.stream + 7919 * task}, opt);
      EnvelopeRatioEntry e;
      e.level = levels[li];
      e.config = int(ci);
      e.kappa = q.estimate;
      e.stderr_ = q.stderr_;
      e.envelope = cumulant_envelope(configs[ci], levels[li], dim);
      e.ratio = std::abs(e.kappa) / e.envelope;
      e.excluded = q.stderr_ >= 0.2 * e.envelope;
      if (e.excluded)
        ++rep.excluded;
      else
        c_fit = std::max(c_fit, e.ratio + 2 * e.stderr_ / e.envelope);
      rep.entries.push_back(e);
    }
    rep.c_fit_by_level.push_back(c_fit);
  }
  for (std::size_t i = 1; i < rep.c_fit_by_level.size(); ++i)
    if (rep.c_fit_by_level[i] > 1.5 * rep.c_fit_by_level[i - 1]) rep.growth_flag = true;
  return rep;
}

}  // namespace exlab
