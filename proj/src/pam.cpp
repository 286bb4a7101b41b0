#include "exlab/pam.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "exlab/parallel.hpp"
#include "exlab/quadrature.hpp"
#include "exlab/srw.hpp"

namespace exlab {

double renorm_constant(int level, double T, int dim, double rel_tol) {
  if (T <= 0) throw std::invalid_argument("renorm_constant: T must be positive");
  const Index L = Index(1) << level;
  const double upper = std::pow(4.0, level) * T;
  auto f = [L, dim](double s) { return torus_return_probability(2 * s, L, dim); };
  return integrate_dyadic(f, upper, rel_tol);
}

namespace {

std::vector<Index> neighbor_table(const Geometry& g) {
  const Index n = g.volume();
  const int nd = 2 * g.dim;
  std::vector<Index> nb(std::size_t(n) * std::size_t(nd));
  for (Index id = 0; id < n; ++id) {
    const Pt p = site_point(g, id);
    int slot = 0;
    for (int a = 0; a < g.dim; ++a)
      for (int dir : {+1, -1}) {
        Pt q = p;
        q[a] = mod_floor(q[a] + dir, g.side);
        nb[std::size_t(id) * nd + slot++] = site_index(g, q);
      }
  }
  return nb;
}

std::vector<double> poisson_weights_tail(double lambda, double tol) {
  if (lambda <= 0) return {1.0};
  std::vector<double> w;
  double cum = 0;
  for (Index n = 0;; ++n) {
    const double p = std::exp(double(n) * std::log(lambda) - lambda - std::lgamma(double(n) + 1));
    w.push_back(p);
    cum += p;
    if (cum >= 1.0 - tol && double(n) > lambda) break;
    if (n > Index(10 * lambda) + 400) break;
  }
  return w;
}

Eigen::ArrayXd heat_flow_with_table(const Eigen::ArrayXd& field, double tau, const Geometry& g,
                                    const std::vector<Index>& nb, double series_tol) {
  if (tau == 0) return field;
  const int nd = 2 * g.dim;
  const double lambda = double(nd) * tau;
  const auto w = poisson_weights_tail(lambda, series_tol);
  Eigen::ArrayXd v = field;
  Eigen::ArrayXd out = w[0] * v;
  Eigen::ArrayXd next(v.size());
  for (std::size_t m = 1; m < w.size(); ++m) {
    // one uniformized step is the neighbour average
    for (Index id = 0; id < v.size(); ++id) {
      double s = 0;
      for (int j = 0; j < nd; ++j) s += v[nb[std::size_t(id) * nd + j]];
      next[id] = s / double(nd);
    }
    v.swap(next);
    out += w[m] * v;
  }
  return out;
}

}  // namespace

Eigen::ArrayXd heat_flow(const Eigen::ArrayXd& field, double dt, int level, int dim,
                         double series_tol) {
  if (dt < 0) throw std::invalid_argument("heat_flow: negative step");
  const Geometry g = Geometry::torus(dim, Index(1) << level);
  if (field.size() != g.volume()) throw std::invalid_argument("heat_flow: field size mismatch");
  return heat_flow_with_table(field, dt * std::pow(4.0, level), g, neighbor_table(g), series_tol);
}

Eigen::ArrayXd pam_initial_field(const PamConfig& cfg) {
  const Geometry g = cfg.lattice();
  const Index n = g.volume();
  Eigen::ArrayXd u0(n);
  switch (cfg.init) {
    case PamInit::Constant:
      u0.setConstant(cfg.init_value);
      break;
    case PamInit::Bump: {
      // smooth positive bump built from cosines, value in [0, init_value]
      const double h = 1.0 / double(g.side);
      for (Index id = 0; id < n; ++id) {
        const Pt p = site_point(g, id);
        double v = 1;
        for (int a = 0; a < g.dim; ++a) {
          const double c = 0.5 * (1 - std::cos(2 * M_PI * double(p[a]) * h));
          v *= c * c;
        }
        u0[id] = cfg.init_value * v;
      }
      break;
    }
    case PamInit::PointMass:
      u0.setZero();
      u0[0] = cfg.init_value;
      break;
  }
  return u0;
}

std::vector<FieldSnapshot> pam_solve(const PamConfig& cfg, const Potential& pot) {
  const Geometry g = cfg.lattice();
  const double dt = cfg.step();
  const double bound = std::pow(4.0, -cfg.level);
  if (dt > bound * (1 + 1e-12))
    throw std::invalid_argument("pam_solve: dt exceeds the potential-freezing bound 4^{-N}");
  if (cfg.horizon <= 0) throw std::invalid_argument("pam_solve: horizon must be positive");

  const Index n = g.volume();
  const auto nb = neighbor_table(g);
  const double speed = std::pow(4.0, cfg.level);
  const double weight = std::pow(2.0, 0.5 * cfg.dim * cfg.level);  // 2^{Nd/2}

  double c_n = 0;
  switch (cfg.renorm) {
    case PamRenorm::Computed:
      c_n = renorm_constant(cfg.level, cfg.horizon, cfg.dim);
      break;
    case PamRenorm::Supplied:
      c_n = cfg.renorm_value;
      break;
    case PamRenorm::Zero:
      c_n = 0;
      break;
  }

  const std::int64_t nsteps = std::llround(cfg.horizon / dt);
  if (nsteps < 1 || std::abs(double(nsteps) * dt - cfg.horizon) > 1e-9 * cfg.horizon)
    throw std::invalid_argument("pam_solve: horizon must be an integer number of steps");

  std::vector<double> snap_times = cfg.snapshot_times;
  if (snap_times.empty()) snap_times.push_back(cfg.horizon);
  std::vector<std::int64_t> snap_steps;
  for (double ts : snap_times) {
    const std::int64_t s = std::llround(ts / dt);
    if (s < 0 || s > nsteps || std::abs(double(s) * dt - ts) > 1e-9 * std::max(1.0, cfg.horizon))
      throw std::invalid_argument("pam_solve: snapshot times must sit on the step grid");
    snap_steps.push_back(s);
  }

  std::optional<SsepTrajectory> env;
  if (pot.kind == PotentialKind::Ssep) {
    Rng init(RngStream{cfg.env_stream.seed, cfg.env_stream.stream ^ 0x5143d9ull});
    env.emplace(sample_bernoulli_field(g, cfg.rho, init), cfg.env_stream);
  }
  if (pot.kind == PotentialKind::Frozen && pot.frozen.size() != n)
    throw std::invalid_argument("pam_solve: frozen potential size mismatch");

  Eigen::ArrayXd u = pam_initial_field(cfg);
  Eigen::ArrayXd v(n);
  std::vector<FieldSnapshot> out;
  auto capture = [&](std::int64_t step) {
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == step)
        out.push_back(FieldSnapshot{double(step) * dt, cfg.level, cfg.dim, u});
  };

  capture(0);
  for (std::int64_t s = 0; s < nsteps; ++s) {
    switch (pot.kind) {
      case PotentialKind::None:
        v.setZero();
        break;
      case PotentialKind::Frozen:
        v = pot.frozen;
        break;
      case PotentialKind::Ssep: {
        env->advance_to(double(s) * dt * speed);
        const auto& bits = env->field().bits;
        for (Index id = 0; id < n; ++id)
          v[id] = weight * (double(bits[std::size_t(id)]) - cfg.rho) - c_n;
        break;
      }
    }
    u *= (-0.5 * dt * v).exp();
    u = heat_flow_with_table(u, dt * speed, g, nb, 1e-12);
    u *= (-0.5 * dt * v).exp();
    capture(s + 1);
  }
  return out;
}

EnsembleStats pam_ensemble_stats(const PamConfig& cfg, const ScalarField& phi, double eta,
                                 int replicas, RngStream stream) {
  const Geometry g = cfg.lattice();
  const Index n = g.volume();
  const double h3 = 1.0 / double(n);

  std::vector<double> pairing(static_cast<std::size_t>(replicas)), holder(static_cast<std::size_t>(replicas)),
      mass(static_cast<std::size_t>(replicas));
  parallel_for(replicas, [&](std::int64_t r) {
    PamConfig c = cfg;
    c.env_stream = RngStream{stream.seed, stream.stream * 65537ull + std::uint64_t(r)};
    const auto snaps = pam_solve(c, Potential{PotentialKind::Ssep, {}});
    const Eigen::ArrayXd& u = snaps.back().values;
    double pair = 0;
    for (Index id = 0; id < n; ++id) {
      const Pt p = site_point(g, id);
      std::array<double, 3> x{0, 0, 0};
      for (int a = 0; a < g.dim; ++a) x[a] = double(p[a]) / double(g.side);
      pair += u[id] * phi(x);
    }
    pairing[std::size_t(r)] = pair * h3;
    holder[std::size_t(r)] = holder_norm(TorusField{cfg.level, cfg.dim, u}, eta);
    mass[std::size_t(r)] = u.mean();
  });

  auto mean_se = [&](const std::vector<double>& xs, double* m, double* se) {
    double mu = 0;
    for (double x : xs) mu += x;
    mu /= double(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mu) * (x - mu);
    var /= double(xs.size() - 1);
    *m = mu;
    *se = std::sqrt(var / double(xs.size()));
  };

  EnsembleStats st;
  st.level = cfg.level;
  st.replicas = replicas;
  mean_se(pairing, &st.mean_pairing, &st.se_pairing);
  mean_se(holder, &st.mean_holder, &st.se_holder);
  mean_se(mass, &st.mean_mass, &st.se_mass);
  return st;
}

ConvergenceProbe convergence_probe(const PamConfig& coarse, const PamConfig& fine,
                                   const ScalarField& phi, double eta, int replicas,
                                   RngStream stream) {
  if (std::abs(coarse.horizon - fine.horizon) > 1e-12)
    throw std::invalid_argument("convergence_probe: mismatched horizons");
  ConvergenceProbe probe;
  probe.coarse = pam_ensemble_stats(coarse, phi, eta, replicas, stream);
  probe.fine = pam_ensemble_stats(fine, phi, eta, replicas,
                                  RngStream{stream.seed, stream.stream + 0x9e37ull});
  probe.delta_pairing = std::abs(probe.coarse.mean_pairing - probe.fine.mean_pairing);
  probe.mc_error = std::sqrt(probe.coarse.se_pairing * probe.coarse.se_pairing +
                             probe.fine.se_pairing * probe.fine.se_pairing);
  return probe;
}

}  // namespace exlab
