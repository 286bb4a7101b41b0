#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exlab/pam.hpp"
#include "exlab/srw.hpp"

using namespace exlab;

TEST_CASE("renormalization constant: monotone, order N in d=2, Cauchy in d=3") {
  // nondecreasing in N for d <= 2 and in T always
  double prev = 0;
  for (int n = 2; n <= 7; ++n) {
    const double c = renorm_constant(n, 1.0, 2);
    CHECK(c >= prev);
    prev = c;
  }
  for (int d : {2, 3}) {
    double prev_t = 0;
    for (double T : {0.25, 0.5, 1.0, 2.0}) {
      const double c = renorm_constant(4, T, d);
      CHECK(c >= prev_t);
      prev_t = c;
    }
  }

  // d=2: increments approach log(2) / (4 pi)
  const double target = std::log(2.0) / (4 * M_PI);
  const double diff = renorm_constant(8, 1.0, 2) - renorm_constant(7, 1.0, 2);
  CHECK(std::abs(diff - target) < 0.1 * target);

  // d=3: convergent
  const double c7 = renorm_constant(7, 1.0, 3);
  const double c8 = renorm_constant(8, 1.0, 3);
  CHECK(std::abs(c8 - c7) < 0.05 * c7);
}

TEST_CASE("renormalization constant against a trapezoid refinement oracle") {
  const int N = 4;
  const Index L = Index(1) << N;
  const double upper = std::pow(4.0, N);
  long n = 1 << 14;
  auto trap = [&](long panels) {
    const double h = upper / double(panels);
    double sum = 0.5 * (torus_return_probability(0.0, L, 2) +
                        torus_return_probability(2 * upper, L, 2));
    for (long i = 1; i < panels; ++i) sum += torus_return_probability(2 * i * h, L, 2);
    return sum * h;
  };
  const double oracle = (4 * trap(2 * n) - trap(n)) / 3.0;  // Richardson
  CHECK(renorm_constant(N, 1.0, 2) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("heat flow: constants, mass, flattening") {
  const int N = 3, d = 2;
  const Index n = Index(1) << (N * d);
  const Eigen::ArrayXd c = Eigen::ArrayXd::Constant(n, 1.7);
  CHECK((heat_flow(c, 0.01, N, d) - 1.7).abs().maxCoeff() < 1e-12);

  Eigen::ArrayXd bump = Eigen::ArrayXd::Zero(n);
  bump[5] = 1.0;
  const Eigen::ArrayXd out = heat_flow(bump, 0.01, N, d);
  CHECK(std::abs(out.sum() - bump.sum()) < 1e-10);

  const Eigen::ArrayXd flat = heat_flow(bump, 50.0, N, d);
  CHECK((flat - 1.0 / double(n)).abs().maxCoeff() < 1e-9);
}

TEST_CASE("heat flow matches the walk kernel column") {
  const int N = 4, d = 2;
  const Geometry g = Geometry::torus(d, Index(1) << N);
  Eigen::ArrayXd delta = Eigen::ArrayXd::Zero(g.volume());
  delta[0] = 1.0;
  const double t = 0.1;
  const Eigen::ArrayXd u = heat_flow(delta, t, N, d);
  const double tau = t * std::pow(4.0, N);
  for (Index id = 0; id < g.volume(); ++id) {
    const Pt p = site_point(g, id);
    CHECK(std::abs(u[id] - srw_kernel(p, Pt{0, 0}, tau, g)) < 1e-6);
  }
}

TEST_CASE("zero potential keeps constants invariant") {
  PamConfig cfg;
  cfg.level = 3;
  cfg.dim = 2;
  cfg.horizon = 0.25;
  cfg.init = PamInit::Constant;
  cfg.init_value = 2.0;
  cfg.renorm = PamRenorm::Zero;
  const auto snaps = pam_solve(cfg, Potential{PotentialKind::None, {}});
  CHECK((snaps.back().values - 2.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("point mass with zero potential reproduces the discrete heat kernel") {
  PamConfig cfg;
  cfg.level = 4;
  cfg.dim = 2;
  cfg.horizon = 0.1;
  cfg.dt = 0.1 / 26;  // slightly off the default to exercise generic steps
  cfg.init = PamInit::PointMass;
  cfg.renorm = PamRenorm::Zero;
  const auto snaps = pam_solve(cfg, Potential{PotentialKind::None, {}});
  const Geometry g = cfg.lattice();
  const double tau = cfg.horizon * std::pow(4.0, cfg.level);
  for (Index id = 0; id < g.volume(); ++id)
    CHECK(std::abs(snaps.back().values[id] - srw_kernel(site_point(g, id), Pt{0, 0}, tau, g)) <
          1e-6);
}

TEST_CASE("constant potential integrates exactly to the scalar exponential") {
  PamConfig cfg;
  cfg.level = 3;
  cfg.dim = 1;
  cfg.horizon = 0.5;
  cfg.init = PamInit::Constant;
  cfg.renorm = PamRenorm::Zero;
  const double v = 1.3;
  const Index n = cfg.lattice().volume();
  const auto snaps =
      pam_solve(cfg, Potential{PotentialKind::Frozen, Eigen::ArrayXd::Constant(n, v)});
  const double expect = std::exp(-v * cfg.horizon);
  CHECK((snaps.back().values - expect).abs().maxCoeff() < 1e-10);
}

TEST_CASE("Strang splitting is second order against a quarter-step reference") {
  PamConfig base;
  base.level = 2;
  base.dim = 1;
  base.horizon = 0.25;
  base.init = PamInit::Bump;
  base.renorm = PamRenorm::Zero;
  const Index n = base.lattice().volume();

  // frozen spatially-varying potential
  Eigen::ArrayXd v(n);
  Rng rng(RngStream{55, 0});
  for (Index i = 0; i < n; ++i) v[i] = 4.0 * (rng.u01() - 0.5);
  const Potential pot{PotentialKind::Frozen, v};

  auto solve = [&](double dt) {
    PamConfig c = base;
    c.dt = dt;
    return pam_solve(c, pot).back().values;
  };
  const double dt0 = std::pow(4.0, -base.level);
  const Eigen::ArrayXd ref = solve(dt0 / 16);
  const double e1 = (solve(dt0) - ref).abs().maxCoeff();
  const double e2 = (solve(dt0 / 2) - ref).abs().maxCoeff();
  const double ratio = e1 / e2;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("positivity across random environments") {
  for (int r = 0; r < 1000; ++r) {
    PamConfig cfg;
    cfg.level = 2;
    cfg.dim = 1;
    cfg.horizon = 0.25;
    cfg.init = PamInit::Bump;
    cfg.init_value = 1.0;
    cfg.renorm = PamRenorm::Computed;
    cfg.env_stream = RngStream{7777, std::uint64_t(r)};
    const auto snaps = pam_solve(cfg, Potential{PotentialKind::Ssep, {}});
    CHECK(snaps.back().values.minCoeff() >= 0.0);
  }
}

TEST_CASE("mass growth respects the potential sup bound") {
  PamConfig cfg;
  cfg.level = 3;
  cfg.dim = 1;
  cfg.horizon = 0.5;
  cfg.init = PamInit::Constant;
  cfg.renorm = PamRenorm::Zero;
  const Index n = cfg.lattice().volume();
  Eigen::ArrayXd v(n);
  Rng rng(RngStream{56, 0});
  for (Index i = 0; i < n; ++i) v[i] = 2.0 * (rng.u01() - 0.5);
  const auto snaps = pam_solve(cfg, Potential{PotentialKind::Frozen, v});
  const double l1 = snaps.back().values.abs().sum();
  CHECK(l1 <= std::exp(v.abs().maxCoeff() * cfg.horizon) * double(n) + 1e-9);
}

TEST_CASE("frozen-density environment reduces to a shifted heat equation") {
  // environment pinned at rho: the potential is the constant -C_N, so
  // u = e^{C_N t} e^{t Delta_N} u0; cosine data diagonalizes the flow
  for (int N : {2, 3, 4}) {
    PamConfig cfg;
    cfg.level = N;
    cfg.dim = 1;
    cfg.horizon = 0.0625;
    cfg.init = PamInit::Bump;
    cfg.renorm = PamRenorm::Supplied;
    cfg.renorm_value = 1.0;
    const Index n = cfg.lattice().volume();
    const auto snaps =
        pam_solve(cfg, Potential{PotentialKind::Frozen, Eigen::ArrayXd::Constant(n, -1.0)});

    Eigen::ArrayXd expect = heat_flow(pam_initial_field(cfg), cfg.horizon, N, 1);
    expect *= std::exp(cfg.horizon);
    CHECK((snaps.back().values - expect).abs().maxCoeff() < 1e-9);
  }

  // against the continuum solution, the discrete flow converges as N grows
  double prev_err = -1;
  for (int N : {2, 3, 4, 5}) {
    PamConfig cfg;
    cfg.level = N;
    cfg.dim = 1;
    cfg.horizon = 0.0625;
    cfg.renorm = PamRenorm::Zero;
    const Geometry g = cfg.lattice();
    Eigen::ArrayXd u0(g.volume());
    for (Index i = 0; i < g.volume(); ++i)
      u0[i] = std::cos(2 * M_PI * double(i) / double(g.side));
    const Eigen::ArrayXd got = heat_flow(u0, cfg.horizon, N, 1);
    double err = 0;
    for (Index i = 0; i < g.volume(); ++i) {
      const double cont =
          std::exp(-4 * M_PI * M_PI * cfg.horizon) * std::cos(2 * M_PI * double(i) / double(g.side));
      err = std::max(err, std::abs(got[i] - cont));
    }
    if (prev_err >= 0) CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("snapshot schedule and step validation") {
  PamConfig cfg;
  cfg.level = 2;
  cfg.dim = 1;
  cfg.horizon = 0.25;
  cfg.renorm = PamRenorm::Zero;
  cfg.snapshot_times = {0.0, 0.125, 0.25};
  const auto snaps = pam_solve(cfg, Potential{PotentialKind::None, {}});
  REQUIRE(snaps.size() == 3);
  CHECK(snaps[0].t == 0.0);
  CHECK(snaps[1].t == doctest::Approx(0.125));

  PamConfig bad = cfg;
  bad.dt = 1.0;  // above the freezing bound
  CHECK_THROWS_AS(pam_solve(bad, Potential{PotentialKind::None, {}}), std::invalid_argument);
}

TEST_CASE("identical configurations and seeds give identical ensembles") {
  PamConfig cfg;
  cfg.level = 3;
  cfg.dim = 2;
  cfg.horizon = 0.125;
  const ScalarField phi = [](const std::array<double, 3>& x) {
    return std::cos(2 * M_PI * x[0]);
  };
  const auto a = pam_ensemble_stats(cfg, phi, 0.5, 6, RngStream{31, 0});
  const auto b = pam_ensemble_stats(cfg, phi, 0.5, 6, RngStream{31, 0});
  CHECK(a.mean_pairing == b.mean_pairing);
  CHECK(a.mean_holder == b.mean_holder);
}

TEST_CASE("moments stabilize between successive levels") {
  PamConfig cfg;
  cfg.level = 5;
  cfg.dim = 2;
  cfg.horizon = 0.125;
  cfg.init = PamInit::Bump;
  PamConfig fine = cfg;
  fine.level = 6;
  const ScalarField phi = [](const std::array<double, 3>& x) {
    double v = 1;
    for (int a = 0; a < 2; ++a) {
      const double b = 0.5 * (1 - std::cos(2 * M_PI * x[std::size_t(a)]));
      v *= b * b;
    }
    return v;
  };
  const auto probe = convergence_probe(cfg, fine, phi, 0.5, 24, RngStream{1, 0});
  CHECK(probe.delta_pairing < probe.mc_error);
}
