#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "exlab/estimates.hpp"
#include "exlab/exclusion.hpp"
#include "exlab/srw.hpp"

using namespace exlab;

TEST_CASE("bernoulli field: law of large numbers, determinism, independence") {
  const Geometry g = Geometry::torus(1, Index(1) << 20);
  const double rho = 0.3;
  Rng rng(RngStream{42, 0});
  const OccupationField eta = sample_bernoulli_field(g, rho, rng);
  const double mean = double(eta.count()) / double(g.volume());
  CHECK(std::abs(mean - rho) < 4 * std::sqrt(rho * (1 - rho) / double(g.volume())));

  Rng rng2(RngStream{42, 0});
  const OccupationField replay = sample_bernoulli_field(g, rho, rng2);
  CHECK(replay.bits == eta.bits);

  // adjacent-pair covariance vanishes under the product measure
  double cov = 0;
  const Index n = g.volume();
  for (Index i = 0; i < n; ++i)
    cov += (eta.bits[std::size_t(i)] - rho) *
           (eta.bits[std::size_t((i + 1) % n)] - rho);
  cov /= double(n);
  CHECK(std::abs(cov) < 4 * rho * (1 - rho) / std::sqrt(double(n)));
}

TEST_CASE("swap map") {
  const Geometry g = Geometry::infinite(1);
  SUBCASE("both endpoints occupied") {
    const LabelledState s{g, Config{{Pt{0}, Pt{1}}}};
    const LabelledState out = swap_sigma(Pt{0}, Pt{1}, s);
    CHECK(out.config.pos[0] == Pt{1});
    CHECK(out.config.pos[1] == Pt{0});
  }
  SUBCASE("one endpoint occupied") {
    const LabelledState s{g, Config{{Pt{0}}}};
    CHECK(swap_sigma(Pt{0}, Pt{1}, s).config.pos[0] == Pt{1});
  }
  SUBCASE("neither endpoint occupied") {
    const LabelledState s{g, Config{{Pt{5}}}};
    CHECK(swap_sigma(Pt{0}, Pt{1}, s).config.pos[0] == Pt{5});
  }
  SUBCASE("non-neighbours are rejected") {
    const LabelledState s{g, Config{{Pt{0}}}};
    CHECK_THROWS_AS(swap_sigma(Pt{0}, Pt{2}, s), std::invalid_argument);
  }
}

TEST_CASE("delta map overwrites one coordinate") {
  CHECK(map_delta(0, 1, Config{{Pt{0}, Pt{1}}}).pos[1] == Pt{0});
  const Config w{{Pt{0}, Pt{1}, Pt{5}}};
  const Config once = map_delta(1, 2, w);
  CHECK(once.pos[0] == Pt{0});
  CHECK(once.pos[1] == Pt{1});
  CHECK(once.pos[2] == Pt{1});
  const Config twice = map_delta(1, 2, once);
  CHECK(twice.pos == once.pos);
  CHECK_THROWS_AS(map_delta(1, 1, w), std::invalid_argument);
}

TEST_CASE("unlabelled dynamics conserve particles and the product measure") {
  const Geometry g = Geometry::torus(2, 8);
  Rng rng(RngStream{7, 0});
  OccupationField eta = sample_bernoulli_field(g, 0.5, rng);
  const auto before = eta.bits;
  simulate_unlabelled(eta, 0.0, rng);
  CHECK(eta.bits == before);

  const Index count = eta.count();
  simulate_unlabelled(eta, 3.0, rng);
  CHECK(eta.count() == count);

  // stationarity: single-site and adjacent-pair marginals at time T
  const double rho = 0.5;
  const int reps = 4000;
  double site = 0, pair = 0;
  for (int r = 0; r < reps; ++r) {
    Rng rr(RngStream{7, std::uint64_t(r) + 10});
    OccupationField e = sample_bernoulli_field(g, rho, rr);
    simulate_unlabelled(e, 1.0, rr);
    site += e.bits[0];
    pair += e.bits[0] * e.bits[1];
  }
  site /= reps;
  pair /= reps;
  CHECK(std::abs(site - rho) < 3 * std::sqrt(rho * (1 - rho) / reps));
  CHECK(std::abs(pair - rho * rho) < 3 * std::sqrt(rho * rho * (1 - rho * rho) / reps));
}

TEST_CASE("single labelled particle reproduces the walk kernel (chi-squared)") {
  const Geometry g = Geometry::torus(1, 8);
  const double t = 1.0;
  const int reps = 20000;
  std::vector<int> counts(8, 0);
  for (int r = 0; r < reps; ++r) {
    Rng rng(RngStream{11, std::uint64_t(r)});
    LabelledState s{g, Config{{Pt{0}}}};
    simulate_labelled(s, t, rng);
    counts[std::size_t(mod_floor(s.config.pos[0][0], 8))]++;
  }
  double chi2 = 0;
  for (Index x = 0; x < 8; ++x) {
    const double expect = reps * srw_kernel(Pt{0}, Pt{x}, t, g);
    chi2 += (counts[std::size_t(x)] - expect) * (counts[std::size_t(x)] - expect) / expect;
  }
  // 7 degrees of freedom: mean 7, sd sqrt(14)
  CHECK(chi2 < 7 + 3 * std::sqrt(14.0));
}

TEST_CASE("labelled dynamics preserve distinctness and horizon zero") {
  const Geometry g = Geometry::torus(1, 6);
  Rng rng(RngStream{3, 5});
  LabelledState s{g, Config{{Pt{2}, Pt{3}}}};
  simulate_labelled(s, 0.0, rng);
  CHECK(s.config.pos[0] == Pt{2});
  for (int r = 0; r < 500; ++r) {
    LabelledState run{g, Config{{Pt{2}, Pt{3}}}};
    Rng rr(RngStream{3, std::uint64_t(r)});
    simulate_labelled(run, 2.0, rr);
    CHECK(pairwise_distinct(g, run.config));
  }
}

TEST_CASE("determinism: identical streams give identical trajectories") {
  const Geometry g = Geometry::infinite(2);
  LabelledState a{g, Config{{Pt{0, 0}, Pt{4, 4}}}};
  LabelledState b = a;
  Rng ra(RngStream{99, 1}), rb(RngStream{99, 1});
  simulate_labelled(a, 5.0, ra);
  simulate_labelled(b, 5.0, rb);
  CHECK(a.config.pos == b.config.pos);
}

TEST_CASE("forgetting labels recovers the unlabelled law (L=6, k=2)") {
  const Geometry g = Geometry::torus(1, 6);
  const double T = 1.0;
  const int reps = 6000;
  const std::vector<Pt> start{Pt{0}, Pt{3}};

  std::vector<double> occ_labelled(6, 0), occ_unlabelled(6, 0);
  for (int r = 0; r < reps; ++r) {
    Rng rl(RngStream{1234, std::uint64_t(r)});
    LabelledState s{g, Config{start}};
    simulate_labelled(s, T, rl);
    for (const Pt& p : s.config.pos) occ_labelled[std::size_t(mod_floor(p[0], 6))] += 1;

    Rng ru(RngStream{4321, std::uint64_t(r)});
    OccupationField eta{g, std::vector<std::uint8_t>(6, 0)};
    for (const Pt& p : start) eta.bits[std::size_t(p[0])] = 1;
    simulate_unlabelled(eta, T, ru);
    for (Index x = 0; x < 6; ++x) occ_unlabelled[std::size_t(x)] += eta.bits[std::size_t(x)];
  }
  for (Index x = 0; x < 6; ++x) {
    const double pa = occ_labelled[std::size_t(x)] / reps;
    const double pb = occ_unlabelled[std::size_t(x)] / reps;
    const double pooled = 0.5 * (pa + pb);
    const double se = std::sqrt(2 * pooled * (1 - pooled) / reps);
    CHECK(std::abs(pa - pb) < 3 * se);
  }
}

TEST_CASE("occupancy covariance oracle") {
  const Geometry g = Geometry::torus(2, 8);
  const double rho = 0.4;
  Rng rng(RngStream{5, 0});
  CHECK(occupancy_covariance_oracle(g, Pt{0, 0}, 0.0, rho, 100, rng) ==
        doctest::Approx(rho * (1 - rho)));
  CHECK(occupancy_covariance_oracle(g, Pt{3, 1}, 0.0, rho, 100, rng) == 0.0);

  // against the exact kernel from the uniformized route
  KernelWorkspace ws(g);
  const double t = 1.0;
  const std::int64_t target = ws.states(1).index(Config{{Pt{1, 0}}});
  const double exact = rho * (1 - rho) * ws.row(Config{{Pt{0, 0}}}, t).p[target];
  const std::int64_t samples = 200000;
  const double est = occupancy_covariance_oracle(g, Pt{1, 0}, t, rho, samples, rng);
  const double p = exact / (rho * (1 - rho));
  const double se = rho * (1 - rho) * std::sqrt(p * (1 - p) / double(samples));
  CHECK(std::abs(est - exact) < 4 * se);
}

TEST_CASE("trajectory reads equal one continuous run") {
  const Geometry g = Geometry::torus(1, 6);
  Rng init(RngStream{8, 0});
  OccupationField eta0 = sample_bernoulli_field(g, 0.5, init);

  SsepTrajectory split(eta0, RngStream{8, 1});
  for (double t : {0.3, 0.7, 1.5, 2.0}) split.advance_to(t);

  SsepTrajectory whole(eta0, RngStream{8, 1});
  whole.advance_to(2.0);
  CHECK(split.field().bits == whole.field().bits);
}
