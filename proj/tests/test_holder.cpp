#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exlab/holder.hpp"

using namespace exlab;

namespace {

TorusField make_field(int level, int dim, const std::function<double(Index)>& f) {
  TorusField out{level, dim, {}};
  out.values.resize(out.size());
  for (Index i = 0; i < out.size(); ++i) out.values[i] = f(i);
  return out;
}

}  // namespace

TEST_CASE("holder norm of a constant is its magnitude") {
  const auto f = make_field(3, 1, [](Index) { return -2.5; });
  CHECK(holder_norm(f, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("holder norm of a one-site indicator, N=1, d=1") {
  // two sites at rescaled distance 1/2: sup = 1, seminorm = (1/2)^{-1/2}
  const auto f = make_field(1, 1, [](Index i) { return i == 0 ? 1.0 : 0.0; });
  CHECK(holder_norm(f, 0.5) == doctest::Approx(1.0 + std::sqrt(2.0)));
}

TEST_CASE("holder norm is homogeneous and subadditive") {
  const auto f = make_field(2, 2, [](Index i) { return std::sin(double(i)); });
  auto g = f;
  for (Index i = 0; i < g.size(); ++i) g.values[i] = std::cos(0.7 * double(i));
  const double eta = 0.3;
  auto two_f = f;
  two_f.values *= 2.0;
  CHECK(holder_norm(two_f, eta) == doctest::Approx(2 * holder_norm(f, eta)));
  auto sum = f;
  sum.values += g.values;
  CHECK(holder_norm(sum, eta) <= holder_norm(f, eta) + holder_norm(g, eta) + 1e-12);
}

TEST_CASE("holder distance vanishes for matching restrictions up to the modulus term") {
  const ScalarField f = [](const std::array<double, 3>& x) { return std::cos(2 * M_PI * x[0]); };
  const int N = 3;
  auto fN = make_field(N, 1, [&](Index i) {
    return std::cos(2 * M_PI * double(i) / double(Index(1) << N));
  });

  SUBCASE("zero functions give zero") {
    const ScalarField z = [](const std::array<double, 3>&) { return 0.0; };
    auto zN = make_field(N, 1, [](Index) { return 0.0; });
    CHECK(holder_distance(z, zN, 0.5) == 0.0);
  }

  SUBCASE("restriction leaves only the small-scale modulus of f") {
    const double eta = 0.5;
    const HolderDistanceOptions opt{4};
    const double dist = holder_distance(f, fN, eta, opt);

    // independent dense scan of the same refinement grid
    const Index fine = Index(1) << (N + opt.refine);
    double expect = 0;
    for (Index i = 0; i < fine; ++i)
      for (Index j = 0; j < fine; ++j) {
        if (i == j) continue;
        double dx = double(i - j) / double(fine);
        dx -= std::round(dx);
        const double r = std::abs(dx);
        if (r >= 1.0 / double(Index(1) << N)) continue;
        const double vi = std::cos(2 * M_PI * double(i) / double(fine));
        const double vj = std::cos(2 * M_PI * double(j) / double(fine));
        expect = std::max(expect, std::abs(vi - vj) / std::pow(r, eta));
      }
    CHECK(dist == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("holder distance grows monotonically with the refinement level") {
  const ScalarField f = [](const std::array<double, 3>& x) { return std::cos(2 * M_PI * x[0]); };
  const int N = 4;
  auto fN = make_field(N, 1, [&](Index i) {
    return std::cos(2 * M_PI * double(i) / double(Index(1) << N));
  });
  double prev = 0;
  for (int refine : {1, 2, 3, 4, 5}) {
    const double d = holder_distance(f, fN, 0.5, HolderDistanceOptions{refine});
    CHECK(d >= prev - 1e-14);
    prev = d;
  }
}

TEST_CASE("space-time holder distance") {
  const int N = 1;
  const TorusField grid{N, 1, Eigen::ArrayXd::Zero(2)};
  const double T = 1.0;

  SUBCASE("identical constants give zero") {
    const SpaceTimeField c = [](double, const std::array<double, 3>&) { return 3.0; };
    CHECK(spacetime_holder_distance(c, c, grid, 0.5, T) == 0.0);
  }

  SUBCASE("restriction keeps only the small-scale term") {
    const SpaceTimeField f = [](double t, const std::array<double, 3>&) { return t; };
    const double eta = 0.5;
    const SpaceTimeHolderOptions opt;
    const double got = spacetime_holder_distance(f, f, grid, eta, T, opt);

    // sup over the refined schedule of |t-s| / max(sqrt|t-s|, dx)^eta within
    // the parabolic ball of radius 2^{-N}; maximal at dx = 0, |t-s| as large
    // as the grid admits below 4^{-N}
    const double cutoff2 = std::pow(2.0, -2 * N);
    const double dt_fine = cutoff2 / double(opt.time_refine);
    double expect = 0;
    for (int j = 1; j < opt.time_refine; ++j) {
      const double dt = double(j) * dt_fine;
      if (dt >= cutoff2) break;
      expect = std::max(expect, dt / std::pow(std::sqrt(dt), eta));
    }
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }
}
