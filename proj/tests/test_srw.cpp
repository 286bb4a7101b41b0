#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "exlab/srw.hpp"

using namespace exlab;

namespace {

// forward-equation oracle: integrate p' = L p on the truncated line |x| <=
// radius with classic RK4, small steps
Eigen::VectorXd ode_kernel_oracle(double t, Index radius, double dt = 1e-3) {
  const Index n = 2 * radius + 1;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[radius] = 1.0;
  auto rhs = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(n);
    for (Index i = 0; i < n; ++i) {
      const double left = i > 0 ? v[i - 1] : 0.0;
      const double right = i < n - 1 ? v[i + 1] : 0.0;
      out[i] = left + right - 2 * v[i];
    }
    return out;
  };
  const long steps = std::lround(t / dt);
  const double h = t / double(steps);
  for (long s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = rhs(p);
    const Eigen::VectorXd k2 = rhs(p + 0.5 * h * k1);
    const Eigen::VectorXd k3 = rhs(p + 0.5 * h * k2);
    const Eigen::VectorXd k4 = rhs(p + h * k3);
    p += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return p;
}

}  // namespace

TEST_CASE("walk kernel at time zero is a point mass") {
  CHECK(srw_kernel_1d(0, 0.0) == 1.0);
  CHECK(srw_kernel_1d(3, 0.0) == 0.0);
}

TEST_CASE("kernel row normalizes within the certified window") {
  double sum = 0;
  for (Index x = -40; x <= 40; ++x) sum += srw_kernel_1d(x, 1.0);
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("Bessel route agrees with the forward-equation oracle to 1e-10") {
  const Index radius = 60;
  const auto oracle = ode_kernel_oracle(1.0, radius);
  for (Index x = 0; x <= 5; ++x)
    CHECK(std::abs(srw_kernel_1d(x, 1.0) - oracle[radius + x]) < 1e-10);
  const auto oracle4 = ode_kernel_oracle(4.0, radius);
  for (Index x : {0, 3, 9})
    CHECK(std::abs(srw_kernel_1d(x, 4.0) - oracle4[radius + x]) < 1e-10);
}

TEST_CASE("two-dimensional diagonal value is the squared one-dimensional factor") {
  const Geometry g = Geometry::infinite(2);
  const double one = srw_kernel_1d(0, 1.0);
  CHECK(srw_kernel(Pt{5, 7}, Pt{5, 7}, 1.0, g) == doctest::Approx(one * one).epsilon(1e-12));
  CHECK(srw_kernel(Pt{0, 0}, Pt{0, 0}, 0.0, g) == 1.0);
}

TEST_CASE("torus kernel flattens to the uniform law") {
  const Geometry g = Geometry::torus(1, 4);
  for (Index x = 0; x < 4; ++x)
    CHECK(std::abs(srw_kernel(Pt{0}, Pt{x}, 50.0, g) - 0.25) < 1e-8);
}

TEST_CASE("image summation matches the spectral route") {
  for (Index L : {4, 6, 16})
    for (double t : {0.1, 1.0, 10.0})
      for (Index r = 0; r < L; ++r)
        CHECK(std::abs(torus_axis_kernel(r, t, L) - torus_axis_kernel_spectral(r, t, L)) < 1e-12);
}

TEST_CASE("return probability equals the squared-kernel sum") {
  // sum_x p_t(x)^2 = p_{2t}(0), the semigroup identity used by the
  // renormalization integral
  const Index L = 8;
  for (double t : {0.5, 2.0, 20.0}) {
    double sum = 0;
    for (Index x = 0; x < L; ++x) {
      const double v = torus_axis_kernel(x, t, L);
      sum += v * v;
    }
    CHECK(std::abs(sum - torus_return_probability(2 * t, L, 1)) < 1e-12);
  }
}

TEST_CASE("product kernel factorizes and is symmetric") {
  const Geometry g = Geometry::torus(2, 6);
  const Config x{{Pt{0, 0}, Pt{2, 3}}};
  const Config y{{Pt{1, 5}, Pt{2, 2}}};
  const double t = 0.7;
  const double direct = product_kernel_rw(x, y, t, g);
  CHECK(direct ==
        doctest::Approx(srw_kernel(x.pos[0], y.pos[0], t, g) * srw_kernel(x.pos[1], y.pos[1], t, g))
            .epsilon(1e-14));
  CHECK(direct == doctest::Approx(product_kernel_rw(y, x, t, g)).epsilon(1e-12));
  CHECK(product_kernel_rw(x, x, 0.0, g) == 1.0);
}

TEST_CASE("negative time is rejected") {
  CHECK_THROWS_AS(srw_kernel_1d(0, -1.0), std::invalid_argument);
}
