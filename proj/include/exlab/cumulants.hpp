#pragma once

#include <Eigen/Dense>

#include <vector>

#include "exlab/exclusion.hpp"
#include "exlab/geometry.hpp"
#include "exlab/holder.hpp"
#include "exlab/rng.hpp"

namespace exlab {

/// Y^N(f) = 2^{-Nd} sum_x f(x / 2^N) 2^{Nd/2} (eta(x) - rho), the centred and
/// diffusively rescaled occupation field tested against f.
double fluctuation_field(const ScalarField& f, const OccupationField& eta, int level, double rho);

struct VarianceCheck {
  double empirical = 0;
  double limit = 0;  // rho(1-rho) times the Riemann sum of f^2
  double z_score = 0;
  std::int64_t samples = 0;
};

/// Monte Carlo variance of Y^N_0(f) under the product measure against the
/// fixed-time variance of the limiting Ornstein-Uhlenbeck field.
VarianceCheck stationary_variance_check(const ScalarField& f, int level, int dim, double rho,
                                        std::int64_t samples, RngStream stream);

/// One space-time observation point of the rescaled field: time t and torus
/// coordinates in [0,1)^d aligned with the 2^{-N} grid.
struct CumulantPoint {
  double t = 0;
  std::array<double, 3> x{0, 0, 0};
};

struct CumulantQuery {
  std::vector<CumulantPoint> points;
  int order() const { return int(points.size()); }
  double estimate = 0;
  double stderr_ = 0;
  std::int64_t samples = 0;
  int batches = 0;
};

struct CumulantOptions {
  std::int64_t samples = 100000;
  int batches = 50;          // >= 30; batch scatter feeds the jackknife error
  double window_gap = 1.0;   // extra spacing between observation windows
  bool rescale = true;       // weight the field by 2^{dN/2}
};

/// Joint cumulant of the rescaled field at the query points, estimated from
/// stationary trajectories by the moment-partition formula
///   kappa = sum_pi (-1)^{|pi|-1} (|pi|-1)! prod_B E[prod_{i in B} xi_i],
/// with jackknife-over-batches standard errors. Each batch runs its own
/// trajectory; windows within a batch share it.
CumulantQuery joint_cumulant(const std::vector<CumulantPoint>& points, int level, int dim,
                             double rho, RngStream stream, const CumulantOptions& opt = {});

/// Same estimator on caller-provided samples (rows = observations, columns =
/// the k coordinates). Backbone of joint_cumulant, reusable against synthetic
/// inputs.
void cumulant_from_samples(const Eigen::MatrixXd& samples, int batches, double* estimate,
                           double* stderr_out);

/// sum over bijections sigma of [k] of
///   prod_i (|t_{sigma(i+1)} - t_{sigma(i)}|^{1/2}
///           + max(|x_{sigma(i+1)} - x_{sigma(i)}|, 2^{-N}))^{-d/2},
/// cyclic convention sigma(k+1) = sigma(1); distances on the unit torus.
double cumulant_envelope(const std::vector<CumulantPoint>& points, int level, int dim,
                         double constant = 1.0);

/// Unrescaled variant: prod_i (1 + |dt| + |dx|^2)^{-d/4} with lattice
/// coordinates.
double cumulant_envelope_unrescaled(const std::vector<CumulantPoint>& points, int dim,
                                    double constant = 1.0);

struct EnvelopeRatioEntry {
  int level = 0;
  int config = 0;
  double kappa = 0;
  double stderr_ = 0;
  double envelope = 0;
  double ratio = 0;  // |kappa| / envelope
  bool excluded = false;
};

struct EnvelopeRatioReport {
  std::vector<EnvelopeRatioEntry> entries;
  std::vector<double> c_fit_by_level;  // max ratio + 2 stderr/envelope per level
  std::vector<int> levels;
  bool growth_flag = false;
  std::int64_t excluded = 0;
};

/// Ratios |kappa| / envelope over a family of point configurations and torus
/// levels; noise-dominated entries (stderr above 20% of the envelope) are
/// excluded and reported.
EnvelopeRatioReport envelope_ratio_scan(const std::vector<std::vector<CumulantPoint>>& configs,
                                        const std::vector<int>& levels, int dim, double rho,
                                        RngStream stream, const CumulantOptions& opt = {});

/// All set partitions of {0..k-1}, each partition a list of blocks.
std::vector<std::vector<std::vector<int>>> set_partitions(int k);

}  // namespace exlab
