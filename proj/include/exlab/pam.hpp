#pragma once

#include <Eigen/Dense>

#include <vector>

#include "exlab/exclusion.hpp"
#include "exlab/geometry.hpp"
#include "exlab/holder.hpp"
#include "exlab/rng.hpp"

namespace exlab {

/// Solution values on the rescaled torus at one time.
struct FieldSnapshot {
  double t = 0;
  int level = 1;
  int dim = 1;
  Eigen::ArrayXd values;

  TorusField as_field() const { return TorusField{level, dim, values}; }
};

/// Renormalization constant: integral of the walk return probability,
///   C_N = int_0^{4^N T} p_{2s}(0) ds
/// on the side-2^N torus. Order N in d = 2, convergent in d = 3. Evaluated
/// through the spectral form of the torus kernel, dyadic adaptive panels.
double renorm_constant(int level, double T, int dim, double rel_tol = 1e-7);

/// e^{dt 4^N Delta} applied by uniformization; mass-conserving up to the
/// series tail.
Eigen::ArrayXd heat_flow(const Eigen::ArrayXd& field, double dt, int level, int dim,
                         double series_tol = 1e-12);

enum class PamInit { Constant, Bump, PointMass };
enum class PamRenorm { Computed, Supplied, Zero };

struct PamConfig {
  int level = 3;
  int dim = 2;
  double rho = 0.5;
  double horizon = 0.25;
  double dt = -1;  // <= 0: defaults to 4^{-N} / 8
  PamInit init = PamInit::Constant;
  double init_value = 1.0;
  PamRenorm renorm = PamRenorm::Computed;
  double renorm_value = 0;
  RngStream env_stream;
  std::vector<double> snapshot_times;  // empty: snapshot at the horizon only

  double step() const { return dt > 0 ? dt : std::pow(4.0, -level) / 8.0; }
  Geometry lattice() const { return Geometry::torus(dim, Index(1) << level); }
};

/// Multiplier V in du/dt = Delta_N u - V u. Ssep reads the centred weighted
/// exclusion environment, V = 2^{Nd/2}(eta - rho) - C_N, refreshed at every
/// step start.
enum class PotentialKind { None, Frozen, Ssep };

struct Potential {
  PotentialKind kind = PotentialKind::Ssep;
  Eigen::ArrayXd frozen;  // used when kind == Frozen
};

Eigen::ArrayXd pam_initial_field(const PamConfig& cfg);

/// Strang march: half potential-exponential, full heat flow, half potential,
/// with the environment frozen at the start of each step.
std::vector<FieldSnapshot> pam_solve(const PamConfig& cfg, const Potential& pot);

struct EnsembleStats {
  int level = 0;
  std::int64_t replicas = 0;
  double mean_pairing = 0, se_pairing = 0;  // <u(T, .), phi> Riemann pairing
  double mean_holder = 0, se_holder = 0;    // spatial Hoelder norm at T
  double mean_mass = 0, se_mass = 0;        // average of u(T, .)
};

/// Law-level summary functionals over independent environments.
EnsembleStats pam_ensemble_stats(const PamConfig& cfg, const ScalarField& phi, double eta,
                                 int replicas, RngStream stream);

struct ConvergenceProbe {
  EnsembleStats coarse, fine;
  double delta_pairing = 0;  // |difference of means|
  double mc_error = 0;       // combined standard error of that difference
};

/// Compares summary functionals of u^N(T, .) across two levels with
/// independent environments; a law-level consistency probe, not a coupling.
ConvergenceProbe convergence_probe(const PamConfig& coarse, const PamConfig& fine,
                                   const ScalarField& phi, double eta, int replicas,
                                   RngStream stream);

}  // namespace exlab
