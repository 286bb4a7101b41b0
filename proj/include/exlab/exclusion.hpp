#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "exlab/geometry.hpp"
#include "exlab/rng.hpp"

namespace exlab {

/// Unlabelled exclusion state: one occupancy bit per torus site.
struct OccupationField {
  Geometry g;
  std::vector<std::uint8_t> bits;

  Index count() const {
    Index n = 0;
    for (auto b : bits) n += b;
    return n;
  }
  std::uint8_t at(const Pt& p) const { return bits[std::size_t(site_index(g, p))]; }
};

/// i.i.d. Bernoulli(rho) occupancies, the invariant product measure.
OccupationField sample_bernoulli_field(const Geometry& g, double rho, Rng& rng);

/// k labelled particles at pairwise-distinct sites.
struct LabelledState {
  Geometry g;
  Config config;
};

/// Bond swap sigma^{x,y}: any particle at x moves to y and vice versa, all
/// other labels untouched. x and y must be nearest neighbours.
LabelledState swap_sigma(const Pt& x, const Pt& y, const LabelledState& s);

/// Exchange the coordinates of labels i and j (0-based).
Config sigma_labels(const Config& w, int i, int j);

/// Overwrite coordinate j with coordinate i (0-based); the result may leave
/// S^k, intentionally.
Config map_delta(int i, int j, const Config& w);

struct Event {
  double time;
  Pt site;   // bond representative
  int axis;  // bond = {site, site + e_axis}
};

struct EventLog {
  std::size_t max_events = 0;
  std::vector<Event> events;
};

/// Stirring dynamics on the torus: every bond carries an independent rate-1
/// clock, each ring exchanges the endpoint occupancies. Advances eta to time T.
void simulate_unlabelled(OccupationField& eta, double T, Rng& rng, EventLog* log = nullptr);

/// Same clocks restricted to bonds touching at least one particle (thinned
/// kinetic Monte Carlo; equal in law to the full construction). Works on the
/// torus and on Z^d.
void simulate_labelled(LabelledState& s, double T, Rng& rng, EventLog* log = nullptr);

/// rho(1-rho) times the empirical single-walker kernel P(X_t = x), the
/// stationary two-point function of the occupation field.
double occupancy_covariance_oracle(const Geometry& g, const Pt& x, double t, double rho,
                                   std::int64_t samples, Rng& rng);

/// Stationary environment advanced on demand; reads see the state at the
/// current time. Event clocks carry across advance_to calls, so a trajectory
/// split into many reads equals one long run.
class SsepTrajectory {
 public:
  SsepTrajectory(OccupationField eta0, RngStream stream);

  void advance_to(double t);
  double time() const { return time_; }
  const OccupationField& field() const { return eta_; }

 private:
  OccupationField eta_;
  Rng rng_;
  double time_ = 0;
  double next_event_ = 0;
  double total_rate_;
};

}  // namespace exlab
