#pragma once

#include <span>
#include <string>
#include <vector>

#include "warpgeo/killing.hpp"
#include "warpgeo/metric_chart.hpp"
#include "warpgeo/ode.hpp"

namespace warpgeo {

struct GeodesicState {
  Vec x;
  Vec v;
  double tau = 0.0;
};

// Samples at every accepted integrator step, with named monitors evaluated at
// each sample.
struct Trajectory {
  std::vector<GeodesicState> samples;
  std::vector<Vec> accelerations;
  std::vector<std::string> monitor_names;
  std::vector<std::vector<double>> monitor_values;  // [monitor][sample]
  ode::Stats stats;
  ode::Termination termination = ode::Termination::Completed;
  std::string message;

  bool completed() const { return termination == ode::Termination::Completed; }
  double tau_end() const { return samples.empty() ? 0.0 : samples.back().tau; }

  // Cubic Hermite interpolation between the bracketing samples.
  GeodesicState state_at(double tau) const;
  // Index of the sample at tau (within tol), or samples.size().
  std::size_t find_sample(double tau, double tol = 1e-12) const;

  const std::vector<double>& monitor(const std::string& name) const;
  bool has_monitor(const std::string& name) const;
  // Peak-to-peak variation.
  double drift(const std::string& name) const;
  // drift / (1 + |initial value|)
  double relative_drift(const std::string& name) const;
};

struct GeodesicOptions {
  ode::Options ode;
  // Each field is checked to be Killing at the start and monitored as
  // "charge:<label>".
  std::vector<KillingCandidate> killing;
};

// x″^k + Γ^k_ij x′^i x′^j = 0. Leaving the chart domain ends the run with
// DomainExit; metric degeneration with StepSizeUnderflow. Monitors "energy"
// (⟨v, v⟩) and one charge per Killing field.
Trajectory integrate_direct(const MetricChart& chart, const GeodesicState& init, double tau_end,
                            const GeodesicOptions& opts = {});

// ⟨v, K(x)⟩. Throws NotKilling unless killing_residual at x is below 1e−8.
double clairaut_charge(const MetricChart& chart, const GeodesicState& state, const KillingCandidate& k);

// γ″ = −∇V (gradient raised by the chart metric) plus the geodesic terms.
// Monitor "mechanical_energy" = ½⟨γ′, γ′⟩ + V(γ). A non-finite potential or
// gradient ends the run with PotentialSingularity.
Trajectory integrate_mechanical(const MetricChart& chart, const ScalarField& potential, const GeodesicState& init,
                                double tau_end, const GeodesicOptions& opts = {});

// Largest |a − b| over coordinates and velocities at the samples of a whose
// tau also appears in b.
double sup_difference(const Trajectory& a, const Trajectory& b, bool include_velocity = true);

}  // namespace warpgeo
