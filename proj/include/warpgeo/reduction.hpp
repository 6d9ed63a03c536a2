#pragma once

// Geodesics of L ×_w N through the base. For a one-dimensional fiber
// (ℝ, c0 dy²) the Clairaut charge c1 = ⟨γ′, ∂_y⟩ is conserved and the base
// curve solves x″ = −∇V with V = ½(c1²/c0)/w; the fiber follows from
// y′ = c1/(c0 w). For other fibers the coupled system
//   x″ = −Γ_L(x′, x′) + ½ g(y′, y′) ∇w,
//   y″ = −Γ_N(y′, y′) − (d/dτ log w) y′
// is integrated instead.

#include "warpgeo/geodesic.hpp"
#include "warpgeo/warped.hpp"

namespace warpgeo {

enum class FiberMode { Clairaut, Coupled };

struct ReducedGeodesicProblem {
  WarpedSpec spec;
  FiberMode mode = FiberMode::Clairaut;
  double c0 = 1.0;        // fiber metric c0·dy² (Clairaut mode)
  double clairaut = 0.0;  // c1 = w c0 y′ (Clairaut mode)
  double energy = 0.0;    // full ⟨v, v⟩
  GeodesicState init;     // full-chart initial state

  // ½(c1²/c0)/w(x); Clairaut mode only.
  double potential(const Vec& base_point) const;
  // The potential as a base scalar field, for integrate_mechanical.
  ScalarField potential_field() const;
};

// Throws FiberNotOneDimensional unless the fiber is one-dimensional, and
// InvalidArgument unless its metric is ±dy².
ReducedGeodesicProblem reduce(const WarpedSpec& spec, const GeodesicState& init);

// Any fiber; uses the coupled system.
ReducedGeodesicProblem reduce_coupled(const WarpedSpec& spec, const GeodesicState& init);

// Integrates the reduced system and reassembles full-chart states. Monitors:
// "energy" (⟨v, v⟩), "fiber_speed_law" (w⟨y′, y′⟩ − c1²/c0, with ⟨,⟩ the full
// metric; in coupled mode w²g(y′, y′) minus its initial value), and in
// Clairaut mode "clairaut" (w c0 y′). w → 0 ends the run with
// PotentialSingularity.
Trajectory integrate_reduced(const ReducedGeodesicProblem& problem, double tau_end, const ode::Options& opts = {});

}  // namespace warpgeo
