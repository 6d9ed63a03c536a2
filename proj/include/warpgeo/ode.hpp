#pragma once

// Adaptive Dormand–Prince 5(4) integrator with error control on a mixed
// absolute/relative tolerance. The right-hand side may reject a stage by
// throwing StageFailure (for example when a stage point leaves the chart);
// the step is then retried with half the step size.

#include <cstddef>
#include <functional>
#include <string>

#include "warpgeo/metric_chart.hpp"

namespace warpgeo::ode {

enum class Termination { Completed, DomainExit, StepSizeUnderflow, PotentialSingularity, MaxSteps };

std::string_view to_string(Termination t);

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-12;
  double max_step = 0.5;
  // When > 0, accepted steps are shortened so that every multiple of
  // sample_interval (counted from t0) is hit exactly.
  double sample_interval = 0.0;
  std::size_t max_steps = 5'000'000;
};

struct StageFailure {
  Termination reason;
  std::string message;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double max_error_estimate = 0.0;
};

struct Result {
  Termination termination = Termination::Completed;
  std::string message;
  Stats stats;
};

using Rhs = std::function<void(double t, const Vec& y, Vec& dydt)>;
using Observer = std::function<void(double t, const Vec& y, const Vec& dydt)>;

// Integrates from t0 to t1 > t0. The observer sees the initial point and
// every accepted step.
Result integrate(const Rhs& rhs, const Vec& y0, double t0, double t1, const Options& opts,
                 const Observer& observer);

}  // namespace warpgeo::ode
