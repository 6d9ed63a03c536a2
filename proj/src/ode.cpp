#include "warpgeo/ode.hpp"

#include <algorithm>
#include <cmath>

#include "warpgeo/errors.hpp"

namespace warpgeo::ode {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::DomainExit: return "DomainExit";
    case Termination::StepSizeUnderflow: return "StepSizeUnderflow";
    case Termination::PotentialSingularity: return "PotentialSingularity";
    case Termination::MaxSteps: return "MaxSteps";
  }
  return "Unknown";
}

namespace {

// Dormand–Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace

Result integrate(const Rhs& rhs, const Vec& y0, double t0, double t1, const Options& opts,
                 const Observer& observer) {
  if (!(t1 >= t0)) throw Error(ErrorCode::InvalidArgument, "integration end must not precede start");
  Result res;
  const Eigen::Index n = y0.size();
  Vec y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

  try {
    rhs(t0, y, k1);
  } catch (const StageFailure& f) {
    res.termination = f.reason;
    res.message = "initial state rejected: " + f.message;
    return res;
  }
  ++res.stats.rhs_evaluations;
  if (observer) observer(t0, y, k1);

  double t = t0;
  double h = std::min(opts.initial_step, opts.max_step);
  std::size_t next_sample = 1;
  bool last_failure_was_stage = false;
  Termination stage_reason = Termination::StepSizeUnderflow;
  std::string stage_message;

  while (t < t1) {
    if (res.stats.accepted + res.stats.rejected >= opts.max_steps) {
      res.termination = Termination::MaxSteps;
      res.message = "step budget exhausted";
      return res;
    }
    if (h < opts.min_step) {
      if (last_failure_was_stage) {
        res.termination = stage_reason;
        res.message = stage_message;
      } else {
        res.termination = Termination::StepSizeUnderflow;
        res.message = "step size fell below minimum at t = " + std::to_string(t);
      }
      return res;
    }
    double step = std::min(h, t1 - t);
    bool lands_on_sample = false;
    double target = t1;
    if (opts.sample_interval > 0.0) {
      const double ts = t0 + static_cast<double>(next_sample) * opts.sample_interval;
      if (ts <= t1 && t + step >= ts - 1e-14 * std::max(1.0, std::abs(ts))) {
        step = ts - t;
        target = ts;
        lands_on_sample = true;
      }
    }
    const bool lands_on_end = !lands_on_sample && step >= t1 - t;

    double err_norm = 0.0;
    try {
      ytmp = y + step * (a21 * k1);
      rhs(t + c2 * step, ytmp, k2);
      ytmp = y + step * (a31 * k1 + a32 * k2);
      rhs(t + c3 * step, ytmp, k3);
      ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(t + c4 * step, ytmp, k4);
      ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(t + c5 * step, ytmp, k5);
      ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(t + step, ytmp, k6);
      ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      if (!all_finite(ynew)) throw StageFailure{Termination::StepSizeUnderflow, "non-finite state"};
      rhs(t + step, ynew, k7);
      res.stats.rhs_evaluations += 6;
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = err[i] / sc;
        acc += r * r;
      }
      err_norm = std::sqrt(acc / static_cast<double>(n));
      if (!std::isfinite(err_norm)) throw StageFailure{Termination::StepSizeUnderflow, "non-finite error estimate"};
    } catch (const StageFailure& f) {
      ++res.stats.rejected;
      last_failure_was_stage = true;
      stage_reason = f.reason;
      stage_message = f.message;
      h = 0.5 * step;
      continue;
    }

    if (err_norm <= 1.0) {
      t = lands_on_sample ? target : (lands_on_end ? t1 : t + step);
      y = ynew;
      k1 = k7;
      ++res.stats.accepted;
      res.stats.max_error_estimate = std::max(res.stats.max_error_estimate, err_norm);
      last_failure_was_stage = false;
      if (lands_on_sample) ++next_sample;
      if (observer) observer(t, y, k1);
      const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      const double proposed = step * factor;
      // A step shortened to hit a sample point does not shrink the working step size.
      h = std::min(opts.max_step, step < h ? std::max(h, proposed) : proposed);
    } else {
      ++res.stats.rejected;
      last_failure_was_stage = false;
      h = step * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
    }
  }
  res.termination = Termination::Completed;
  return res;
}

}  // namespace warpgeo::ode
