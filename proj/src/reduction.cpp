#include "warpgeo/reduction.hpp"

#include <cmath>

#include "warpgeo/curvature.hpp"
#include "warpgeo/detail/trajectory.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo {

double ReducedGeodesicProblem::potential(const Vec& base_point) const {
  if (mode != FiberMode::Clairaut) throw Error(ErrorCode::InvalidArgument, "potential needs a one-dimensional fiber");
  return 0.5 * clairaut * clairaut / c0 / warping_value(spec, base_point);
}

ScalarField ReducedGeodesicProblem::potential_field() const {
  if (mode != FiberMode::Clairaut) throw Error(ErrorCode::InvalidArgument, "potential needs a one-dimensional fiber");
  const double k = 0.5 * clairaut * clairaut / c0;
  ScalarField w = spec.warping;
  return [k, w](std::span<const Jet> x) { return k / w(x); };
}

namespace {

void validate(const WarpedSpec& spec, const GeodesicState& init) {
  if (init.x.size() != spec.dim() || init.v.size() != spec.dim())
    throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
  if (!spec.base.in_domain(base_part(spec, init.x)) || !spec.fiber.in_domain(fiber_part(spec, init.x)))
    throw Error(ErrorCode::OutOfDomain, "initial point outside " + spec.label);
  if (!(warping_value(spec, base_part(spec, init.x)) > 0.0))
    throw Error(ErrorCode::NonPositiveWarping, "warping is not positive at the initial point");
}

double full_energy(const WarpedSpec& spec, const GeodesicState& s) {
  const int d = spec.base_dim();
  const Vec x = s.x.head(d), y = s.x.tail(spec.fiber_dim());
  const Vec xv = s.v.head(d), yv = s.v.tail(spec.fiber_dim());
  return xv.dot(spec.base.components(x) * xv) + warping_value(spec, x) * yv.dot(spec.fiber.components(y) * yv);
}

struct BaseEval {
  Vec accel;  // −Γ_L(x′, x′)
  Mat hinv;
  double w = 0.0;
  Vec dw;     // ∂w
};

BaseEval eval_base(const WarpedSpec& spec, const Vec& x, const Vec& xv) {
  if (!spec.base.in_domain(x))
    throw ode::StageFailure{ode::Termination::DomainExit, "left the base domain of " + spec.label};
  BaseEval out;
  const ScalarJet w = evaluate_scalar(spec.warping, x, 1);
  if (!std::isfinite(w.value) || !(w.value > 0.0) || !w.gradient.allFinite())
    throw ode::StageFailure{ode::Termination::PotentialSingularity, "warping reached zero"};
  try {
    const Christoffel gam = detail::christoffel_unchecked(spec.base, x, nullptr, &out.hinv);
    out.accel = -gam.contract(xv, xv);
  } catch (const Error& e) {
    throw ode::StageFailure{ode::Termination::StepSizeUnderflow, e.what()};
  }
  out.w = w.value;
  out.dw = w.gradient;
  return out;
}

// An attracting potential drives w to zero without any stage failing; the
// step size collapses instead. Relabel that case.
Trajectory collapse_check(const WarpedSpec& spec, Trajectory tr) {
  if (tr.termination != ode::Termination::StepSizeUnderflow || tr.samples.size() < 2) return tr;
  const int d = spec.base_dim();
  const double w0 = warping_value(spec, tr.samples.front().x.head(d));
  const double w1 = warping_value(spec, tr.samples.back().x.head(d));
  if (w1 < 1e-6 * w0) {
    tr.termination = ode::Termination::PotentialSingularity;
    tr.message = "warping collapsed to " + std::to_string(w1) + "; " + tr.message;
  }
  return tr;
}

}  // namespace

ReducedGeodesicProblem reduce(const WarpedSpec& spec, const GeodesicState& init) {
  if (spec.fiber_dim() != 1)
    throw Error(ErrorCode::FiberNotOneDimensional,
                "fiber of " + spec.label + " has dimension " + std::to_string(spec.fiber_dim()));
  validate(spec, init);
  const Vec y = fiber_part(spec, init.x);
  const double g = spec.fiber.components(y)(0, 0);
  if (std::abs(std::abs(g) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "fiber metric must be ±dy²");
  ReducedGeodesicProblem p{spec, FiberMode::Clairaut, 1.0, 0.0, 0.0, init};
  p.mode = FiberMode::Clairaut;
  p.c0 = g > 0 ? 1.0 : -1.0;
  p.init = init;
  const double w = warping_value(spec, base_part(spec, init.x));
  p.clairaut = w * p.c0 * init.v[spec.base_dim()];
  p.energy = full_energy(spec, init);
  return p;
}

ReducedGeodesicProblem reduce_coupled(const WarpedSpec& spec, const GeodesicState& init) {
  validate(spec, init);
  ReducedGeodesicProblem p{spec, FiberMode::Clairaut, 1.0, 0.0, 0.0, init};
  p.mode = FiberMode::Coupled;
  p.init = init;
  p.energy = full_energy(spec, init);
  if (spec.fiber_dim() == 1) {
    const double g = spec.fiber.components(fiber_part(spec, init.x))(0, 0);
    p.c0 = g > 0 ? 1.0 : -1.0;
    p.clairaut = warping_value(spec, base_part(spec, init.x)) * g * init.v[spec.base_dim()];
  }
  return p;
}

Trajectory integrate_reduced(const ReducedGeodesicProblem& problem, double tau_end, const ode::Options& opts) {
  const WarpedSpec& spec = problem.spec;
  const int d = spec.base_dim(), k = spec.fiber_dim(), n = d + k;
  const GeodesicState& init = problem.init;
  if (!(tau_end > init.tau)) throw Error(ErrorCode::InvalidArgument, "tau_end must exceed the initial tau");

  std::vector<std::string> names{"energy", "fiber_speed_law"};
  if (problem.mode == FiberMode::Clairaut) names.push_back("clairaut");

  if (problem.mode == FiberMode::Clairaut) {
    const double c0 = problem.c0, c1 = problem.clairaut;
    const double k2 = c1 * c1 / c0;
    // state (x, x′, y)
    Vec y0(2 * d + 1);
    y0 << init.x.head(d), init.v.head(d), init.x[d];
    auto rhs = [&](double, const Vec& s, Vec& ds) {
      const Vec x = s.head(d), xv = s.segment(d, d);
      const BaseEval b = eval_base(spec, x, xv);
      ds.resize(2 * d + 1);
      ds.head(d) = xv;
      ds.segment(d, d) = b.accel + 0.5 * k2 / (b.w * b.w) * (b.hinv * b.dw);
      ds[2 * d] = c1 / (c0 * b.w);
    };
    auto reassemble = [&](const Vec& s, const Vec& ds, Vec& x, Vec& v, Vec& a) {
      x.resize(n);
      v.resize(n);
      a.resize(n);
      x << s.head(d), s[2 * d];
      v << s.segment(d, d), ds[2 * d];
      const double w = warping_value(spec, s.head(d));
      const double dwdt = evaluate_scalar(spec.warping, s.head(d), 1).gradient.dot(s.segment(d, d));
      a << ds.segment(d, d), -c1 / (c0 * w * w) * dwdt;
    };
    auto monitors = [&](const GeodesicState& s, std::vector<double>& out) {
      const double w = warping_value(spec, s.x.head(d));
      const double yv = s.v[d];
      out[0] = full_energy(spec, s);
      out[1] = w * (w * c0 * yv * yv) - k2;
      out[2] = w * c0 * yv;
    };
    return collapse_check(spec, detail::run_recorded(rhs, y0, init.tau, tau_end, opts, reassemble, std::move(names), monitors));
  }

  // state (x, x′, y, y′)
  Vec y0(2 * n);
  y0 << init.x.head(d), init.v.head(d), init.x.tail(k), init.v.tail(k);
  auto rhs = [&](double, const Vec& s, Vec& ds) {
    const Vec x = s.head(d), xv = s.segment(d, d), y = s.segment(2 * d, k), yv = s.tail(k);
    const BaseEval b = eval_base(spec, x, xv);
    if (!spec.fiber.in_domain(y))
      throw ode::StageFailure{ode::Termination::DomainExit, "left the fiber domain of " + spec.label};
    Mat g;
    Vec fiber_acc;
    try {
      fiber_acc = -detail::christoffel_unchecked(spec.fiber, y, &g, nullptr).contract(yv, yv);
    } catch (const Error& e) {
      throw ode::StageFailure{ode::Termination::StepSizeUnderflow, e.what()};
    }
    const double dlogw = b.dw.dot(xv) / b.w;
    ds.resize(2 * n);
    ds.head(d) = xv;
    ds.segment(d, d) = b.accel + 0.5 * yv.dot(g * yv) * (b.hinv * b.dw);
    ds.segment(2 * d, k) = yv;
    ds.tail(k) = fiber_acc - dlogw * yv;
  };
  auto reassemble = [&](const Vec& s, const Vec& ds, Vec& x, Vec& v, Vec& a) {
    x.resize(n);
    v.resize(n);
    a.resize(n);
    x << s.head(d), s.segment(2 * d, k);
    v << s.segment(d, d), s.tail(k);
    a << ds.segment(d, d), ds.tail(k);
  };
  auto fiber_charge = [&](const GeodesicState& s) {
    const double w = warping_value(spec, s.x.head(d));
    const Vec yv = s.v.tail(k);
    return w * w * yv.dot(spec.fiber.components(s.x.tail(k)) * yv);
  };
  const double c_init = fiber_charge(init);
  auto monitors = [&](const GeodesicState& s, std::vector<double>& out) {
    out[0] = full_energy(spec, s);
    out[1] = fiber_charge(s) - c_init;
  };
  return collapse_check(spec, detail::run_recorded(rhs, y0, init.tau, tau_end, opts, reassemble, std::move(names), monitors));
}

}  // namespace warpgeo
