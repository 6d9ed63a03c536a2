#include "warpgeo/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "warpgeo/curvature.hpp"
#include "warpgeo/detail/trajectory.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo {

namespace detail {

Trajectory run_recorded(const ode::Rhs& rhs, const Vec& y0, double t0, double t1, const ode::Options& opts,
                        const Reassemble& reassemble, std::vector<std::string> monitor_names,
                        const Monitors& monitors) {
  Trajectory traj;
  traj.monitor_names = std::move(monitor_names);
  traj.monitor_values.resize(traj.monitor_names.size());
  std::vector<double> buf(traj.monitor_names.size());
  auto observer = [&](double t, const Vec& y, const Vec& dydt) {
    GeodesicState s;
    Vec a;
    reassemble(y, dydt, s.x, s.v, a);
    s.tau = t;
    if (monitors) {
      monitors(s, buf);
      for (std::size_t i = 0; i < buf.size(); ++i) traj.monitor_values[i].push_back(buf[i]);
    }
    traj.samples.push_back(std::move(s));
    traj.accelerations.push_back(std::move(a));
  };
  const ode::Result res = ode::integrate(rhs, y0, t0, t1, opts, observer);
  traj.stats = res.stats;
  traj.termination = res.termination;
  traj.message = res.message;
  return traj;
}

}  // namespace detail

GeodesicState Trajectory::state_at(double tau) const {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  if (tau < samples.front().tau || tau > samples.back().tau)
    throw Error(ErrorCode::InvalidArgument, "tau outside the integrated range");
  auto it = std::lower_bound(samples.begin(), samples.end(), tau,
                             [](const GeodesicState& s, double t) { return s.tau < t; });
  std::size_t hi = static_cast<std::size_t>(it - samples.begin());
  if (hi < samples.size() && samples[hi].tau == tau) return samples[hi];
  const std::size_t lo = hi - 1;
  const GeodesicState& s0 = samples[lo];
  const GeodesicState& s1 = samples[hi];
  const double h = s1.tau - s0.tau;
  const double s = (tau - s0.tau) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  GeodesicState out;
  out.tau = tau;
  out.x = h00 * s0.x + h10 * h * s0.v + h01 * s1.x + h11 * h * s1.v;
  out.v = h00 * s0.v + h10 * h * accelerations[lo] + h01 * s1.v + h11 * h * accelerations[hi];
  return out;
}

std::size_t Trajectory::find_sample(double tau, double tol) const {
  auto it = std::lower_bound(samples.begin(), samples.end(), tau - tol,
                             [](const GeodesicState& s, double t) { return s.tau < t; });
  if (it != samples.end() && std::abs(it->tau - tau) <= tol) return static_cast<std::size_t>(it - samples.begin());
  return samples.size();
}

bool Trajectory::has_monitor(const std::string& name) const {
  return std::find(monitor_names.begin(), monitor_names.end(), name) != monitor_names.end();
}

const std::vector<double>& Trajectory::monitor(const std::string& name) const {
  auto it = std::find(monitor_names.begin(), monitor_names.end(), name);
  if (it == monitor_names.end()) throw Error(ErrorCode::InvalidArgument, "no monitor named " + name);
  return monitor_values[static_cast<std::size_t>(it - monitor_names.begin())];
}

double Trajectory::drift(const std::string& name) const {
  const auto& m = monitor(name);
  if (m.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(m.begin(), m.end());
  return *hi - *lo;
}

double Trajectory::relative_drift(const std::string& name) const {
  const auto& m = monitor(name);
  if (m.empty()) return 0.0;
  return drift(name) / (1.0 + std::abs(m.front()));
}

namespace {

void check_killing(const std::vector<KillingCandidate>& fields, const Vec& x) {
  const Vec pts[] = {x};
  for (const auto& k : fields) {
    const double r = killing_residual(k, pts);
    if (!(r < 1e-8)) throw Error(ErrorCode::NotKilling, k.label + " has killing residual " + std::to_string(r));
  }
}

std::vector<std::string> charge_names(const std::vector<KillingCandidate>& fields) {
  std::vector<std::string> out;
  for (const auto& k : fields) out.push_back("charge:" + k.label);
  return out;
}

void split_state(const Vec& y, const Vec& dydt, Vec& x, Vec& v, Vec& a) {
  const Eigen::Index n = y.size() / 2;
  x = y.head(n);
  v = y.tail(n);
  a = dydt.tail(n);
}

void validate_init(const MetricChart& chart, const GeodesicState& init, double tau_end) {
  if (init.x.size() != chart.dim() || init.v.size() != chart.dim())
    throw Error(ErrorCode::InvalidArgument, "initial state has wrong dimension");
  if (!chart.in_domain(init.x)) throw Error(ErrorCode::OutOfDomain, "initial point outside " + chart.label());
  if (!(tau_end > init.tau)) throw Error(ErrorCode::InvalidArgument, "tau_end must exceed the initial tau");
}

// Geodesic acceleration, reporting chart exits as stage failures.
Vec geodesic_acceleration(const MetricChart& chart, const Vec& x, const Vec& v, Mat* g, Mat* ginv) {
  if (!chart.in_domain(x)) throw ode::StageFailure{ode::Termination::DomainExit, "left the domain of " + chart.label()};
  try {
    const Christoffel gam = detail::christoffel_unchecked(chart, x, g, ginv);
    return -gam.contract(v, v);
  } catch (const Error& e) {
    throw ode::StageFailure{ode::Termination::StepSizeUnderflow, e.what()};
  }
}

}  // namespace

Trajectory integrate_direct(const MetricChart& chart, const GeodesicState& init, double tau_end,
                            const GeodesicOptions& opts) {
  validate_init(chart, init, tau_end);
  check_killing(opts.killing, init.x);
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << init.x, init.v;
  auto rhs = [&](double, const Vec& y, Vec& dydt) {
    const Vec x = y.head(n), v = y.tail(n);
    dydt.resize(2 * n);
    dydt.head(n) = v;
    dydt.tail(n) = geodesic_acceleration(chart, x, v, nullptr, nullptr);
  };
  std::vector<std::string> names{"energy"};
  for (auto& s : charge_names(opts.killing)) names.push_back(s);
  auto monitors = [&](const GeodesicState& s, std::vector<double>& out) {
    const Mat g = chart.components(s.x);
    out[0] = s.v.dot(g * s.v);
    for (std::size_t i = 0; i < opts.killing.size(); ++i) out[i + 1] = s.v.dot(g * field_value(opts.killing[i], s.x));
  };
  return detail::run_recorded(rhs, y0, init.tau, tau_end, opts.ode, split_state, std::move(names), monitors);
}

double clairaut_charge(const MetricChart& chart, const GeodesicState& state, const KillingCandidate& k) {
  check_killing({k}, state.x);
  return state.v.dot(chart.components(state.x) * field_value(k, state.x));
}

Trajectory integrate_mechanical(const MetricChart& chart, const ScalarField& potential, const GeodesicState& init,
                                double tau_end, const GeodesicOptions& opts) {
  validate_init(chart, init, tau_end);
  check_killing(opts.killing, init.x);
  const int n = chart.dim();
  Vec y0(2 * n);
  y0 << init.x, init.v;
  auto rhs = [&](double, const Vec& y, Vec& dydt) {
    const Vec x = y.head(n), v = y.tail(n);
    Mat ginv;
    Vec a = geodesic_acceleration(chart, x, v, nullptr, &ginv);
    const ScalarJet pv = evaluate_scalar(potential, x, 1);
    if (!std::isfinite(pv.value) || !pv.gradient.allFinite())
      throw ode::StageFailure{ode::Termination::PotentialSingularity, "potential is singular"};
    a -= ginv * pv.gradient;
    dydt.resize(2 * n);
    dydt.head(n) = v;
    dydt.tail(n) = a;
  };
  std::vector<std::string> names{"mechanical_energy", "energy"};
  for (auto& s : charge_names(opts.killing)) names.push_back(s);
  auto monitors = [&](const GeodesicState& s, std::vector<double>& out) {
    const Mat g = chart.components(s.x);
    const double vv = s.v.dot(g * s.v);
    out[0] = 0.5 * vv + evaluate_scalar(potential, s.x, 1).value;
    out[1] = vv;
    for (std::size_t i = 0; i < opts.killing.size(); ++i) out[i + 2] = s.v.dot(g * field_value(opts.killing[i], s.x));
  };
  return detail::run_recorded(rhs, y0, init.tau, tau_end, opts.ode, split_state, std::move(names), monitors);
}

double sup_difference(const Trajectory& a, const Trajectory& b, bool include_velocity) {
  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& s : a.samples) {
    const double tol = 1e-9 * std::max(1.0, std::abs(s.tau));
    const std::size_t j = b.find_sample(s.tau, tol);
    if (j == b.samples.size()) continue;
    ++matched;
    const GeodesicState& t = b.samples[j];
    if (s.x.size() != t.x.size()) throw Error(ErrorCode::InvalidArgument, "trajectories have different dimensions");
    worst = std::max(worst, (s.x - t.x).cwiseAbs().maxCoeff());
    if (include_velocity) worst = std::max(worst, (s.v - t.v).cwiseAbs().maxCoeff());
  }
  if (matched == 0) throw Error(ErrorCode::InvalidArgument, "trajectories share no sample times");
  return worst;
}

}  // namespace warpgeo
