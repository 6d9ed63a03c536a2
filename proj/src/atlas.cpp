#include "warpgeo/atlas.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "warpgeo/curvature.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo::atlas {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> numbered(const std::string& stem, int n, int first = 0) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(first + i));
  return out;
}

MetricChart diagonal_constant(std::string label, Signature sig, std::vector<double> diag,
                              std::vector<std::string> names) {
  const int n = static_cast<int>(diag.size());
  MetricFn f = [diag, n](std::span<const Jet>) {
    JetMatrix g(n);
    for (int i = 0; i < n; ++i) g(i, i) = Jet(diag[static_cast<std::size_t>(i)]);
    return g;
  };
  return MetricChart(std::move(label), sig, std::move(f), {}, std::move(names));
}

// sin² products of the nested polar angles starting at `first`.
void fill_sphere_block(JetMatrix& g, std::span<const Jet> x, int first, int n, const Jet& scale) {
  Jet factor = scale;
  for (int i = 0; i < n; ++i) {
    g(first + i, first + i) = factor;
    if (i + 1 < n) factor = factor * square(sin(x[static_cast<std::size_t>(first + i)]));
  }
}

std::vector<std::string> sphere_names(int n) {
  if (n == 1) return {"phi"};
  if (n == 2) return {"theta", "phi"};
  if (n == 3) return {"chi", "theta", "phi"};
  std::vector<std::string> out = numbered("theta", n - 1, 1);
  out.push_back("phi");
  return out;
}

bool angles_ok(const Vec& x, int first, int count) {
  for (int i = 0; i < count; ++i)
    if (!(x[first + i] > 0.0 && x[first + i] < kPi)) return false;
  return true;
}

MetricChart line_chart(std::string label, std::string name, double sign, DomainFn domain = {}) {
  MetricFn f = [sign](std::span<const Jet>) {
    JetMatrix g(1);
    g(0, 0) = Jet(sign);
    return g;
  };
  return MetricChart(std::move(label), sign < 0 ? Signature{1, 0} : Signature{0, 1}, std::move(f), std::move(domain),
                     {std::move(name)});
}

MetricChart schwarzschild_base(double m, bool exterior) {
  MetricFn f = [m](std::span<const Jet> x) {
    const Jet a = 1.0 - 2.0 * m / x[0];
    JetMatrix g(2);
    g(0, 0) = 1.0 / a;
    g(1, 1) = -a;
    return g;
  };
  DomainFn d = exterior ? DomainFn([m](const Vec& x) { return x[0] > 2.0 * m; })
                        : DomainFn([m](const Vec& x) { return x[0] > 0.0 && x[0] < 2.0 * m; });
  return MetricChart(exterior ? "schwarzschild_L" : "schwarzschild_L-", {1, 1}, std::move(f), std::move(d),
                     {"r", "t"});
}

ScalarField r_squared() {
  return [](std::span<const Jet> x) { return square(x[0]); };
}

void check_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorCode::BadParams, "mass must be positive");
}

// Spherical base (r, θ, φ) of the static splits, dr²/(1 − 2m/r) + r²dσ².
MetricChart static_base(double m, bool exterior) {
  MetricFn f = [m](std::span<const Jet> x) {
    JetMatrix g(3);
    g(0, 0) = 1.0 / (1.0 - 2.0 * m / x[0]);
    g(1, 1) = square(x[0]);
    g(2, 2) = square(x[0] * sin(x[1]));
    return g;
  };
  DomainFn d = [m, exterior](const Vec& x) {
    const bool r_ok = exterior ? x[0] > 2.0 * m : (x[0] > 0.0 && x[0] < 2.0 * m);
    return r_ok && x[1] > 0.0 && x[1] < kPi;
  };
  return MetricChart(exterior ? "schwarzschild_space" : "schwarzschild_space-", exterior ? Signature{0, 3} : Signature{1, 2},
                     std::move(f), std::move(d), {"r", "theta", "phi"});
}

}  // namespace

MetricChart minkowski(int p, int q) {
  if (p < 0 || q < 0 || p + q < 1 || p + q > Jet::kMaxVars)
    throw Error(ErrorCode::BadParams, "minkowski needs p, q >= 0 and 1 <= p + q <= 8");
  std::vector<double> diag(static_cast<std::size_t>(p), -1.0);
  diag.resize(static_cast<std::size_t>(p + q), 1.0);
  std::vector<std::string> names;
  if (p == 1 && q == 3)
    names = {"t", "x", "y", "z"};
  else if (p == 0 && q == 3)
    names = {"x", "y", "z"};
  else
    names = numbered("x", p + q);
  const std::string label = p == 0 ? "euclidean(" + std::to_string(q) + ")"
                                   : "minkowski(" + std::to_string(p) + "," + std::to_string(q) + ")";
  return diagonal_constant(label, {p, q}, std::move(diag), std::move(names));
}

MetricChart euclidean(int n) { return minkowski(0, n); }

MetricChart round_sphere(int n, double radius) {
  if (n < 1 || n > Jet::kMaxVars) throw Error(ErrorCode::BadParams, "sphere dimension must be in [1, 8]");
  if (!(radius > 0.0)) throw Error(ErrorCode::BadParams, "sphere radius must be positive");
  MetricFn f = [n, radius](std::span<const Jet> x) {
    JetMatrix g(n);
    fill_sphere_block(g, x, 0, n, Jet(radius * radius));
    return g;
  };
  DomainFn d = [n](const Vec& x) { return angles_ok(x, 0, n - 1); };
  return MetricChart("sphere(" + std::to_string(n) + ")", {0, n}, std::move(f), std::move(d), sphere_names(n));
}

MetricChart hyperbolic_space(int n) {
  if (n < 2 || n > Jet::kMaxVars) throw Error(ErrorCode::BadParams, "hyperbolic space dimension must be in [2, 8]");
  MetricFn f = [n](std::span<const Jet> x) {
    JetMatrix g(n);
    g(0, 0) = Jet(1.0);
    fill_sphere_block(g, x, 1, n - 1, square(sinh(x[0])));
    return g;
  };
  DomainFn d = [n](const Vec& x) { return x[0] > 0.0 && angles_ok(x, 1, n - 2); };
  std::vector<std::string> names{"chi"};
  for (auto& s : sphere_names(n - 1)) names.push_back(n - 1 == 3 && s == "chi" ? "psi" : s);
  return MetricChart("hyperbolic(" + std::to_string(n) + ")", {0, n}, std::move(f), std::move(d), std::move(names));
}

WarpedSpec polar_euclidean(int n) {
  if (n < 2 || n > Jet::kMaxVars) throw Error(ErrorCode::BadParams, "polar euclidean dimension must be in [2, 8]");
  return {line_chart("radial", "r", 1.0, [](const Vec& x) { return x[0] > 0.0; }), round_sphere(n - 1), r_squared(),
          "polar_euclidean(" + std::to_string(n) + ")"};
}

// Pseudo-spheres.

PseudoSphere pseudo_sphere(int p, int q, double c) {
  if (p < 0 || q < 0 || p + q < 2 || p + q > Jet::kMaxVars + 1)
    throw Error(ErrorCode::BadParams, "pseudo-sphere needs p, q >= 0 and 2 <= p + q <= 9");
  if (!(c != 0.0) || !std::isfinite(c)) throw Error(ErrorCode::BadParams, "pseudo-sphere needs c != 0");
  if (c > 0 && q < 1) throw Error(ErrorCode::BadParams, "Q = c > 0 has no points when q = 0");
  if (c < 0 && p < 1) throw Error(ErrorCode::BadParams, "Q = c < 0 has no points when p = 0");
  return {p, q, c};
}

std::vector<Jet> PseudoSphere::embed(std::span<const Jet> u) const {
  const int n = p + q;
  const int solved = solved_index();
  Jet qprime(0.0);
  std::vector<Jet> out;
  for (int a = 0, i = 0; a < n; ++a) {
    if (a == solved) {
      out.emplace_back(0.0);
      continue;
    }
    const double eta = a < p ? -1.0 : 1.0;
    qprime += eta * square(u[static_cast<std::size_t>(i)]);
    out.push_back(u[static_cast<std::size_t>(i)]);
    ++i;
  }
  out[static_cast<std::size_t>(solved)] = c > 0 ? sqrt(c - qprime) : sqrt(qprime - c);
  return out;
}

Vec PseudoSphere::embed(const Vec& u) const {
  std::vector<Jet> ju;
  for (int i = 0; i < u.size(); ++i) ju.emplace_back(u[i]);
  const std::vector<Jet> x = embed(std::span<const Jet>(ju));
  Vec out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[i].value();
  return out;
}

MetricChart PseudoSphere::chart() const {
  const int n = p + q, m = n - 1, solved = solved_index();
  std::vector<double> eta;
  for (int a = 0; a < n; ++a)
    if (a != solved) eta.push_back(a < p ? -1.0 : 1.0);
  const double sigma = c > 0 ? 1.0 : -1.0;
  const double cc = c;
  MetricFn f = [eta, m, sigma, cc](std::span<const Jet> u) {
    Jet qprime(0.0);
    for (int i = 0; i < m; ++i) qprime += eta[static_cast<std::size_t>(i)] * square(u[static_cast<std::size_t>(i)]);
    const Jet s2 = sigma * (cc - qprime);
    std::vector<Jet> eu;
    for (int i = 0; i < m; ++i) eu.push_back(eta[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)]);
    JetMatrix g(m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        Jet v = sigma * eu[static_cast<std::size_t>(i)] * eu[static_cast<std::size_t>(j)] / s2;
        if (i == j) v += eta[static_cast<std::size_t>(i)];
        g.set_symmetric(i, j, v);
      }
    return g;
  };
  DomainFn d = [eta, m, sigma, cc](const Vec& u) {
    double qprime = 0.0;
    for (int i = 0; i < m; ++i) qprime += eta[static_cast<std::size_t>(i)] * u[i] * u[i];
    return sigma * (cc - qprime) > 1e-9 * std::max(1.0, std::abs(cc));
  };
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a)
    if (a != solved) names.push_back("u" + std::to_string(a));
  std::ostringstream label;
  label << "pseudo_sphere(" << p << "," << q << "," << c << ")";
  return MetricChart(label.str(), signature(), std::move(f), std::move(d), std::move(names));
}

KillingCandidate PseudoSphere::killing_field(const Mat& a) const {
  const int n = p + q;
  if (a.rows() != n || a.cols() != n) throw Error(ErrorCode::InvalidArgument, "matrix size does not match the ambient space");
  Vec j(n);
  for (int i = 0; i < n; ++i) j[i] = i < p ? -1.0 : 1.0;
  if ((a * j.asDiagonal() + j.asDiagonal() * a.transpose()).norm() > 1e-10)
    throw Error(ErrorCode::InvalidArgument, "matrix is not in o(p,q)");
  const PseudoSphere self = *this;
  const int solved = solved_index();
  VectorField f = [self, a, n, solved](std::span<const Jet> u) {
    const std::vector<Jet> x = self.embed(u);
    std::vector<Jet> out;
    for (int r = 0; r < n; ++r) {
      if (r == solved) continue;
      Jet acc(0.0);
      for (int k = 0; k < n; ++k)
        if (a(r, k) != 0.0) acc += a(r, k) * x[static_cast<std::size_t>(k)];
      out.push_back(acc);
    }
    return out;
  };
  return {std::move(f), chart(), "A x"};
}

WarpedSpec hyperbolic_warped(int n, bool doubled) {
  if (n < 2 || n > Jet::kMaxVars) throw Error(ErrorCode::BadParams, "hyperbolic warped dimension must be in [2, 8]");
  const double k = doubled ? 2.0 : 1.0;
  MetricChart fiber = n - 1 == 1 ? diagonal_constant("line", {0, 1}, {1.0}, {"x"})
                                 : diagonal_constant("euclidean(" + std::to_string(n - 1) + ")", {0, n - 1},
                                                     std::vector<double>(static_cast<std::size_t>(n - 1), 1.0),
                                                     numbered("x", n - 1, 1));
  ScalarField w = [k](std::span<const Jet> x) { return exp(k * x[0]); };
  return {line_chart("line", "t", 1.0), std::move(fiber), std::move(w),
          std::string(doubled ? "hyperbolic_warped_e2t(" : "hyperbolic_warped(") + std::to_string(n) + ")"};
}

WarpedSpec robertson_walker(ScalarField w, MetricChart fiber, std::string label) {
  if (!fiber.signature().definite() || fiber.signature().negative != 0)
    throw Error(ErrorCode::BadParams, "Robertson-Walker fiber must be Riemannian");
  return {line_chart("time", "t", -1.0, [](const Vec& x) { return x[0] > 0.0; }), std::move(fiber), std::move(w),
          std::move(label)};
}

WarpedSpec robertson_walker(ScalarField w, int k, std::string label) {
  switch (k) {
    case 0: return robertson_walker(std::move(w), euclidean(3), std::move(label));
    case 1: return robertson_walker(std::move(w), round_sphere(3), std::move(label));
    case -1: return robertson_walker(std::move(w), hyperbolic_space(3), std::move(label));
    default: throw Error(ErrorCode::BadParams, "k must be -1, 0 or 1");
  }
}

MetricChart deformed_fiber() {
  MetricFn f = [](std::span<const Jet> x) {
    JetMatrix g(3);
    g(0, 0) = Jet(1.0);
    g(1, 1) = Jet(1.0);
    g(2, 2) = 1.0 + square(x[0]);
    return g;
  };
  return MetricChart("deformed_fiber", {0, 3}, std::move(f), {}, {"x", "y", "z"});
}

WarpedSpec naive_gravity() {
  MetricChart base = diagonal_constant("euclidean(3)", {0, 3}, {1.0, 1.0, 1.0}, {"x", "y", "z"});
  MetricFn f = [](std::span<const Jet>) {
    JetMatrix g(3);
    for (int i = 0; i < 3; ++i) g(i, i) = Jet(1.0);
    return g;
  };
  MetricChart punctured("punctured_euclidean(3)", {0, 3}, std::move(f), [](const Vec& x) { return x.norm() > 0.0; },
                        {"x", "y", "z"});
  ScalarField w = [](std::span<const Jet> x) { return sqrt(square(x[0]) + square(x[1]) + square(x[2])); };
  return {std::move(punctured), line_chart("time", "t", -1.0), std::move(w), "naive_gravity"};
}

WarpedSpec schwarzschild_exterior(double m) {
  check_mass(m);
  return {schwarzschild_base(m, true), round_sphere(2), r_squared(), "schwarzschild"};
}

WarpedSpec schwarzschild_equatorial(double m) {
  check_mass(m);
  return {schwarzschild_base(m, true), diagonal_constant("circle", {0, 1}, {1.0}, {"phi"}), r_squared(),
          "schwarzschild_equatorial"};
}

WarpedSpec schwarzschild_blackhole(double m) {
  check_mass(m);
  return {schwarzschild_base(m, false), round_sphere(2), r_squared(), "schwarzschild_blackhole"};
}

WarpedSpec schwarzschild_static(double m) {
  check_mass(m);
  ScalarField w = [m](std::span<const Jet> x) { return 1.0 - 2.0 * m / x[0]; };
  return {static_base(m, true), line_chart("time", "t", -1.0), std::move(w), "schwarzschild_static"};
}

WarpedSpec schwarzschild_blackhole_static(double m) {
  check_mass(m);
  ScalarField w = [m](std::span<const Jet> x) { return 2.0 * m / x[0] - 1.0; };
  return {static_base(m, false), line_chart("line", "t", 1.0), std::move(w), "schwarzschild_blackhole_static"};
}

// Kruskal.

KruskalChart kruskal(double m) {
  check_mass(m);
  return KruskalChart{m};
}

double KruskalChart::r_of_u(double u) const {
  if (!(u > -1.0) || !std::isfinite(u)) throw Error(ErrorCode::OutOfDomain, "Kruskal chart needs xy > -1");
  const double m2 = 2.0 * mass;
  auto f = [m2](double r) { return (r / m2 - 1.0) * std::exp(r / m2); };
  if (u == 0.0) return m2;
  double hi = m2;
  while (f(hi) < u) hi *= 2.0;
  double lo = 0.0;
  double r = hi;
  for (int it = 0; it < 200; ++it) {
    const double fr = f(r) - u;
    if (fr > 0.0)
      hi = r;
    else
      lo = r;
    const double d1 = r / (m2 * m2) * std::exp(r / m2);
    double next = d1 > 0.0 ? r - fr / d1 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 1e-13 * std::max(1.0, r)) return next;
    r = next;
  }
  return r;
}

Jet KruskalChart::r_of_u(const Jet& u) const {
  const double r = r_of_u(u.value());
  const double m2 = 2.0 * mass;
  const double e = std::exp(r / m2);
  const double f1 = r / (m2 * m2) * e;
  const double f2 = e / (m2 * m2) * (1.0 + r / m2);
  return Jet::chain(u, r, 1.0 / f1, -f2 / (f1 * f1 * f1));
}

double KruskalChart::F(double u) const {
  const double r = r_of_u(u);
  return 32.0 * mass * mass * mass / r * std::exp(-r / (2.0 * mass));
}

Jet KruskalChart::F(const Jet& u) const {
  const Jet r = r_of_u(u);
  return 32.0 * mass * mass * mass / r * exp(-r / (2.0 * mass));
}

Vec KruskalChart::transition(double r, double t) const {
  if (!(r > 2.0 * mass)) throw Error(ErrorCode::OutOfDomain, "transition map needs r > 2m");
  const double s = std::sqrt(r / (2.0 * mass) - 1.0);
  Vec out(2);
  out << s * std::exp((r + t) / (4.0 * mass)), s * std::exp((r - t) / (4.0 * mass));
  return out;
}

std::array<Jet, 2> KruskalChart::transition(const Jet& r, const Jet& t) const {
  const Jet s = sqrt(r / (2.0 * mass) - 1.0);
  return {s * exp((r + t) / (4.0 * mass)), s * exp((r - t) / (4.0 * mass))};
}

MetricChart KruskalChart::chart2() const {
  const KruskalChart self = *this;
  MetricFn f = [self](std::span<const Jet> x) {
    JetMatrix g(2);
    g.set_symmetric(0, 1, 0.5 * self.F(x[0] * x[1]));
    return g;
  };
  DomainFn d = [](const Vec& x) { return x[0] * x[1] > -1.0; };
  return MetricChart("kruskal_L", {1, 1}, std::move(f), std::move(d), {"x", "y"});
}

WarpedSpec KruskalChart::spec4() const {
  const KruskalChart self = *this;
  ScalarField w = [self](std::span<const Jet> x) { return square(self.r_of_u(x[0] * x[1])); };
  return {chart2(), round_sphere(2), std::move(w), "kruskal"};
}

// Polar model.

Vec PolarModel::to_ambient(bool inside, const Vec& point) const {
  const PseudoSphere s = pseudo_sphere(1, n, inside ? -1.0 : 1.0);
  return center + point[0] * s.embed(Vec(point.tail(n)));
}

PolarModel polar_model(const MetricChart& ambient, const Vec& center) {
  const Signature sig = ambient.signature();
  if (sig.negative != 1 || sig.positive < 1 || sig.dim() > Jet::kMaxVars)
    throw Error(ErrorCode::UnsupportedAmbient, "polar model needs a Lorentzian Minkowski ambient");
  if (center.size() != ambient.dim() || !ambient.in_domain(center))
    throw Error(ErrorCode::InvalidArgument, "centre is not a point of the ambient chart");
  const int n = sig.positive;
  Vec eta(n + 1);
  eta[0] = -1.0;
  eta.tail(n).setOnes();
  const Mat expected = eta.asDiagonal();
  for (double shift : {0.0, 0.37, -1.3}) {
    const Vec x = center + Vec::Constant(n + 1, shift);
    if (!ambient.in_domain(x)) continue;
    const MetricJet j = ambient.jet(x, 1);
    double dmax = 0.0;
    for (const Mat& d : j.dg) dmax = std::max(dmax, d.cwiseAbs().maxCoeff());
    if ((j.g - expected).cwiseAbs().maxCoeff() > 1e-12 || dmax > 1e-12)
      throw Error(ErrorCode::UnsupportedAmbient, "polar model is implemented for flat Minkowski space only");
  }
  PolarModel out{n, center,
                 WarpedSpec{line_chart("radial", "rho", -1.0, [](const Vec& x) { return x[0] > 0.0; }),
                            pseudo_sphere(1, n, -1.0).chart(), r_squared(), "polar_interior"},
                 WarpedSpec{line_chart("radial", "rho", 1.0, [](const Vec& x) { return x[0] > 0.0; }),
                            pseudo_sphere(1, n, 1.0).chart(), r_squared(), "polar_exterior"}};
  return out;
}

// Fluids and physicality.

FluidReport perfect_fluid(const WarpedSpec& rw, std::span<const double> t_samples, const Vec& fiber_point) {
  if (rw.base_dim() != 1 || rw.base.signature().negative != 1)
    throw Error(ErrorCode::InvalidArgument, "perfect_fluid needs a Robertson-Walker product with base (t, -dt²)");
  if (rw.fiber.signature().negative != 0) throw Error(ErrorCode::InvalidArgument, "fiber must be Riemannian");
  if (fiber_point.size() != rw.fiber_dim()) throw Error(ErrorCode::InvalidArgument, "fiber point has wrong dimension");
  const MetricChart chart = assemble(rw);
  const int k = rw.fiber_dim(), n = k + 1;
  FluidReport rep;
  for (double t : t_samples) {
    Vec tb(1);
    tb << t;
    const Vec x = join(tb, fiber_point);
    const Mat g = eval_metric(chart, x);
    if (std::abs(g(0, 0) + 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "base metric must be -dt²");
    const Mat T = stress_energy(chart, x);
    const OrthonormalFrame spatial = orthonormal_frame(g.bottomRightCorner(k, k));
    Mat e = Mat::Zero(n, n);
    e(0, 0) = 1.0;
    e.bottomRightCorner(k, k) = spatial.basis;
    const Mat th = e.transpose() * T * e;
    rep.t.push_back(t);
    rep.mu.push_back(th(0, 0));
    rep.offdiag_residual = std::max(rep.offdiag_residual, th.row(0).tail(k).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> es(th.bottomRightCorner(k, k));
    const Vec ev = es.eigenvalues();
    rep.p.push_back(ev.mean());
    rep.isotropy_residual = std::max(rep.isotropy_residual, ev.maxCoeff() - ev.minCoeff());
  }
  if (rep.isotropy_residual > 1e-6)
    throw Error(ErrorCode::NotFluidForm, "spatial stress is anisotropic (spread " +
                                             std::to_string(rep.isotropy_residual) + ")");
  return rep;
}

std::string_view to_string(Physicality p) { return p == Physicality::Physical ? "Physical" : "AntiPhysical"; }

Physicality classify_physical(const WarpedSpec& spec) {
  const Signature b = spec.base.signature(), f = spec.fiber.signature();
  if (b.negative + f.negative != 1) throw Error(ErrorCode::NotLorentzian, spec.label + " is not Lorentzian");
  return b.definite() && f.definite() ? Physicality::Physical : Physicality::AntiPhysical;
}

// Registry.

std::vector<int> Built::base_axes() const {
  std::vector<int> out;
  if (spec)
    for (int i = 0; i < spec->base_dim(); ++i) out.push_back(i);
  return out;
}

std::vector<int> Built::fiber_axes() const {
  std::vector<int> out;
  if (spec)
    for (int i = spec->base_dim(); i < spec->dim(); ++i) out.push_back(i);
  return out;
}

const std::vector<SolutionInfo>& list_solutions() {
  static const std::vector<SolutionInfo> table = {
      {"minkowski", "flat R^{p,q}, Cartesian", {{"p", 1, "negative directions"}, {"q", 3, "positive directions"}}},
      {"euclidean", "flat R^n, Cartesian", {{"n", 3, "dimension"}}},
      {"sphere", "round S^n in polar angles", {{"n", 2, "dimension"}, {"radius", 1, "radius"}}},
      {"hyperbolic_space", "H^n in geodesic polar form", {{"n", 3, "dimension"}}},
      {"polar_euclidean", "R+ x_{r^2} S^{n-1}", {{"n", 3, "dimension"}}},
      {"pseudo_sphere", "S^{p,q}(c) graph chart, curvature 1/c",
       {{"p", 1, "negative ambient directions"}, {"q", 3, "positive ambient directions"}, {"c", 1, "Q(x,x) = c"}}},
      {"hyperbolic_warped", "R x_{e^t} R^{n-1} (doubled=1: e^{2t})",
       {{"n", 2, "dimension"}, {"doubled", 0, "use w = e^{2t}"}}},
      {"robertson_walker", "(t>0, -dt^2) x_w N_k, w = scale t^power",
       {{"k", 0, "fiber curvature -1, 0, 1"}, {"power", 2, "exponent of t"}, {"scale", 1, "prefactor"}}},
      {"robertson_walker_deformed", "(t>0, -dt^2) x_w (dx^2 + dy^2 + (1+x^2)dz^2)",
       {{"power", 2, "exponent of t"}, {"scale", 1, "prefactor"}}},
      {"naive_gravity", "(R^3 minus 0) x_r (R, -dt^2)", {}},
      {"schwarzschild", "exterior (r, t, theta, phi) as L x_{r^2} S^2", {{"m", 1, "mass"}}},
      {"schwarzschild_equatorial", "exterior equatorial plane (r, t, phi) as L x_{r^2} S^1", {{"m", 1, "mass"}}},
      {"schwarzschild_blackhole", "interior L- x_{r^2} S^2, 0 < r < 2m", {{"m", 1, "mass"}}},
      {"schwarzschild_static", "(r, theta, phi) x_{1-2m/r} (R, -dt^2)", {{"m", 1, "mass"}}},
      {"schwarzschild_blackhole_static", "(r, theta, phi) x_{2m/r-1} (R, dt^2), 0 < r < 2m", {{"m", 1, "mass"}}},
      {"kruskal", "F(xy)dxdy + r^2 dsigma^2 over xy > -1", {{"m", 1, "mass"}}},
      {"polar_interior", "inside the light cone of R^{1,n}: (rho, -drho^2) x_{rho^2} H^n", {{"n", 3, "fiber dimension"}}},
      {"polar_exterior", "outside the light cone of R^{1,n}: (rho, drho^2) x_{rho^2} dS^n", {{"n", 3, "fiber dimension"}}},
  };
  return table;
}

namespace {

class ParamReader {
 public:
  ParamReader(const SolutionInfo& info, const Params& given) : info_(info), given_(given) {
    for (const auto& [k, v] : given) {
      const bool known = std::any_of(info.params.begin(), info.params.end(), [&](const ParamInfo& p) { return p.name == k; });
      if (!known) throw Error(ErrorCode::BadParams, "unknown parameter '" + k + "' for " + info.id);
      if (!std::isfinite(v)) throw Error(ErrorCode::BadParams, "parameter '" + k + "' is not finite");
    }
  }
  double real(const std::string& name) const {
    auto it = given_.find(name);
    if (it != given_.end()) return it->second;
    for (const auto& p : info_.params)
      if (p.name == name) return p.default_value;
    throw Error(ErrorCode::BadParams, "no parameter " + name);
  }
  int integer(const std::string& name, int lo, int hi) const {
    const double v = real(name);
    if (v != std::floor(v) || v < lo || v > hi)
      throw Error(ErrorCode::BadParams, "parameter '" + name + "' must be an integer in [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

 private:
  const SolutionInfo& info_;
  const Params& given_;
};

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Angles (θ1, ..., θ_{n−1}, φ) away from the polar singularities.
void sample_angles(std::mt19937_64& rng, Vec& x, int first, int n) {
  for (int i = 0; i < n - 1; ++i) x[first + i] = uniform(rng, 0.4, kPi - 0.4);
  x[first + n - 1] = uniform(rng, -3.0, 3.0);
}

void sample_quadric(std::mt19937_64& rng, Vec& x, int first, int m, double c) {
  const double a = 0.3 * std::sqrt(std::abs(c) / m);
  for (int i = 0; i < m; ++i) x[first + i] = uniform(rng, -a, a);
}

Built finish(std::string id, WarpedSpec spec, std::vector<int> killing, std::function<Vec(std::mt19937_64&)> sampler) {
  MetricChart chart = assemble(spec);
  return Built{std::move(id), std::move(chart), std::move(spec), std::move(killing), std::move(sampler)};
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int i = lo; i < hi; ++i) out.push_back(i);
  return out;
}

ScalarField power_law(double scale, double power) {
  if (!(scale > 0.0)) throw Error(ErrorCode::BadParams, "scale must be positive");
  return [scale, power](std::span<const Jet> x) { return power == 0.0 ? Jet(scale) : scale * pow(x[0], power); };
}

}  // namespace

Built build(const std::string& id, const Params& params) {
  const auto& table = list_solutions();
  auto it = std::find_if(table.begin(), table.end(), [&](const SolutionInfo& s) { return s.id == id; });
  if (it == table.end()) throw Error(ErrorCode::UnknownSolution, "unknown solution id '" + id + "'");
  const ParamReader pr(*it, params);

  if (id == "minkowski" || id == "euclidean") {
    const int p = id == "euclidean" ? 0 : pr.integer("p", 0, 8);
    const int q = id == "euclidean" ? pr.integer("n", 1, 8) : pr.integer("q", 0, 8);
    MetricChart chart = minkowski(p, q);
    const int n = p + q;
    return Built{id, chart, std::nullopt, range(0, n), [n](std::mt19937_64& rng) {
                   Vec x(n);
                   for (int i = 0; i < n; ++i) x[i] = uniform(rng, -2.0, 2.0);
                   return x;
                 }};
  }
  if (id == "sphere") {
    const int n = pr.integer("n", 1, 8);
    return Built{id, round_sphere(n, pr.real("radius")), std::nullopt, {n - 1}, [n](std::mt19937_64& rng) {
                   Vec x(n);
                   sample_angles(rng, x, 0, n);
                   return x;
                 }};
  }
  if (id == "hyperbolic_space") {
    const int n = pr.integer("n", 2, 8);
    return Built{id, hyperbolic_space(n), std::nullopt, {n - 1}, [n](std::mt19937_64& rng) {
                   Vec x(n);
                   x[0] = uniform(rng, 0.3, 1.5);
                   sample_angles(rng, x, 1, n - 1);
                   return x;
                 }};
  }
  if (id == "polar_euclidean") {
    const int n = pr.integer("n", 2, 8);
    return finish(id, polar_euclidean(n), {n - 1}, [n](std::mt19937_64& rng) {
      Vec x(n);
      x[0] = uniform(rng, 0.5, 3.0);
      sample_angles(rng, x, 1, n - 1);
      return x;
    });
  }
  if (id == "pseudo_sphere") {
    const PseudoSphere s = pseudo_sphere(pr.integer("p", 0, 9), pr.integer("q", 0, 9), pr.real("c"));
    const int m = s.dim();
    const double c = s.c;
    return Built{id, s.chart(), std::nullopt, {}, [m, c](std::mt19937_64& rng) {
                   Vec x(m);
                   sample_quadric(rng, x, 0, m, c);
                   return x;
                 }};
  }
  if (id == "hyperbolic_warped") {
    const int n = pr.integer("n", 2, 8);
    const int doubled = pr.integer("doubled", 0, 1);
    return finish(id, hyperbolic_warped(n, doubled == 1), range(1, n), [n](std::mt19937_64& rng) {
      Vec x(n);
      x[0] = uniform(rng, -1.0, 1.0);
      for (int i = 1; i < n; ++i) x[i] = uniform(rng, -2.0, 2.0);
      return x;
    });
  }
  if (id == "robertson_walker") {
    const int k = pr.integer("k", -1, 1);
    WarpedSpec spec = robertson_walker(power_law(pr.real("scale"), pr.real("power")), k);
    std::vector<int> killing = k == 0 ? std::vector<int>{1, 2, 3} : std::vector<int>{3};
    return finish(id, std::move(spec), std::move(killing), [k](std::mt19937_64& rng) {
      Vec x(4);
      x[0] = uniform(rng, 0.5, 2.0);
      if (k == 0) {
        for (int i = 1; i < 4; ++i) x[i] = uniform(rng, -1.0, 1.0);
      } else if (k == 1) {
        sample_angles(rng, x, 1, 3);
      } else {
        x[1] = uniform(rng, 0.3, 1.5);
        sample_angles(rng, x, 2, 2);
      }
      return x;
    });
  }
  if (id == "robertson_walker_deformed") {
    WarpedSpec spec =
        robertson_walker(power_law(pr.real("scale"), pr.real("power")), deformed_fiber(), "robertson_walker_deformed");
    return finish(id, std::move(spec), {2, 3}, [](std::mt19937_64& rng) {
      Vec x(4);
      x[0] = uniform(rng, 0.5, 2.0);
      for (int i = 1; i < 4; ++i) x[i] = uniform(rng, -1.0, 1.0);
      return x;
    });
  }
  if (id == "naive_gravity") {
    return finish(id, naive_gravity(), {3}, [](std::mt19937_64& rng) {
      Vec x(4);
      do {
        for (int i = 0; i < 3; ++i) x[i] = uniform(rng, -2.0, 2.0);
      } while (x.head(3).norm() < 0.5);
      x[3] = uniform(rng, -1.0, 1.0);
      return x;
    });
  }
  if (id == "schwarzschild" || id == "schwarzschild_blackhole") {
    const double m = pr.real("m");
    const bool ext = id == "schwarzschild";
    WarpedSpec spec = ext ? schwarzschild_exterior(m) : schwarzschild_blackhole(m);
    return finish(id, std::move(spec), {1, 3}, [m, ext](std::mt19937_64& rng) {
      Vec x(4);
      x[0] = ext ? uniform(rng, 2.2 * m, 50.0 * m) : uniform(rng, 0.3 * m, 1.8 * m);
      x[1] = uniform(rng, -5.0, 5.0);
      sample_angles(rng, x, 2, 2);
      return x;
    });
  }
  if (id == "schwarzschild_equatorial") {
    const double m = pr.real("m");
    return finish(id, schwarzschild_equatorial(m), {1, 2}, [m](std::mt19937_64& rng) {
      Vec x(3);
      x[0] = uniform(rng, 2.2 * m, 50.0 * m);
      x[1] = uniform(rng, -5.0, 5.0);
      x[2] = uniform(rng, -3.0, 3.0);
      return x;
    });
  }
  if (id == "schwarzschild_static" || id == "schwarzschild_blackhole_static") {
    const double m = pr.real("m");
    const bool ext = id == "schwarzschild_static";
    WarpedSpec spec = ext ? schwarzschild_static(m) : schwarzschild_blackhole_static(m);
    return finish(id, std::move(spec), {2, 3}, [m, ext](std::mt19937_64& rng) {
      Vec x(4);
      x[0] = ext ? uniform(rng, 2.2 * m, 50.0 * m) : uniform(rng, 0.3 * m, 1.8 * m);
      sample_angles(rng, x, 1, 2);
      x[3] = uniform(rng, -5.0, 5.0);
      return x;
    });
  }
  if (id == "kruskal") {
    const KruskalChart k = kruskal(pr.real("m"));
    return finish(id, k.spec4(), {3}, [](std::mt19937_64& rng) {
      Vec x(4);
      x[0] = uniform(rng, 0.3, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      x[1] = uniform(rng, -0.8, 3.0) / x[0];
      sample_angles(rng, x, 2, 2);
      return x;
    });
  }
  if (id == "polar_interior" || id == "polar_exterior") {
    const int n = pr.integer("n", 1, 7);
    const PolarModel pm = polar_model(minkowski(1, n), Vec::Zero(n + 1));
    const bool inside = id == "polar_interior";
    return finish(id, inside ? pm.interior : pm.exterior, {}, [n, inside](std::mt19937_64& rng) {
      Vec x(n + 1);
      x[0] = uniform(rng, 0.5, 2.0);
      sample_quadric(rng, x, 1, n, inside ? -1.0 : 1.0);
      return x;
    });
  }
  throw Error(ErrorCode::UnknownSolution, "unknown solution id '" + id + "'");
}

}  // namespace warpgeo::atlas
