#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/curvature.hpp"
#include "warpgeo/errors.hpp"
#include "warpgeo/pseudo_orthogonal.hpp"
#include "warpgeo/warped.hpp"

using namespace warpgeo;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// Central-difference Jacobian of a map R^n -> R^m.
template <class Map>
Mat fd_jacobian(Map&& f, const Vec& x, double h = 1e-6) {
  const Vec f0 = f(x);
  Mat j(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

double max_ricci(const MetricChart& chart, const Vec& x) { return curvature(chart, x).ricci.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Registry, EveryBuiltinSamplesItsDomain) {
  std::mt19937_64 rng(2);
  const auto& all = atlas::list_solutions();
  EXPECT_EQ(all.size(), 18u);
  for (const auto& info : all) {
    const atlas::Built b = atlas::build(info.id);
    EXPECT_EQ(b.id, info.id);
    for (int i = 0; i < 10; ++i) {
      const Vec x = b.sampler(rng);
      ASSERT_TRUE(b.chart.in_domain(x)) << info.id;
      EXPECT_NO_THROW(eval_metric(b.chart, x)) << info.id;
    }
    if (b.spec) EXPECT_EQ(static_cast<int>(b.base_axes().size() + b.fiber_axes().size()), b.chart.dim());
  }
}

TEST(Registry, Errors) {
  EXPECT_EQ(code_of([] { atlas::build("no_such_space"); }), ErrorCode::UnknownSolution);
  EXPECT_EQ(code_of([] { atlas::build("sphere", {{"bogus", 1}}); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { atlas::build("minkowski", {{"p", 1.5}}); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { atlas::build("sphere", {{"radius", -1}}); }), ErrorCode::BadParams);
  EXPECT_EQ(code_of([] { atlas::build("schwarzschild", {{"m", 0}}); }), ErrorCode::BadParams);
}

TEST(Registry, ParamsAreHonoured) {
  const atlas::Built s = atlas::build("sphere", {{"n", 3}, {"radius", 2}});
  EXPECT_EQ(s.chart.dim(), 3);
  EXPECT_NEAR(sectional_curvature(s.chart, vec({1.0, 1.0, 0.3}), vec({1, 0, 0}), vec({0, 1, 0})), 0.25, 1e-12);
  const atlas::Built m = atlas::build("minkowski", {{"p", 2}, {"q", 2}});
  EXPECT_EQ(m.chart.signature().negative, 2);
}

TEST(Schwarzschild, VacuumEverywhereSampled) {
  for (const char* id : {"schwarzschild", "schwarzschild_blackhole", "schwarzschild_static",
                         "schwarzschild_blackhole_static", "kruskal"}) {
    const atlas::Built b = atlas::build(id);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, max_ricci(b.chart, b.sampler(rng)));
    EXPECT_LT(worst, 1e-8) << id;
  }
}

TEST(Schwarzschild, NotFlat) {
  // Kretschmann-scale check: sectional curvature of the (r, t) plane is −2m/r³ in magnitude.
  const MetricChart c = atlas::build("schwarzschild").chart;
  const double r = 5.0;
  EXPECT_NEAR(std::abs(sectional_curvature(c, vec({r, 0, 1.0, 0}), vec({1, 0, 0, 0}), vec({0, 1, 0, 0}))),
              2.0 / (r * r * r), 1e-12);
}

TEST(Kruskal, RadiusFunction) {
  const atlas::KruskalChart k = atlas::kruskal(1.0);
  EXPECT_EQ(k.c(), -1.0);
  EXPECT_NEAR(k.r_of_u(0.0), 2.0, 1e-13);
  EXPECT_NEAR(k.b(0.0), 0.0, 1e-13);
  for (double r : {0.05, 0.5, 1.0, 1.9, 2.0, 2.5, 6.0, 30.0}) {
    const double u = (r / 2.0 - 1.0) * std::exp(r / 2.0);
    EXPECT_NEAR(k.r_of_u(u), r, 1e-11 * r) << r;
  }
  // inverse-function derivatives: u′(r) = (r/4m²)e^{r/2m}, u″(r) = (1 + r/2m)e^{r/2m}/4m²
  for (double u : {-0.7, -0.1, 0.4, 3.0}) {
    const Jet ju = k.r_of_u(Jet::variable(u, 0, 1));
    const double r = ju.value();
    const double du = r / 4.0 * std::exp(r / 2.0), ddu = (1.0 + r / 2.0) * std::exp(r / 2.0) / 4.0;
    EXPECT_NEAR(ju.d(0), 1.0 / du, 1e-12);
    EXPECT_NEAR(ju.dd(0, 0), -ddu / (du * du * du), 1e-11);
  }
}

TEST(Kruskal, AxesAreTheHorizon) {
  const atlas::KruskalChart k = atlas::kruskal(1.0);
  for (double s : {-2.0, -0.3, 0.4, 1.7}) {
    const MetricChart c = k.chart2();
    EXPECT_NEAR(c.components(vec({s, 0.0}))(0, 1), 0.5 * 16.0 * std::exp(-1.0), 1e-12);
  }
}

TEST(Kruskal, PullbackIsTheExteriorMetric) {
  const double m = 1.0;
  const atlas::KruskalChart k = atlas::kruskal(m);
  const MetricChart kc = k.chart2();
  const MetricChart ext = atlas::schwarzschild_exterior(m).base;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double r = 2.5 + 7.5 * i / 19.0, t = -5.0 + 0.5 * j;
      const auto xy = k.transition(Jet::variable(r, 0, 2, 1), Jet::variable(t, 1, 2, 1));
      Mat jac(2, 2);
      jac << xy[0].d(0), xy[0].d(1), xy[1].d(0), xy[1].d(1);
      const Vec p = vec({xy[0].value(), xy[1].value()});
      EXPECT_LT((p - k.transition(r, t)).norm(), 1e-14 * (1 + p.norm()));
      const Mat pulled = jac.transpose() * kc.components(p) * jac;
      const Mat target = ext.components(vec({r, t}));
      worst = std::max(worst, (pulled - target).cwiseAbs().maxCoeff() / (1.0 + target.cwiseAbs().maxCoeff()));
    }
  EXPECT_LT(worst, 1e-8);
}

TEST(Kruskal, TransitionJacobianMatchesFiniteDifferences) {
  const atlas::KruskalChart k = atlas::kruskal(1.0);
  const Vec rt = vec({3.3, 0.7});
  const Mat fd = fd_jacobian([&](const Vec& v) { return k.transition(v[0], v[1]); }, rt);
  const auto xy = k.transition(Jet::variable(rt[0], 0, 2), Jet::variable(rt[1], 1, 2));
  Mat jac(2, 2);
  jac << xy[0].d(0), xy[0].d(1), xy[1].d(0), xy[1].d(1);
  EXPECT_LT((jac - fd).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Kruskal, BoostFlowIsAnIsometry) {
  const MetricChart kc = atlas::kruskal(1.0).chart2();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), us(-1.5, 1.5);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec p = vec({ux(rng), ux(rng)});
    if (!kc.in_domain(p)) continue;
    const double s = us(rng);
    const Vec q = vec({std::exp(s) * p[0], std::exp(-s) * p[1]});
    const Mat jac = Vec(vec({std::exp(s), std::exp(-s)})).asDiagonal();
    const Mat g = kc.components(p);
    worst = std::max(worst, (jac.transpose() * kc.components(q) * jac - g).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Kruskal, InteriorIsVacuum) {
  const MetricChart c = assemble(atlas::kruskal(1.0).spec4());
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0.2, 2.0), uu(-0.95, -0.05);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng), u = uu(rng);
    worst = std::max(worst, max_ricci(c, vec({x, u / x, 1.1, 0.4})));
  }
  EXPECT_LT(worst, 1e-7);
}

TEST(Kruskal, DomainStopsAtTheSingularity) {
  const MetricChart c = atlas::kruskal(1.0).chart2();
  EXPECT_TRUE(c.in_domain(vec({1.0, -0.99})));
  EXPECT_FALSE(c.in_domain(vec({1.0, -1.01})));
}

TEST(Quadric, EmbeddingAndCurvature) {
  std::mt19937_64 rng(37);
  for (auto [p, q, c] : {std::tuple{1, 3, 1.0}, std::tuple{1, 3, -1.0}, std::tuple{2, 2, -1.0}, std::tuple{0, 3, 4.0}}) {
    const atlas::PseudoSphere s = atlas::pseudo_sphere(p, q, c);
    const atlas::Built b = atlas::build("pseudo_sphere", {{"p", p}, {"q", q}, {"c", c}});
    const Mat j = pseudo_orthogonal_j(p, q);
    for (int i = 0; i < 10; ++i) {
      const Vec u = b.sampler(rng);
      const Vec x = s.embed(u);
      EXPECT_NEAR(x.dot(j * x), c, 1e-12);
      const Mat jac = fd_jacobian([&](const Vec& v) { return s.embed(v); }, u);
      EXPECT_LT((jac.transpose() * j * jac - s.chart().components(u)).cwiseAbs().maxCoeff(), 1e-7);
      const Vec a = oracle::random_vector(rng, s.dim()), bb = oracle::random_vector(rng, s.dim());
      EXPECT_NEAR(sectional_curvature(s.chart(), u, a, bb), 1.0 / c, 1e-9);
    }
  }
}

TEST(Polar, ModelsAreFlatAndCoverTheCone) {
  const Vec center = vec({0.5, -1.0, 0.2, 0.0});
  const atlas::PolarModel pm = atlas::polar_model(atlas::minkowski(1, 3), center);
  const Mat eta = atlas::minkowski(1, 3).components(center);
  std::mt19937_64 rng(41);
  for (bool inside : {true, false}) {
    const atlas::Built b = atlas::build(inside ? "polar_interior" : "polar_exterior");
    const MetricChart chart = assemble(inside ? pm.interior : pm.exterior);
    for (int i = 0; i < 20; ++i) {
      const Vec pt = b.sampler(rng);
      EXPECT_LT(curvature(chart, pt).riemann.max_abs(), 1e-8);
      const Vec x = pm.to_ambient(inside, pt) - center;
      EXPECT_NEAR(x.dot(eta * x), (inside ? -1.0 : 1.0) * pt[0] * pt[0], 1e-10);
      const Mat jac = fd_jacobian([&](const Vec& v) { return pm.to_ambient(inside, v); }, pt);
      EXPECT_LT((jac.transpose() * eta * jac - chart.components(pt)).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
  EXPECT_EQ(atlas::classify_physical(pm.interior), atlas::Physicality::Physical);
  EXPECT_EQ(atlas::classify_physical(pm.exterior), atlas::Physicality::AntiPhysical);
}

TEST(Polar, Errors) {
  EXPECT_EQ(code_of([] { atlas::polar_model(atlas::euclidean(3), vec({0, 0, 0})); }), ErrorCode::UnsupportedAmbient);
  EXPECT_EQ(code_of([] { atlas::polar_model(atlas::build("schwarzschild").chart, vec({5, 0, 1, 0})); }),
            ErrorCode::UnsupportedAmbient);
  EXPECT_EQ(code_of([] { atlas::classify_physical(atlas::hyperbolic_warped(3)); }), ErrorCode::NotLorentzian);
}

TEST(Polar, EuclideanIsFlat) {
  const atlas::Built b = atlas::build("polar_euclidean");
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) EXPECT_LT(curvature(b.chart, b.sampler(rng)).riemann.max_abs(), 1e-8);
}

TEST(Physicality, Examples) {
  EXPECT_EQ(atlas::classify_physical(atlas::schwarzschild_static(1.0)), atlas::Physicality::Physical);
  EXPECT_EQ(atlas::classify_physical(atlas::schwarzschild_exterior(1.0)), atlas::Physicality::AntiPhysical);
  EXPECT_EQ(atlas::classify_physical(atlas::naive_gravity()), atlas::Physicality::Physical);
}

TEST(Fluid, FriedmannOracle) {
  // w = a², a = t: μ = 3((ȧ/a)² + k/a²)/8π, p = −(2ä/a + (ȧ/a)² + k/a²)/8π.
  const std::vector<double> ts{0.5, 1.0, 2.0, 3.5};
  for (int k : {0, 1, -1}) {
    const atlas::Built b = atlas::build("robertson_walker", {{"k", k}});
    const atlas::FluidReport f = atlas::perfect_fluid(*b.spec, ts, vec({0.3, 0.6, 0.2}));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double t = ts[i];
      EXPECT_NEAR(f.mu[i], 3.0 * (1.0 + k) / (8 * M_PI * t * t), 1e-10) << k << " " << t;
      EXPECT_NEAR(f.p[i], -(1.0 + k) / (8 * M_PI * t * t), 1e-10) << k << " " << t;
    }
    EXPECT_LT(f.offdiag_residual, 1e-8);
    EXPECT_LT(f.isotropy_residual, 1e-8);
  }
  const atlas::FluidReport f = atlas::perfect_fluid(*atlas::build("robertson_walker").spec, std::vector<double>{1.0},
                                                    vec({0, 0, 0}));
  EXPECT_NEAR(f.mu[0], 0.119366, 1e-6);
  EXPECT_NEAR(f.p[0], -0.0397887, 1e-7);
}

TEST(Fluid, StaticUniverseIsEmpty) {
  const atlas::Built b = atlas::build("robertson_walker", {{"power", 0}});
  const atlas::FluidReport f = atlas::perfect_fluid(*b.spec, std::vector<double>{0.5, 2.0}, vec({1, 2, 3}));
  for (double v : f.mu) EXPECT_NEAR(v, 0.0, 1e-14);
  for (double v : f.p) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(Fluid, Errors) {
  const atlas::Built d = atlas::build("robertson_walker_deformed");
  EXPECT_EQ(code_of([&] { atlas::perfect_fluid(*d.spec, std::vector<double>{1.0}, vec({0.4, 0, 0})); }),
            ErrorCode::NotFluidForm);
  EXPECT_EQ(code_of([] { atlas::perfect_fluid(atlas::schwarzschild_exterior(1.0), std::vector<double>{3.0},
                                              vec({1.0, 0.0})); }),
            ErrorCode::InvalidArgument);
}

TEST(Fluid, EinsteinTensorAgreesWithStressEnergy) {
  const atlas::Built b = atlas::build("robertson_walker", {{"k", 1}, {"power", 3}, {"scale", 0.5}});
  const Vec x = vec({1.3, 0.4, 0.9, 0.2});
  const Mat t = stress_energy(b.chart, x);
  // μ = T_tt for ∂_t unit
  const atlas::FluidReport f = atlas::perfect_fluid(*b.spec, std::vector<double>{1.3}, x.tail(3));
  EXPECT_NEAR(f.mu[0], t(0, 0), 1e-12);
}
