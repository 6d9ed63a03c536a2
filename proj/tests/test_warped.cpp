#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/curvature.hpp"
#include "warpgeo/errors.hpp"
#include "warpgeo/foliation.hpp"
#include "warpgeo/warped.hpp"

using namespace warpgeo;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

MetricChart line(const std::string& name) {
  return MetricChart("line", {0, 1}, [](std::span<const Jet>) {
    JetMatrix g(1);
    g(0, 0) = Jet(1.0);
    return g;
  }, {}, {name});
}

// dx² + w(x, y)dy²
MetricChart twisted_plane(std::function<Jet(const Jet&, const Jet&)> w) {
  return MetricChart("twisted", {0, 2}, [w](std::span<const Jet> x) {
    JetMatrix g(2);
    g(0, 0) = Jet(1.0);
    g(1, 1) = w(x[0], x[1]);
    return g;
  }, {}, {"x", "y"});
}

std::vector<Vec> plane_region(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(vec({u(rng), u(rng)}));
  return out;
}

const std::vector<std::string> kWarpedIds = {
    "polar_euclidean", "hyperbolic_warped", "robertson_walker", "robertson_walker_deformed",
    "naive_gravity",   "schwarzschild",     "schwarzschild_equatorial", "schwarzschild_blackhole",
    "schwarzschild_static", "schwarzschild_blackhole_static", "kruskal", "polar_interior", "polar_exterior"};

std::vector<Vec> samples(const atlas::Built& b, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(b.sampler(rng));
  return out;
}

}  // namespace

TEST(Assemble, UnitWarpingIsDirectProduct) {
  const WarpedSpec spec{line("s"), atlas::round_sphere(2), [](std::span<const Jet>) { return Jet(1.0); }, "product"};
  const MetricChart chart = assemble(spec);
  const Vec x = vec({0.3, 1.0, 0.5});
  EXPECT_NEAR(sectional_curvature(chart, x, vec({0, 1, 0}), vec({0, 0, 1})), 1.0, 1e-12);
  EXPECT_NEAR(sectional_curvature(chart, x, vec({1, 0, 0}), vec({0, 1, 0})), 0.0, 1e-12);
  const Mat g = chart.components(x);
  EXPECT_EQ(g(0, 1), 0.0);
  EXPECT_EQ(g(0, 2), 0.0);
}

TEST(Assemble, PolarEuclideanIsFlat) {
  const MetricChart chart = assemble(atlas::polar_euclidean(3));
  EXPECT_LT(curvature(chart, vec({1.3, 0.8, 2.0})).riemann.max_abs(), 1e-8);
  EXPECT_EQ(chart.coordinate_names(), (std::vector<std::string>{"r", "theta", "phi"}));
}

TEST(Assemble, NonPositiveWarping) {
  const WarpedSpec spec{line("s"), line("y"), [](std::span<const Jet> x) { return x[0]; }, "bad"};
  const Vec pts[] = {vec({1.0}), vec({-0.5})};
  try {
    assemble(spec, pts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveWarping);
  }
  const MetricChart chart = assemble(spec);
  EXPECT_FALSE(chart.in_domain(vec({-0.5, 0.0})));
  EXPECT_TRUE(chart.in_domain(vec({0.5, 0.0})));
}

TEST(SecondFundamentalForm, FlatProductVanishes) {
  const MetricChart chart = atlas::euclidean(3);
  const int leaf[] = {1, 2};
  const SecondFundamentalForm ii = second_fundamental_form(chart, leaf, vec({0.1, 0.2, 0.3}));
  for (const Vec& v : ii.values) EXPECT_EQ(v.norm(), 0.0);
}

TEST(SecondFundamentalForm, FiberLeafIsUmbilicWithShapeVector) {
  const WarpedSpec spec = atlas::schwarzschild_exterior(1.0);
  const MetricChart chart = assemble(spec);
  const Vec x = vec({5.0, 0.4, 1.2, 0.3});
  const int leaf[] = {2, 3};
  const SecondFundamentalForm ii = second_fundamental_form(chart, leaf, x);
  const Vec n = shape_vector_formula(spec, x);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      EXPECT_LT((ii.values[static_cast<std::size_t>(a * 2 + b)] - ii.induced(a, b) * n).norm(), 1e-10);
}

TEST(SecondFundamentalForm, RoundSphereRadiusTwo) {
  const MetricChart chart = assemble(atlas::polar_euclidean(3));
  const int leaf[] = {1, 2};
  const SecondFundamentalForm ii = second_fundamental_form(chart, leaf, vec({2.0, 1.0, 0.5}));
  EXPECT_NEAR(ii.mean.norm(), 0.5, 1e-12);
  EXPECT_NEAR(ii.mean[0], -0.5, 1e-12);
}

TEST(SecondFundamentalForm, DegenerateLeaf) {
  const MetricChart chart = assemble(atlas::kruskal(1.0).spec4());
  const int leaf[] = {0};
  try {
    second_fundamental_form(chart, leaf, vec({0.5, 0.5, 1.0, 0.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateLeaf);
  }
}

TEST(Classify, WarpedChartVerdicts) {
  const atlas::Built b = atlas::build("schwarzschild");
  const auto region = samples(b, 20, 3);
  const FoliationReport base = classify_foliation(b.chart, b.base_axes(), region);
  const FoliationReport fiber = classify_foliation(b.chart, b.fiber_axes(), region);
  EXPECT_EQ(base.verdict, FoliationVerdict::Geodesic);
  EXPECT_EQ(fiber.verdict, FoliationVerdict::SphericalUmbilic);
  EXPECT_LT(base.umbilic_residual, 1e-8);
}

TEST(Classify, GenuinelyTwistedIsUmbilicOnly) {
  const MetricChart chart = twisted_plane([](const Jet& x, const Jet& y) { return exp(x * (1.0 + 0.1 * y * y)); });
  const auto region = plane_region(30, 9);
  const int fiber[] = {1};
  const FoliationReport rep = classify_foliation(chart, fiber, region);
  EXPECT_EQ(rep.verdict, FoliationVerdict::UmbilicOnly);
  EXPECT_LT(rep.umbilic_residual, 1e-8);
  EXPECT_GT(rep.spherical_residual, 1e-2);
  const int base[] = {0};
  EXPECT_FALSE(detect_warped_structure(chart, base, fiber, region).warped);
}

TEST(Classify, SeparableTwistIsWarped) {
  // e^x (1 + 0.1 y²) = a(x) b(y): rescaling y makes this an honest warped product.
  const MetricChart chart = twisted_plane([](const Jet& x, const Jet& y) { return exp(x) * (1.0 + 0.1 * y * y); });
  const auto region = plane_region(30, 9);
  const int base[] = {0}, fiber[] = {1};
  const WarpedDetection d = detect_warped_structure(chart, base, fiber, region);
  EXPECT_EQ(d.fiber_report.verdict, FoliationVerdict::SphericalUmbilic);
  EXPECT_TRUE(d.warped);
}

TEST(Classify, NonOrthogonalSlicesForceNone) {
  MetricChart chart("skew", {0, 2}, [](std::span<const Jet>) {
    JetMatrix g(2);
    g(0, 0) = Jet(1.0);
    g(1, 1) = Jet(1.0);
    g.set_symmetric(0, 1, Jet(0.3));
    return g;
  });
  const auto region = plane_region(5, 1);
  const int leaf[] = {0};
  const FoliationReport rep = classify_foliation(chart, leaf, region);
  EXPECT_FALSE(rep.orthogonal);
  EXPECT_EQ(rep.verdict, FoliationVerdict::None);
}

TEST(Detect, RoundTripOnWarpedBuiltins) {
  for (const auto& id : kWarpedIds) {
    const atlas::Built b = atlas::build(id);
    const auto region = samples(b, 10, 17);
    const WarpedDetection d = detect_warped_structure(b.chart, b.base_axes(), b.fiber_axes(), region);
    EXPECT_TRUE(d.warped) << id;
    const double w0 = warping_value(*b.spec, base_part(*b.spec, region[0]));
    for (std::size_t i = 0; i < region.size(); ++i) {
      const double expect = warping_value(*b.spec, base_part(*b.spec, region[i])) / w0;
      EXPECT_NEAR(d.warping[i], expect, 1e-8 * std::abs(expect)) << id;
    }
  }
}

TEST(Detect, SchwarzschildWarpingIsRSquared) {
  const MetricChart chart = assemble(atlas::schwarzschild_exterior(1.0));
  std::vector<Vec> region{vec({3.0, 0.0, 1.0, 0.0}), vec({6.0, 1.0, 1.4, 2.0}), vec({9.0, -2.0, 0.7, -1.0})};
  const int base[] = {0, 1}, fiber[] = {2, 3};
  const WarpedDetection d = detect_warped_structure(chart, base, fiber, region);
  ASSERT_TRUE(d.warped);
  EXPECT_NEAR(d.warping[1], 36.0 / 9.0, 1e-12);
  EXPECT_NEAR(d.warping[2], 81.0 / 9.0, 1e-12);
}

TEST(Property, ShapeVectorFormula) {
  for (const auto& id : kWarpedIds) {
    const atlas::Built b = atlas::build(id);
    double worst = 0.0;
    for (const Vec& x : samples(b, 50, 23)) {
      const SecondFundamentalForm ii = second_fundamental_form(b.chart, b.fiber_axes(), x);
      worst = std::max(worst, (ii.mean - shape_vector_formula(*b.spec, x)).norm());
    }
    EXPECT_LT(worst, 1e-7) << id;
  }
}

TEST(Property, GreatCircleSliceIsTotallyGeodesic) {
  const MetricChart chart = assemble(atlas::polar_euclidean(3));
  const int slice[] = {0, 2};
  for (double r : {0.5, 1.0, 3.0})
    for (double phi : {-2.0, 0.0, 1.0}) {
      const SecondFundamentalForm ii = second_fundamental_form(chart, slice, vec({r, M_PI / 2, phi}));
      for (const Vec& v : ii.values) EXPECT_LT(v.norm(), 1e-7);
    }
}

TEST(Property, FiberIsometriesExtend) {
  // Rotation about the x-axis of S², written in (θ, φ), pulled back through the
  // assembled Schwarzschild metric.
  const MetricChart chart = assemble(atlas::schwarzschild_exterior(1.0));
  const double a = 0.7;
  auto rotate = [a](const Jet& th, const Jet& ph) {
    const Jet x = sin(th) * cos(ph), y = sin(th) * sin(ph), z = cos(th);
    const Jet y2 = std::cos(a) * y - std::sin(a) * z, z2 = std::sin(a) * y + std::cos(a) * z;
    return std::array<Jet, 2>{acos(z2), atan2(y2, x)};
  };
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.6, 2.5);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = u(rng), ph = u(rng) - 1.0;
    const auto f = rotate(Jet::variable(th, 0, 2), Jet::variable(ph, 1, 2));
    Mat df(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) df(i, j) = f[static_cast<std::size_t>(i)].d(j);
    const Vec x = vec({4.0, 0.2, th, ph});
    const Vec fx = vec({4.0, 0.2, f[0].value(), f[1].value()});
    Mat jac = Mat::Identity(4, 4);
    jac.bottomRightCorner(2, 2) = df;
    const Mat pulled = jac.transpose() * chart.components(fx) * jac;
    EXPECT_LT((pulled - chart.components(x)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Property, VerdictsStableUnderTolDoubling) {
  for (const auto& id : kWarpedIds) {
    const atlas::Built b = atlas::build(id);
    const auto region = samples(b, 10, 5);
    for (const auto& axes : {b.base_axes(), b.fiber_axes()}) {
      const auto v1 = classify_foliation(b.chart, axes, region, 1e-8).verdict;
      const auto v2 = classify_foliation(b.chart, axes, region, 2e-8).verdict;
      EXPECT_EQ(v1, v2) << id;
    }
  }
}

namespace {

// Product metric perturbed inside its blocks: (1 + 0.1 sin(x + y1)) dx² ⊕ G(x, y).
MetricChart perturbed_product() {
  return MetricChart("perturbed", {0, 3}, [](std::span<const Jet> x) {
    JetMatrix g(3);
    g(0, 0) = 1.0 + 0.1 * sin(x[0] + x[1]);
    g(1, 1) = 1.0 + 0.2 * square(x[0]) + 0.05 * cos(x[2]);
    g.set_symmetric(1, 2, 0.1 * x[0] * x[1]);
    g(2, 2) = exp(0.3 * x[0] - 0.1 * x[2]);
    return g;
  }, {}, {"x", "y1", "y2"});
}

VectorField normal_field() {
  return [](std::span<const Jet> x) {
    return std::vector<Jet>{1.0 + 0.2 * square(x[1]) + 0.1 * x[2], Jet(0.0), Jet(0.0)};
  };
}

// |(L_X g)_ab + 2 Γ^k_ab g_kl X^l| from finite differences only, over an
// orthonormal leaf basis.
double fd_lie_identity(const MetricChart& chart, const VectorField& field, const Vec& x) {
  const int n = 3;
  const double h = 1e-5;
  auto eval_field = [&](const Vec& p) {
    std::vector<Jet> jp;
    for (int i = 0; i < n; ++i) jp.emplace_back(p[i]);
    const auto v = field(jp);
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = v[static_cast<std::size_t>(i)].value();
    return out;
  };
  Mat dX(n, n);
  for (int j = 0; j < n; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    dX.col(j) = (eval_field(xp) - eval_field(xm)) / (2 * h);
  }
  const Vec X = eval_field(x);
  const Mat g = chart.components(x);
  std::vector<Mat> dg;
  for (int k = 0; k < n; ++k) dg.push_back(oracle::fd_metric_derivative(chart, x, k));
  const auto gam = oracle::fd_christoffel(chart, x);
  const int leaf[] = {1, 2};
  Mat lhs(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int A = leaf[a], B = leaf[b];
      double lie = 0.0, ii = 0.0;
      for (int k = 0; k < n; ++k) {
        lie += X[k] * dg[static_cast<std::size_t>(k)](A, B) + g(k, B) * dX(k, A) + g(A, k) * dX(k, B);
        for (int l = 0; l < n; ++l) ii += gam[static_cast<std::size_t>((k * n + A) * n + B)] * g(k, l) * X[l];
      }
      lhs(a, b) = lie + 2.0 * ii;
    }
  const OrthonormalFrame e = orthonormal_frame(g.bottomRightCorner(2, 2));
  return (e.basis.transpose() * lhs * e.basis).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(LieDerivative, DirectProductBothSidesZero) {
  const int leaf[] = {1, 2};
  VectorField X = [](std::span<const Jet>) { return std::vector<Jet>{Jet(1.0), Jet(0.0), Jet(0.0)}; };
  EXPECT_LT(lie_derivative_identity_check(atlas::euclidean(3), leaf, X, vec({0.1, 0.2, 0.3})), 1e-8);
}

TEST(LieDerivative, WarpedFiberLeafAlongBase) {
  const MetricChart chart = assemble(atlas::hyperbolic_warped(3));
  const int leaf[] = {1, 2};
  VectorField X = [](std::span<const Jet>) { return std::vector<Jet>{Jet(1.0), Jet(0.0), Jet(0.0)}; };
  EXPECT_LT(lie_derivative_identity_check(chart, leaf, X, vec({0.4, 1.0, -2.0})), 1e-8);
}

TEST(LieDerivative, PerturbedProductAgainstOracle) {
  const MetricChart chart = perturbed_product();
  const int leaf[] = {1, 2};
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = vec({u(rng), u(rng), u(rng)});
    EXPECT_LT(lie_derivative_identity_check(chart, leaf, normal_field(), x), 1e-6);
    EXPECT_LT(fd_lie_identity(chart, normal_field(), x), 1e-6);
  }
}

TEST(LieDerivative, RejectsTangentialField) {
  const int leaf[] = {1, 2};
  VectorField X = [](std::span<const Jet>) { return std::vector<Jet>{Jet(0.0), Jet(1.0), Jet(0.0)}; };
  EXPECT_THROW(lie_derivative_identity_check(atlas::euclidean(3), leaf, X, vec({0.1, 0.2, 0.3})), Error);
}
