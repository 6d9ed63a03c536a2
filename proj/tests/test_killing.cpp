#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/curvature.hpp"
#include "warpgeo/errors.hpp"
#include "warpgeo/killing.hpp"
#include "warpgeo/pseudo_orthogonal.hpp"

using namespace warpgeo;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

std::vector<Vec> samples(const atlas::Built& b, int count, std::uint64_t seed = 3) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(b.sampler(rng));
  return out;
}

std::vector<Vec> gaussian_points(int n, int count, double scale = 1.5) {
  std::mt19937_64 rng(5);
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) out.push_back(oracle::random_vector(rng, n, scale));
  return out;
}

KillingCandidate dilation(const MetricChart& chart) {
  return {[](std::span<const Jet> x) { return std::vector<Jet>(x.begin(), x.end()); }, chart, "dilation"};
}

KillingCandidate rotation(const MetricChart& chart) {
  return {[](std::span<const Jet> x) { return std::vector<Jet>{-1.0 * x[1], x[0]}; }, chart, "rotation"};
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

}  // namespace

TEST(Residual, FlatFields) {
  const MetricChart m = atlas::minkowski(1, 3);
  const auto pts = gaussian_points(4, 20);
  EXPECT_LT(killing_residual(scenario::linear_field(m, Mat::Zero(4, 4), vec({1, 2, 3, 4}), "t"), pts), 1e-14);
  // L_X g = 2g for the dilation; the orthonormal-frame residual is 2.
  EXPECT_NEAR(killing_residual(dilation(m), pts), 2.0, 1e-12);
  EXPECT_LT(killing_residual(rotation(atlas::euclidean(2)), gaussian_points(2, 20)), 1e-14);
}

TEST(Residual, SchwarzschildCoordinateFields) {
  const atlas::Built b = atlas::build("schwarzschild");
  const auto pts = samples(b, 30);
  EXPECT_LT(killing_residual(coordinate_field(b.chart, 1), pts), 1e-10);
  EXPECT_LT(killing_residual(coordinate_field(b.chart, 3), pts), 1e-10);
  EXPECT_GT(killing_residual(coordinate_field(b.chart, 0), pts), 1e-3);
  EXPECT_GT(killing_residual(coordinate_field(b.chart, 2), pts), 1e-3);
}

TEST(Residual, DeclaredAxesAreKilling) {
  for (const auto& info : atlas::list_solutions()) {
    const atlas::Built b = atlas::build(info.id);
    const auto pts = samples(b, 20);
    for (int axis : b.killing_axes) EXPECT_LT(killing_residual(coordinate_field(b.chart, axis), pts), 1e-8) << info.id;
  }
}

TEST(Residual, QuadricFieldsFromTheAlgebra) {
  std::mt19937_64 rng(11);
  for (auto [p, q, c] : {std::tuple{1, 3, 1.0}, std::tuple{2, 2, -1.0}, std::tuple{2, 3, 1.0}, std::tuple{0, 3, 2.0}}) {
    const atlas::PseudoSphere s = atlas::pseudo_sphere(p, q, c);
    const auto basis = pseudo_orthogonal_basis(p, q);
    Mat a = Mat::Zero(p + q, p + q);
    for (const Mat& e : basis) a += std::normal_distribution<double>()(rng) * e;
    const auto pts = samples(atlas::build("pseudo_sphere", {{"p", p}, {"q", q}, {"c", c}}), 20);
    EXPECT_LT(killing_residual(s.killing_field(a), pts), 1e-10) << p << q << c;
  }
}

TEST(Classify, LightlikeTranslation) {
  const MetricChart m = atlas::minkowski(1, 3);
  const auto x = scenario::linear_field(m, Mat::Zero(4, 4), vec({1, 1, 0, 0}), "null");
  const auto pts = gaussian_points(4, 20);
  const KillingClassification c = classify_killing(x, pts);
  EXPECT_EQ(c.kind, KillingKind::Lightlike);
  EXPECT_TRUE(c.geodesic);
  for (const Vec& p : pts) EXPECT_LT(geodesic_acceleration_norm(x, p), 1e-9);
}

TEST(Classify, VaryingLengths) {
  const atlas::Built b = atlas::build("schwarzschild");
  const KillingClassification t = classify_killing(coordinate_field(b.chart, 1), samples(b, 20));
  EXPECT_EQ(t.kind, KillingKind::SpacelikeVarying);
  EXPECT_FALSE(t.geodesic);
  const KillingClassification r = classify_killing(rotation(atlas::euclidean(2)), gaussian_points(2, 20));
  EXPECT_EQ(r.kind, KillingKind::SpacelikeVarying);
}

TEST(Classify, ConstantLength) {
  const MetricChart m = atlas::minkowski(1, 3);
  const KillingClassification c =
      classify_killing(scenario::linear_field(m, Mat::Zero(4, 4), vec({2, 0, 0, 0}), "dt"), gaussian_points(4, 10));
  EXPECT_EQ(c.kind, KillingKind::ConstantLength);
  EXPECT_TRUE(c.geodesic);
  EXPECT_NEAR(c.length, -4.0, 1e-14);
}

TEST(Classify, QuadricSquareZeroIsLightlike) {
  const atlas::PseudoSphere s = atlas::pseudo_sphere(2, 2, -1.0);
  const auto pts = samples(atlas::build("pseudo_sphere", {{"p", 2}, {"q", 2}, {"c", -1}}), 20);
  for (const Mat& a : scenario::square_zero_pool(2, 2)) {
    const KillingClassification c = classify_killing(s.killing_field(a), pts);
    EXPECT_EQ(c.kind, KillingKind::Lightlike);
  }
}

TEST(Classify, RejectsNonKilling) {
  EXPECT_EQ(code_of([] { classify_killing(dilation(atlas::minkowski(1, 1)), gaussian_points(2, 5)); }),
            ErrorCode::NotKilling);
}

TEST(Identity, HoldsOnEverySupportedChart) {
  std::mt19937_64 rng(17);
  for (const auto& cs : scenario::curvature_identity_cases()) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const KillingCandidate x = cs.field(rng);
      const Vec p = cs.point(rng);
      const Vec y = oracle::random_vector(rng, cs.chart.dim());
      worst = std::max(worst, curvature_identity(x, y, p));
    }
    EXPECT_LT(worst, 1e-7) << cs.name;
  }
}

TEST(Identity, NonPositivityForLightlikeFields) {
  std::mt19937_64 rng(19);
  for (const auto& cs : scenario::curvature_identity_cases()) {
    if (!cs.lorentzian_lightlike) continue;
    for (int i = 0; i < 50; ++i) {
      const KillingCandidate x = cs.field(rng);
      const Vec p = cs.point(rng);
      const Vec y = oracle::random_vector(rng, cs.chart.dim());
      EXPECT_GE(killing_curvature_form(x, y, p), -1e-9) << cs.name;
      const Vec xv = field_value(x, p);
      const Mat g = cs.chart.components(p);
      if (std::abs(xv.dot(g * y)) > 1e-3) EXPECT_LE(sectional_curvature(cs.chart, p, xv, y), 1e-9) << cs.name;
    }
  }
}

TEST(Identity, MatchesConstantCurvatureOracle) {
  // On S^{p,q}(c): R(X,Y,Y,X) = (⟨X,X⟩⟨Y,Y⟩ − ⟨X,Y⟩²)/c, and for square-zero A
  // the tangential derivative gives ⟨∇_Y X, ∇_Y X⟩ = −⟨X,Y⟩²/c.
  std::mt19937_64 rng(23);
  const double c = -1.0;
  const atlas::PseudoSphere s = atlas::pseudo_sphere(2, 2, c);
  const auto pool = scenario::square_zero_pool(2, 2);
  const atlas::Built b = atlas::build("pseudo_sphere", {{"p", 2}, {"q", 2}, {"c", c}});
  for (int i = 0; i < 20; ++i) {
    const KillingCandidate x = s.killing_field(scenario::pick(pool, rng));
    const Vec p = b.sampler(rng);
    const Vec y = oracle::random_vector(rng, 3);
    const Vec xv = field_value(x, p);
    const Mat g = s.chart().components(p);
    const double xy = xv.dot(g * y);
    EXPECT_NEAR(killing_curvature_form(x, y, p), (xv.dot(g * xv) * y.dot(g * y) - xy * xy) / c, 1e-8);
    const Vec dyx = covariant_jacobian(x, p) * y;
    EXPECT_NEAR(dyx.dot(g * dyx), -xy * xy / c, 1e-8);
  }
}

TEST(Identity, Errors) {
  const MetricChart e = atlas::euclidean(2);
  EXPECT_EQ(code_of([&] { curvature_identity(rotation(e), vec({1, 0}), vec({1.0, 0.5})); }),
            ErrorCode::NotGeodesicKilling);
  EXPECT_EQ(code_of([&] { curvature_identity(dilation(e), vec({1, 0}), vec({1.0, 0.5})); }),
            ErrorCode::NotGeodesicKilling);
}

TEST(Flat, AffineClassification) {
  const auto pts = gaussian_points(4, 20);
  const Mat b = square_zero_generator_standard();
  EXPECT_LT(affine_killing_acceleration(b, Vec::Zero(4), pts), 1e-10);
  // Aa = 0 keeps it geodesic; Aa ≠ 0 does not.
  Eigen::FullPivLU<Mat> lu(b);
  const Vec kernel = lu.kernel().col(0);
  EXPECT_LT(affine_killing_acceleration(b, kernel, pts), 1e-10);
  const Vec shift = vec({1, 2, 3, 4});
  ASSERT_GT((b * shift).norm(), 1e-3);
  EXPECT_GT(affine_killing_acceleration(b, shift, pts), 1e-3);
  const Mat rot = pseudo_orthogonal_basis(2, 2).front();
  EXPECT_GT((rot * rot).norm(), 1e-3);
  EXPECT_GT(affine_killing_acceleration(rot, Vec::Zero(4), pts), 1e-3);
}

TEST(Algebra, BasisIsOrthonormalAndInside) {
  for (auto [p, q] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{0, 4}, std::pair{3, 5}}) {
    const auto basis = pseudo_orthogonal_basis(p, q);
    const int n = p + q;
    ASSERT_EQ(static_cast<int>(basis.size()), n * (n - 1) / 2);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      EXPECT_LT(membership_residual(basis[i], p, q), 1e-14);
      for (std::size_t j = 0; j < basis.size(); ++j)
        EXPECT_NEAR((basis[i].transpose() * basis[j]).trace(), i == j ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(Algebra, ProjectionIsIdempotent) {
  std::mt19937_64 rng(29);
  Mat a(5, 5);
  for (int i = 0; i < 25; ++i) a.data()[i] = std::normal_distribution<double>()(rng);
  const Mat pa = project_to_algebra(a, 2, 3);
  EXPECT_LT(membership_residual(pa, 2, 3), 1e-14);
  EXPECT_LT((project_to_algebra(pa, 2, 3) - pa).norm(), 1e-14);
  EXPECT_NEAR((a - pa).cwiseProduct(pa).sum(), 0.0, 1e-12);
}

TEST(Algebra, GeneratorB) {
  const Mat b = square_zero_generator_b();
  EXPECT_EQ(b(0, 2), 1.0);
  EXPECT_EQ(b(1, 3), 1.0);
  EXPECT_EQ(b.cwiseAbs().sum(), 2.0);
  EXPECT_EQ((b * b).norm(), 0.0);
  // invariant form dxdt − dydz in (x, y, z, t)
  Mat q = Mat::Zero(4, 4);
  q(0, 3) = q(3, 0) = 0.5;
  q(1, 2) = q(2, 1) = -0.5;
  EXPECT_EQ((b.transpose() * q + q * b).norm(), 0.0);
  const Mat a = square_zero_generator_standard();
  EXPECT_LT(membership_residual(a, 2, 2), 1e-14);
  EXPECT_LT((a * a).norm(), 1e-14);
  EXPECT_GT(a.norm(), 0.5);
}

TEST(Algebra, SpanDimensions) {
  const SquareZeroSpan s22 = square_zero_span(2, 2);
  EXPECT_EQ(s22.algebra_dim, 6);
  EXPECT_EQ(s22.span_dim, 6);
  EXPECT_LT(s22.max_square_residual, 1e-12);
  EXPECT_LT(s22.max_membership_residual, 1e-12);
  const SquareZeroSpan s23 = square_zero_span(2, 3);
  EXPECT_EQ(s23.span_dim, 10);
  const SquareZeroSpan s33 = square_zero_span(3, 3);
  EXPECT_EQ(s33.span_dim, 15);
  const SquareZeroSpan s13 = square_zero_span(1, 3);
  EXPECT_EQ(s13.span_dim, 0);
  ASSERT_TRUE(s13.certificate.has_value());
  EXPECT_TRUE(s13.certificate->empty());
}

TEST(Certificate, LorentzAlgebrasHaveNoSquareZero) {
  for (int d : {2, 3}) {
    const SquareZeroCertificate c = desitter_no_lightlike(d);
    EXPECT_EQ(c.p, 1);
    EXPECT_EQ(c.q, d + 1);
    EXPECT_EQ(c.starts, 100);
    EXPECT_GT(c.min_ratio, 0.1) << d;
    EXPECT_TRUE(c.empty());
    EXPECT_LT(membership_residual(c.minimizer, c.p, c.q), 1e-10);
    EXPECT_NEAR(c.minimizer.norm(), 1.0, 1e-10);
  }
}

TEST(Certificate, SplitAlgebraIsNotEmpty) {
  const SquareZeroCertificate c = square_zero_certificate(2, 2, 20);
  EXPECT_LT(c.min_ratio, 1e-6);
  EXPECT_FALSE(c.empty());
}

TEST(Certificate, Deterministic) {
  const SquareZeroCertificate a = square_zero_certificate(1, 3, 10, 99), b = square_zero_certificate(1, 3, 10, 99);
  EXPECT_EQ(a.start_minima, b.start_minima);
}
