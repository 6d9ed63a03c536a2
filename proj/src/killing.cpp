#include "warpgeo/killing.hpp"

#include <algorithm>
#include <cmath>

#include "warpgeo/errors.hpp"

namespace warpgeo {

KillingCandidate coordinate_field(const MetricChart& chart, int axis) {
  if (axis < 0 || axis >= chart.dim()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  const int n = chart.dim();
  VectorField f = [n, axis](std::span<const Jet>) {
    std::vector<Jet> v(static_cast<std::size_t>(n), Jet(0.0));
    v[static_cast<std::size_t>(axis)] = Jet(1.0);
    return v;
  };
  return {std::move(f), chart, "d/d" + chart.coordinate_names()[static_cast<std::size_t>(axis)]};
}

Vec field_value(const KillingCandidate& cand, const Vec& x) {
  std::vector<Jet> pts;
  for (int i = 0; i < x.size(); ++i) pts.emplace_back(x[i]);
  const std::vector<Jet> v = cand.field(pts);
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[k].value();
  return out;
}

Mat covariant_jacobian(const KillingCandidate& cand, const Vec& x) {
  if (!cand.chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "point outside chart");
  const VectorJet X = evaluate_vector(cand.field, x);
  const int n = cand.chart.dim();
  if (X.value.size() != n) throw Error(ErrorCode::InvalidArgument, "field has wrong number of components");
  const Christoffel gam = detail::christoffel_unchecked(cand.chart, x);
  Mat c = X.jacobian;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) c(k, j) += gam(k, j, l) * X.value[l];
  return c;
}

double killing_residual(const KillingCandidate& cand, std::span<const Vec> points) {
  double worst = 0.0;
  for (const Vec& x : points) {
    const Mat c = covariant_jacobian(cand, x);
    const Mat g = cand.chart.components(x);
    const OrthonormalFrame frame = orthonormal_frame(g);
    const Mat lowered = g * c;  // lowered(i, j) = ⟨e_i, ∇_{∂_j} X⟩
    const Mat sym = frame.basis.transpose() * (lowered + lowered.transpose()) * frame.basis;
    worst = std::max(worst, sym.cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string_view to_string(KillingKind k) {
  switch (k) {
    case KillingKind::SpacelikeVarying: return "SpacelikeVarying";
    case KillingKind::ConstantLength: return "ConstantLength";
    case KillingKind::Lightlike: return "Lightlike";
  }
  return "SpacelikeVarying";
}

KillingClassification classify_killing(const KillingCandidate& cand, std::span<const Vec> points,
                                       double killing_threshold) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "classification needs sample points");
  KillingClassification out;
  out.residual = killing_residual(cand, points);
  if (!(out.residual < killing_threshold))
    throw Error(ErrorCode::NotKilling, "killing residual " + std::to_string(out.residual));
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (const Vec& x : points) {
    const Vec X = field_value(cand, x);
    const double len = X.dot(cand.chart.components(x) * X);
    lo = std::min(lo, len);
    hi = std::max(hi, len);
    sum += len;
  }
  out.length = sum / static_cast<double>(points.size());
  out.spread = hi - lo;
  const bool constant = out.spread < 1e-8 * (1.0 + std::abs(out.length));
  if (constant) {
    out.geodesic = true;
    out.kind = std::abs(out.length) < 1e-8 ? KillingKind::Lightlike : KillingKind::ConstantLength;
  }
  return out;
}

double geodesic_acceleration_norm(const KillingCandidate& cand, const Vec& x) {
  return (covariant_jacobian(cand, x) * field_value(cand, x)).norm();
}

double killing_curvature_form(const KillingCandidate& cand, const Vec& y, const Vec& x) {
  const CurvatureAtPoint curv = curvature(cand.chart, x);
  const Vec X = field_value(cand, x);
  return curv.form(X, y, y, X);
}

double curvature_identity(const KillingCandidate& cand, const Vec& y, const Vec& x, double tol) {
  const Vec pts[] = {x};
  const double res = killing_residual(cand, pts);
  if (!(res < tol)) throw Error(ErrorCode::NotGeodesicKilling, "field is not Killing at the point");
  const Mat c = covariant_jacobian(cand, x);
  const Vec X = field_value(cand, x);
  if (!((c * X).norm() < tol * (1.0 + X.norm())))
    throw Error(ErrorCode::NotGeodesicKilling, "∇_X X does not vanish");
  const CurvatureAtPoint curv = curvature(cand.chart, x);
  const Vec dyx = c * y;
  return std::abs(curv.form(X, y, y, X) - dyx.dot(curv.metric * dyx));
}

double affine_killing_acceleration(const Mat& a_matrix, const Vec& a_shift, std::span<const Vec> points) {
  double worst = 0.0;
  for (const Vec& x : points) worst = std::max(worst, (a_matrix * (a_matrix * x + a_shift)).norm());
  return worst;
}

}  // namespace warpgeo
