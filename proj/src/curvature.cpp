#include "warpgeo/curvature.hpp"

#include <cmath>
#include <numbers>

#include "warpgeo/detail/kernels.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo {

using detail::Dual;

Vec Christoffel::contract(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(n_);
  for (int k = 0; k < n_; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) {
      if (u[i] == 0.0) continue;
      for (int j = 0; j < n_; ++j) acc += (*this)(k, i, j) * u[i] * v[j];
    }
    out[k] = acc;
  }
  return out;
}

double Riemann::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CurvatureAtPoint::form(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const {
  const int n = static_cast<int>(metric.rows());
  const Vec dl = metric * d;
  double acc = 0.0;
  for (int l = 0; l < n; ++l) {
    if (dl[l] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (b[j] == 0.0) continue;
        for (int k = 0; k < n; ++k) acc += riemann(l, i, j, k) * a[i] * b[j] * c[k] * dl[l];
      }
    }
  }
  return acc;
}

double CurvatureAtPoint::bianchi_residual() const {
  // Fully lowered R_lijk = g_lm R^m_ijk; R_l[ijk] cyclic sum.
  const int n = static_cast<int>(metric.rows());
  auto lowered = [&](int l, int i, int j, int k) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += metric(l, m) * riemann(m, i, j, k);
    return acc;
  };
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(lowered(l, i, j, k) + lowered(l, j, k, i) + lowered(l, k, i, j)));
  return worst;
}

double CurvatureAtPoint::ricci_trace_residual() const {
  const int n = static_cast<int>(metric.rows());
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += riemann(i, i, j, k);
      worst = std::max(worst, std::abs(acc - ricci(j, k)));
    }
  return worst;
}

int negative_eigenvalue_count(const Mat& g, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < -cutoff) ++count;
  return count;
}

OrthonormalFrame orthonormal_frame(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const int n = static_cast<int>(g.rows());
  OrthonormalFrame f;
  f.basis = Mat(n, n);
  f.eps = Vec(n);
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam == 0.0) throw Error(ErrorCode::DegenerateMetric, "singular form has no orthonormal frame");
    f.basis.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(lam));
    f.eps[i] = lam < 0.0 ? -1.0 : 1.0;
  }
  return f;
}

Mat eval_metric(const MetricChart& chart, const Vec& x, const Tolerances& tol) {
  if (!chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "point outside chart '" + chart.label() + "'");
  const Mat g = chart.components(x);
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym >= 1e-12) throw Error(ErrorCode::InvalidArgument, "metric components are not symmetric");
  if (!(std::abs(g.determinant()) > tol.degeneracy))
    throw Error(ErrorCode::DegenerateMetric, "|det g| <= " + std::to_string(tol.degeneracy));
  if (negative_eigenvalue_count(g) != chart.signature().negative)
    throw Error(ErrorCode::SignatureMismatch, "metric signature differs from the declared signature");
  return g;
}

namespace {

struct FlatGeometry {
  int n = 0;
  std::vector<double> g, ginv, dg;
};

FlatGeometry flatten(const MetricJet& mj) {
  FlatGeometry f;
  f.n = static_cast<int>(mj.g.rows());
  const int n = f.n;
  f.g.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.g[i * n + j] = mj.g(i, j);
  f.dg.resize(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) f.dg[(k * n + i) * n + j] = mj.dg[k](i, j);
  return f;
}

Mat to_mat(int n, const std::vector<double>& a) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  return m;
}

}  // namespace

namespace detail {

Christoffel christoffel_unchecked(const MetricChart& chart, const Vec& x, Mat* metric_out, Mat* inverse_out) {
  const MetricJet mj = chart.jet(x, 1);
  FlatGeometry f = flatten(mj);
  if (!detail::invert<double>(f.n, f.g, f.ginv, 1e-300))
    throw Error(ErrorCode::DegenerateMetric, "metric not invertible");
  if (metric_out) *metric_out = mj.g;
  if (inverse_out) *inverse_out = to_mat(f.n, f.ginv);
  return Christoffel(f.n, detail::christoffel_symbols<double>(f.n, f.ginv, f.dg));
}

}  // namespace detail

Christoffel christoffel(const MetricChart& chart, const Vec& x, const Tolerances& tol) {
  eval_metric(chart, x, tol);
  return detail::christoffel_unchecked(chart, x);
}

CurvatureAtPoint curvature(const MetricChart& chart, const Vec& x, const Tolerances& tol) {
  eval_metric(chart, x, tol);
  const MetricJet mj = chart.jet(x, 2);
  const int n = static_cast<int>(mj.g.rows());
  const int nn = n * n;
  FlatGeometry f = flatten(mj);
  if (!detail::invert<double>(n, f.g, f.ginv, 1e-300))
    throw Error(ErrorCode::DegenerateMetric, "metric not invertible");
  const std::vector<double> gamma = detail::christoffel_symbols<double>(n, f.ginv, f.dg);

  // dgamma[m][k*nn + i*n + j] = ∂_m Γ^k_ij via a directional Dual pass per axis.
  std::vector<std::vector<double>> dgamma(static_cast<std::size_t>(n));
  std::vector<Dual> gd(static_cast<std::size_t>(nn)), dgd(static_cast<std::size_t>(n * nn)), ginvd;
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gd[i * n + j] = Dual(mj.g(i, j), mj.dg[m](i, j));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dgd[(k * n + i) * n + j] = Dual(mj.dg[k](i, j), mj.ddg[k * n + m](i, j));
    detail::invert<Dual>(n, gd, ginvd);
    const std::vector<Dual> gam = detail::christoffel_symbols<Dual>(n, ginvd, dgd);
    dgamma[m].resize(static_cast<std::size_t>(n * nn));
    for (int q = 0; q < n * nn; ++q) dgamma[m][q] = gam[q].d;
  }

  std::vector<double> riem(static_cast<std::size_t>(nn * nn), 0.0);
  auto G = [&](int k, int i, int j) { return gamma[k * nn + i * n + j]; };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dgamma[i][l * nn + j * n + k] - dgamma[j][l * nn + i * n + k];
          for (int m = 0; m < n; ++m) v += G(l, i, m) * G(m, j, k) - G(l, j, m) * G(m, i, k);
          riem[((l * n + i) * n + j) * n + k] = v;
        }

  CurvatureAtPoint out;
  out.metric = mj.g;
  out.inverse = to_mat(n, f.ginv);
  out.christoffel = Christoffel(n, gamma);
  out.riemann = Riemann(n, std::move(riem));
  out.ricci = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += out.riemann(i, i, j, k);
      out.ricci(j, k) = acc;
    }
  out.scalar = (out.inverse.cwiseProduct(out.ricci)).sum();
  out.einstein = out.ricci - 0.5 * out.scalar * out.metric;
  return out;
}

double sectional_curvature(const CurvatureAtPoint& curv, const Vec& u, const Vec& v, const Tolerances& tol) {
  const Mat& g = curv.metric;
  const double uu = u.dot(g * u), vv = v.dot(g * v), uv = u.dot(g * v);
  const double denom = uu * vv - uv * uv;
  if (!(std::abs(denom) > tol.degeneracy))
    throw Error(ErrorCode::DegeneratePlane, "plane spanned by u, v is degenerate");
  return curv.form(u, v, v, u) / denom;
}

double sectional_curvature(const MetricChart& chart, const Vec& x, const Vec& u, const Vec& v,
                           const Tolerances& tol) {
  return sectional_curvature(curvature(chart, x, tol), u, v, tol);
}

Mat stress_energy(const MetricChart& chart, const Vec& x, const Tolerances& tol) {
  return curvature(chart, x, tol).einstein / (8.0 * std::numbers::pi);
}

double metric_compatibility_residual(const MetricChart& chart, const Vec& x) {
  const MetricJet mj = chart.jet(x, 1);
  const Christoffel gam = detail::christoffel_unchecked(chart, x);
  const int n = static_cast<int>(mj.g.rows());
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = mj.dg[k](i, j);
        for (int l = 0; l < n; ++l) v -= gam(l, k, i) * mj.g(l, j) + gam(l, k, j) * mj.g(i, l);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace warpgeo
