#include "warpgeo/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "warpgeo/detail/kernels.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo {

using detail::Dual;

namespace {

std::vector<int> complement_axes(int n, std::span<const int> axes) {
  std::set<int> in(axes.begin(), axes.end());
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in.count(i)) out.push_back(i);
  return out;
}

void validate_axes(int n, std::span<const int> axes) {
  if (axes.empty()) throw Error(ErrorCode::InvalidArgument, "leaf needs at least one axis");
  std::set<int> seen;
  for (int a : axes) {
    if (a < 0 || a >= n || !seen.insert(a).second)
      throw Error(ErrorCode::InvalidArgument, "leaf axes must be distinct chart coordinates");
  }
}

Mat sub_block(const Mat& g, std::span<const int> rows, std::span<const int> cols) {
  Mat out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = g(rows[i], cols[j]);
  return out;
}

void require_nondegenerate(const Mat& block, const Tolerances& tol, const char* what) {
  if (block.size() == 0) return;
  if (!(std::abs(block.determinant()) > tol.degeneracy))
    throw Error(ErrorCode::DegenerateLeaf, std::string(what) + " slice has degenerate induced metric");
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

// Everything classify_foliation needs at one point.
struct PointAnalysis {
  SecondFundamentalForm sff;
  double metric_scale = 1.0;
  double sff_norm = 0.0;
  double umbilic = 0.0;
  double spherical = 0.0;
};

PointAnalysis analyze_point(const MetricChart& chart, std::span<const int> axes, const Vec& x,
                            const Tolerances& tol) {
  const int n = chart.dim();
  const int nn = n * n;
  const int m = static_cast<int>(axes.size());
  const MetricJet mj = chart.jet(x, 2);

  std::vector<double> g(static_cast<std::size_t>(nn)), dg(static_cast<std::size_t>(n * nn)), ginv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i * n + j] = mj.g(i, j);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[(k * n + i) * n + j] = mj.dg[k](i, j);
  if (!detail::invert<double>(n, g, ginv)) throw Error(ErrorCode::DegenerateMetric, "metric not invertible");
  const std::vector<double> gamma = detail::christoffel_symbols<double>(n, ginv, dg);

  detail::LeafData<double> leaf;
  if (!detail::leaf_data<double>(n, g, gamma, axes, leaf, tol.degeneracy))
    throw Error(ErrorCode::DegenerateLeaf, "leaf has degenerate induced metric");

  PointAnalysis out;
  out.metric_scale = 1.0 + mj.g.cwiseAbs().maxCoeff();
  out.sff.axes.assign(axes.begin(), axes.end());
  out.sff.induced = Mat(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.sff.induced(a, b) = leaf.induced[a * m + b];
  for (int ab = 0; ab < m * m; ++ab)
    out.sff.values.push_back(to_vec(std::vector<double>(leaf.sff.begin() + ab * n, leaf.sff.begin() + (ab + 1) * n)));
  out.sff.mean = to_vec(leaf.mean);

  const OrthonormalFrame frame = orthonormal_frame(out.sff.induced);
  const Vec& nvec = out.sff.mean;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Vec ii = out.sff(frame.basis.col(a), frame.basis.col(b));
      out.sff_norm = std::max(out.sff_norm, ii.norm());
      const Vec dev = ii - (a == b ? frame.eps[a] : 0.0) * nvec;
      out.umbilic = std::max(out.umbilic, dev.norm());
    }

  // ∂_c n along each leaf axis, through a Dual pass of the same kernel.
  std::vector<Vec> dn(static_cast<std::size_t>(m));
  std::vector<Dual> gd(static_cast<std::size_t>(nn)), dgd(static_cast<std::size_t>(n * nn)), ginvd;
  for (int c = 0; c < m; ++c) {
    const int ax = axes[c];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gd[i * n + j] = Dual(mj.g(i, j), mj.dg[ax](i, j));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dgd[(k * n + i) * n + j] = Dual(mj.dg[k](i, j), mj.ddg[k * n + ax](i, j));
    detail::invert<Dual>(n, gd, ginvd);
    const std::vector<Dual> gamd = detail::christoffel_symbols<Dual>(n, ginvd, dgd);
    detail::LeafData<Dual> leafd;
    detail::leaf_data<Dual>(n, gd, gamd, axes, leafd, 0.0);
    dn[c] = Vec(n);
    for (int k = 0; k < n; ++k) dn[c][k] = leafd.mean[k].d;
  }

  // Normal component of ∇_u n for each orthonormal leaf vector u.
  for (int a = 0; a < m; ++a) {
    const Vec u = frame.basis.col(a);
    Vec cov = Vec::Zero(n);
    for (int c = 0; c < m; ++c) {
      if (u[c] == 0.0) continue;
      Vec term = dn[c];
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) term[k] += gamma[k * nn + axes[c] * n + j] * nvec[j];
      cov += u[c] * term;
    }
    std::vector<double> covv(cov.data(), cov.data() + n);
    const std::vector<double> tan = detail::tangent_part<double>(n, g, axes, leaf.induced_inv, covv);
    out.spherical = std::max(out.spherical, (cov - to_vec(tan)).norm());
  }
  return out;
}

}  // namespace

Vec SecondFundamentalForm::operator()(const Vec& u, const Vec& v) const {
  const int m = leaf_dim();
  Vec out = Vec::Zero(values.empty() ? 0 : values.front().size());
  for (int a = 0; a < m; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < m; ++b) out += u[a] * v[b] * values[static_cast<std::size_t>(a * m + b)];
  }
  return out;
}

std::string_view to_string(FoliationVerdict v) {
  switch (v) {
    case FoliationVerdict::Geodesic: return "Geodesic";
    case FoliationVerdict::SphericalUmbilic: return "SphericalUmbilic";
    case FoliationVerdict::UmbilicOnly: return "UmbilicOnly";
    case FoliationVerdict::None: return "None";
  }
  return "None";
}

SecondFundamentalForm second_fundamental_form(const MetricChart& chart, std::span<const int> leaf_axes,
                                              const Vec& x, const Tolerances& tol) {
  validate_axes(chart.dim(), leaf_axes);
  if (!chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "point outside chart '" + chart.label() + "'");
  const Mat g = chart.components(x);
  require_nondegenerate(sub_block(g, leaf_axes, leaf_axes), tol, "leaf");
  return analyze_point(chart, leaf_axes, x, tol).sff;
}

FoliationReport classify_foliation(const MetricChart& chart, std::span<const int> leaf_axes,
                                   std::span<const Vec> region, double tol) {
  validate_axes(chart.dim(), leaf_axes);
  if (region.empty()) throw Error(ErrorCode::InvalidArgument, "classification needs region samples");
  const std::vector<int> other = complement_axes(chart.dim(), leaf_axes);
  const Tolerances tols;

  FoliationReport rep;
  bool all_geodesic = true, all_umbilic = true, all_spherical = true;
  for (const Vec& x : region) {
    if (!chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "region sample outside chart");
    const Mat g = chart.components(x);
    require_nondegenerate(sub_block(g, leaf_axes, leaf_axes), tols, "leaf");
    require_nondegenerate(sub_block(g, other, other), tols, "complement");
    const PointAnalysis pa = analyze_point(chart, leaf_axes, x, tols);
    const double cut = tol * pa.metric_scale;

    double ortho = 0.0;
    if (!other.empty()) ortho = sub_block(g, leaf_axes, other).cwiseAbs().maxCoeff();
    rep.orthogonal_residual = std::max(rep.orthogonal_residual, ortho);
    if (!(ortho < cut)) rep.orthogonal = false;

    rep.second_fundamental_norm = std::max(rep.second_fundamental_norm, pa.sff_norm);
    rep.umbilic_residual = std::max(rep.umbilic_residual, pa.umbilic);
    rep.spherical_residual = std::max(rep.spherical_residual, pa.spherical);
    rep.shape_vector.push_back(pa.sff.mean);
    all_geodesic = all_geodesic && pa.sff_norm < cut;
    all_umbilic = all_umbilic && pa.umbilic < cut;
    all_spherical = all_spherical && pa.spherical < cut;
  }

  if (!rep.orthogonal) {
    rep.verdict = FoliationVerdict::None;
  } else if (all_geodesic) {
    rep.verdict = FoliationVerdict::Geodesic;
  } else if (all_umbilic && all_spherical) {
    rep.verdict = FoliationVerdict::SphericalUmbilic;
  } else if (all_umbilic) {
    rep.verdict = FoliationVerdict::UmbilicOnly;
  } else {
    rep.verdict = FoliationVerdict::None;
  }
  return rep;
}

WarpedDetection detect_warped_structure(const MetricChart& chart, std::span<const int> base_axes,
                                        std::span<const int> fiber_axes, std::span<const Vec> region,
                                        double tol) {
  const int n = chart.dim();
  std::set<int> all(base_axes.begin(), base_axes.end());
  all.insert(fiber_axes.begin(), fiber_axes.end());
  if (static_cast<int>(all.size()) != n || static_cast<int>(base_axes.size() + fiber_axes.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "split must partition the chart coordinates");

  WarpedDetection out;
  out.base_report = classify_foliation(chart, base_axes, region, tol);
  out.fiber_report = classify_foliation(chart, fiber_axes, region, tol);
  out.warped = out.base_report.orthogonal && out.base_report.verdict == FoliationVerdict::Geodesic &&
               out.fiber_report.verdict == FoliationVerdict::SphericalUmbilic;
  if (!out.warped) return out;

  // w(x) = g_NN(x, y) / g_NN(x_ref, y), x_ref taken from the first sample.
  const Vec& ref = region.front();
  const Mat gref = chart.components(ref);
  int k = fiber_axes.front();
  for (int a : fiber_axes)
    if (std::abs(gref(a, a)) > std::abs(gref(k, k))) k = a;
  for (const Vec& x : region) {
    Vec shifted = x;
    for (int a : base_axes) shifted[a] = ref[a];
    if (!chart.in_domain(shifted))
      throw Error(ErrorCode::OutOfDomain, "reference base point paired with a sample leaves the chart");
    out.warping.push_back(chart.components(x)(k, k) / chart.components(shifted)(k, k));
  }
  return out;
}

double lie_derivative_identity_check(const MetricChart& chart, std::span<const int> leaf_axes,
                                     const VectorField& field, const Vec& x, const Tolerances& tol) {
  validate_axes(chart.dim(), leaf_axes);
  if (!chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "point outside chart");
  const int m = static_cast<int>(leaf_axes.size());
  const MetricJet mj = chart.jet(x, 1);
  require_nondegenerate(sub_block(mj.g, leaf_axes, leaf_axes), tol, "leaf");
  const VectorJet X = evaluate_vector(field, x);

  const Vec gx = mj.g * X.value;
  for (int a : leaf_axes)
    if (std::abs(gx[a]) > tol.structural * (1.0 + X.value.norm()))
      throw Error(ErrorCode::InvalidArgument, "field is not orthogonal to the leaf");

  // (L_X g)_ab = X^k ∂_k g_ab + g_kb ∂_a X^k + g_ak ∂_b X^k, restricted to the leaf.
  Mat lie(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int ia = leaf_axes[a], ib = leaf_axes[b];
      double v = 0.0;
      for (int k = 0; k < chart.dim(); ++k)
        v += X.value[k] * mj.dg[k](ia, ib) + mj.g(k, ib) * X.jacobian(k, ia) + mj.g(ia, k) * X.jacobian(k, ib);
      lie(a, b) = v;
    }
  const SecondFundamentalForm sff = analyze_point(chart, leaf_axes, x, tol).sff;
  const OrthonormalFrame frame = orthonormal_frame(sff.induced);
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Vec u = frame.basis.col(a), v = frame.basis.col(b);
      const double lhs = u.dot(lie * v);
      const double rhs = -2.0 * sff(u, v).dot(gx);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

}  // namespace warpgeo
