#include "warpgeo/metric_chart.hpp"

#include "warpgeo/errors.hpp"

namespace warpgeo {

std::vector<Jet> seed_point(const Vec& x, int order) {
  const int n = static_cast<int>(x.size());
  if (n > Jet::kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "chart dimension exceeds jet capacity");
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(x[i], i, n, order));
  return out;
}

ScalarJet evaluate_scalar(const ScalarField& f, const Vec& x, int order) {
  const int n = static_cast<int>(x.size());
  const Jet v = f(seed_point(x, order));
  ScalarJet out;
  out.value = v.value();
  out.gradient = Vec::Zero(n);
  for (int i = 0; i < n; ++i) out.gradient[i] = v.d(i);
  if (order >= 2) {
    out.hessian = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.hessian(i, j) = v.dd(i, j);
  }
  return out;
}

VectorJet evaluate_vector(const VectorField& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  const std::vector<Jet> v = f(seed_point(x, 1));
  VectorJet out;
  const int m = static_cast<int>(v.size());
  out.value = Vec::Zero(m);
  out.jacobian = Mat::Zero(m, n);
  for (int k = 0; k < m; ++k) {
    out.value[k] = v[k].value();
    for (int j = 0; j < n; ++j) out.jacobian(k, j) = v[k].d(j);
  }
  return out;
}

MetricChart::MetricChart(std::string label, Signature signature, MetricFn metric, DomainFn domain,
                         std::vector<std::string> coordinate_names) {
  if (signature.dim() <= 0) throw Error(ErrorCode::InvalidArgument, "chart dimension must be positive");
  if (signature.dim() > Jet::kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "chart dimension exceeds jet capacity");
  if (!metric) throw Error(ErrorCode::InvalidArgument, "chart needs a component function");
  if (coordinate_names.empty()) {
    for (int i = 0; i < signature.dim(); ++i) coordinate_names.push_back("x" + std::to_string(i));
  }
  if (static_cast<int>(coordinate_names.size()) != signature.dim())
    throw Error(ErrorCode::InvalidArgument, "coordinate name count does not match dimension");
  impl_ = std::make_shared<const Impl>(
      Impl{std::move(label), signature, std::move(metric), std::move(domain), std::move(coordinate_names)});
}

bool MetricChart::in_domain(const Vec& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) return false;
  return !impl_->domain || impl_->domain(x);
}

Mat MetricChart::components(const Vec& x) const {
  const int n = dim();
  std::vector<Jet> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.emplace_back(x[i]);
  const JetMatrix g = impl_->metric(pts);
  Mat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = g(i, j).value();
  return out;
}

MetricJet MetricChart::jet(const Vec& x, int order) const {
  const int n = dim();
  const JetMatrix gj = impl_->metric(seed_point(x, order));
  MetricJet out;
  out.g = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g(i, j) = gj(i, j).value();
  if (order >= 1) {
    out.dg.assign(static_cast<std::size_t>(n), Mat(n, n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.dg[k](i, j) = gj(i, j).d(k);
  }
  if (order >= 2) {
    out.ddg.assign(static_cast<std::size_t>(n * n), Mat(n, n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out.ddg[k * n + l](i, j) = gj(i, j).dd(k, l);
  }
  return out;
}

std::vector<Mat> MetricChart::first_derivatives(const Vec& x) const { return jet(x, 1).dg; }

std::vector<Mat> MetricChart::second_derivatives(const Vec& x) const { return jet(x, 2).ddg; }

}  // namespace warpgeo
