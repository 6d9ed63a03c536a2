#include "warpgeo/warped.hpp"

#include <set>

#include "warpgeo/errors.hpp"

namespace warpgeo {

namespace {

std::vector<std::string> joined_names(const MetricChart& base, const MetricChart& fiber) {
  std::vector<std::string> names = base.coordinate_names();
  std::set<std::string> seen(names.begin(), names.end());
  for (std::string name : fiber.coordinate_names()) {
    while (seen.count(name)) name += "'";
    seen.insert(name);
    names.push_back(name);
  }
  return names;
}

}  // namespace

Vec base_part(const WarpedSpec& spec, const Vec& full_point) { return full_point.head(spec.base_dim()); }

Vec fiber_part(const WarpedSpec& spec, const Vec& full_point) { return full_point.tail(spec.fiber_dim()); }

Vec join(const Vec& base_point, const Vec& fiber_point) {
  Vec out(base_point.size() + fiber_point.size());
  out << base_point, fiber_point;
  return out;
}

double warping_value(const WarpedSpec& spec, const Vec& base_point) {
  std::vector<Jet> pts;
  for (int i = 0; i < base_point.size(); ++i) pts.emplace_back(base_point[i]);
  return spec.warping(pts).value();
}

MetricChart assemble(const WarpedSpec& spec, std::span<const Vec> base_samples) {
  if (!spec.warping) throw Error(ErrorCode::InvalidArgument, "warped spec has no warping function");
  for (const Vec& x : base_samples) {
    const double w = warping_value(spec, x);
    if (!(w > 0.0)) throw Error(ErrorCode::NonPositiveWarping, "w <= 0 at a sampled base point");
  }
  const int nl = spec.base_dim();
  const int nf = spec.fiber_dim();
  const Signature sig{spec.base.signature().negative + spec.fiber.signature().negative,
                      spec.base.signature().positive + spec.fiber.signature().positive};
  MetricFn metric = [base = spec.base, fiber = spec.fiber, warping = spec.warping, nl,
                     nf](std::span<const Jet> x) {
    JetMatrix g(nl + nf);
    const JetMatrix h = base.evaluate(x.subspan(0, static_cast<std::size_t>(nl)));
    const JetMatrix gf = fiber.evaluate(x.subspan(static_cast<std::size_t>(nl), static_cast<std::size_t>(nf)));
    const Jet w = warping(x.subspan(0, static_cast<std::size_t>(nl)));
    if (!(w.value() > 0.0)) throw Error(ErrorCode::NonPositiveWarping, "w <= 0");
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) g(i, j) = h(i, j);
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b) g(nl + a, nl + b) = w * gf(a, b);
    return g;
  };
  DomainFn domain = [spec, nl, nf](const Vec& x) {
    const Vec xb = x.head(nl);
    if (!spec.base.in_domain(xb) || !spec.fiber.in_domain(x.tail(nf))) return false;
    return warping_value(spec, xb) > 0.0;
  };
  return MetricChart(spec.label, sig, std::move(metric), std::move(domain), joined_names(spec.base, spec.fiber));
}

Vec warping_gradient(const WarpedSpec& spec, const Vec& base_point) {
  const ScalarJet w = evaluate_scalar(spec.warping, base_point, 1);
  const Mat h = spec.base.components(base_point);
  return h.fullPivLu().solve(w.gradient);
}

Vec shape_vector_formula(const WarpedSpec& spec, const Vec& full_point) {
  const Vec xb = base_part(spec, full_point);
  const Vec grad = warping_gradient(spec, xb);
  Vec out = Vec::Zero(full_point.size());
  out.head(spec.base_dim()) = -0.5 * grad / warping_value(spec, xb);
  return out;
}

}  // namespace warpgeo
