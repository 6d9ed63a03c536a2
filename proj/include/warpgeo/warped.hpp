#pragma once

#include <span>
#include <string>
#include <vector>

#include "warpgeo/metric_chart.hpp"

namespace warpgeo {

// L ×_w N: base metric h on L, fiber metric g on N, warping w > 0 on L.
// The assembled metric is h(x) ⊕ w(x)·g(y) over coordinates (x, y).
struct WarpedSpec {
  MetricChart base;
  MetricChart fiber;
  ScalarField warping;
  std::string label;

  int base_dim() const { return base.dim(); }
  int fiber_dim() const { return fiber.dim(); }
  int dim() const { return base.dim() + fiber.dim(); }
};

// Throws NonPositiveWarping if w <= 0 at any of the given base samples.
MetricChart assemble(const WarpedSpec& spec, std::span<const Vec> base_samples = {});

Vec base_part(const WarpedSpec& spec, const Vec& full_point);
Vec fiber_part(const WarpedSpec& spec, const Vec& full_point);
Vec join(const Vec& base_point, const Vec& fiber_point);

double warping_value(const WarpedSpec& spec, const Vec& base_point);

// ∇w with the index raised by h (base components).
Vec warping_gradient(const WarpedSpec& spec, const Vec& base_point);

// (−1/2)(∇w / w, 0) in full-chart components.
Vec shape_vector_formula(const WarpedSpec& spec, const Vec& full_point);

}  // namespace warpgeo
