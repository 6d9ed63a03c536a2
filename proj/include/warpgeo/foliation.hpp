#pragma once

// Extrinsic geometry of coordinate-aligned foliations.
//
// A leaf is the coordinate slice spanned by `leaf_axes` with the remaining
// coordinates held fixed. Vector-valued residuals are measured in the
// Euclidean norm of full-chart coordinate components.

#include <span>
#include <vector>

#include "warpgeo/curvature.hpp"
#include "warpgeo/metric_chart.hpp"

namespace warpgeo {

struct SecondFundamentalForm {
  std::vector<int> axes;
  Mat induced;              // first fundamental form f_ab
  std::vector<Vec> values;  // values[a*m + b] = II(∂_a, ∂_b), full components
  Vec mean;                 // (1/m) f^{ab} II_ab; the shape vector when umbilic

  int leaf_dim() const { return static_cast<int>(axes.size()); }
  // II(u, v) for leaf-coordinate vectors u, v (length m).
  Vec operator()(const Vec& u, const Vec& v) const;
};

SecondFundamentalForm second_fundamental_form(const MetricChart& chart, std::span<const int> leaf_axes,
                                              const Vec& x, const Tolerances& tol = {});

enum class FoliationVerdict { Geodesic, SphericalUmbilic, UmbilicOnly, None };

std::string_view to_string(FoliationVerdict v);

struct FoliationReport {
  double orthogonal_residual = 0.0;
  double second_fundamental_norm = 0.0;
  double umbilic_residual = 0.0;
  double spherical_residual = 0.0;
  std::vector<Vec> shape_vector;  // one per region sample
  FoliationVerdict verdict = FoliationVerdict::None;
  bool orthogonal = true;  // false: off-diagonal blocks exceeded tol, verdict forced to None
};

// A residual counts as zero at a sample when it is < tol·(1 + max |g_ij|).
FoliationReport classify_foliation(const MetricChart& chart, std::span<const int> leaf_axes,
                                   std::span<const Vec> region, double tol = 1e-8);

struct WarpedDetection {
  bool warped = false;
  std::vector<double> warping;  // w at each region sample, normalized to 1 at region[0]
  FoliationReport base_report;
  FoliationReport fiber_report;
};

WarpedDetection detect_warped_structure(const MetricChart& chart, std::span<const int> base_axes,
                                        std::span<const int> fiber_axes, std::span<const Vec> region,
                                        double tol = 1e-8);

// max over an orthonormal leaf basis of |(L_X f)(u,v) + 2⟨II(u,v), X⟩|, with
// X a normal foliated field given with its exact Jacobian.
double lie_derivative_identity_check(const MetricChart& chart, std::span<const int> leaf_axes,
                                     const VectorField& field, const Vec& x, const Tolerances& tol = {});

}  // namespace warpgeo
