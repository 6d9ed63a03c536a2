#pragma once

#include <span>
#include <string>
#include <vector>

#include "warpgeo/curvature.hpp"
#include "warpgeo/metric_chart.hpp"

namespace warpgeo {

// A user-supplied vector field on a chart; Jets give its exact Jacobian.
struct KillingCandidate {
  VectorField field;
  MetricChart chart;
  std::string label;
};

// ∂/∂x^axis as a candidate.
KillingCandidate coordinate_field(const MetricChart& chart, int axis);

Vec field_value(const KillingCandidate& cand, const Vec& x);

// ∇_Y X at x, as a matrix acting on Y: (∇X)^k_j = ∂_j X^k + Γ^k_jl X^l.
Mat covariant_jacobian(const KillingCandidate& cand, const Vec& x);

// max over points and orthonormal pairs (Y, Z) of |⟨∇_Y X, Z⟩ + ⟨Y, ∇_Z X⟩|.
double killing_residual(const KillingCandidate& cand, std::span<const Vec> points);

enum class KillingKind { SpacelikeVarying, ConstantLength, Lightlike };

std::string_view to_string(KillingKind k);

struct KillingClassification {
  KillingKind kind = KillingKind::SpacelikeVarying;
  bool geodesic = false;  // set whenever the length is constant
  double length = 0.0;    // mean ⟨X, X⟩ over samples
  double spread = 0.0;    // max − min of ⟨X, X⟩
  double residual = 0.0;  // killing_residual on the samples
};

// Throws NotKilling when killing_residual >= threshold.
KillingClassification classify_killing(const KillingCandidate& cand, std::span<const Vec> points,
                                       double killing_threshold = 1e-8);

// ‖∇_X X‖ (Euclidean norm of components) at x.
double geodesic_acceleration_norm(const KillingCandidate& cand, const Vec& x);

// |R(X,Y,Y,X) − ⟨∇_Y X, ∇_Y X⟩| at x, where R(X,Y,Y,X) is the curvature form
// in this library's convention (it equals ⟨R(X,Y)X, Y⟩ in the sign
// convention where R(X,Y) = ∇_[X,Y] − [∇_X, ∇_Y]).
// Throws NotGeodesicKilling unless X is Killing and ∇_X X vanishes at x.
double curvature_identity(const KillingCandidate& cand, const Vec& y, const Vec& x, double tol = 1e-8);

// R(X,Y,Y,X) at x.
double killing_curvature_form(const KillingCandidate& cand, const Vec& y, const Vec& x);

// Flat case X(x) = A x + a on R^{p,q}: max over points of ‖A(Ax + a)‖.
double affine_killing_acceleration(const Mat& a_matrix, const Vec& a_shift, std::span<const Vec> points);

}  // namespace warpgeo
