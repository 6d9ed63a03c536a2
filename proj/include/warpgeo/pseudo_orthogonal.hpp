#pragma once

// Matrix side of the Killing algebra of R^{p,q}: o(p,q) = {A : AJ + JAᵀ = 0},
// J = diag(−I_p, I_q), and its square-zero elements.

#include <cstdint>
#include <optional>
#include <vector>

#include "warpgeo/metric_chart.hpp"

namespace warpgeo {

Mat pseudo_orthogonal_j(int p, int q);

struct PseudoOrthogonalElement {
  Mat a;
  int p = 0;
  int q = 0;

  Mat j() const { return pseudo_orthogonal_j(p, q); }
  // ‖AJ + JAᵀ‖_F
  double membership_residual() const;
};

double membership_residual(const Mat& a, int p, int q);

// Orthogonal projection onto o(p,q) in the Frobenius inner product.
Mat project_to_algebra(const Mat& a, int p, int q);

// Frobenius-orthonormal basis of o(p,q), n(n−1)/2 elements.
std::vector<Mat> pseudo_orthogonal_basis(int p, int q);

// The o(2,2) generator B with ones at (1,3) and (2,4) in the coordinates
// (x, y, z, t) where it preserves dxdt − dydz.
Mat square_zero_generator_b();
// The same element written in standard coordinates, in o(2,2).
Mat square_zero_generator_standard();

// Certificate that A² = 0 has no non-trivial solution: minimum of ‖A²‖_F
// over unit-Frobenius-norm A ∈ o(p,q), by multi-start projected gradient
// descent with fixed per-start seeds.
struct SquareZeroCertificate {
  int p = 0;
  int q = 0;
  int starts = 0;
  std::uint64_t seed = 0;
  double threshold = 0.1;
  double min_ratio = 0.0;  // smallest local minimum of ‖A²‖_F found
  double max_ratio = 0.0;  // largest local minimum found
  std::vector<double> start_minima;
  std::size_t total_iterations = 0;
  Mat minimizer;

  bool empty() const { return min_ratio > threshold; }
};

SquareZeroCertificate square_zero_certificate(int p, int q, int starts = 100, std::uint64_t seed = 20240601,
                                              double threshold = 0.1);

struct SquareZeroSpan {
  int p = 0;
  int q = 0;
  int algebra_dim = 0;
  int span_dim = 0;
  std::vector<Mat> generators;
  double max_square_residual = 0.0;      // max ‖A²‖_F over generators
  double max_membership_residual = 0.0;  // max ‖AJ + JAᵀ‖_F over generators
  std::vector<double> singular_values;
  std::optional<SquareZeroCertificate> certificate;  // set when min(p, q) <= 1
};

// For p, q >= 2: conjugates of B embedded in every (2,2) block, and their
// span. Otherwise span_dim is 0 and the certificate carries the evidence.
SquareZeroSpan square_zero_span(int p, int q, std::uint64_t seed = 20240601);

// A lightlike Killing field on de Sitter d+1 space would be a square-zero
// element of o(1, d+1).
SquareZeroCertificate desitter_no_lightlike(int d, std::uint64_t seed = 20240601);

}  // namespace warpgeo
