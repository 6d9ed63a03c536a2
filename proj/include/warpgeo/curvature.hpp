#pragma once

// Pointwise Levi-Civita geometry of a MetricChart.
//
// Conventions: Γ^k_ij has the upper index first. The Riemann array satisfies
// R(∂_i, ∂_j)∂_k = R^l_ijk ∂_l with R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y], so that
// Ric_jk = R^i_ijk and round spheres have positive curvature. The sectional
// curvature of span(u, v) is R(u,v,v,u) / (⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩²) with
// R(a,b,c,d) = ⟨R(a,b)c, d⟩.

#include <vector>

#include "warpgeo/metric_chart.hpp"

namespace warpgeo {

struct Tolerances {
  double structural = 1e-8;
  double degeneracy = 1e-10;
};

class Christoffel {
 public:
  Christoffel() = default;
  Christoffel(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {}

  int dim() const { return n_; }
  double operator()(int k, int i, int j) const { return data_[static_cast<std::size_t>((k * n_ + i) * n_ + j)]; }
  // Γ^k_ij u^i v^j
  Vec contract(const Vec& u, const Vec& v) const;
  const std::vector<double>& data() const { return data_; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

class Riemann {
 public:
  Riemann() = default;
  Riemann(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {}

  int dim() const { return n_; }
  double operator()(int l, int i, int j, int k) const {
    return data_[static_cast<std::size_t>(((l * n_ + i) * n_ + j) * n_ + k)];
  }
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct CurvatureAtPoint {
  Mat metric;
  Mat inverse;
  Christoffel christoffel;
  Riemann riemann;
  Mat ricci;
  double scalar = 0.0;
  Mat einstein;

  // ⟨R(a,b)c, d⟩
  double form(const Vec& a, const Vec& b, const Vec& c, const Vec& d) const;
  double bianchi_residual() const;
  double ricci_trace_residual() const;
};

// Validated metric: domain, symmetry, non-degeneracy and signature.
Mat eval_metric(const MetricChart& chart, const Vec& x, const Tolerances& tol = {});

Christoffel christoffel(const MetricChart& chart, const Vec& x, const Tolerances& tol = {});

CurvatureAtPoint curvature(const MetricChart& chart, const Vec& x, const Tolerances& tol = {});

double sectional_curvature(const CurvatureAtPoint& curv, const Vec& u, const Vec& v,
                           const Tolerances& tol = {});
double sectional_curvature(const MetricChart& chart, const Vec& x, const Vec& u, const Vec& v,
                           const Tolerances& tol = {});

// T = (1/8π) G
Mat stress_energy(const MetricChart& chart, const Vec& x, const Tolerances& tol = {});

// max |∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il|
double metric_compatibility_residual(const MetricChart& chart, const Vec& x);

// Count of negative eigenvalues of a symmetric matrix, ignoring |λ| <= cutoff.
int negative_eigenvalue_count(const Mat& g, double cutoff = 0.0);

// Pseudo-orthonormal basis of a non-degenerate symmetric form, as columns.
// eps[i] = ⟨e_i, e_i⟩ ∈ {−1, +1}.
struct OrthonormalFrame {
  Mat basis;
  Vec eps;
};
OrthonormalFrame orthonormal_frame(const Mat& g);

namespace detail {
// Unchecked Christoffel symbols for the integrators; throws DegenerateMetric
// when the metric cannot be inverted.
Christoffel christoffel_unchecked(const MetricChart& chart, const Vec& x, Mat* metric_out = nullptr,
                                  Mat* inverse_out = nullptr);
}  // namespace detail

}  // namespace warpgeo
