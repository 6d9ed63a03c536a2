#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "warpgeo/jet.hpp"

namespace warpgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// (count of negative directions, count of positive directions).
struct Signature {
  int negative = 0;
  int positive = 0;

  int dim() const { return negative + positive; }
  bool lorentzian() const { return negative == 1; }
  bool definite() const { return negative == 0 || positive == 0; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Dense square matrix of Jets, zero-initialized.
class JetMatrix {
 public:
  explicit JetMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n * n)) {}

  int size() const { return n_; }
  Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const Jet& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  void set_symmetric(int i, int j, const Jet& v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

 private:
  int n_;
  std::vector<Jet> data_;
};

using MetricFn = std::function<JetMatrix(std::span<const Jet>)>;
using DomainFn = std::function<bool(const Vec&)>;
using ScalarField = std::function<Jet(std::span<const Jet>)>;
using VectorField = std::function<std::vector<Jet>(std::span<const Jet>)>;

// Jets seeded at x: variable i carries ∂/∂x^i.
std::vector<Jet> seed_point(const Vec& x, int order);

// Metric and its exact partial derivatives at one point.
// dg[k](i,j) = ∂_k g_ij, ddg[k*n + l](i,j) = ∂_k ∂_l g_ij (empty unless order 2).
struct MetricJet {
  Mat g;
  std::vector<Mat> dg;
  std::vector<Mat> ddg;
};

struct ScalarJet {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

ScalarJet evaluate_scalar(const ScalarField& f, const Vec& x, int order = 2);

// Value and Jacobian (J(k, j) = ∂_j X^k) of a vector field.
struct VectorJet {
  Vec value;
  Mat jacobian;
};

VectorJet evaluate_vector(const VectorField& f, const Vec& x);

// A coordinate chart with smooth metric components. Immutable; copies share
// the component function.
class MetricChart {
 public:
  MetricChart(std::string label, Signature signature, MetricFn metric, DomainFn domain = {},
              std::vector<std::string> coordinate_names = {});

  const std::string& label() const { return impl_->label; }
  int dim() const { return impl_->signature.dim(); }
  Signature signature() const { return impl_->signature; }
  const std::vector<std::string>& coordinate_names() const { return impl_->names; }

  bool in_domain(const Vec& x) const;

  // Unchecked evaluations; callers that need validation use eval_metric().
  Mat components(const Vec& x) const;
  std::vector<Mat> first_derivatives(const Vec& x) const;
  std::vector<Mat> second_derivatives(const Vec& x) const;
  MetricJet jet(const Vec& x, int order) const;

  // Evaluate the component function on caller-seeded jets (used for composition).
  JetMatrix evaluate(std::span<const Jet> x) const { return impl_->metric(x); }
  const DomainFn& domain() const { return impl_->domain; }

 private:
  struct Impl {
    std::string label;
    Signature signature;
    MetricFn metric;
    DomainFn domain;
    std::vector<std::string> names;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace warpgeo
