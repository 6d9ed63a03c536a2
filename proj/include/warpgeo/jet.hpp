#pragma once

// Second-order forward-mode differentiation.
//
// A Jet carries a value together with its gradient and Hessian with respect
// to up to kMaxVars independent variables. Metric components, warping
// functions, potentials and Killing fields are all written once as functions
// of Jets; evaluating them on seeded variables yields exact first and second
// derivatives of the same closed-form expression.

#include <array>
#include <cmath>
#include <ostream>

namespace warpgeo {

class Jet {
 public:
  static constexpr int kMaxVars = 8;

  // Constant (no active variables).
  Jet(double value = 0.0) : v_(value) {}  // NOLINT(google-explicit-constructor)

  // Independent variable `index` out of `num_vars`. order = 1 skips the Hessian.
  static Jet variable(double value, int index, int num_vars, int order = 2);

  double value() const { return v_; }
  int size() const { return n_; }
  int order() const { return order_; }
  double d(int i) const { return i < n_ ? g_[i] : 0.0; }
  double dd(int i, int j) const { return (i < n_ && j < n_ && order_ >= 2) ? h_[i * kMaxVars + j] : 0.0; }

  // Result of applying a scalar function f with f(a)=f0, f'(a)=f1, f''(a)=f2.
  static Jet chain(const Jet& a, double f0, double f1, double f2);

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(const Jet& b);
  Jet& operator/=(const Jet& b);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(const Jet& a, double b);
  friend Jet operator+(double a, const Jet& b) { return b + a; }
  friend Jet operator-(const Jet& a, double b) { return a + (-b); }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(const Jet& a, double b);
  friend Jet operator*(double a, const Jet& b) { return b * a; }
  friend Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }
  friend Jet operator/(double a, const Jet& b);

  friend bool operator<(const Jet& a, const Jet& b) { return a.v_ < b.v_; }
  friend bool operator>(const Jet& a, const Jet& b) { return a.v_ > b.v_; }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.v_ <= b.v_; }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Jet& a) { return os << a.v_; }

 private:
  // Align active sizes of two operands; a constant operand contributes zeros.
  static int common_size(const Jet& a, const Jet& b);
  static int common_order(const Jet& a, const Jet& b);
  void pad_to(int n);

  double v_ = 0.0;
  int n_ = 0;
  int order_ = 2;
  std::array<double, kMaxVars> g_;
  std::array<double, kMaxVars * kMaxVars> h_;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet asin(const Jet& a);
Jet acos(const Jet& a);
Jet atan(const Jet& a);
Jet atan2(const Jet& y, const Jet& x);
Jet pow(const Jet& a, double p);
Jet pow(const Jet& a, const Jet& p);
inline Jet square(const Jet& a) { return a * a; }

}  // namespace warpgeo
