#include "warpgeo/jet.hpp"

#include <algorithm>
#include <cassert>

namespace warpgeo {

namespace {
constexpr int kStride = Jet::kMaxVars;
}

Jet Jet::variable(double value, int index, int num_vars, int order) {
  assert(num_vars <= kMaxVars && index < num_vars);
  Jet j(value);
  j.n_ = num_vars;
  j.order_ = order;
  for (int i = 0; i < num_vars; ++i) j.g_[i] = (i == index) ? 1.0 : 0.0;
  if (order >= 2) {
    for (int i = 0; i < num_vars; ++i)
      for (int k = 0; k < num_vars; ++k) j.h_[i * kStride + k] = 0.0;
  }
  return j;
}

int Jet::common_size(const Jet& a, const Jet& b) { return std::max(a.n_, b.n_); }

int Jet::common_order(const Jet& a, const Jet& b) {
  if (a.n_ == 0) return b.order_;
  if (b.n_ == 0) return a.order_;
  return std::min(a.order_, b.order_);
}

void Jet::pad_to(int n) {
  if (n_ >= n) return;
  for (int i = n_; i < n; ++i) g_[i] = 0.0;
  if (order_ >= 2) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (i >= n_ || k >= n_) h_[i * kStride + k] = 0.0;
  }
  n_ = n;
}

Jet Jet::chain(const Jet& a, double f0, double f1, double f2) {
  Jet r(f0);
  r.n_ = a.n_;
  r.order_ = a.order_;
  const int n = a.n_;
  for (int i = 0; i < n; ++i) r.g_[i] = f1 * a.g_[i];
  if (a.order_ >= 2) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        r.h_[i * kStride + k] = f1 * a.h_[i * kStride + k] + f2 * a.g_[i] * a.g_[k];
  }
  return r;
}

Jet& Jet::operator+=(const Jet& b) {
  if (b.n_ == 0) {
    v_ += b.v_;
    return *this;
  }
  const int n = common_size(*this, b);
  const int ord = common_order(*this, b);
  if (n_ == 0) {
    const double v = v_;
    *this = b;
    v_ += v;
    return *this;
  }
  pad_to(n);
  order_ = ord;
  v_ += b.v_;
  for (int i = 0; i < b.n_; ++i) g_[i] += b.g_[i];
  if (ord >= 2) {
    for (int i = 0; i < b.n_; ++i)
      for (int k = 0; k < b.n_; ++k) h_[i * kStride + k] += b.h_[i * kStride + k];
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& b) { return *this += -b; }

Jet& Jet::operator*=(const Jet& b) {
  *this = *this * b;
  return *this;
}

Jet& Jet::operator/=(const Jet& b) {
  *this = *this / b;
  return *this;
}

Jet operator-(const Jet& a) { return a * -1.0; }

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r += -b;
  return r;
}

Jet operator+(const Jet& a, double b) {
  Jet r = a;
  r.v_ += b;
  return r;
}

Jet operator-(double a, const Jet& b) { return (-b) + a; }

Jet operator*(const Jet& a, double b) {
  Jet r(a.v_ * b);
  r.n_ = a.n_;
  r.order_ = a.order_;
  const int n = a.n_;
  for (int i = 0; i < n; ++i) r.g_[i] = a.g_[i] * b;
  if (a.order_ >= 2) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) r.h_[i * kStride + k] = a.h_[i * kStride + k] * b;
  }
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (b.n_ == 0) return a * b.v_;
  if (a.n_ == 0) return b * a.v_;
  if (a.n_ != b.n_) {
    Jet pa = a, pb = b;
    const int n = Jet::common_size(a, b);
    pa.pad_to(n);
    pb.pad_to(n);
    return pa * pb;
  }
  const int n = a.n_;
  Jet r(a.v_ * b.v_);
  r.n_ = n;
  r.order_ = Jet::common_order(a, b);
  for (int i = 0; i < n; ++i) r.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
  if (r.order_ >= 2) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const int ik = i * kStride + k;
        r.h_[ik] = a.h_[ik] * b.v_ + a.v_ * b.h_[ik] + a.g_[i] * b.g_[k] + a.g_[k] * b.g_[i];
      }
  }
  return r;
}

Jet operator/(double a, const Jet& b) {
  const double inv = 1.0 / b.v_;
  return Jet::chain(b, a * inv, -a * inv * inv, 2.0 * a * inv * inv * inv);
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.n_ == 0) return a * (1.0 / b.v_);
  return a * (1.0 / b);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return Jet::chain(a, e, e, e);
}

Jet log(const Jet& a) {
  const double x = a.value();
  return Jet::chain(a, std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.value());
  return Jet::chain(a, s, 0.5 / s, -0.25 / (s * s * s));
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::chain(a, s, c, -s);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::chain(a, c, -s, -c);
}

Jet tan(const Jet& a) {
  const double t = std::tan(a.value());
  const double sec2 = 1.0 + t * t;
  return Jet::chain(a, t, sec2, 2.0 * t * sec2);
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet::chain(a, s, c, s);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet::chain(a, c, s, c);
}

Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value());
  const double s = 1.0 - t * t;
  return Jet::chain(a, t, s, -2.0 * t * s);
}

Jet asin(const Jet& a) {
  const double x = a.value();
  const double q = 1.0 - x * x;
  return Jet::chain(a, std::asin(x), 1.0 / std::sqrt(q), x / (q * std::sqrt(q)));
}

Jet acos(const Jet& a) {
  const double x = a.value();
  const double q = 1.0 - x * x;
  return Jet::chain(a, std::acos(x), -1.0 / std::sqrt(q), -x / (q * std::sqrt(q)));
}

Jet atan(const Jet& a) {
  const double x = a.value();
  const double q = 1.0 + x * x;
  return Jet::chain(a, std::atan(x), 1.0 / q, -2.0 * x / (q * q));
}

Jet atan2(const Jet& y, const Jet& x) {
  // Branch-consistent value with the derivatives of atan(y/x).
  const double angle = std::atan2(y.value(), x.value());
  if (std::abs(x.value()) >= std::abs(y.value())) {
    Jet r = atan(y / x);
    return r + (angle - r.value());
  }
  Jet r = -atan(x / y);
  return r + (angle - r.value());
}

Jet pow(const Jet& a, double p) {
  const double x = a.value();
  if (p == 0.0) return Jet(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  const double f0 = std::pow(x, p);
  const double f1 = p * std::pow(x, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(x, p - 2.0);
  return Jet::chain(a, f0, f1, f2);
}

Jet pow(const Jet& a, const Jet& p) {
  if (p.size() == 0) return pow(a, p.value());
  return exp(p * log(a));
}

}  // namespace warpgeo
