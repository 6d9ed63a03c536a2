#pragma once

// Scalar-generic geometry kernels over flat row-major arrays.
//
// The same code runs on double and on Dual (value + one directional
// derivative). Running a kernel on Duals seeded with ∂_m g and ∂_m ∂_k g
// gives the exact derivative of its output along coordinate m, which is how
// ∂Γ (for Riemann) and ∂n (for the spherical test) are obtained.

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace warpgeo::detail {

struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}  // NOLINT

  Dual& operator+=(const Dual& b) { v += b.v; d += b.d; return *this; }
  Dual& operator-=(const Dual& b) { v -= b.v; d -= b.d; return *this; }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
  }
};

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

// Gauss-Jordan inverse with partial pivoting on the value part.
// Returns false when a pivot falls below `pivot_floor`.
template <class T>
bool invert(int n, std::span<const T> a, std::vector<T>& inv, double pivot_floor = 1e-300) {
  std::vector<T> m(a.begin(), a.end());
  inv.assign(static_cast<std::size_t>(n * n), T(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = T(1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(value_of(m[r * n + col])) > std::abs(value_of(m[piv * n + col]))) piv = r;
    if (std::abs(value_of(m[piv * n + col])) <= pivot_floor) return false;
    if (piv != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(m[piv * n + k], m[col * n + k]);
        std::swap(inv[piv * n + k], inv[col * n + k]);
      }
    }
    const T p = m[col * n + col];
    for (int k = 0; k < n; ++k) {
      m[col * n + k] = m[col * n + k] / p;
      inv[col * n + k] = inv[col * n + k] / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = m[r * n + col];
      for (int k = 0; k < n; ++k) {
        m[r * n + k] = m[r * n + k] - f * m[col * n + k];
        inv[r * n + k] = inv[r * n + k] - f * inv[col * n + k];
      }
    }
  }
  return true;
}

// Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij); dg[k*n*n + i*n + j] = ∂_k g_ij.
// Output layout: gamma[k*n*n + i*n + j] = Γ^k_ij.
template <class T>
std::vector<T> christoffel_symbols(int n, std::span<const T> ginv, std::span<const T> dg) {
  const int nn = n * n;
  std::vector<T> lowered(static_cast<std::size_t>(n * nn), T(0.0));  // Γ_lij
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const T s = (dg[i * nn + j * n + l] + dg[j * nn + i * n + l] - dg[l * nn + i * n + j]) * T(0.5);
        lowered[l * nn + i * n + j] = s;
        lowered[l * nn + j * n + i] = s;
      }
  std::vector<T> gamma(static_cast<std::size_t>(n * nn), T(0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        T acc(0.0);
        for (int l = 0; l < n; ++l) acc += ginv[k * n + l] * lowered[l * nn + i * n + j];
        gamma[k * nn + i * n + j] = acc;
        gamma[k * nn + j * n + i] = acc;
      }
  return gamma;
}

// Extrinsic data of the coordinate slice spanned by `axes` (the other
// coordinates held fixed). Vectors are in full-chart components.
template <class T>
struct LeafData {
  int m = 0;
  std::vector<T> induced;      // m*m, f_ab = g(∂_a, ∂_b)
  std::vector<T> induced_inv;  // m*m
  std::vector<T> sff;          // (a*m + b)*n + k : II(∂_a, ∂_b)^k
  std::vector<T> mean;         // n : (1/m) f^{ab} II(∂_a, ∂_b)
};

// Tangential part of V (full components) relative to the slice.
template <class T>
std::vector<T> tangent_part(int n, std::span<const T> g, std::span<const int> axes,
                            std::span<const T> induced_inv, std::span<const T> vec) {
  const int m = static_cast<int>(axes.size());
  std::vector<T> inner(static_cast<std::size_t>(m), T(0.0));
  for (int d = 0; d < m; ++d) {
    T acc(0.0);
    for (int k = 0; k < n; ++k) acc += vec[k] * g[k * n + axes[d]];
    inner[d] = acc;
  }
  std::vector<T> out(static_cast<std::size_t>(n), T(0.0));
  for (int c = 0; c < m; ++c) {
    T coef(0.0);
    for (int d = 0; d < m; ++d) coef += induced_inv[c * m + d] * inner[d];
    out[axes[c]] += coef;
  }
  return out;
}

template <class T>
bool leaf_data(int n, std::span<const T> g, std::span<const T> gamma, std::span<const int> axes,
               LeafData<T>& out, double pivot_floor) {
  const int m = static_cast<int>(axes.size());
  const int nn = n * n;
  out.m = m;
  out.induced.assign(static_cast<std::size_t>(m * m), T(0.0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.induced[a * m + b] = g[axes[a] * n + axes[b]];
  if (!invert<T>(m, out.induced, out.induced_inv, pivot_floor)) return false;
  out.sff.assign(static_cast<std::size_t>(m * m * n), T(0.0));
  out.mean.assign(static_cast<std::size_t>(n), T(0.0));
  std::vector<T> cov(static_cast<std::size_t>(n));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int k = 0; k < n; ++k) cov[k] = gamma[k * nn + axes[a] * n + axes[b]];
      const std::vector<T> tan = tangent_part<T>(n, g, axes, out.induced_inv, cov);
      for (int k = 0; k < n; ++k) out.sff[(a * m + b) * n + k] = cov[k] - tan[k];
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const T fab = out.induced_inv[a * m + b];
      for (int k = 0; k < n; ++k) out.mean[k] += fab * out.sff[(a * m + b) * n + k];
    }
  for (int k = 0; k < n; ++k) out.mean[k] = out.mean[k] / T(static_cast<double>(m));
  return true;
}

}  // namespace warpgeo::detail
