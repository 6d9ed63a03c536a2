#include "warpgeo/pseudo_orthogonal.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <random>

#include "warpgeo/errors.hpp"

namespace warpgeo {

namespace {

void check_signature(int p, int q) {
  if (p < 0 || q < 0 || p + q < 2 || p + q > 8)
    throw Error(ErrorCode::InvalidArgument, "o(p,q) needs p, q >= 0 and 2 <= p + q <= 8");
}

Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = nd(rng);
  return c.normalized();
}

Mat combine(const std::vector<Mat>& basis, const Vec& c) {
  Mat a = Mat::Zero(basis[0].rows(), basis[0].cols());
  for (std::size_t i = 0; i < basis.size(); ++i) a += c[static_cast<Eigen::Index>(i)] * basis[i];
  return a;
}

double square_norm2(const Mat& a) { return (a * a).squaredNorm(); }

struct LocalMin {
  Vec c;
  double f = 0.0;
  std::size_t iterations = 0;
};

LocalMin descend(const std::vector<Mat>& basis, Vec c) {
  const int d = static_cast<int>(basis.size());
  LocalMin out;
  Mat a = combine(basis, c);
  double f = square_norm2(a);
  double step = 0.1;
  std::size_t it = 0;
  for (; it < 3000; ++it) {
    const Mat a2 = a * a;
    const Mat ga = 2.0 * (a2 * a.transpose() + a.transpose() * a2);
    Vec g(d);
    for (int i = 0; i < d; ++i) g[i] = (ga.array() * basis[static_cast<std::size_t>(i)].array()).sum();
    const Vec rg = g - g.dot(c) * c;
    const double gn2 = rg.squaredNorm();
    if (gn2 < 1e-26) break;
    step = std::min(step * 2.0, 1.0);
    bool moved = false;
    while (step > 1e-16) {
      const Vec cn = (c - step * rg).normalized();
      const Mat an = combine(basis, cn);
      const double fn = square_norm2(an);
      if (fn <= f - 1e-4 * step * gn2) {
        const double decrease = f - fn;
        c = cn;
        a = an;
        f = fn;
        moved = decrease > 1e-18 * std::max(1.0, f);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  out.c = c;
  out.f = f;
  out.iterations = it;
  return out;
}

}  // namespace

Mat pseudo_orthogonal_j(int p, int q) {
  Vec d(p + q);
  d.head(p).setConstant(-1.0);
  d.tail(q).setConstant(1.0);
  return d.asDiagonal();
}

double membership_residual(const Mat& a, int p, int q) {
  const Mat j = pseudo_orthogonal_j(p, q);
  return (a * j + j * a.transpose()).norm();
}

double PseudoOrthogonalElement::membership_residual() const { return warpgeo::membership_residual(a, p, q); }

Mat project_to_algebra(const Mat& a, int p, int q) {
  const Mat j = pseudo_orthogonal_j(p, q);
  return 0.5 * (a - j * a.transpose() * j);
}

std::vector<Mat> pseudo_orthogonal_basis(int p, int q) {
  check_signature(p, q);
  const int n = p + q;
  const Mat j = pseudo_orthogonal_j(p, q);
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      Mat e = Mat::Zero(n, n);
      e(i, k) = 1.0;
      e(k, i) = -1.0;
      Mat b = e * j;
      out.push_back(b / b.norm());
    }
  return out;
}

Mat square_zero_generator_b() {
  Mat b = Mat::Zero(4, 4);
  b(0, 2) = 1.0;
  b(1, 3) = 1.0;
  return b;
}

Mat square_zero_generator_standard() {
  // (a1, a2, b1, b2) -> (x, y, z, t) with xt − yz = −a1² − a2² + b1² + b2².
  Mat m(4, 4);
  m << 1, 0, 1, 0,  //
      0, 1, 0, 1,   //
      0, 1, 0, -1,  //
      -1, 0, 1, 0;
  return m.inverse() * square_zero_generator_b() * m;
}

SquareZeroCertificate square_zero_certificate(int p, int q, int starts, std::uint64_t seed, double threshold) {
  check_signature(p, q);
  if (starts <= 0) throw Error(ErrorCode::InvalidArgument, "certificate needs at least one start");
  const std::vector<Mat> basis = pseudo_orthogonal_basis(p, q);
  SquareZeroCertificate cert;
  cert.p = p;
  cert.q = q;
  cert.starts = starts;
  cert.seed = seed;
  cert.threshold = threshold;
  cert.min_ratio = INFINITY;
  cert.max_ratio = 0.0;
  for (int s = 0; s < starts; ++s) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(s));
    const LocalMin m = descend(basis, random_unit(rng, static_cast<int>(basis.size())));
    const double ratio = std::sqrt(m.f);
    cert.start_minima.push_back(ratio);
    cert.total_iterations += m.iterations;
    cert.max_ratio = std::max(cert.max_ratio, ratio);
    if (ratio < cert.min_ratio) {
      cert.min_ratio = ratio;
      cert.minimizer = combine(basis, m.c);
    }
  }
  return cert;
}

SquareZeroSpan square_zero_span(int p, int q, std::uint64_t seed) {
  check_signature(p, q);
  const int n = p + q;
  SquareZeroSpan out;
  out.p = p;
  out.q = q;
  out.algebra_dim = n * (n - 1) / 2;
  if (std::min(p, q) < 2) {
    out.certificate = square_zero_certificate(p, q, 100, seed);
    return out;
  }

  const Mat b = square_zero_generator_standard();
  const Mat j = pseudo_orthogonal_j(p, q);
  std::vector<Mat> seeds;
  for (int i1 = 0; i1 < p; ++i1)
    for (int i2 = i1 + 1; i2 < p; ++i2)
      for (int k1 = p; k1 < n; ++k1)
        for (int k2 = k1 + 1; k2 < n; ++k2) {
          const int idx[4] = {i1, i2, k1, k2};
          Mat a = Mat::Zero(n, n);
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) a(idx[r], idx[c]) = b(r, c);
          seeds.push_back(a);
        }

  const std::vector<Mat> basis = pseudo_orthogonal_basis(p, q);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);
  const int wanted = 3 * out.algebra_dim;
  for (int g = 0; g < wanted; ++g) {
    const Mat& a = seeds[static_cast<std::size_t>(g) % seeds.size()];
    const Mat c = 0.8 * combine(basis, random_unit(rng, static_cast<int>(basis.size())));
    Vec signs(n);
    for (int i = 0; i < n; ++i) signs[i] = coin(rng) ? 1.0 : -1.0;
    const Mat h = signs.asDiagonal() * Mat(c.exp());
    Mat conj = h * a * h.inverse();
    conj /= conj.norm();
    out.max_square_residual = std::max(out.max_square_residual, (conj * conj).norm());
    out.max_membership_residual = std::max(out.max_membership_residual, (conj * j + j * conj.transpose()).norm());
    out.generators.push_back(std::move(conj));
  }

  Mat stacked(static_cast<Eigen::Index>(out.generators.size()), n * n);
  for (std::size_t r = 0; r < out.generators.size(); ++r)
    stacked.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const Vec>(out.generators[r].data(), n * n).transpose();
  Eigen::JacobiSVD<Mat> svd(stacked);
  const Vec sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = 1e-8 * (sv.size() ? sv[0] : 0.0);
  out.span_dim = static_cast<int>((sv.array() > cutoff).count());
  return out;
}

SquareZeroCertificate desitter_no_lightlike(int d, std::uint64_t seed) {
  if (d < 2 || d > 6) throw Error(ErrorCode::InvalidArgument, "de Sitter dimension parameter must be in [2, 6]");
  return square_zero_certificate(1, d + 1, 100, seed);
}

}  // namespace warpgeo
