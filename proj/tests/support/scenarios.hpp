#pragma once

// Charts carrying geodesic Killing fields, with generators of random
// (field, vector, point) triples for the curvature identity.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/killing.hpp"
#include "warpgeo/pseudo_orthogonal.hpp"

namespace scenario {

using namespace warpgeo;

struct IdentityCase {
  std::string name;
  MetricChart chart;
  std::function<KillingCandidate(std::mt19937_64&)> field;
  std::function<Vec(std::mt19937_64&)> point;
  bool lorentzian_lightlike = false;  // Lorentzian chart and ⟨X, X⟩ = 0
};

inline KillingCandidate linear_field(const MetricChart& chart, const Mat& a, const Vec& shift, std::string label) {
  return {[a, shift](std::span<const Jet> x) {
            std::vector<Jet> out(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) {
              Jet s = shift[static_cast<Eigen::Index>(k)];
              for (std::size_t j = 0; j < x.size(); ++j)
                s += a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * x[j];
              out[k] = s;
            }
            return out;
          },
          chart, std::move(label)};
}

// Pool of square-zero elements of o(p, q), p, q >= 2.
inline std::vector<Mat> square_zero_pool(int p, int q) { return square_zero_span(p, q, 7).generators; }

inline Mat pick(const std::vector<Mat>& pool, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

inline std::vector<IdentityCase> curvature_identity_cases() {
  std::vector<IdentityCase> out;

  {
    const MetricChart m = atlas::minkowski(1, 3);
    out.push_back({"minkowski(1,3) translations", m,
                   [m](std::mt19937_64& rng) {
                     return linear_field(m, Mat::Zero(4, 4), oracle::random_vector(rng, 4), "translation");
                   },
                   [](std::mt19937_64& rng) { return oracle::random_vector(rng, 4, 2.0); }, false});
    out.push_back({"minkowski(1,3) null translations", m,
                   [m](std::mt19937_64& rng) {
                     Vec s = oracle::random_vector(rng, 4);
                     s[0] = s.tail(3).norm();
                     return linear_field(m, Mat::Zero(4, 4), s, "null translation");
                   },
                   [](std::mt19937_64& rng) { return oracle::random_vector(rng, 4, 2.0); }, true});
  }
  {
    const MetricChart m = atlas::minkowski(2, 2);
    const auto pool = square_zero_pool(2, 2);
    out.push_back({"R^{2,2} square-zero fields", m,
                   [m, pool](std::mt19937_64& rng) { return linear_field(m, pick(pool, rng), Vec::Zero(4), "Ax"); },
                   [](std::mt19937_64& rng) { return oracle::random_vector(rng, 4, 2.0); }, false});
  }
  struct Quadric {
    int p, q;
    double c;
    bool lorentzian;
  };
  for (const Quadric& qd : {Quadric{2, 2, -1.0, true}, Quadric{2, 2, 1.0, false}, Quadric{2, 3, -1.0, true}}) {
    const atlas::PseudoSphere s = atlas::pseudo_sphere(qd.p, qd.q, qd.c);
    const auto pool = square_zero_pool(qd.p, qd.q);
    const atlas::Built b = atlas::build("pseudo_sphere", {{"p", qd.p}, {"q", qd.q}, {"c", qd.c}});
    out.push_back({"S^{" + std::to_string(qd.p) + "," + std::to_string(qd.q) + "}(" + std::to_string(int(qd.c)) +
                       ") square-zero fields",
                   s.chart(), [s, pool](std::mt19937_64& rng) { return s.killing_field(pick(pool, rng)); }, b.sampler,
                   qd.lorentzian});
  }
  return out;
}

}  // namespace scenario
