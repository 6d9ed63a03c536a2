#pragma once

// Exact solutions: constant-curvature spaces, Robertson–Walker, the naive
// gravitational model, Schwarzschild and its Kruskal form, and the polar
// model of Minkowski space.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "warpgeo/killing.hpp"
#include "warpgeo/metric_chart.hpp"
#include "warpgeo/warped.hpp"

namespace warpgeo::atlas {

// R^{p,q} in Cartesian coordinates, metric diag(−I_p, I_q).
MetricChart minkowski(int p, int q);
MetricChart euclidean(int n);

// S^n of the given radius in nested polar angles (θ1, ..., θ_{n−1}, φ),
// metric R²(dθ1² + sin²θ1 (dθ2² + ...)). The angles θi lie in (0, π).
MetricChart round_sphere(int n, double radius = 1.0);

// H^n in geodesic polar form dχ² + sinh²χ dΩ²_{n−1}, χ > 0.
MetricChart hyperbolic_space(int n);

// R⁺ ×_{r²} S^{n−1}.
WarpedSpec polar_euclidean(int n);

// S^{p,q}(c) = {Q(x, x) = c} in R^{p,q}, as a graph over all ambient
// coordinates but one. For c > 0 the last coordinate is solved for (taken
// positive), for c < 0 the first. Curvature 1/c.
struct PseudoSphere {
  int p = 0;
  int q = 0;
  double c = 1.0;

  int dim() const { return p + q - 1; }
  Signature signature() const { return c > 0 ? Signature{p, q - 1} : Signature{p - 1, q}; }
  int solved_index() const { return c > 0 ? p + q - 1 : 0; }
  MetricChart chart() const;
  // Ambient point x(u).
  Vec embed(const Vec& u) const;
  std::vector<Jet> embed(std::span<const Jet> u) const;
  // The Killing field of A ∈ o(p, q), i.e. x ↦ A x restricted to the quadric.
  KillingCandidate killing_field(const Mat& a) const;
};

PseudoSphere pseudo_sphere(int p, int q, double c);

// ℝ ×_{e^t} ℝ^{n−1} (curvature −1/4), or with doubled = true the ℝ ×_{e^{2t}}
// ℝ^{n−1} chart of curvature −1.
WarpedSpec hyperbolic_warped(int n, bool doubled = false);

// (I, −dt²) ×_w N_k with N_k the Euclidean, unit-sphere or hyperbolic
// 3-space for k = 0, 1, −1.
WarpedSpec robertson_walker(ScalarField w, int k, std::string label = "robertson_walker");
// The same with an arbitrary Riemannian fiber.
WarpedSpec robertson_walker(ScalarField w, MetricChart fiber, std::string label);
// dx² + dy² + (1 + x²)dz², a fiber of non-constant curvature.
MetricChart deformed_fiber();

// (ℝ³∖0, Euclidean) ×_r (ℝ, −dt²).
WarpedSpec naive_gravity();

// Coordinates (r, t, θ, φ): L ×_{r²} S² with L = (r, t),
// dr²/(1 − 2m/r) − (1 − 2m/r)dt², r > 2m.
WarpedSpec schwarzschild_exterior(double m);
// Equatorial plane (r, t, φ): L ×_{r²} S¹.
WarpedSpec schwarzschild_equatorial(double m);
// L⁻ ×_{r²} S² with L⁻ = ]0, 2m[ × ℝ.
WarpedSpec schwarzschild_blackhole(double m);
// Coordinates (r, θ, φ, t): the static split (r, θ, φ) ×_{1−2m/r} (ℝ, −dt²).
WarpedSpec schwarzschild_static(double m);
// Inside the horizon the static direction is spacelike:
// (r, θ, φ) ×_{2m/r−1} (ℝ, dt²), with r timelike on the base.
WarpedSpec schwarzschild_blackhole_static(double m);

// Kruskal form F(xy)dxdy ⊕ r²dσ² over xy > c(m) with
// xy = (r/2m − 1)e^{r/2m}, so c(m) = −1 and r = 2m on the axes, and
// F(u) = (32m³/r)e^{−r/2m}. On x, y > 0 the transition from (r, t) is
// x = √(r/2m − 1)e^{(r+t)/4m}, y = √(r/2m − 1)e^{(r−t)/4m}, t = 2m ln(x/y).
struct KruskalChart {
  double mass = 1.0;

  double c() const { return -1.0; }
  // r(u) by guarded Newton iteration, u > −1.
  double r_of_u(double u) const;
  Jet r_of_u(const Jet& u) const;
  // b(u) = r(u) − 2m
  double b(double u) const { return r_of_u(u) - 2.0 * mass; }
  double F(double u) const;
  Jet F(const Jet& u) const;
  // (r, t) ↦ (x, y) on the exterior quadrant.
  Vec transition(double r, double t) const;
  // Jet version for pullbacks: returns (x, y) as functions of seeded (r, t).
  std::array<Jet, 2> transition(const Jet& r, const Jet& t) const;

  // (x, y) with metric F(xy)dxdy.
  MetricChart chart2() const;
  // (x, y, θ, φ) as L ×_{r²} S².
  WarpedSpec spec4() const;
};

KruskalChart kruskal(double m);

// Polar model of R^{1,n} about a centre: inside the light cone
// (ρ, −dρ²) ×_{ρ²} H^n, outside (ρ, dρ²) ×_{ρ²} dS^n, with the fibers given
// as graph charts of S^{1,n}(−1) and S^{1,n}(+1).
struct PolarModel {
  int n = 3;
  Vec center;
  WarpedSpec interior;
  WarpedSpec exterior;

  // (ρ, u) ↦ center + ρ x(u)
  Vec to_ambient(bool inside, const Vec& point) const;
};

// Throws UnsupportedAmbient unless the ambient chart is flat Lorentzian
// Minkowski space in Cartesian coordinates.
PolarModel polar_model(const MetricChart& ambient, const Vec& center);

struct FluidReport {
  std::vector<double> t;
  std::vector<double> mu;
  std::vector<double> p;
  double offdiag_residual = 0.0;   // max |T(e0, ea)|
  double isotropy_residual = 0.0;  // max spread of the spatial eigenvalues
};

// T in an orthonormal frame e0 = ∂_t, ea spatial: μ = T(e0, e0), p the mean
// spatial eigenvalue. Throws NotFluidForm when the isotropy residual exceeds
// 1e−6 and InvalidArgument unless the base is (t, −dt²).
FluidReport perfect_fluid(const WarpedSpec& rw, std::span<const double> t_samples, const Vec& fiber_point);

enum class Physicality { Physical, AntiPhysical };
std::string_view to_string(Physicality p);

// Physical iff both factors are definite. Throws NotLorentzian unless the
// total signature is Lorentzian.
Physicality classify_physical(const WarpedSpec& spec);

// Builtin registry.
using Params = std::map<std::string, double>;

struct Built {
  std::string id;
  MetricChart chart;                // assembled when warped
  std::optional<WarpedSpec> spec;
  std::vector<int> killing_axes;    // coordinate directions that are Killing
  std::function<Vec(std::mt19937_64&)> sampler;  // interior domain points

  std::vector<int> base_axes() const;
  std::vector<int> fiber_axes() const;
};

struct ParamInfo {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct SolutionInfo {
  std::string id;
  std::string description;
  std::vector<ParamInfo> params;
};

const std::vector<SolutionInfo>& list_solutions();

// Throws UnknownSolution for an unknown id and BadParams for unknown or
// invalid parameters.
Built build(const std::string& id, const Params& params = {});

}  // namespace warpgeo::atlas
