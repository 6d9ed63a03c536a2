#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "expression.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/curvature.hpp"
#include "warpgeo/errors.hpp"
#include "warpgeo/foliation.hpp"
#include "warpgeo/geodesic.hpp"
#include "warpgeo/killing.hpp"
#include "warpgeo/pseudo_orthogonal.hpp"
#include "warpgeo/reduction.hpp"

namespace warpgeo::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

struct Context {
  const Manifest& m;
  RunOptions opt;
  std::string format;
  std::uint64_t seed;
  std::mt19937_64 rng;
  const Json& params;
  const MetricChart& chart;

  Context(const Manifest& manifest, const RunOptions& o)
      : m(manifest), opt(o), seed(o.seed.value_or(manifest.seed)), rng(seed), params(manifest.task_params),
        chart(manifest.chart.chart) {}

  std::string where(const std::string& key = "") const { return "/task_params" + (key.empty() ? "" : "/" + key); }

  Json header() const {
    Json j;
    j["manifest_hash"] = m.hash;
    j["task"] = m.task;
    j["chart"] = m.chart.description;
    j["seed"] = seed;
    return j;
  }

  ode::Options ode_options() const {
    ode::Options o;
    o.abs_tol = number_or(params, "abs_tol", o.abs_tol, where());
    o.rel_tol = number_or(params, "rel_tol", o.rel_tol, where());
    o.sample_interval = number_or(params, "sample_interval", 0.0, where());
    o.max_step = number_or(params, "max_step", o.max_step, where());
    if (params.contains("max_steps")) o.max_steps = static_cast<std::size_t>(number_at(params, "max_steps", where()));
    if (opt.tol) {
      o.rel_tol = *opt.tol;
      o.abs_tol = *opt.tol * 1e-2;
    }
    return o;
  }

  double structural_tol(double fallback) const { return opt.tol.value_or(number_or(params, "tol", fallback, where())); }

  Vec sample() {
    if (!m.chart.sampler) schema_error(where(), "this chart has no sampler; give explicit points");
    return m.chart.sampler(rng);
  }

  // "region": {"points": [[...]]} | {"box": [[lo, hi], ...], "count": N} | {"count": N}
  std::vector<Vec> region(int default_count) {
    const int n = chart.dim();
    std::vector<Vec> out;
    const Json r = params.contains("region") ? params["region"] : Json::object();
    const std::string at = where("region");
    if (r.contains("points")) {
      for (std::size_t i = 0; i < r["points"].size(); ++i)
        out.push_back(vector_at(Json{{"p", r["points"][i]}}, "p", n, at + "/points/" + std::to_string(i)));
    } else {
      const int count = static_cast<int>(number_or(r, "count", default_count, at));
      if (r.contains("box")) {
        const Json& box = r["box"];
        if (!box.is_array() || static_cast<int>(box.size()) != n) schema_error(at + "/box", "expected one [lo, hi] per coordinate");
        for (int k = 0; k < count; ++k) {
          Vec x(n);
          for (int i = 0; i < n; ++i) {
            const Vec lh = vector_at(Json{{"b", box[static_cast<std::size_t>(i)]}}, "b", 2, at + "/box/" + std::to_string(i));
            x[i] = lh[0] + (lh[1] - lh[0]) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
          }
          out.push_back(x);
        }
      } else {
        for (int k = 0; k < count; ++k) out.push_back(sample());
      }
    }
    if (out.empty()) schema_error(at, "empty region");
    for (const Vec& x : out)
      if (!chart.in_domain(x)) throw Error(ErrorCode::OutOfDomain, "region point outside the chart domain");
    return out;
  }

  std::vector<int> axes_or(const std::string& key, std::vector<int> fallback) const {
    if (!params.contains(key)) return fallback;
    return m.chart.axes(params[key]);
  }

  std::vector<int> base_axes() const {
    std::vector<int> a;
    if (m.chart.spec)
      for (int i = 0; i < m.chart.spec->base_dim(); ++i) a.push_back(i);
    return axes_or("base_axes", a);
  }
  std::vector<int> fiber_axes() const {
    std::vector<int> a;
    if (m.chart.spec)
      for (int i = m.chart.spec->base_dim(); i < chart.dim(); ++i) a.push_back(i);
    return axes_or("fiber_axes", a);
  }
};

class Output {
 public:
  Output(const Context& ctx) : ctx_(ctx) {}

  std::string write(const std::string& content) {
    fs::path p = ctx_.m.output_path.empty() ? fs::path(ctx_.m.task + "." + ctx_.format) : fs::path(ctx_.m.output_path);
    if (p.extension() != "." + ctx_.format) p.replace_extension(ctx_.format);
    if (!ctx_.opt.out_dir.empty() && p.is_relative()) p = fs::path(ctx_.opt.out_dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + p.string() + "'");
    f << content;
    return p.string();
  }

 private:
  const Context& ctx_;
};

void require_format(const Context& ctx, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (ctx.format == a) return;
  throw Error(ErrorCode::InvalidArgument, "task '" + ctx.m.task + "' cannot write " + ctx.format);
}

// Trajectory tasks

// With a sample interval only grid points and the last sample are written.
std::vector<std::size_t> written_samples(const Trajectory& tr, double interval) {
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < tr.samples.size(); ++s) {
    const double k = tr.samples[s].tau / interval;
    if (interval <= 0.0 || s + 1 == tr.samples.size() || std::abs(k - std::round(k)) < 1e-9) keep.push_back(s);
  }
  return keep;
}

std::string trajectory_csv(const MetricChart& chart, const Trajectory& tr, const std::vector<std::size_t>& keep) {
  std::ostringstream os;
  os << "tau";
  for (const auto& c : chart.coordinate_names()) os << "," << c;
  for (const auto& c : chart.coordinate_names()) os << ",v_" << c;
  for (const auto& m : tr.monitor_names) os << "," << m;
  os << "\n";
  for (std::size_t s : keep) {
    const GeodesicState& st = tr.samples[s];
    os << num(st.tau);
    for (Eigen::Index i = 0; i < st.x.size(); ++i) os << "," << num(st.x[i]);
    for (Eigen::Index i = 0; i < st.v.size(); ++i) os << "," << num(st.v[i]);
    for (const auto& mv : tr.monitor_values) os << "," << num(mv[s]);
    os << "\n";
  }
  return os.str();
}

std::string trajectory_json(const Context& ctx, const Trajectory& tr, const std::vector<std::size_t>& keep) {
  Json j = ctx.header();
  j["termination"] = std::string(ode::to_string(tr.termination));
  j["message"] = tr.message;
  j["tau_end"] = tr.tau_end();
  j["steps_accepted"] = tr.stats.accepted;
  j["steps_rejected"] = tr.stats.rejected;
  Json drift = Json::object();
  for (const auto& name : tr.monitor_names) drift[name] = tr.drift(name);
  j["monitor_drift"] = drift;
  Json samples = Json::array();
  for (std::size_t s : keep) {
    Json row;
    row["tau"] = tr.samples[s].tau;
    row["x"] = vec_json(tr.samples[s].x);
    row["v"] = vec_json(tr.samples[s].v);
    for (std::size_t k = 0; k < tr.monitor_names.size(); ++k) row[tr.monitor_names[k]] = tr.monitor_values[k][s];
    samples.push_back(row);
  }
  j["samples"] = samples;
  return j.dump(2) + "\n";
}

GeodesicState initial_state(Context& ctx) {
  const int n = ctx.chart.dim();
  GeodesicState init;
  init.x = vector_at(ctx.params, "x0", n, ctx.where());
  init.v = vector_at(ctx.params, "v0", n, ctx.where());
  if (!ctx.chart.in_domain(init.x)) throw Error(ErrorCode::OutOfDomain, "x0 lies outside the chart domain");
  if (ctx.params.value("normalize", false)) {
    const Mat g = eval_metric(ctx.chart, init.x);
    const double e = init.v.dot(g * init.v);
    if (std::abs(e) < 1e-14) throw Error(ErrorCode::InvalidArgument, "cannot normalize a null v0");
    init.v /= std::sqrt(std::abs(e));
  }
  return init;
}

RunResult finish_trajectory(Context& ctx, const MetricChart& chart, const Trajectory& tr) {
  RunResult r;
  Output out(ctx);
  const auto keep = written_samples(tr, ctx.ode_options().sample_interval);
  r.files.push_back(out.write(ctx.format == "csv" ? trajectory_csv(chart, tr, keep) : trajectory_json(ctx, tr, keep)));
  if (!tr.completed()) {
    r.exit_code = 2;
    r.message = std::string(ode::to_string(tr.termination)) + " at tau " + num(tr.tau_end()) + ": " + tr.message;
  }
  return r;
}

std::vector<KillingCandidate> charges(Context& ctx) {
  std::vector<KillingCandidate> out;
  for (int a : ctx.axes_or("killing_axes", ctx.m.chart.killing_axes)) {
    KillingCandidate k = coordinate_field(ctx.chart, a);
    k.label = ctx.chart.coordinate_names().empty() ? std::to_string(a) : ctx.chart.coordinate_names()[static_cast<std::size_t>(a)];
    out.push_back(k);
  }
  return out;
}

RunResult task_geodesic(Context& ctx) {
  require_format(ctx, {"csv", "json"});
  GeodesicOptions opts;
  opts.ode = ctx.ode_options();
  opts.killing = charges(ctx);
  const GeodesicState init = initial_state(ctx);
  const Trajectory tr = integrate_direct(ctx.chart, init, number_at(ctx.params, "tau_end", ctx.where()), opts);
  return finish_trajectory(ctx, ctx.chart, tr);
}

RunResult task_reduced(Context& ctx) {
  require_format(ctx, {"csv", "json"});
  if (!ctx.m.chart.spec) throw Error(ErrorCode::InvalidArgument, "reduced-geodesic needs a warped chart");
  const WarpedSpec& spec = *ctx.m.chart.spec;
  const GeodesicState init = initial_state(ctx);
  const std::string mode = ctx.params.value("mode", spec.fiber_dim() == 1 ? "clairaut" : "coupled");
  if (mode != "clairaut" && mode != "coupled") schema_error(ctx.where("mode"), "expected clairaut or coupled");
  const ReducedGeodesicProblem problem = mode == "clairaut" ? reduce(spec, init) : reduce_coupled(spec, init);
  const Trajectory tr = integrate_reduced(problem, number_at(ctx.params, "tau_end", ctx.where()), ctx.ode_options());
  return finish_trajectory(ctx, ctx.chart, tr);
}

RunResult task_mechanical(Context& ctx) {
  require_format(ctx, {"csv", "json"});
  if (!ctx.params.contains("potential")) schema_error(ctx.where(), "missing \"potential\"");
  const Expression v = Expression::compile(ctx.params["potential"].get<std::string>(), ctx.chart.coordinate_names(), ctx.m.constants);
  GeodesicOptions opts;
  opts.ode = ctx.ode_options();
  const GeodesicState init = initial_state(ctx);
  const Trajectory tr = integrate_mechanical(ctx.chart, v.field(), init, number_at(ctx.params, "tau_end", ctx.where()), opts);
  return finish_trajectory(ctx, ctx.chart, tr);
}

// Curvature grids

struct GridAxis {
  int axis;
  std::vector<double> values;
};

std::vector<GridAxis> grid_axes(Context& ctx) {
  std::vector<GridAxis> out;
  if (!ctx.params.contains("grid") || !ctx.params["grid"].is_array()) schema_error(ctx.where("grid"), "expected an array of axes");
  const Json& grid = ctx.params["grid"];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string at = ctx.where("grid/" + std::to_string(i));
    const Json& g = grid[i];
    if (!g.contains("axis")) schema_error(at, "missing \"axis\"");
    GridAxis a{ctx.m.chart.axis(g["axis"]), {}};
    if (g.contains("values")) {
      const Vec v = vector_at(g, "values", -1, at);
      a.values.assign(v.data(), v.data() + v.size());
    } else {
      const double lo = number_at(g, "from", at), hi = number_at(g, "to", at);
      const int count = static_cast<int>(number_at(g, "count", at));
      if (count < 1) schema_error(at + "/count", "must be positive");
      for (int k = 0; k < count; ++k) a.values.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
    }
    out.push_back(a);
  }
  return out;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double quantity(const std::string& q, const CurvatureAtPoint& c, const std::string& at) {
  if (q == "max_abs_ricci") return max_abs(c.ricci);
  if (q == "max_abs_riemann") return c.riemann.max_abs();
  if (q == "max_abs_einstein") return max_abs(c.einstein);
  if (q == "scalar") return c.scalar;
  if (q == "bianchi_residual") return c.bianchi_residual();
  if (q == "ricci_trace_residual") return c.ricci_trace_residual();
  schema_error(at, "unknown quantity '" + q + "'");
}

RunResult task_curvature(Context& ctx) {
  require_format(ctx, {"csv", "json"});
  const std::vector<GridAxis> grid = grid_axes(ctx);
  const int n = ctx.chart.dim();
  Vec point = ctx.params.contains("point") ? vector_at(ctx.params, "point", n, ctx.where()) : ctx.sample();
  std::vector<std::string> quantities{"max_abs_ricci"};
  if (ctx.params.contains("quantities")) quantities = ctx.params["quantities"].get<std::vector<std::string>>();
  Tolerances tol;
  if (ctx.opt.tol) tol.structural = *ctx.opt.tol;

  std::vector<std::string> columns;
  for (const auto& g : grid)
    columns.push_back(ctx.chart.coordinate_names().empty() ? "x" + std::to_string(g.axis)
                                                           : ctx.chart.coordinate_names()[static_cast<std::size_t>(g.axis)]);
  for (const auto& q : quantities) columns.push_back(q);

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> idx(grid.size(), 0);
  for (;;) {
    std::vector<double> row;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      point[grid[a].axis] = grid[a].values[idx[a]];
      row.push_back(grid[a].values[idx[a]]);
    }
    const CurvatureAtPoint c = curvature(ctx.chart, point, tol);
    for (const auto& q : quantities) row.push_back(quantity(q, c, ctx.where("quantities")));
    rows.push_back(row);
    // odometer, last axis fastest
    bool carry = true;
    for (std::size_t a = grid.size(); carry && a > 0; --a) {
      if (++idx[a - 1] < grid[a - 1].values.size())
        carry = false;
      else
        idx[a - 1] = 0;
    }
    if (carry) break;
  }

  std::string content;
  if (ctx.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
      os << "\n";
    }
    content = os.str();
  } else {
    Json j = ctx.header();
    j["columns"] = columns;
    j["rows"] = rows;
    j["point"] = vec_json(point);
    content = j.dump(2) + "\n";
  }
  RunResult r;
  r.files.push_back(Output(ctx).write(content));
  return r;
}

// Reports

Json foliation_json(const FoliationReport& f) {
  Json j;
  j["verdict"] = std::string(to_string(f.verdict));
  j["orthogonal"] = f.orthogonal;
  j["orthogonal_residual"] = f.orthogonal_residual;
  j["second_fundamental_norm"] = f.second_fundamental_norm;
  j["umbilic_residual"] = f.umbilic_residual;
  j["spherical_residual"] = f.spherical_residual;
  return j;
}

RunResult task_classify(Context& ctx) {
  require_format(ctx, {"json"});
  const std::vector<int> base = ctx.base_axes(), fiber = ctx.fiber_axes();
  if (base.empty() || fiber.empty()) schema_error(ctx.where(), "give base_axes and fiber_axes");
  const std::vector<Vec> region = ctx.region(20);
  const double tol = ctx.structural_tol(1e-8);
  const WarpedDetection d = detect_warped_structure(ctx.chart, base, fiber, region, tol);
  Json j = ctx.header();
  j["tol"] = tol;
  j["region_size"] = region.size();
  j["base_axes"] = base;
  j["fiber_axes"] = fiber;
  j["base_leaves"] = foliation_json(d.base_report);
  j["fiber_leaves"] = foliation_json(d.fiber_report);
  j["verdict"] = std::string(to_string(d.fiber_report.verdict));
  j["warped"] = d.warped;
  if (d.warped) j["warping"] = d.warping;
  RunResult r;
  r.files.push_back(Output(ctx).write(j.dump(2) + "\n"));
  return r;
}

RunResult task_fluid(Context& ctx) {
  require_format(ctx, {"csv", "json"});
  if (!ctx.m.chart.spec) throw Error(ErrorCode::InvalidArgument, "fluid needs a Robertson-Walker chart");
  const WarpedSpec& spec = *ctx.m.chart.spec;
  std::vector<double> ts;
  if (ctx.params.contains("t")) {
    const Vec range = vector_at(ctx.params, "t", 3, ctx.where());
    const int count = static_cast<int>(range[2]);
    if (count < 1) schema_error(ctx.where("t"), "expected [from, to, count]");
    for (int k = 0; k < count; ++k) ts.push_back(count == 1 ? range[0] : range[0] + (range[1] - range[0]) * k / (count - 1));
  } else {
    const Vec v = vector_at(ctx.params, "t_samples", -1, ctx.where());
    ts.assign(v.data(), v.data() + v.size());
  }
  const Vec fiber_point = ctx.params.contains("fiber_point") ? vector_at(ctx.params, "fiber_point", spec.fiber_dim(), ctx.where())
                                                             : fiber_part(spec, ctx.sample());
  const atlas::FluidReport rep = atlas::perfect_fluid(spec, ts, fiber_point);
  std::string content;
  if (ctx.format == "csv") {
    std::ostringstream os;
    os << "t,mu,p\n";
    for (std::size_t i = 0; i < rep.t.size(); ++i) os << num(rep.t[i]) << "," << num(rep.mu[i]) << "," << num(rep.p[i]) << "\n";
    content = os.str();
  } else {
    Json j = ctx.header();
    j["t"] = rep.t;
    j["mu"] = rep.mu;
    j["p"] = rep.p;
    j["fiber_point"] = vec_json(fiber_point);
    j["offdiag_residual"] = rep.offdiag_residual;
    j["isotropy_residual"] = rep.isotropy_residual;
    content = j.dump(2) + "\n";
  }
  RunResult r;
  r.files.push_back(Output(ctx).write(content));
  return r;
}

RunResult task_killing(Context& ctx) {
  require_format(ctx, {"json"});
  const int n = ctx.chart.dim();
  const KillingCandidate cand = [&] {
    if (ctx.params.contains("axis")) return coordinate_field(ctx.chart, ctx.m.chart.axis(ctx.params["axis"]));
    if (!ctx.params.contains("components")) schema_error(ctx.where(), "give \"axis\" or \"components\"");
    const Json& comps = ctx.params["components"];
    if (!comps.is_array() || static_cast<int>(comps.size()) != n)
      schema_error(ctx.where("components"), "expected " + std::to_string(n) + " expressions");
    std::vector<Expression> xs;
    for (const Json& c : comps) xs.push_back(Expression::compile(c.get<std::string>(), ctx.chart.coordinate_names(), ctx.m.constants));
    VectorField f = [xs](std::span<const Jet> x) {
      std::vector<Jet> out;
      for (const Expression& e : xs) out.push_back(e(x));
      return out;
    };
    return KillingCandidate{f, ctx.chart, "field"};
  }();
  const std::vector<Vec> region = ctx.region(10);
  const double threshold = ctx.structural_tol(1e-8);
  Json j = ctx.header();
  j["region_size"] = region.size();
  j["threshold"] = threshold;
  const double residual = killing_residual(cand, region);
  j["residual"] = residual;
  j["killing"] = residual < threshold;
  if (residual < threshold) {
    const KillingClassification k = classify_killing(cand, region, threshold);
    j["kind"] = std::string(to_string(k.kind));
    j["geodesic"] = k.geodesic;
    j["length"] = k.length;
    j["length_spread"] = k.spread;
    if (k.geodesic) {
      // ⟨R(X,Y)X,Y⟩ = ⟨∇_Y X, ∇_Y X⟩ at random Y
      std::normal_distribution<double> gauss;
      double worst = 0.0, form_max = 0.0;
      const int trials = static_cast<int>(number_or(ctx.params, "identity_trials", 4, ctx.where()));
      for (const Vec& x : region)
        for (int t = 0; t < trials; ++t) {
          Vec y(n);
          for (int i = 0; i < n; ++i) y[i] = gauss(ctx.rng);
          worst = std::max(worst, curvature_identity(cand, y, x, threshold));
          form_max = std::max(form_max, killing_curvature_form(cand, y, x));
        }
      j["identity_residual"] = worst;
      j["max_curvature_form"] = form_max;
    }
  }
  RunResult r;
  r.files.push_back(Output(ctx).write(j.dump(2) + "\n"));
  return r;
}

RunResult task_certify(Context& ctx) {
  require_format(ctx, {"json"});
  const int p = static_cast<int>(number_at(ctx.params, "p", ctx.where()));
  const int q = static_cast<int>(number_at(ctx.params, "q", ctx.where()));
  if (p < 0 || q < 0 || p + q < 2) schema_error(ctx.where(), "need p, q >= 0 with p + q >= 2");
  const int starts = static_cast<int>(number_or(ctx.params, "starts", 100, ctx.where()));
  const double threshold = ctx.structural_tol(0.1);
  const SquareZeroCertificate c = square_zero_certificate(p, q, starts, ctx.seed, threshold);
  Json j = ctx.header();
  j["p"] = p;
  j["q"] = q;
  j["algebra_dim"] = (p + q) * (p + q - 1) / 2;
  Json cert;
  cert["starts"] = c.starts;
  cert["threshold"] = c.threshold;
  cert["min_ratio"] = c.min_ratio;
  cert["max_ratio"] = c.max_ratio;
  cert["total_iterations"] = c.total_iterations;
  cert["no_square_zero_elements"] = c.empty();
  j["certificate"] = cert;
  if (std::min(p, q) >= 2) {
    const SquareZeroSpan s = square_zero_span(p, q, ctx.seed);
    Json span;
    span["span_dim"] = s.span_dim;
    span["generators"] = s.generators.size();
    span["max_square_residual"] = s.max_square_residual;
    span["max_membership_residual"] = s.max_membership_residual;
    j["square_zero_span"] = span;
    if (p == 2 && q == 2) {
      const Mat b = square_zero_generator_standard();
      Json g;
      g["matrix"] = Json::array();
      for (Eigen::Index i = 0; i < b.rows(); ++i) g["matrix"].push_back(vec_json(b.row(i).transpose()));
      g["square_norm"] = (b * b).norm();
      g["membership_residual"] = membership_residual(b, 2, 2);
      j["generator_b"] = g;
    }
  }
  RunResult r;
  r.files.push_back(Output(ctx).write(j.dump(2) + "\n"));
  return r;
}

std::string default_format(const std::string& task) {
  return task == "classify" || task == "killing" || task == "certify" ? "json" : "csv";
}

// CSV reading for compare

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": empty file");
  t.columns = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.columns.size())
      throw Error(ErrorCode::ParseError, path + ": line " + std::to_string(lineno) + ", column 1: expected " +
                                             std::to_string(t.columns.size()) + " fields");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(std::strtod(c.c_str(), nullptr));
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace

RunResult run(const Manifest& manifest, const RunOptions& options) {
  Context ctx(manifest, options);
  ctx.format = !options.format.empty()           ? options.format
               : !manifest.output_format.empty() ? manifest.output_format
                                                 : default_format(manifest.task);
  if (ctx.format != "csv" && ctx.format != "json") throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  const std::string& t = manifest.task;
  if (t == "geodesic") return task_geodesic(ctx);
  if (t == "reduced-geodesic") return task_reduced(ctx);
  if (t == "mechanical") return task_mechanical(ctx);
  if (t == "curvature") return task_curvature(ctx);
  if (t == "classify") return task_classify(ctx);
  if (t == "fluid") return task_fluid(ctx);
  if (t == "killing") return task_killing(ctx);
  return task_certify(ctx);
}

CsvComparison compare_csv(const std::string& path_a, const std::string& path_b) {
  const Table a = read_csv(path_a), b = read_csv(path_b);
  auto index = [](const Table& t, const std::string& c) {
    return static_cast<std::size_t>(std::find(t.columns.begin(), t.columns.end(), c) - t.columns.begin());
  };
  const std::size_t ta = index(a, "tau"), tb = index(b, "tau");
  if (ta == a.columns.size() || tb == b.columns.size()) throw Error(ErrorCode::InvalidArgument, "both files need a tau column");
  CsvComparison out;
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < a.columns.size(); ++i) {
    if (i == ta) continue;
    const std::size_t j = index(b, a.columns[i]);
    if (j < b.columns.size()) {
      shared.emplace_back(i, j);
      out.columns.push_back(a.columns[i]);
    }
  }
  if (shared.empty()) throw Error(ErrorCode::InvalidArgument, "no shared columns");
  std::size_t k = 0;
  for (const auto& ra : a.rows) {
    const double tau = ra[ta];
    while (k < b.rows.size() && b.rows[k][tb] < tau - 1e-12 * (1.0 + std::abs(tau))) ++k;
    if (k == b.rows.size()) break;
    if (std::abs(b.rows[k][tb] - tau) > 1e-12 * (1.0 + std::abs(tau))) continue;
    ++out.matched_rows;
    for (const auto& [i, j] : shared) {
      const double d = std::abs(ra[i] - b.rows[k][j]);
      if (d > out.sup || std::isnan(d)) {
        out.sup = std::isnan(d) ? INFINITY : d;
        out.worst_column = a.columns[i];
        out.worst_tau = tau;
      }
    }
  }
  if (out.matched_rows == 0) throw Error(ErrorCode::InvalidArgument, "no rows with matching tau");
  return out;
}

void list_charts(std::ostream& out, const std::string& format) {
  const auto& all = atlas::list_solutions();
  if (format == "json") {
    Json j = Json::array();
    for (const auto& s : all) {
      Json e;
      e["id"] = s.id;
      e["description"] = s.description;
      Json params = Json::object();
      for (const auto& p : s.params) params[p.name] = {{"default", p.default_value}, {"description", p.description}};
      e["params"] = params;
      j.push_back(e);
    }
    out << Json{{"charts", j}, {"tasks", task_names()}}.dump(2) << "\n";
    return;
  }
  for (const auto& s : all) {
    out << s.id;
    for (const auto& p : s.params) out << " " << p.name << "=" << p.default_value;
    out << "\n    " << s.description << "\n";
  }
  out << "tasks:";
  for (const auto& t : task_names()) out << " " << t;
  out << "\n";
}

int doctor(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  auto report = [&](const std::string& id, const std::string& check, bool ok, double value) {
    if (!ok) ++failures;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-4s %-32s %-22s %.3e\n", ok ? "ok" : "FAIL", id.c_str(), check.c_str(), value);
    out << buf;
  };
  for (const auto& info : atlas::list_solutions()) {
    try {
      const atlas::Built b = atlas::build(info.id);
      std::vector<Vec> pts;
      for (int i = 0; i < 6; ++i) pts.push_back(b.sampler(rng));

      double compat = 0.0, bianchi = 0.0, trace = 0.0;
      for (const Vec& x : pts) {
        const CurvatureAtPoint c = curvature(b.chart, x);
        const double scale = 1.0 + c.riemann.max_abs() + max_abs(c.metric);
        compat = std::max(compat, metric_compatibility_residual(b.chart, x) / scale);
        bianchi = std::max(bianchi, c.bianchi_residual() / scale);
        trace = std::max(trace, c.ricci_trace_residual() / scale);
      }
      report(info.id, "metric_compatibility", compat < 1e-8, compat);
      report(info.id, "first_bianchi", bianchi < 1e-8, bianchi);
      report(info.id, "ricci_trace", trace < 1e-8, trace);

      double killing = 0.0;
      for (int a : b.killing_axes) killing = std::max(killing, killing_residual(coordinate_field(b.chart, a), pts));
      if (!b.killing_axes.empty()) report(info.id, "killing_axes", killing < 1e-8, killing);

      if (b.spec) {
        const WarpedDetection d = detect_warped_structure(b.chart, b.base_axes(), b.fiber_axes(), pts);
        report(info.id, "warped_structure", d.warped,
               std::max(d.base_report.second_fundamental_norm, d.fiber_report.spherical_residual));
      }

      // short geodesic from each point; only completed runs count
      double drift = 0.0;
      int completed = 0;
      std::normal_distribution<double> gauss;
      for (const Vec& x : pts) {
        Vec v(b.chart.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = 0.2 * gauss(rng);
        const Trajectory tr = integrate_direct(b.chart, {x, v, 0.0}, 1.0);
        if (!tr.completed()) continue;
        ++completed;
        drift = std::max(drift, tr.relative_drift("energy"));
      }
      report(info.id, "geodesic_energy", completed > 0 && drift < 1e-9, drift);
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << info.id << ": " << e.what() << "\n";
    }
  }
  out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << "\n";
  return failures;
}

}  // namespace warpgeo::cli
