#include "manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "expression.hpp"
#include "warpgeo/atlas.hpp"
#include "warpgeo/errors.hpp"

namespace warpgeo::cli {

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"geodesic", "reduced-geodesic", "mechanical", "curvature",
                                              "classify", "fluid",            "killing",    "certify"};
  return names;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + where + ": " + what);
}

double number_at(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where, "missing \"" + key + "\"");
  if (!obj[key].is_number()) schema_error(where + "/" + key, "expected a number");
  return obj[key].get<double>();
}

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number_at(obj, key, where) : fallback;
}

Vec vector_at(const Json& obj, const std::string& key, int expected, const std::string& where) {
  if (!obj.contains(key)) schema_error(where, "missing \"" + key + "\"");
  const Json& a = obj[key];
  if (!a.is_array()) schema_error(where + "/" + key, "expected an array of numbers");
  if (expected >= 0 && static_cast<int>(a.size()) != expected)
    schema_error(where + "/" + key, "expected " + std::to_string(expected) + " entries, got " + std::to_string(a.size()));
  Vec v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) schema_error(where + "/" + key + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

ResolvedChart no_chart() { return {"none", atlas::euclidean(1), std::nullopt, {}, {}}; }

int ResolvedChart::axis(const Json& j) const {
  const int n = chart.dim();
  if (j.is_number_integer()) {
    const int k = j.get<int>();
    if (k < 0 || k >= n) throw Error(ErrorCode::ParseError, "axis index " + std::to_string(k) + " out of range");
    return k;
  }
  if (j.is_string()) {
    const auto& names = chart.coordinate_names();
    const auto it = std::find(names.begin(), names.end(), j.get<std::string>());
    if (it == names.end()) throw Error(ErrorCode::ParseError, "no coordinate named '" + j.get<std::string>() + "'");
    return static_cast<int>(it - names.begin());
  }
  throw Error(ErrorCode::ParseError, "axis must be a coordinate name or index");
}

std::vector<int> ResolvedChart::axes(const Json& list) const {
  if (!list.is_array()) throw Error(ErrorCode::ParseError, "expected an array of axes");
  std::vector<int> out;
  for (const Json& j : list) out.push_back(axis(j));
  return out;
}

namespace {

std::string text_at(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  schema_error(where, "expected an expression string");
}

Expression compile_at(const Json& j, const std::vector<std::string>& coords, const std::map<std::string, double>& consts,
                      const std::string& where) {
  try {
    return Expression::compile(text_at(j, where), coords, consts);
  } catch (const Error& e) {
    std::string msg = e.what();
    msg.erase(0, to_string(e.code()).size() + 2);
    throw Error(e.code(), msg + " (at " + where + ")");
  }
}

std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

ResolvedChart resolve_chart(const Json& j, const std::string& where, const std::map<std::string, double>& consts);

ResolvedChart resolve_builtin(const Json& j, const std::string& where) {
  if (!j["builtin"].is_string()) schema_error(where + "/builtin", "expected a chart id");
  const std::string id = j["builtin"].get<std::string>();
  atlas::Params params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) schema_error(where + "/params", "expected an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) schema_error(where + "/params/" + k, "expected a number");
      params[k] = v.get<double>();
    }
  }
  atlas::Built b = [&] {
    try {
      return atlas::build(id, params);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnknownSolution) throw Error(ErrorCode::UnknownChartId, "unknown chart id '" + id + "'");
      throw;
    }
  }();
  std::string desc = id;
  for (const auto& [k, v] : params) {
    std::ostringstream os;
    os << " " << k << "=" << v;
    desc += os.str();
  }
  return {desc, b.chart, b.spec, b.killing_axes, b.sampler};
}

ResolvedChart resolve_explicit(const Json& j, const std::string& where, const std::map<std::string, double>& consts) {
  if (!j.contains("coordinates") || !j["coordinates"].is_array() || j["coordinates"].empty())
    schema_error(where, "expected a non-empty \"coordinates\" array");
  std::vector<std::string> coords;
  for (const Json& c : j["coordinates"]) {
    if (!c.is_string()) schema_error(where + "/coordinates", "coordinate names must be strings");
    coords.push_back(c.get<std::string>());
  }
  const int n = static_cast<int>(coords.size());
  if (n > Jet::kMaxVars) schema_error(where + "/coordinates", "at most " + std::to_string(Jet::kMaxVars) + " coordinates");
  if (!j.contains("signature") || !j["signature"].is_array() || j["signature"].size() != 2)
    schema_error(where, "expected \"signature\": [negative, positive]");
  const Signature sig{j["signature"][0].get<int>(), j["signature"][1].get<int>()};
  if (sig.dim() != n) schema_error(where + "/signature", "does not add up to the number of coordinates");

  // entries[i][j] for i <= j
  std::vector<std::vector<std::optional<Expression>>> entries(static_cast<std::size_t>(n),
                                                               std::vector<std::optional<Expression>>(static_cast<std::size_t>(n)));
  if (j.contains("diagonal")) {
    const Json& d = j["diagonal"];
    if (!d.is_array() || static_cast<int>(d.size()) != n) schema_error(where + "/diagonal", "expected " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i)
      entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
          compile_at(d[static_cast<std::size_t>(i)], coords, consts, where + "/diagonal/" + std::to_string(i));
  } else if (j.contains("metric")) {
    const Json& m = j["metric"];
    if (!m.is_array() || static_cast<int>(m.size()) != n) schema_error(where + "/metric", "expected " + std::to_string(n) + " rows");
    for (int r = 0; r < n; ++r) {
      const Json& row = m[static_cast<std::size_t>(r)];
      const std::string rw = where + "/metric/" + std::to_string(r);
      if (!row.is_array() || static_cast<int>(row.size()) != n) schema_error(rw, "expected " + std::to_string(n) + " entries");
      for (int c = r; c < n; ++c) {
        const std::string at = rw + "/" + std::to_string(c);
        const std::string upper = text_at(row[static_cast<std::size_t>(c)], at);
        const std::string lower = text_at(m[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)], at);
        if (strip(upper) != strip(lower)) schema_error(at, "metric is not symmetric");
        entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = compile_at(upper, coords, consts, at);
      }
    }
  } else {
    schema_error(where, "expected \"metric\" or \"diagonal\"");
  }

  std::vector<Expression> domain;
  if (j.contains("domain")) {
    if (!j["domain"].is_array()) schema_error(where + "/domain", "expected an array of expressions that must be positive");
    for (std::size_t i = 0; i < j["domain"].size(); ++i)
      domain.push_back(compile_at(j["domain"][i], coords, consts, where + "/domain/" + std::to_string(i)));
  }
  const std::string label = j.value("label", std::string("chart"));

  MetricFn metric = [entries, n](std::span<const Jet> x) {
    JetMatrix g(n);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c)
        if (const auto& e = entries[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) g.set_symmetric(r, c, (*e)(x));
    return g;
  };
  DomainFn dom;
  if (!domain.empty())
    dom = [domain](const Vec& x) {
      for (const Expression& e : domain)
        if (!(e(x) > 0.0)) return false;
      return true;
    };
  ResolvedChart out{label, MetricChart(label, sig, metric, dom, coords), std::nullopt, {}, {}};
  if (j.contains("killing_axes")) out.killing_axes = out.axes(j["killing_axes"]);
  return out;
}

ResolvedChart resolve_warped(const Json& j, const std::string& where, const std::map<std::string, double>& consts) {
  if (!j.is_object()) schema_error(where, "expected an object");
  for (const char* key : {"base", "fiber", "warping"})
    if (!j.contains(key)) schema_error(where, std::string("missing \"") + key + "\"");
  const ResolvedChart base = resolve_chart(j["base"], where + "/base", consts);
  const ResolvedChart fiber = resolve_chart(j["fiber"], where + "/fiber", consts);
  const Expression w = compile_at(j["warping"], base.chart.coordinate_names(), consts, where + "/warping");
  const std::string label = j.value("label", base.description + " x_w " + fiber.description);
  WarpedSpec spec{base.chart, fiber.chart, w.field(), label};
  ResolvedChart out{label, assemble(spec), spec, {}, {}};
  for (int a : fiber.killing_axes) out.killing_axes.push_back(a + base.chart.dim());
  if (base.sampler && fiber.sampler) {
    auto bs = base.sampler, fs = fiber.sampler;
    out.sampler = [bs, fs](std::mt19937_64& rng) {
      const Vec b = bs(rng);
      return join(b, fs(rng));
    };
  }
  return out;
}

ResolvedChart resolve_chart(const Json& j, const std::string& where, const std::map<std::string, double>& consts) {
  if (!j.is_object()) schema_error(where, "expected a chart object");
  ResolvedChart out = j.contains("builtin")  ? resolve_builtin(j, where)
                      : j.contains("warped") ? resolve_warped(j["warped"], where + "/warped", consts)
                                             : resolve_explicit(j, where, consts);
  if (j.contains("killing_axes") && !j.contains("coordinates")) out.killing_axes = out.axes(j["killing_axes"]);
  return out;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Manifest parse_manifest(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte points one past the offending character
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
  if (!root.is_object()) schema_error("/", "manifest must be an object");
  for (const auto& [k, v] : root.items())
    if (k != "chart" && k != "task" && k != "task_params" && k != "output" && k != "constants" && k != "seed" &&
        k != "description")
      schema_error("/" + k, "unknown key");

  Manifest m;
  m.text = text;
  m.hash = fnv1a_hex(text);
  if (root.contains("constants")) {
    if (!root["constants"].is_object()) schema_error("/constants", "expected an object of numbers");
    for (const auto& [k, v] : root["constants"].items()) {
      if (!v.is_number()) schema_error("/constants/" + k, "expected a number");
      m.constants[k] = v.get<double>();
    }
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) schema_error("/seed", "expected a non-negative integer");
    m.seed = root["seed"].get<std::uint64_t>();
  }
  if (!root.contains("task") || !root["task"].is_string()) schema_error("/task", "expected one of the task names");
  m.task = root["task"].get<std::string>();
  const auto& names = task_names();
  if (std::find(names.begin(), names.end(), m.task) == names.end()) schema_error("/task", "unknown task '" + m.task + "'");
  if (root.contains("task_params")) {
    if (!root["task_params"].is_object()) schema_error("/task_params", "expected an object");
    m.task_params = root["task_params"];
  }
  if (root.contains("output")) {
    const Json& o = root["output"];
    if (!o.is_object()) schema_error("/output", "expected an object");
    if (o.contains("path")) m.output_path = o["path"].get<std::string>();
    if (o.contains("format")) m.output_format = o["format"].get<std::string>();
    if (!m.output_format.empty() && m.output_format != "csv" && m.output_format != "json")
      schema_error("/output/format", "expected csv or json");
  }
  if (m.task == "certify") {
    if (root.contains("chart")) m.chart = resolve_chart(root["chart"], "/chart", m.constants);
  } else {
    if (!root.contains("chart")) schema_error("/chart", "missing chart");
    m.chart = resolve_chart(root["chart"], "/chart", m.constants);
  }
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace warpgeo::cli
