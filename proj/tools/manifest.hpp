#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "warpgeo/metric_chart.hpp"
#include "warpgeo/warped.hpp"

namespace warpgeo::cli {

using Json = nlohmann::json;

// A chart resolved from a manifest, builtin or written out.
struct ResolvedChart {
  std::string description;
  MetricChart chart;
  std::optional<WarpedSpec> spec;
  std::vector<int> killing_axes;
  std::function<Vec(std::mt19937_64&)> sampler;  // empty for written-out charts

  int axis(const Json& name_or_index) const;  // coordinate name or index
  std::vector<int> axes(const Json& list) const;
};

// Stand-in for tasks that need no chart.
ResolvedChart no_chart();

struct Manifest {
  std::string text;
  std::string hash;  // FNV-1a 64 of the manifest bytes, hex
  std::map<std::string, double> constants;
  ResolvedChart chart = no_chart();
  std::string task;
  Json task_params = Json::object();
  std::string output_path;    // may be empty
  std::string output_format;  // may be empty
  std::uint64_t seed = 1;
};

const std::vector<std::string>& task_names();

std::string fnv1a_hex(const std::string& bytes);

// Throws ParseError (JSON syntax with line/column, schema errors with the
// JSON path), UnknownChartId, ExpressionNotDifferentiable.
Manifest parse_manifest(const std::string& text);
Manifest load_manifest(const std::string& path);

// Shared helpers for reading task_params.
double number_at(const Json& obj, const std::string& key, const std::string& where);
double number_or(const Json& obj, const std::string& key, double fallback, const std::string& where);
Vec vector_at(const Json& obj, const std::string& key, int expected, const std::string& where);
[[noreturn]] void schema_error(const std::string& where, const std::string& what);

}  // namespace warpgeo::cli
