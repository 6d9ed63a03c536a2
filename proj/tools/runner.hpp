#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace warpgeo::cli {

// Command-line overrides.
struct RunOptions {
  std::string out_dir;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string format;  // csv, json or empty
};

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 partial output after a domain exit
  std::vector<std::string> files;
  std::string message;
};

// Throws Error for anything that prevents the task from producing output.
RunResult run(const Manifest& manifest, const RunOptions& options);

// Sup-norm difference of two trajectory CSVs over the columns they share
// (tau excluded), at rows whose tau agrees.
struct CsvComparison {
  double sup = 0.0;
  std::string worst_column;
  double worst_tau = 0.0;
  std::size_t matched_rows = 0;
  std::vector<std::string> columns;
};
CsvComparison compare_csv(const std::string& path_a, const std::string& path_b);

void list_charts(std::ostream& out, const std::string& format);

// Invariant checks over every builtin; returns the number of failures.
int doctor(std::ostream& out, std::uint64_t seed);

}  // namespace warpgeo::cli
