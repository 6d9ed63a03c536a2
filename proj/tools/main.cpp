#include <iostream>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "runner.hpp"
#include "warpgeo/errors.hpp"

int main(int argc, char** argv) {
  using namespace warpgeo;
  CLI::App app{"warpgeo: geodesics, curvature and Killing fields on warped products"};
  app.require_subcommand(1);

  std::string format;
  auto* list = app.add_subcommand("list", "List builtin chart ids and tasks");
  list->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string manifest_path, out_dir;
  double tol = 0.0;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run the task described by a manifest");
  run->add_option("--manifest", manifest_path, "Manifest file")->required();
  run->add_option("--out", out_dir, "Output directory");
  auto* tol_opt = run->add_option("--tol", tol, "Integration or structural tolerance")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Random seed");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> files;
  double compare_tol = 1e-6;
  auto* compare = app.add_subcommand("compare", "Sup-norm difference of two trajectory CSVs");
  compare->add_option("files", files, "Two CSV files")->required()->expected(2);
  compare->add_option("--tol", compare_tol, "Fail above this difference");

  std::uint64_t doctor_seed = 1;
  auto* doctor = app.add_subcommand("doctor", "Check invariants on every builtin chart");
  doctor->add_option("--seed", doctor_seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      cli::list_charts(std::cout, format.empty() ? "text" : format);
      return 0;
    }
    if (*run) {
      const cli::Manifest m = cli::load_manifest(manifest_path);
      cli::RunOptions opts;
      opts.out_dir = out_dir;
      if (*tol_opt) opts.tol = tol;
      if (*seed_opt) opts.seed = seed;
      opts.format = format;
      const cli::RunResult r = cli::run(m, opts);
      for (const auto& f : r.files) std::cout << f << "\n";
      if (!r.message.empty()) std::cerr << "warpgeo: " << r.message << "\n";
      return r.exit_code;
    }
    if (*compare) {
      const cli::CsvComparison c = cli::compare_csv(files[0], files[1]);
      std::cout << "rows " << c.matched_rows << ", columns " << c.columns.size() << ", sup " << c.sup;
      if (!c.worst_column.empty()) std::cout << " (" << c.worst_column << " at tau " << c.worst_tau << ")";
      std::cout << "\n";
      return c.sup <= compare_tol ? 0 : 1;
    }
    if (*doctor) return cli::doctor(std::cout, doctor_seed) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "warpgeo: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "warpgeo: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
