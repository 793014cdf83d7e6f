// Command-line front end: load a declarative run config, build the models and
// operators it names, run the tasks selected by the subcommand, and write a
// reproducible report.  Exit status is 0 exactly when every selected task
// passed (an empty selection passes vacuously); config errors exit with 2.
//
// Timing goes to stderr only — the report bytes depend on nothing but the
// config and the seed.

#include "runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double tolerance = 0.0;
  bool tolerance_given = false;
};

int run_selected(const CliOptions& cli, const gmv::run::TaskFilter& filter) {
  gmv::ConfigLoad load = gmv::load_config(cli.config_path);
  if (!load.ok()) {
    for (const auto& e : load.errors) std::cerr << "config error: " << e << '\n';
    return 2;
  }
  gmv::RunConfig config = load.config;
  if (cli.seed_given) {
    config.seed = cli.seed;
    config.seed_set = true;
  }
  if (cli.tolerance_given) config.tolerance = cli.tolerance;
  if (!cli.out_dir.empty()) config.output.dir = cli.out_dir;
  if (!cli.format.empty()) config.output.format = cli.format;

  auto start = std::chrono::steady_clock::now();
  try {
    gmv::run::Workspace ws = gmv::run::build_workspace(config);
    gmv::run::RunResult result = gmv::run::run_tasks(ws, config, filter);
    std::string path = gmv::run::write_report(result, config.output);
    for (const auto& o : result.outcomes) {
      std::cout << (o.passed ? "pass" : "FAIL") << "  " << o.kind;
      if (!o.witness.empty()) std::cout << '/' << o.witness;
      std::cout << "  " << o.id;
      if (!o.error.empty()) std::cout << "  [" << o.error << "]";
      std::cout << '\n';
    }
    std::cout << result.passed_count() << " of " << result.outcomes.size()
              << " tasks passed; report written to " << path << '\n';
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cerr << "elapsed: " << ms << " ms\n";
    return result.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded metric vector space toolkit"};
  app.require_subcommand(0, 1);

  CliOptions cli;
  app.add_option("--config", cli.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", cli.out_dir, "report directory (overrides the config)");
  app.add_option("--format", cli.format, "report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cli.seed, "sampler seed (overrides the config)");
  app.add_option("--tolerance", cli.tolerance, "comparison tolerance (overrides the config)");

  gmv::run::TaskFilter filter;
  std::string witness_name;

  CLI::App* model = app.add_subcommand("model", "model-space tasks");
  model->require_subcommand(1);
  CLI::App* model_build = model->add_subcommand("build", "materialize models and operators");

  CLI::App* tame = app.add_subcommand("tame", "tameness tasks");
  tame->require_subcommand(1);
  CLI::App* tame_certify = tame->add_subcommand("certify", "certify level bounds");
  CLI::App* tame_scan = tame->add_subcommand("scan", "scan an operator family for divergence");

  CLI::App* norm = app.add_subcommand("norm", "operator norm brackets");
  CLI::App* metric = app.add_subcommand("metric", "metric evaluations");

  CLI::App* palette = app.add_subcommand("palette", "palette families");
  palette->require_subcommand(1);
  CLI::App* palette_check = palette->add_subcommand("check", "check the palette axioms");

  CLI::App* witness = app.add_subcommand("witness", "named witness constructions");
  witness->add_option("name", witness_name, "witness name")->required();

  CLI::App* report = app.add_subcommand("report", "run every task in the config");

  CLI11_PARSE(app, argc, argv);

  if (model_build->parsed()) filter.kind = "build";
  if (tame_certify->parsed()) filter.kind = "certify";
  if (tame_scan->parsed()) filter.kind = "scan";
  if (norm->parsed()) filter.kind = "norm";
  if (metric->parsed()) filter.kind = "metric";
  if (palette_check->parsed()) filter.kind = "palette";
  if (witness->parsed()) {
    filter.kind = "witness";
    filter.witness = witness_name;
  }
  (void)report;  // no filter: run everything

  cli.seed_given = app.count("--seed") > 0;
  cli.tolerance_given = app.count("--tolerance") > 0;

  return run_selected(cli, filter);
}
