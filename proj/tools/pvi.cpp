// pvi: command-line front end for the interface-stability tool set.
//
//   pvi <subcommand> --scenario <path> --out <dir> [--threads n]
//                    [--seed-override u64]
//
// Subcommands: analyze, stability, solve2d, compat, smooth-test.
// Exit codes: 0 all configured checks passed, 1 some check failed,
// 2 error (error.json written), 3 bad invocation.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "pvi/cli_run.hpp"

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("PVI_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plasma-vacuum interface stability toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  int threads = 0;
  std::optional<uint64_t> seed_override;

  const char* names[] = {"analyze", "stability", "solve2d", "compat",
                         "smooth-test"};
  const char* blurbs[] = {
      "boundary matrix spectra and signatures at the scenario state",
      "violent-instability criterion at the scenario interface state",
      "linearized two-dimensional evolution with front fixed point",
      "order-by-order compatibility residuals of the scenario data",
      "smoothing-operator constants on seeded samples"};
  for (int k = 0; k < 5; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], blurbs[k]);
    sub->add_option("--scenario", scenario_path, "scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads,
                    "worker threads (0 = PVI_THREADS or serial)");
    sub->add_option("--seed-override", seed_override,
                    "replace the scenario seed");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string sub = app.get_subcommands().front()->get_name();
  std::string text;
  try {
    text = pvi::read_text_file(scenario_path);
  } catch (const pvi::error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }

  const int rc =
      pvi::run_cli(sub, text, out_dir, resolve_threads(threads), seed_override);
  if (rc == 2) std::cerr << "error: see " << out_dir << "/error.json\n";
  return rc;
}
