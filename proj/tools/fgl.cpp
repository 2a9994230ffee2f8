// Command-line front end: check-geometry | solve | probe | sweep.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fgl/config.hpp"
#include "fgl/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file")
      ->required();
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
}

int dispatch(const std::string& name, const CommonOpts& opts) {
  using namespace fgl;
  Config cfg = Config::parse_file(opts.config_path);
  std::filesystem::path out =
      opts.out_dir.empty() ? cfg.get_string("output.dir", "out")
                           : opts.out_dir;
  std::optional<std::uint64_t> seed;
  if (opts.seed) seed = static_cast<std::uint64_t>(*opts.seed);

  if (name == "check-geometry")
    return harness::run_check_geometry(cfg, out, seed, std::cout);
  if (name == "solve") return harness::run_solve(cfg, out, seed, std::cout);
  if (name == "probe") return harness::run_probe(cfg, out, seed, std::cout);
  return harness::run_sweep(cfg, out, seed, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for norm-dependent degenerate elliptic "
               "systems"};
  app.require_subcommand(1);

  CommonOpts opts;
  const char* names[] = {"check-geometry", "solve", "probe", "sweep"};
  const char* descs[] = {
      "run the norm-geometry identity and inequality suites",
      "minimize the energy and write the solution field",
      "solve (or load a field) and fit differentiability exponents",
      "run solve+probe over a grid of (gamma, p) values"};
  for (int i = 0; i < 4; ++i) add_common(app.add_subcommand(names[i], descs[i]), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fgl::harness::kConfigError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    return dispatch(sub, opts);
  } catch (const fgl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fgl::harness::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fgl::harness::kCheckFailed;
  }
}
