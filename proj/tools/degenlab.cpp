#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "degen/config.hpp"
#include "degen/error.hpp"
#include "degen/parallel.hpp"
#include "degen/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int workers = 0;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory (overrides the config)");
  cmd->add_option("--seed", f.seed, "run seed (overrides the config)");
  cmd->add_option("--workers", f.workers, "worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
}

degen::RunConfig load(const Flags& f) {
  auto c = degen::parse_config(f.config);
  if (f.out) c.output = *f.out;
  if (f.seed) c.seed = *f.seed;
  degen::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenlab: time-degenerate Schrodinger experiments"};
  app.require_subcommand(1);
  Flags flags;
  const char* experiments[] = {"evolve",      "smoothing-sweep", "garding-check", "picard",
                               "norm-equiv",  "energy-check",    "identity-check"};
  for (const char* name : experiments) add_flags(app.add_subcommand(name, std::string("run ") + name), flags);
  auto* show = app.add_subcommand("show-config", "print the config with defaults applied");
  add_flags(show, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  degen::RunConfig config;
  try {
    config = load(flags);
  } catch (const degen::Error& e) {
    std::cerr << "degenlab: " << e.what() << '\n';
    return degen::exit_code(e.kind());
  }

  if (cmd == show) {
    std::cout << degen::to_json(config).dump(2) << '\n';
    return 0;
  }

  config.experiment = degen::parse_experiment(cmd->get_name());
  degen::set_default_workers(flags.workers);
  const auto result = degen::run(config);
  if (result.exit_code != 0) {
    std::cerr << "degenlab: " << result.message << '\n';
  } else {
    std::cout << result.summary.dump(2) << '\n';
  }
  return result.exit_code;
}
