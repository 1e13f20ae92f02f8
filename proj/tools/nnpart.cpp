#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nnpart/experiment.hpp"
#include "nnpart/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Online nearest-neighbor partition learning"};
  app.require_subcommand(1);

  std::string config;
  std::string suite;
  auto* run = app.add_subcommand("run", "Run one episode; write the ledger CSV and summary");
  run->add_option("config", config, "Config file")->required();
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite, "kernels | lp | containment | volume")->required();
  auto* sweep = app.add_subcommand("sweep", "Run every cell of the config's grid");
  sweep->add_option("config", config, "Config file")->required();
  auto* lower = app.add_subcommand("lowerbound", "Replicated lower-bound adversary episodes");
  lower->add_option("config", config, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nnpart::kExitConfig;
  }

  if (run->parsed()) return nnpart::cmd_run(config);
  if (verify->parsed()) return nnpart::cmd_verify(suite);
  if (sweep->parsed()) return nnpart::cmd_sweep(config);
  return nnpart::cmd_lowerbound(config);
}
