#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nnpart/config.hpp"
#include "nnpart/environment.hpp"
#include "nnpart/episode.hpp"

namespace nnpart {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

/// Replaces the seed with NNPART_SEED when that variable is set.
void apply_seed_override(ExperimentConfig& cfg);

Environment make_environment(const ExperimentConfig& cfg);
std::unique_ptr<Player> make_player(const ExperimentConfig& cfg, const Environment& env);
std::unique_ptr<QuerySource> make_source(const ExperimentConfig& cfg, const Environment& env);

struct RunResult {
  LossLedger ledger;
  double wall_time = 0.0;
};

/// One episode of the configured experiment. The lowerbound adversary plays
/// `rounds` packed points after its two seed points.
RunResult run_experiment(const ExperimentConfig& cfg, const RoundHook& hook = {});

/// key=value lines: summary keys, then config.<key> for the effective config.
std::vector<std::pair<std::string, std::string>> summary_entries(const ExperimentConfig& cfg,
                                                                 const RunResult& result);

/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& contents);

int cmd_run(const std::string& config_path);
int cmd_sweep(const std::string& config_path);
int cmd_lowerbound(const std::string& config_path);

}  // namespace nnpart
