#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sauna/agent.hpp"
#include "sauna/ppo.hpp"

namespace sauna {

// Full specification of one experiment: environment, variant, hyperparameters,
// seeds, and run bookkeeping. Persisted as a flat key = value text file
// ('#' starts a comment); every key is overridable on the command line.
struct ExperimentConfig {
  std::string env = "pendulum";
  std::string variant = "sauna";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6};
  long total_steps = 150000;
  int eval_every = 10;
  int eval_episodes = 10;
  std::string output_dir;
  PpoHyperparams hyper;
  bool normalize_observations = true;
  bool shared_policy_trunk = false;
  bool isolate_vex_head = false;
  bool median_accepted_only = false;
  bool returns_on_accepted_only = false;
  int adjusted_vex_predictors = 1;
  double random_filter_prob = 0.05;
  // Run directory of a completed sauna run; random_filter replays its
  // per-seed rejection-rate schedule.
  std::string random_filter_schedule_dir;
  std::vector<int> hidden_sizes = {64, 64};
  int parallel_seeds = 0;  // 0 = one worker per hardware thread

  void set(const std::string& key, const std::string& value);  // throws on unknown key
  std::string get(const std::string& key) const;
  static const std::vector<std::string>& keys();

  // Parses "key = value" pairs into *this (missing keys keep their values).
  void load_file(const std::string& path);
  // Parses a single "key=value" override (the --set form).
  void apply_override(const std::string& assignment);

  std::string to_text() const;  // archival form, fixed key order
  void validate() const;

  AgentOptions agent_options(std::uint64_t seed) const;
};

// CI isolation: SAUNA_SEED_OFFSET shifts every seed at run time.
std::uint64_t seed_offset_from_env();

}  // namespace sauna
