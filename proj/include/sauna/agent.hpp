#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sauna/adam.hpp"
#include "sauna/batch.hpp"
#include "sauna/envs.hpp"
#include "sauna/metrics.hpp"
#include "sauna/nets.hpp"
#include "sauna/obs_normalizer.hpp"
#include "sauna/ppo.hpp"
#include "sauna/rng.hpp"

namespace sauna {

enum class Variant {
  ppo_baseline,            // plain PPO: no filter, no vex training
  sauna,                   // median-ratio filter + vex head training
  no_filter_aux,           // vex head trained, filter disabled
  random_filter,           // i.i.d. rejection at a replayed/fixed rate
  mean_instead_of_median,  // mean replaces the median in the filter ratio
  empirical_vex_filter,    // realized per-episode vex drives the filter
  adjusted_vex,            // adjusted-R2 correction on the vex target
};

Variant variant_from_string(const std::string& name);
std::string variant_to_string(Variant v);
// Whether the variant trains the vex head (includes the c2 loss term).
bool variant_trains_vex(Variant v);
// Whether the variant runs the median/mean tracker.
bool variant_uses_tracker(Variant v);

struct AgentOptions {
  std::string env_name = "pendulum";
  Variant variant = Variant::sauna;
  PpoHyperparams hyper;
  bool normalize_observations = true;
  bool shared_policy_trunk = false;
  bool isolate_vex_head = false;
  // Insert only accepted transitions' predictions into the median tracker
  // (default: every visited prediction enters, rejected ones included).
  bool median_accepted_only = false;
  // Compute return/advantage targets over the accepted subsequence instead
  // of the full underlying trajectory (study flag).
  bool returns_on_accepted_only = false;
  int adjusted_vex_predictors = 1;  // p in the adjusted-R2 correction
  double random_filter_prob = 0.05;
  // Per-update rejection probabilities replayed by random_filter; falls back
  // to random_filter_prob when empty (or beyond the end uses the last entry).
  std::vector<double> random_filter_schedule;
  std::vector<int> hidden_sizes = {64, 64};
  long total_steps = 150000;  // visited environment steps
  int eval_every = 10;        // updates between evaluations
  int eval_episodes = 10;
  std::uint64_t seed = 1;
};

// Filtered batch collection, gradient updates, and the training loop.
// One agent is one thread of control; run several instances for seeds.
class Agent {
 public:
  explicit Agent(AgentOptions opts);

  // One collection iteration: gathers exactly `horizon` accepted transitions
  // (the filter decides), computes R_t / GAE targets on the underlying
  // trajectory, and the batch vex score.
  Batch collect_batch();

  // One gradient update on a collected batch.
  UpdateReport update(const Batch& batch);

  // Full run: alternates collect and update until total_steps visited
  // transitions are consumed; one metrics record per update. Throws after
  // three consecutive non-finite updates.
  std::vector<MetricsRecord> train();

  // Mean-action rollouts on a fresh environment with frozen normalization;
  // parameters are left untouched. episodes must be positive.
  double evaluate(int episodes, std::uint64_t seed);

  void save_checkpoint(const std::string& path);
  void load_checkpoint(const std::string& path);

  AgentNets& nets() { return nets_; }
  ObsNormalizer& normalizer() { return normalizer_; }
  const AgentOptions& options() const { return opts_; }
  long updates_done() const { return update_index_; }

 private:
  double filter_reject_probability() const;

  AgentOptions opts_;
  std::unique_ptr<Env> env_;
  AgentNets nets_;
  Adam adam_;
  ObsNormalizer normalizer_;
  Rng action_rng_;
  Rng env_seed_rng_;
  Rng shuffle_rng_;
  Rng filter_rng_;
  long update_index_ = 0;
  long steps_visited_total_ = 0;
  long steps_accepted_total_ = 0;
  long degenerate_batches_ = 0;
};

}  // namespace sauna
