#include "sauna/agent.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sauna/checkpoint.hpp"

namespace sauna {

namespace {

// RNG stream tags; the streams must stay disjoint and stable.
constexpr std::uint64_t kActionStream = 1;
constexpr std::uint64_t kEnvSeedStream = 2;
constexpr std::uint64_t kShuffleStream = 3;
constexpr std::uint64_t kFilterStream = 4;
constexpr std::uint64_t kInitStream = 5;
constexpr std::uint64_t kEvalStream = 6;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
  return splitmix64(state);
}

// Everything observed while collecting, accepted or not.
struct VisitedStep {
  Transition tr;
  double next_value = std::nan("");  // V(s_{t+1}); filled lazily
  bool accepted = false;
  long episode_id = 0;
};

}  // namespace

Variant variant_from_string(const std::string& name) {
  if (name == "ppo_baseline") return Variant::ppo_baseline;
  if (name == "sauna") return Variant::sauna;
  if (name == "no_filter_aux") return Variant::no_filter_aux;
  if (name == "random_filter") return Variant::random_filter;
  if (name == "mean_instead_of_median") return Variant::mean_instead_of_median;
  if (name == "empirical_vex_filter") return Variant::empirical_vex_filter;
  if (name == "adjusted_vex") return Variant::adjusted_vex;
  throw std::invalid_argument(
      "unknown variant '" + name +
      "' (available: ppo_baseline, sauna, no_filter_aux, random_filter, "
      "mean_instead_of_median, empirical_vex_filter, adjusted_vex)");
}

std::string variant_to_string(Variant v) {
  switch (v) {
    case Variant::ppo_baseline: return "ppo_baseline";
    case Variant::sauna: return "sauna";
    case Variant::no_filter_aux: return "no_filter_aux";
    case Variant::random_filter: return "random_filter";
    case Variant::mean_instead_of_median: return "mean_instead_of_median";
    case Variant::empirical_vex_filter: return "empirical_vex_filter";
    case Variant::adjusted_vex: return "adjusted_vex";
  }
  throw std::logic_error("unhandled variant");
}

bool variant_trains_vex(Variant v) {
  // random_filter deliberately drops the auxiliary task too: it isolates the
  // sampling effect, so it is plain PPO plus random rejection.
  return v != Variant::ppo_baseline && v != Variant::random_filter;
}

bool variant_uses_tracker(Variant v) {
  return v == Variant::sauna || v == Variant::mean_instead_of_median ||
         v == Variant::empirical_vex_filter || v == Variant::adjusted_vex;
}

Agent::Agent(AgentOptions opts)
    : opts_(std::move(opts)),
      env_(make_env(opts_.env_name)),
      nets_([&] {
        Rng init_rng(opts_.seed, kInitStream);
        NetConfig nc;
        nc.state_dim = env_->spec().state_dim;
        nc.action_dim = env_->spec().action_dim;
        nc.hidden_sizes = opts_.hidden_sizes;
        nc.shared_policy_trunk = opts_.shared_policy_trunk;
        return AgentNets(nc, init_rng);
      }()),
      adam_(nets_.param_count(), AdamConfig{opts_.hyper.learning_rate, 0.9, 0.999, 1e-8}),
      normalizer_(env_->spec().state_dim, opts_.normalize_observations),
      action_rng_(opts_.seed, kActionStream),
      env_seed_rng_(opts_.seed, kEnvSeedStream),
      shuffle_rng_(opts_.seed, kShuffleStream),
      filter_rng_(opts_.seed, kFilterStream) {
  opts_.hyper.validate();
  if (opts_.total_steps < opts_.hyper.horizon) {
    throw std::invalid_argument("total_steps must be at least one horizon");
  }
  if (opts_.eval_every <= 0 || opts_.eval_episodes <= 0) {
    throw std::invalid_argument("eval cadence and episode count must be positive");
  }
}

double Agent::filter_reject_probability() const {
  const auto& schedule = opts_.random_filter_schedule;
  if (schedule.empty()) return opts_.random_filter_prob;
  const std::size_t k = static_cast<std::size_t>(update_index_);
  return schedule[std::min(k, schedule.size() - 1)];
}

Batch Agent::collect_batch() {
  const PpoHyperparams& h = opts_.hyper;
  const int T = h.horizon;
  const Variant variant = opts_.variant;

  MedianTracker tracker;
  std::vector<VisitedStep> visited;
  visited.reserve(static_cast<std::size_t>(T) + 64);

  // Per-episode buffers (for episodic stats and the empirical-vex variant).
  std::vector<double> ep_rewards, ep_values;
  std::vector<double> completed_returns;
  double ep_reward_acc = 0.0;
  long episode_id = 0;
  std::optional<double> last_episode_vex;

  const double reject_prob = filter_reject_probability();

  Eigen::VectorXd raw = env_->reset(env_seed_rng_.next_u64());
  normalizer_.update(raw);
  Eigen::VectorXd x = normalizer_.normalize(raw);

  int accepted = 0;
  const long visit_limit = 1000L * T;  // a filter that accepts nothing is a fault
  while (accepted < T) {
    if (static_cast<long>(visited.size()) > visit_limit) {
      throw std::runtime_error(
          "collect_batch: " + std::to_string(visited.size()) +
          " transitions visited with only " + std::to_string(accepted) + "/" +
          std::to_string(T) + " accepted; the filter configuration rejects "
          "essentially everything");
    }
    Eigen::VectorXd mean;
    double v = 0.0, vex_pred = 0.0;
    nets_.forward_all(x, mean, v, vex_pred);
    // Backfill: this value is V(s_t) here and V(s_{t+1}) of the previous step.
    if (!visited.empty() && std::isnan(visited.back().next_value)) {
      visited.back().next_value = v;
    }

    auto [action, log_prob] = nets_.policy().sample(mean, action_rng_);
    const StepResult res = env_->step(action);

    double filter_value = vex_pred;
    if (variant == Variant::empirical_vex_filter && last_episode_vex) {
      filter_value = *last_episode_vex;
    }

    bool accept = true;
    switch (variant) {
      case Variant::ppo_baseline:
      case Variant::no_filter_aux:
        break;
      case Variant::random_filter:
        accept = filter_rng_.uniform() >= reject_prob;
        break;
      case Variant::mean_instead_of_median:
        accept = filter_ratio(filter_value, tracker.mean(), h.epsilon0) >= h.rho;
        break;
      default:
        accept = accept_transition(filter_value, tracker, h.rho, h.epsilon0);
        break;
    }
    if (variant_uses_tracker(variant) &&
        (!opts_.median_accepted_only || accept)) {
      tracker.insert(filter_value);
    }

    normalizer_.update(res.next_state);
    const Eigen::VectorXd x_next = normalizer_.normalize(res.next_state);

    VisitedStep step;
    step.tr.state = x;
    step.tr.action = action;
    step.tr.reward = res.reward;
    step.tr.value = v;
    step.tr.next_state = x_next;
    step.tr.vex_pred = vex_pred;
    step.tr.log_prob = log_prob;
    step.tr.terminal = res.terminal;
    step.tr.truncated = res.truncated;
    step.accepted = accept;
    step.episode_id = episode_id;
    visited.push_back(std::move(step));

    if (accept) ++accepted;
    ep_reward_acc += res.reward;
    ep_rewards.push_back(res.reward);
    ep_values.push_back(v);

    const bool episode_over = res.terminal || res.truncated;
    const bool batch_full = accepted >= T;

    if (episode_over || batch_full) {
      visited.back().next_value = nets_.value(x_next);
    }

    if (episode_over) {
      completed_returns.push_back(ep_reward_acc);
      if (variant == Variant::empirical_vex_filter) {
        // Realized vex of the finished episode: Eq-style score of the
        // collection-time values against the episode's return targets.
        const std::size_t n = ep_rewards.size();
        std::vector<double> nv(n);
        for (std::size_t i = 0; i + 1 < n; ++i) nv[i] = ep_values[i + 1];
        nv[n - 1] = visited.back().next_value;
        EpisodeMarkers m;
        m.terminal.assign(n, 0);
        m.truncated.assign(n, 0);
        m.terminal[n - 1] = res.terminal;
        m.truncated[n - 1] = res.truncated;
        const auto R = discounted_returns(ep_rewards, nv, h.gamma, m);
        last_episode_vex = vex_of_batch(R, ep_values).vex_batch;
      }
      ep_rewards.clear();
      ep_values.clear();
      ep_reward_acc = 0.0;
      ++episode_id;
      if (!batch_full) {
        raw = env_->reset(env_seed_rng_.next_u64());
        normalizer_.update(raw);
        x = normalizer_.normalize(raw);
      }
    } else {
      x = x_next;
    }
  }

  // Targets over the underlying trajectory: rewards of rejected transitions
  // still shape the returns of accepted ones (the filter does not alter the
  // environment's reward stream). The final visited step bootstraps.
  const std::size_t n = visited.size();
  std::vector<double> rewards(n), values(n), next_values(n);
  EpisodeMarkers markers;
  markers.terminal.assign(n, 0);
  markers.truncated.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    rewards[i] = visited[i].tr.reward;
    values[i] = visited[i].tr.value;
    next_values[i] = visited[i].next_value;
    markers.terminal[i] = visited[i].tr.terminal;
    markers.truncated[i] = visited[i].tr.truncated;
  }

  std::vector<double> all_returns, all_advantages;
  if (!opts_.returns_on_accepted_only) {
    all_returns = discounted_returns(rewards, next_values, h.gamma, markers);
    all_advantages =
        gae_advantages(rewards, values, next_values, h.gamma, h.lambda, markers);
  }

  Batch batch;
  const int state_dim = env_->spec().state_dim;
  const int action_dim = env_->spec().action_dim;
  batch.states.resize(state_dim, T);
  batch.actions.resize(action_dim, T);
  batch.old_log_probs.resize(T);
  batch.rewards.resize(T);
  batch.values.resize(T);
  batch.vex_preds.resize(T);
  batch.returns.resize(T);
  batch.advantages.resize(T);
  batch.markers.terminal.assign(static_cast<std::size_t>(T), 0);
  batch.markers.truncated.assign(static_cast<std::size_t>(T), 0);

  std::vector<std::size_t> accepted_idx;
  accepted_idx.reserve(static_cast<std::size_t>(T));
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i].accepted) accepted_idx.push_back(i);
  }

  if (opts_.returns_on_accepted_only) {
    // Study flag: the accepted subsequence of each episode is treated as a
    // contiguous trajectory. A step whose true successor was rejected (or
    // whose episode continued past the batch) bootstraps from its own next
    // state.
    const std::size_t m = accepted_idx.size();
    std::vector<double> r(m), val(m), nv(m);
    EpisodeMarkers pm;
    pm.terminal.assign(m, 0);
    pm.truncated.assign(m, 0);
    for (std::size_t j = 0; j < m; ++j) {
      const VisitedStep& s = visited[accepted_idx[j]];
      r[j] = s.tr.reward;
      val[j] = s.tr.value;
      const bool has_next_in_episode =
          j + 1 < m && visited[accepted_idx[j + 1]].episode_id == s.episode_id;
      pm.terminal[j] = s.tr.terminal;
      if (has_next_in_episode) {
        nv[j] = visited[accepted_idx[j + 1]].tr.value;
      } else {
        nv[j] = s.next_value;
        if (!s.tr.terminal) pm.truncated[j] = 1;
      }
    }
    all_returns = discounted_returns(r, nv, h.gamma, pm);
    all_advantages = gae_advantages(r, val, nv, h.gamma, h.lambda, pm);
    for (std::size_t j = 0; j < m; ++j) {
      batch.returns(static_cast<Eigen::Index>(j)) = all_returns[j];
      batch.advantages(static_cast<Eigen::Index>(j)) = all_advantages[j];
    }
  }

  for (std::size_t j = 0; j < accepted_idx.size(); ++j) {
    const std::size_t i = accepted_idx[j];
    const Eigen::Index col = static_cast<Eigen::Index>(j);
    batch.states.col(col) = visited[i].tr.state;
    batch.actions.col(col) = visited[i].tr.action;
    batch.old_log_probs(col) = visited[i].tr.log_prob;
    batch.rewards(col) = visited[i].tr.reward;
    batch.values(col) = visited[i].tr.value;
    batch.vex_preds(col) = visited[i].tr.vex_pred;
    batch.markers.terminal[j] = visited[i].tr.terminal;
    batch.markers.truncated[j] = visited[i].tr.truncated;
    if (!opts_.returns_on_accepted_only) {
      batch.returns(col) = all_returns[i];
      batch.advantages(col) = all_advantages[i];
    }
  }

  // The vex target is computed on the accepted batch from the values frozen
  // at collection time.
  batch.vex_stat = vex_of_batch(
      std::span<const double>(batch.returns.data(), static_cast<std::size_t>(T)),
      std::span<const double>(batch.values.data(), static_cast<std::size_t>(T)));
  if (batch.vex_stat.degenerate && degenerate_batches_++ == 0) {
    std::cerr << "[sauna] degenerate batch vex (all returns equal); using sentinel "
              << batch.vex_stat.vex_batch << "\n";
  }
  batch.vex_target = batch.vex_stat.vex_batch;
  if (opts_.variant == Variant::adjusted_vex) {
    batch.vex_target = adjusted_vex(batch.vex_stat, static_cast<std::size_t>(T),
                                    static_cast<std::size_t>(opts_.adjusted_vex_predictors));
  }

  batch.stats.visited = static_cast<long>(n);
  batch.stats.rejected = static_cast<long>(n) - T;
  batch.stats.episodes_completed = static_cast<long>(completed_returns.size());
  if (!completed_returns.empty()) {
    double mean = 0.0;
    for (double r : completed_returns) mean += r;
    mean /= static_cast<double>(completed_returns.size());
    double var = 0.0;
    for (double r : completed_returns) var += (r - mean) * (r - mean);
    var /= static_cast<double>(completed_returns.size());
    batch.stats.ep_return_mean = mean;
    batch.stats.ep_return_std = std::sqrt(var);
  }
  return batch;
}

UpdateReport Agent::update(const Batch& batch) {
  UpdateOptions uo;
  uo.train_vex = variant_trains_vex(opts_.variant);
  uo.isolate_vex_head = opts_.isolate_vex_head;
  UpdateReport report = ppo_update(nets_, adam_, batch, opts_.hyper, uo, shuffle_rng_);
  ++update_index_;
  return report;
}

std::vector<MetricsRecord> Agent::train() {
  std::vector<MetricsRecord> records;
  int consecutive_nonfinite = 0;
  while (steps_visited_total_ < opts_.total_steps) {
    const auto t0 = std::chrono::steady_clock::now();
    const Batch batch = collect_batch();
    steps_visited_total_ += batch.stats.visited;
    steps_accepted_total_ += batch.size();
    const UpdateReport report = update(batch);
    const auto t1 = std::chrono::steady_clock::now();

    MetricsRecord rec;
    rec.update_index = update_index_;
    rec.env_steps_visited = steps_visited_total_;
    rec.env_steps_accepted = steps_accepted_total_;
    rec.ep_return_mean = batch.stats.ep_return_mean;
    rec.ep_return_std = batch.stats.ep_return_std;
    rec.episodes = batch.stats.episodes_completed;
    rec.vex_b = batch.vex_stat.vex_batch;
    rec.rejection_fraction = batch.stats.rejection_fraction();
    rec.grad_l1_first_layer = report.grad_l1_first_layer;
    rec.grad_l1_last_layer = report.grad_l1_last_layer;
    rec.loss_surrogate = report.loss_surrogate;
    rec.loss_value = report.loss_value;
    rec.loss_vex = report.loss_vex;
    rec.entropy = report.entropy;
    rec.approx_kl = report.approx_kl;
    rec.wall_clock_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (update_index_ % opts_.eval_every == 0) {
      rec.eval_return_mean =
          evaluate(opts_.eval_episodes,
                   derive_seed(opts_.seed, kEvalStream * 1000003ULL +
                                               static_cast<std::uint64_t>(update_index_)));
    }
    records.push_back(rec);

    const bool bad = report.nonfinite_minibatches > 0 ||
                     !std::isfinite(report.loss_surrogate + report.loss_value +
                                    report.loss_vex);
    consecutive_nonfinite = bad ? consecutive_nonfinite + 1 : 0;
    if (consecutive_nonfinite >= 3) {
      throw std::runtime_error(
          "training diverged: non-finite loss in three consecutive updates "
          "(update " +
          std::to_string(update_index_) + ")");
    }
  }
  return records;
}

double Agent::evaluate(int episodes, std::uint64_t seed) {
  if (episodes <= 0) {
    throw std::invalid_argument("evaluate: episodes must be positive");
  }
  auto env = make_env(opts_.env_name);
  Rng seeder(seed, kEvalStream);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Eigen::VectorXd raw = env->reset(seeder.next_u64());
    Eigen::VectorXd x = normalizer_.normalize(raw);
    while (true) {
      const Eigen::VectorXd mean = nets_.policy_mean(x);
      const StepResult res = env->step(mean);
      total += res.reward;
      if (res.terminal || res.truncated) break;
      x = normalizer_.normalize(res.next_state);
    }
  }
  return total / static_cast<double>(episodes);
}

void Agent::save_checkpoint(const std::string& path) {
  ParamSpans spans = nets_.param_spans();
  spans.push_back({"obs_mean", normalizer_.mean().data(),
                   static_cast<std::size_t>(normalizer_.mean().size())});
  spans.push_back({"obs_m2", normalizer_.m2().data(),
                   static_cast<std::size_t>(normalizer_.m2().size())});
  spans.push_back({"obs_count", normalizer_.count_ptr(), 1});

  nlohmann::json meta;
  meta["env"] = opts_.env_name;
  meta["variant"] = variant_to_string(opts_.variant);
  meta["hidden_sizes"] = opts_.hidden_sizes;
  meta["layer_sizes"] = {
      {"policy_mean", nets_.policy().mean_net().layer_sizes()},
      {"trunk", nets_.trunk().layer_sizes()},
      {"value_head", nets_.value_head().layer_sizes()},
      {"vex_head", nets_.vex_head().layer_sizes()},
  };
  meta["shared_policy_trunk"] = opts_.shared_policy_trunk;
  meta["normalize_observations"] = opts_.normalize_observations;
  meta["seed"] = opts_.seed;
  meta["updates"] = update_index_;
  ::sauna::save_checkpoint(path, spans, meta);
}

void Agent::load_checkpoint(const std::string& path) {
  ParamSpans spans = nets_.param_spans();
  spans.push_back({"obs_mean", normalizer_.mean().data(),
                   static_cast<std::size_t>(normalizer_.mean().size())});
  spans.push_back({"obs_m2", normalizer_.m2().data(),
                   static_cast<std::size_t>(normalizer_.m2().size())});
  spans.push_back({"obs_count", normalizer_.count_ptr(), 1});
  sauna::load_checkpoint(path, spans);
}

}  // namespace sauna
