#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "sauna/returns.hpp"
#include "sauna/vex.hpp"

namespace sauna {

// One environment step together with everything predicted at collection
// time. The value and vex fields are the predictions made while collecting
// and are never recomputed.
struct Transition {
  Eigen::VectorXd state;       // normalized observation fed to the nets
  Eigen::VectorXd action;      // as sampled (the environment clips)
  double reward = 0.0;
  double value = 0.0;          // V(s_t) at collection time
  Eigen::VectorXd next_state;  // normalized s_{t+1}
  double vex_pred = 0.0;       // vex prediction at collection time
  double log_prob = 0.0;       // log pi(a_t|s_t) under the collecting policy
  bool terminal = false;
  bool truncated = false;
};

struct CollectStats {
  long visited = 0;   // all transitions considered (accepted + rejected)
  long rejected = 0;
  long episodes_completed = 0;
  double ep_return_mean = std::nan("");
  double ep_return_std = std::nan("");

  double rejection_fraction() const {
    return visited > 0 ? static_cast<double>(rejected) / static_cast<double>(visited)
                       : 0.0;
  }
};

// Exactly `horizon` accepted transitions, column t = transition t, with
// precomputed gradient-update targets.
struct Batch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::VectorXd old_log_probs;
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;     // collection-time V(s_t)
  Eigen::VectorXd vex_preds;  // collection-time vex predictions
  Eigen::VectorXd returns;    // R_t targets
  Eigen::VectorXd advantages; // GAE, un-normalized
  EpisodeMarkers markers;     // episode boundaries among the accepted rows

  VexBatchStat vex_stat;      // Eq-style batch score over (returns, values)
  double vex_target = 0.0;    // regression target for the vex head

  CollectStats stats;

  long size() const { return states.cols(); }
};

}  // namespace sauna
