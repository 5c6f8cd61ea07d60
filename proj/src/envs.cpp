#include "sauna/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace sauna {

namespace {

constexpr std::uint64_t kEnvStream = 0x456e7653;  // distinct RNG stream tag

Eigen::VectorXd clip_action(const Eigen::VectorXd& action, const EnvSpec& spec) {
  if (action.size() != spec.action_dim) {
    throw std::invalid_argument("env step: action dimension mismatch");
  }
  return action.cwiseMax(spec.action_low).cwiseMin(spec.action_high);
}

}  // namespace

double wrap_angle(double theta) {
  return std::remainder(theta, 2.0 * M_PI);
}

// --- pendulum ---

PendulumEnv::PendulumEnv() {
  spec_.state_dim = 3;
  spec_.action_dim = 1;
  spec_.action_low = Eigen::VectorXd::Constant(1, -2.0);
  spec_.action_high = Eigen::VectorXd::Constant(1, 2.0);
  spec_.max_episode_steps = 200;
}

Eigen::VectorXd PendulumEnv::observation() const {
  Eigen::VectorXd obs(3);
  obs << std::cos(theta_), std::sin(theta_), theta_dot_;
  return obs;
}

Eigen::VectorXd PendulumEnv::reset(std::uint64_t seed) {
  Rng rng(seed, kEnvStream);
  theta_ = rng.uniform(-M_PI, M_PI);
  theta_dot_ = rng.uniform(-1.0, 1.0);
  steps_ = 0;
  needs_reset_ = false;
  return observation();
}

StepResult PendulumEnv::step(const Eigen::VectorXd& action) {
  if (needs_reset_) {
    throw std::logic_error("pendulum: step on a finished episode (reset required)");
  }
  const double u = clip_action(action, spec_)(0);

  const double cost = wrap_angle(theta_) * wrap_angle(theta_) +
                      0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

  const double dt = 0.05;
  const double theta_ddot = 15.0 * std::sin(theta_) + 3.0 * u;
  theta_dot_ = std::clamp(theta_dot_ + theta_ddot * dt, -8.0, 8.0);
  theta_ += theta_dot_ * dt;
  ++steps_;

  StepResult res;
  res.next_state = observation();
  res.reward = -cost;
  res.terminal = false;
  res.truncated = steps_ >= spec_.max_episode_steps;
  needs_reset_ = res.terminal || res.truncated;
  return res;
}

// --- point mass ---

PointMassEnv::PointMassEnv() {
  spec_.state_dim = 4;
  spec_.action_dim = 2;
  spec_.action_low = Eigen::VectorXd::Constant(2, -1.0);
  spec_.action_high = Eigen::VectorXd::Constant(2, 1.0);
  spec_.max_episode_steps = 300;
  pos_.setZero();
  vel_.setZero();
}

Eigen::VectorXd PointMassEnv::reset(std::uint64_t seed) {
  Rng rng(seed, kEnvStream);
  pos_ << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
  vel_.setZero();
  steps_ = 0;
  needs_reset_ = false;
  Eigen::VectorXd state(4);
  state << pos_(0), pos_(1), vel_(0), vel_(1);
  return state;
}

StepResult PointMassEnv::step(const Eigen::VectorXd& action) {
  if (needs_reset_) {
    throw std::logic_error("pointmass: step on a finished episode (reset required)");
  }
  const Eigen::VectorXd a = clip_action(action, spec_);

  const double dt = 0.1;
  vel_ = (vel_ + a * dt).cwiseMax(-1.0).cwiseMin(1.0);
  pos_ = (pos_ + vel_ * dt).cwiseMax(-2.0).cwiseMin(2.0);
  ++steps_;

  const double dist = pos_.norm();  // goal is the origin
  StepResult res;
  res.next_state = Eigen::VectorXd(4);
  res.next_state << pos_(0), pos_(1), vel_(0), vel_(1);
  res.reward = -dist;
  res.terminal = dist < kGoalRadius;
  res.truncated = !res.terminal && steps_ >= spec_.max_episode_steps;
  needs_reset_ = res.terminal || res.truncated;
  return res;
}

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "pendulum") return std::make_unique<PendulumEnv>();
  if (name == "pointmass") return std::make_unique<PointMassEnv>();
  throw std::invalid_argument("unknown environment '" + name +
                              "' (available: pendulum, pointmass)");
}

std::vector<std::string> env_names() {
  return {"pendulum", "pointmass"};
}

}  // namespace sauna
