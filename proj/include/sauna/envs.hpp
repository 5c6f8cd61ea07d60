#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sauna/rng.hpp"

namespace sauna {

struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  Eigen::VectorXd action_low;
  Eigen::VectorXd action_high;
  int max_episode_steps = 0;
};

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool terminal = false;   // environment-defined end
  bool truncated = false;  // time-limit end
};

// Deterministic, seedable episodic environment. Actions are clipped to
// [action_low, action_high] before the dynamics; stepping a finished episode
// (terminal or truncated) without reset() is a usage error.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Eigen::VectorXd reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
};

// Names: "pendulum", "pointmass". Unknown name throws std::invalid_argument.
std::unique_ptr<Env> make_env(const std::string& name);
std::vector<std::string> env_names();

// Torque-limited pendulum swing-up.
//   observation (cos th, sin th, th_dot), torque u in [-2, 2]
//   th_ddot = 15 sin th + 3 u   (g=10, m=1, l=1)
//   semi-implicit Euler, dt = 0.05, th_dot clamped to [-8, 8]
//   reward  = -(wrap(th)^2 + 0.1 th_dot^2 + 0.001 u^2), on the pre-step state
//   init    th ~ U(-pi, pi), th_dot ~ U(-1, 1); 200 steps, never terminal
class PendulumEnv final : public Env {
 public:
  PendulumEnv();
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(std::uint64_t seed) override;
  StepResult step(const Eigen::VectorXd& action) override;

  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }

 private:
  Eigen::VectorXd observation() const;

  EnvSpec spec_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  int steps_ = 0;
  bool needs_reset_ = true;
};

// Point mass driven by bounded acceleration toward a goal at the origin.
//   state (px, py, vx, vy), acceleration in [-1, 1]^2
//   semi-implicit Euler, dt = 0.1; velocity clamped to [-1, 1],
//   position clamped to [-2, 2]
//   reward = -|pos' - goal| (post-step), terminal when within radius 0.05
//   init   pos ~ U(-1, 1)^2, vel = 0; 300 steps
class PointMassEnv final : public Env {
 public:
  static constexpr double kGoalRadius = 0.05;

  PointMassEnv();
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(std::uint64_t seed) override;
  StepResult step(const Eigen::VectorXd& action) override;

 private:
  EnvSpec spec_;
  Eigen::Vector2d pos_;
  Eigen::Vector2d vel_;
  int steps_ = 0;
  bool needs_reset_ = true;
};

// Wraps an angle into [-pi, pi].
double wrap_angle(double theta);

}  // namespace sauna
