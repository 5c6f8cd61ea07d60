#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sauna {

// Episode-boundary markers aligned with a step sequence. A step with
// terminal or truncated set ends its segment; the last step of the sequence
// always ends one (a collection that stops mid-episode bootstraps there).
struct EpisodeMarkers {
  std::vector<std::uint8_t> terminal;
  std::vector<std::uint8_t> truncated;
};

// Discounted return targets R_t = r_t + gamma * R_{t+1} within each segment.
// Tails: terminal ends use 0; truncated ends (and a non-terminal final step)
// bootstrap with gamma * next_values[t], the value of the state after step t.
std::vector<double> discounted_returns(std::span<const double> rewards,
                                       std::span<const double> next_values,
                                       double gamma,
                                       const EpisodeMarkers& markers);

// GAE: A_t = sum_k (gamma*lambda)^k delta_{t+k} within a segment, with
// delta_t = r_t + gamma * next_values[t] * (1 - terminal_t) - values[t].
// The lambda accumulation restarts at every segment boundary.
std::vector<double> gae_advantages(std::span<const double> rewards,
                                   std::span<const double> values,
                                   std::span<const double> next_values,
                                   double gamma, double lambda,
                                   const EpisodeMarkers& markers);

// Zero-mean unit-std rescaling with an std floor of 1e-8 (population std).
// A constant input maps to all zeros. Empty input is a usage error.
std::vector<double> normalize_advantages(std::span<const double> advantages);

}  // namespace sauna
