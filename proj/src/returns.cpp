#include "sauna/returns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sauna {

namespace {

void check_markers(std::size_t n, const EpisodeMarkers& markers) {
  if (markers.terminal.size() != n || markers.truncated.size() != n) {
    throw std::invalid_argument("episode markers must match the step count");
  }
}

inline bool segment_end(std::size_t t, std::size_t n, const EpisodeMarkers& m) {
  return m.terminal[t] || m.truncated[t] || t + 1 == n;
}

}  // namespace

std::vector<double> discounted_returns(std::span<const double> rewards,
                                       std::span<const double> next_values,
                                       double gamma,
                                       const EpisodeMarkers& markers) {
  const std::size_t n = rewards.size();
  if (next_values.size() != n) {
    throw std::invalid_argument("discounted_returns: next_values length mismatch");
  }
  check_markers(n, markers);

  std::vector<double> out(n);
  double running = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    double tail;
    if (markers.terminal[t]) {
      tail = 0.0;
    } else if (segment_end(t, n, markers)) {
      tail = next_values[t];
    } else {
      tail = running;
    }
    running = rewards[t] + gamma * tail;
    out[t] = running;
  }
  return out;
}

std::vector<double> gae_advantages(std::span<const double> rewards,
                                   std::span<const double> values,
                                   std::span<const double> next_values,
                                   double gamma, double lambda,
                                   const EpisodeMarkers& markers) {
  const std::size_t n = rewards.size();
  if (values.size() != n || next_values.size() != n) {
    throw std::invalid_argument("gae_advantages: length mismatch");
  }
  check_markers(n, markers);

  std::vector<double> out(n);
  double gae = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double nonterminal = markers.terminal[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_values[t] * nonterminal - values[t];
    if (segment_end(t, n, markers)) {
      gae = delta;
    } else {
      gae = delta + gamma * lambda * gae;
    }
    out[t] = gae;
  }
  return out;
}

std::vector<double> normalize_advantages(std::span<const double> advantages) {
  if (advantages.empty()) {
    throw std::invalid_argument("normalize_advantages: empty input");
  }
  const std::size_t n = advantages.size();
  double mean = 0.0;
  for (double a : advantages) mean += a;
  mean /= static_cast<double>(n);

  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  const double denom = std::max(std::sqrt(var), 1e-8);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (advantages[i] - mean) / denom;
  return out;
}

}  // namespace sauna
