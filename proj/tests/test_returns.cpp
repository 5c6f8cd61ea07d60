#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sauna/returns.hpp"
#include "sauna/rng.hpp"

using namespace sauna;

namespace {

struct Segment {
  std::vector<double> rewards, values, next_values;
  EpisodeMarkers markers;
};

// One random multi-episode step sequence with internally consistent
// next-values (next_values[t] == values[t+1] inside an episode).
Segment random_segment(Rng& rng, std::size_t n, double p_terminal,
                       double p_truncated) {
  Segment s;
  s.rewards.resize(n);
  s.values.resize(n);
  s.next_values.resize(n);
  s.markers.terminal.assign(n, 0);
  s.markers.truncated.assign(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    s.rewards[t] = rng.normal();
    s.values[t] = rng.normal();
    const double u = rng.uniform();
    if (u < p_terminal) s.markers.terminal[t] = 1;
    else if (u < p_terminal + p_truncated) s.markers.truncated[t] = 1;
  }
  for (std::size_t t = 0; t < n; ++t) {
    const bool boundary = s.markers.terminal[t] || s.markers.truncated[t] || t + 1 == n;
    s.next_values[t] = boundary ? rng.normal() : s.values[t + 1];
  }
  return s;
}

// O(T^2) direct-summation oracle for GAE.
std::vector<double> gae_oracle(const Segment& s, double gamma, double lambda) {
  const std::size_t n = s.rewards.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double nonterminal = s.markers.terminal[t] ? 0.0 : 1.0;
    delta[t] = s.rewards[t] + gamma * s.next_values[t] * nonterminal - s.values[t];
  }
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    double w = 1.0;
    for (std::size_t k = t; k < n; ++k) {
      acc += w * delta[k];
      if (s.markers.terminal[k] || s.markers.truncated[k]) break;
      w *= gamma * lambda;
    }
    out[t] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("discounted returns: gamma = 0 returns the raw rewards") {
  Rng rng(1);
  auto s = random_segment(rng, 50, 0.05, 0.05);
  const auto r = discounted_returns(s.rewards, s.next_values, 0.0, s.markers);
  for (std::size_t t = 0; t < 50; ++t) CHECK(r[t] == s.rewards[t]);
}

TEST_CASE("discounted returns: [1,1,1] at gamma 0.5, terminal end") {
  std::vector<double> rewards = {1.0, 1.0, 1.0};
  std::vector<double> nv = {0.0, 0.0, 123.0};  // ignored at the terminal end
  EpisodeMarkers m;
  m.terminal = {0, 0, 1};
  m.truncated = {0, 0, 0};
  const auto r = discounted_returns(rewards, nv, 0.5, m);
  CHECK(r[0] == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("discounted returns: single truncated step bootstraps") {
  std::vector<double> rewards = {1.0};
  std::vector<double> nv = {3.7};
  EpisodeMarkers m;
  m.terminal = {0};
  m.truncated = {1};
  const auto r = discounted_returns(rewards, nv, 0.99, m);
  CHECK(r[0] == doctest::Approx(1.0 + 0.99 * 3.7).epsilon(1e-15));
}

TEST_CASE("gae: lambda = 0 gives the one-step TD residual") {
  Rng rng(2);
  auto s = random_segment(rng, 40, 0.05, 0.05);
  const auto a = gae_advantages(s.rewards, s.values, s.next_values, 0.99, 0.0, s.markers);
  for (std::size_t t = 0; t < 40; ++t) {
    const double nonterminal = s.markers.terminal[t] ? 0.0 : 1.0;
    const double delta =
        s.rewards[t] + 0.99 * s.next_values[t] * nonterminal - s.values[t];
    CHECK(a[t] == doctest::Approx(delta).epsilon(1e-12));
  }
}

TEST_CASE("gae: lambda = 1 plus values telescopes to the discounted returns") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_segment(rng, 64, 0.04, 0.04);
    const auto a = gae_advantages(s.rewards, s.values, s.next_values, 0.99, 1.0, s.markers);
    const auto r = discounted_returns(s.rewards, s.next_values, 0.99, s.markers);
    for (std::size_t t = 0; t < 64; ++t) {
      CHECK(std::abs(a[t] + s.values[t] - r[t]) < 1e-8);
    }
  }
}

TEST_CASE("gae matches the O(T^2) direct-summation oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_segment(rng, 10, 0.1, 0.1);
    const auto got = gae_advantages(s.rewards, s.values, s.next_values, 0.99, 0.95, s.markers);
    const auto want = gae_oracle(s, 0.99, 0.95);
    for (std::size_t t = 0; t < 10; ++t) {
      CHECK(std::abs(got[t] - want[t]) < 1e-10);
    }
  }
}

TEST_CASE("boundary isolation: concatenated episodes equal per-episode results") {
  Rng rng(5);
  auto a = random_segment(rng, 20, 0.0, 0.0);
  a.markers.terminal[19] = 1;
  auto b = random_segment(rng, 15, 0.0, 0.0);
  b.markers.truncated[14] = 1;

  Segment joined;
  auto append = [&](const Segment& s) {
    joined.rewards.insert(joined.rewards.end(), s.rewards.begin(), s.rewards.end());
    joined.values.insert(joined.values.end(), s.values.begin(), s.values.end());
    joined.next_values.insert(joined.next_values.end(), s.next_values.begin(),
                              s.next_values.end());
    joined.markers.terminal.insert(joined.markers.terminal.end(),
                                   s.markers.terminal.begin(), s.markers.terminal.end());
    joined.markers.truncated.insert(joined.markers.truncated.end(),
                                    s.markers.truncated.begin(),
                                    s.markers.truncated.end());
  };
  append(a);
  append(b);

  const auto r_joined = discounted_returns(joined.rewards, joined.next_values, 0.97,
                                           joined.markers);
  const auto r_a = discounted_returns(a.rewards, a.next_values, 0.97, a.markers);
  const auto r_b = discounted_returns(b.rewards, b.next_values, 0.97, b.markers);
  for (std::size_t t = 0; t < 20; ++t) CHECK(r_joined[t] == r_a[t]);
  for (std::size_t t = 0; t < 15; ++t) CHECK(r_joined[20 + t] == r_b[t]);

  const auto g_joined = gae_advantages(joined.rewards, joined.values,
                                       joined.next_values, 0.97, 0.9, joined.markers);
  const auto g_a = gae_advantages(a.rewards, a.values, a.next_values, 0.97, 0.9, a.markers);
  const auto g_b = gae_advantages(b.rewards, b.values, b.next_values, 0.97, 0.9, b.markers);
  for (std::size_t t = 0; t < 20; ++t) CHECK(g_joined[t] == g_a[t]);
  for (std::size_t t = 0; t < 15; ++t) CHECK(g_joined[20 + t] == g_b[t]);
}

TEST_CASE("normalize_advantages: constant input maps to zeros") {
  const std::vector<double> in = {1.0, 1.0, 1.0};
  const auto out = normalize_advantages(in);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("normalize_advantages: two-point case") {
  const std::vector<double> in = {0.0, 2.0};
  const auto out = normalize_advantages(in);
  CHECK(out[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize_advantages: random input has zero mean, unit std") {
  Rng rng(6);
  std::vector<double> in(257);
  for (auto& v : in) v = 3.0 + 2.5 * rng.normal();
  const auto out = normalize_advantages(in);
  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(out.size());
  double var = 0.0;
  for (double v : out) var += (v - mean) * (v - mean);
  var /= static_cast<double>(out.size());
  CHECK(std::abs(mean) < 1e-10);
  CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-8);
}

TEST_CASE("normalize_advantages: empty input is a usage error") {
  CHECK_THROWS_AS(normalize_advantages(std::vector<double>{}), std::invalid_argument);
}
