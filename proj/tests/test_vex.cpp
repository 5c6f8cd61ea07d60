#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sauna/rng.hpp"
#include "sauna/vex.hpp"

using namespace sauna;

namespace {

double sort_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

TEST_CASE("vex: perfect predictions give exactly 1") {
  Rng rng(1);
  std::vector<double> r(32);
  for (auto& x : r) x = rng.normal();
  const auto stat = vex_of_batch(r, r);
  CHECK(stat.vex_batch == 1.0);
  CHECK_FALSE(stat.degenerate);
}

TEST_CASE("vex: predicting the mean gives exactly 0") {
  Rng rng(2);
  std::vector<double> r(32);
  double mean = 0.0;
  for (auto& x : r) {
    x = rng.normal();
    mean += x;
  }
  mean /= 32.0;
  const std::vector<double> v(32, mean);
  const auto stat = vex_of_batch(r, v);
  CHECK(stat.vex_batch == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stat.return_mean == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("vex: hand-evaluated anchor R=[1,2,3], V=[0,0,0] gives -6") {
  const std::vector<double> r = {1.0, 2.0, 3.0};
  const std::vector<double> v = {0.0, 0.0, 0.0};
  const auto stat = vex_of_batch(r, v);
  CHECK(stat.vex_batch == doctest::Approx(-6.0).epsilon(1e-15));
  CHECK(stat.sample_count == 3);
}

TEST_CASE("vex: always at most 1, equals 1 iff SSE is zero") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(64);
    std::vector<double> r(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = rng.normal() * 10.0;
      v[i] = rng.normal() * 10.0;
    }
    const auto stat = vex_of_batch(r, v);
    CHECK(stat.vex_batch <= 1.0 + 1e-12);
    if (stat.vex_batch == 1.0) {
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) sse += (r[i] - v[i]) * (r[i] - v[i]);
      CHECK(sse == 0.0);
    }
  }
}

TEST_CASE("vex: invariant under joint permutation, shift, and scale") {
  Rng rng(4);
  const std::size_t n = 40;
  std::vector<double> r(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = rng.normal();
    v[i] = rng.normal();
  }
  const double base = vex_of_batch(r, v).vex_batch;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<double> rp(n), vp(n);
  for (std::size_t i = 0; i < n; ++i) {
    rp[i] = r[perm[i]];
    vp[i] = v[perm[i]];
  }
  CHECK(vex_of_batch(rp, vp).vex_batch == doctest::Approx(base).epsilon(1e-12));

  std::vector<double> rs(n), vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rs[i] = r[i] + 17.5;
    vs[i] = v[i] + 17.5;
  }
  CHECK(vex_of_batch(rs, vs).vex_batch == doctest::Approx(base).epsilon(1e-9));

  for (std::size_t i = 0; i < n; ++i) {
    rs[i] = r[i] * -3.25;
    vs[i] = v[i] * -3.25;
  }
  CHECK(vex_of_batch(rs, vs).vex_batch == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("vex: degenerate SST yields the documented sentinel, never NaN") {
  const std::vector<double> r = {2.0, 2.0, 2.0};
  const auto perfect = vex_of_batch(r, r);
  CHECK(perfect.vex_batch == 1.0);
  CHECK(perfect.degenerate);

  const std::vector<double> v = {1.0, 2.0, 3.0};
  const auto bad = vex_of_batch(r, v);
  CHECK(bad.vex_batch == -1.0);
  CHECK(bad.degenerate);
  CHECK_FALSE(std::isnan(bad.vex_batch));
}

TEST_CASE("vex: empty input is a usage error") {
  CHECK_THROWS_AS(vex_of_batch(std::vector<double>{}, std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("adjusted vex: perfect fit is unchanged") {
  VexBatchStat stat;
  stat.vex_batch = 1.0;
  CHECK(adjusted_vex(stat, 7, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(adjusted_vex(stat, 1000, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adjusted vex: formula evaluation at vex=0, n=11, p=1") {
  VexBatchStat stat;
  stat.vex_batch = 0.0;
  CHECK(adjusted_vex(stat, 11, 1) == doctest::Approx(-1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("adjusted vex: approaches the raw value for large n") {
  VexBatchStat stat;
  stat.vex_batch = 0.42;
  CHECK(std::abs(adjusted_vex(stat, 1000000, 1) - 0.42) < 1e-6);
}

TEST_CASE("adjusted vex: n <= p + 1 is a usage error") {
  VexBatchStat stat;
  stat.vex_batch = 0.5;
  CHECK_THROWS_AS(adjusted_vex(stat, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(adjusted_vex(stat, 5, 5), std::invalid_argument);
}

TEST_CASE("median tracker: singleton and odd-count cases") {
  MedianTracker t;
  t.insert(3.0);
  CHECK(t.median() == 3.0);
  t.insert(1.0);
  t.insert(10.0);
  CHECK(t.median() == 3.0);
  MedianTracker u;
  u.insert(1.0);
  u.insert(2.0);
  u.insert(10.0);
  CHECK(u.median() == 2.0);
}

TEST_CASE("median tracker matches the sort oracle on every prefix") {
  Rng rng(5);
  MedianTracker t;
  std::vector<double> seen;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal() * (1 + rng.uniform_index(5));
    t.insert(x);
    seen.push_back(x);
    CHECK(t.median() == sort_median(seen));
  }
  CHECK(t.size() == 1000);
}

TEST_CASE("median tracker: duplicates and mean query") {
  MedianTracker t;
  for (double x : {2.0, 2.0, 2.0, 8.0}) t.insert(x);
  CHECK(t.median() == 2.0);
  CHECK(t.mean() == doctest::Approx(3.5).epsilon(1e-15));
  t.clear();
  CHECK(t.size() == 0);
  CHECK(t.median() == 0.0);
  CHECK(t.mean() == 0.0);
}

TEST_CASE("accept_transition: rho = 0 accepts everything") {
  Rng rng(6);
  MedianTracker t;
  for (int i = 0; i < 100; ++i) {
    const double pred = rng.normal();
    CHECK(accept_transition(pred, t, 0.0, 1e-8));
    t.insert(pred);
  }
}

TEST_CASE("accept_transition: direct evaluation of the predicate") {
  MedianTracker t;
  t.insert(0.5);
  // ratio ~ 1 >= 0.3
  CHECK(accept_transition(0.5, t, 0.3, 1e-8));
  // ratio ~ 0.02 < 0.3: the close-to-zero rejection case
  CHECK_FALSE(accept_transition(0.01, t, 0.3, 1e-8));
}

TEST_CASE("accept_transition: empty tracker uses median 0 (seeding rule)") {
  MedianTracker t;
  CHECK(accept_transition(1e-6, t, 0.3, 1e-8));  // |pred| / eps0 is huge
}

TEST_CASE("accept_transition: monotone in rho") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    MedianTracker t;
    const int warm = static_cast<int>(rng.uniform_index(20));
    for (int i = 0; i < warm; ++i) t.insert(rng.normal());
    const double pred = rng.normal();
    bool prev = true;
    for (double rho : {0.0, 0.1, 0.3, 0.7, 1.0, 2.0, 10.0}) {
      const bool now = accept_transition(pred, t, rho, 1e-8);
      CHECK((prev || !now));  // raising rho never converts reject into accept
      prev = now;
    }
  }
}
