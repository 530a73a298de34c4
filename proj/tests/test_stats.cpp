#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errsim/rng.hpp"
#include "errsim/stats.hpp"

using namespace errsim;

TEST_CASE("ks of identical samples is zero") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  CHECK(ks_statistic(a, a) == 0.0);
}

TEST_CASE("ks of disjoint samples is one") {
  const std::vector<double> a{0.0, 0.1, 0.2};
  const std::vector<double> b{1.0, 1.1, 1.2};
  CHECK(ks_statistic(a, b) == doctest::Approx(1.0));
}

TEST_CASE("ks handles ties across samples") {
  const std::vector<double> a{0.0, 1.0, 2.0};
  const std::vector<double> b{0.0, 1.0, 2.0, 3.0};
  // CDFs agree except on [2, 3): |3/3 - 3/4| = 1/4.
  CHECK(ks_statistic(a, b) == doctest::Approx(0.25));
}

TEST_CASE("ks against a known hand-computed case") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{1.5, 2.5};
  // After x=2: F_a = 2/3, F_b = 1/2 -> 1/6; after x=1: F_a=1/3, F_b=0 -> 1/3.
  CHECK(ks_statistic(a, b) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ks between same-distribution draws is small, shifted draws large") {
  Rng rng(99);
  std::vector<double> a(2000), b(2000), c(2000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    c[i] = rng.normal() + 2.0;
  }
  CHECK(ks_statistic(a, b) < 0.06);
  CHECK(ks_statistic(a, c) > 0.5);
}

TEST_CASE("ks is symmetric and bounded") {
  Rng rng(7);
  std::vector<double> a(100), b(57);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform() * 1.3;
  const double d1 = ks_statistic(a, b);
  const double d2 = ks_statistic(b, a);
  CHECK(d1 == doctest::Approx(d2));
  CHECK(d1 >= 0.0);
  CHECK(d1 <= 1.0);
  CHECK_THROWS_AS(ks_statistic({}, a), std::invalid_argument);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const ErrorStats s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.max == doctest::Approx(4.0));
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));

  const std::vector<double> odd{5.0, 1.0, 3.0};
  CHECK(summarize(odd).median == doctest::Approx(3.0));
}

TEST_CASE("histogram bins cover the range and clamp outliers") {
  const std::vector<double> v{0.0, 0.1, 0.5, 0.9, 1.0, 2.0};
  const Histogram h = histogram(v, 0.0, 1.0, 4);
  std::size_t total = 0;
  for (std::size_t c : h.counts) total += c;
  CHECK(total == v.size());
  CHECK(h.counts.back() >= 2);  // 1.0 and the 2.0 outlier
}
