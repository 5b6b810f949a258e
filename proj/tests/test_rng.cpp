#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "v2xsim/rng.hpp"

using namespace v2xsim;

TEST_CASE("named streams are deterministic and purpose-separated") {
  auto a1 = make_stream(1, StreamPurpose::placement, 7);
  auto a2 = make_stream(1, StreamPurpose::placement, 7);
  CHECK(a1() == a2());
  CHECK(a1() == a2());

  auto b = make_stream(1, StreamPurpose::resource_select, 7);
  auto c = make_stream(1, StreamPurpose::placement, 8);
  auto d = make_stream(2, StreamPurpose::placement, 7);
  auto fresh = make_stream(1, StreamPurpose::placement, 7);
  std::set<std::uint64_t> firsts{fresh(), b(), c(), d()};
  CHECK(firsts.size() == 4);
}

TEST_CASE("link shadowing is reciprocal and keyed by subframe") {
  CHECK(link_shadow_normal(9, 3, 11, 500) == link_shadow_normal(9, 11, 3, 500));
  CHECK(link_shadow_normal(9, 3, 11, 500) == link_shadow_normal(9, 3, 11, 500));
  CHECK(link_shadow_normal(9, 3, 11, 500) != link_shadow_normal(9, 3, 11, 501));
  CHECK(link_shadow_normal(9, 3, 11, 500) != link_shadow_normal(10, 3, 11, 500));
  CHECK(link_shadow_normal(9, 3, 11, 500) != link_shadow_normal(9, 3, 12, 500));
}

TEST_CASE("link shadowing draws are standard normal") {
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = link_shadow_normal(1, 0, 1, i);
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(std::sqrt(var) - 1.0) < 0.02);
}

TEST_CASE("unit interval mapping stays in (0, 1]") {
  CHECK(to_unit_interval(0) > 0.0);
  CHECK(to_unit_interval(~0ULL) <= 1.0);
}
