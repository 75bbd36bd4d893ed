#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "invabc/summaries.hpp"
#include "test_util.hpp"

using namespace invabc;

TEST_CASE("summarize counts runs and ones") {
  CHECK(summarize(pattern_parse("110010", 6)) == Summary{2, 3});
  CHECK(summarize(pattern_parse("000000", 6)) == Summary{0, 0});
  CHECK(summarize(pattern_parse("111111", 6)) == Summary{1, 6});
  CHECK(summarize(pattern_parse("101010", 6)) == Summary{3, 3});
  CHECK(summarize(pattern_parse("011110", 6)) == Summary{1, 4});

  for (int p = 0; p < 64; ++p) {
    const auto s = summarize(static_cast<Pattern6>(p));
    CHECK(s.runs >= 0);
    CHECK(s.runs <= 3);
    CHECK(s.runs <= s.ones);
    CHECK(s.ones <= 6);
    CHECK((s.ones == 0) == (s.runs == 0));
    // reversal invariance
    CHECK(summarize(testutil::reverse_bits(static_cast<Pattern6>(p), 6)) == s);
  }
}

TEST_CASE("kernel_eval") {
  const Summary a{2, 3};

  SUBCASE("indicator") {
    CHECK(kernel_eval(a, a, 0.0, KernelType::indicator) == 1.0);
    CHECK(kernel_eval(a, Summary{1, 3}, 0.0, KernelType::indicator) == 0.0);
    CHECK(kernel_eval(a, Summary{2, 4}, 1.0, KernelType::indicator) == 1.0);
    CHECK(kernel_eval(a, Summary{1, 4}, 1.0, KernelType::indicator) == 1.0);
    CHECK(kernel_eval(a, Summary{0, 5}, 1.0, KernelType::indicator) == 0.0);
    CHECK(kernel_eval(a, Summary{2, 5}, 1.0, KernelType::indicator) == 0.0);
  }

  SUBCASE("gaussian") {
    CHECK(kernel_eval(a, a, 0.5, KernelType::gaussian) == 1.0);
    const double w = kernel_eval(a, Summary{1, 5}, 1.0, KernelType::gaussian);
    CHECK(w == doctest::Approx(std::exp(-(1.0 + 4.0) / 2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(kernel_eval(a, a, 0.0, KernelType::gaussian),
                    std::invalid_argument);
  }

  CHECK_THROWS_AS(kernel_eval(a, a, -1.0, KernelType::indicator),
                  std::invalid_argument);
}

TEST_CASE("summary_fiber partitions the pattern space") {
  CHECK(summary_fiber(Summary{0, 0}) ==
        std::vector<Pattern6>{pattern_parse("000000", 6)});
  CHECK(summary_fiber(Summary{1, 6}) ==
        std::vector<Pattern6>{pattern_parse("111111", 6)});
  CHECK(summary_fiber(Summary{2, 2}).size() == 10);

  std::set<Pattern6> all;
  std::set<std::pair<int, int>> images;
  for (int p = 0; p < 64; ++p) {
    const auto s = summarize(static_cast<Pattern6>(p));
    images.insert({s.runs, s.ones});
  }
  for (const auto& [runs, ones] : images) {
    for (const Pattern6 p : summary_fiber(Summary{runs, ones})) {
      CHECK(summarize(p) == Summary{runs, ones});
      CHECK(all.insert(p).second);  // fibers are disjoint
    }
  }
  CHECK(all.size() == 64);
}
