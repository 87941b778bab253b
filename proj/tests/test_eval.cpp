#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wmsketch/baselines.hpp"
#include "wmsketch/eval.hpp"

using namespace wmsketch;
using namespace wmsketch::eval;

TEST_CASE("memory costs under the 4-byte cell model") {
  CHECK(memory_cost({Method::trunc, 128, 0, 0, 0}) == 1024);
  CHECK(memory_cost({Method::ptrunc, 128, 0, 0, 0}) == 1536);
  CHECK(memory_cost({Method::ss, 512, 0, 0, 0}) == 6144);
  CHECK(memory_cost({Method::hash, 0, 2048, 1, 0}) == 8192);
  CHECK(memory_cost({Method::awm, 128, 256, 1, 0}) == 2048);
  CHECK(memory_cost({Method::wm, 128, 128, 14, 0}) == 8192);
  CHECK(memory_cost({Method::cmff, 128, 256, 2, 0}) == 1536 + 2048);
  CHECK(memory_cost({Method::dense, 9999, 0, 0, 0}) == 0);
  MemoryCostModel wide{8, 8, 8};
  CHECK(memory_cost({Method::trunc, 128, 0, 0, 0}, wide) == 2048);
}

TEST_CASE("enumeration matches a brute-force sweep and its ordering") {
  GridSpec grid;
  grid.heap_min = 8;
  grid.heap_max = 32;
  grid.width_min = 8;
  grid.width_max = 64;
  grid.depth_max = 3;
  const uint64_t budget = 1024;
  auto got = enumerate_configs(Method::awm, budget, grid);

  std::vector<MethodConfig> want;
  for (uint64_t h : {8, 16, 32})
    for (uint64_t w : {8, 16, 32, 64})
      for (uint32_t s : {1u, 2u, 3u}) {
        MethodConfig c{Method::awm, static_cast<size_t>(h), w, s, budget};
        if (memory_cost(c) <= budget) want.push_back(c);
      }
  std::sort(want.begin(), want.end(), [](const MethodConfig& a, const MethodConfig& b) {
    uint64_t ca = memory_cost(a), cb = memory_cost(b);
    if (ca != cb) return ca > cb;
    if (a.heap != b.heap) return a.heap < b.heap;
    if (a.width != b.width) return a.width < b.width;
    return a.depth < b.depth;
  });

  REQUIRE(got.size() == want.size());
  CHECK(!got.empty());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].heap == want[i].heap);
    CHECK(got[i].width == want[i].width);
    CHECK(got[i].depth == want[i].depth);
  }
  for (size_t i = 1; i < got.size(); ++i)
    CHECK(memory_cost(got[i - 1]) >= memory_cost(got[i]));
}

TEST_CASE("enumeration respects the budget and rejects zero") {
  auto configs = enumerate_configs(Method::trunc, 256);
  for (const auto& c : configs) CHECK(memory_cost(c) <= 256);
  CHECK(!configs.empty());
  CHECK(enumerate_configs(Method::dense, 100).empty());
  CHECK_THROWS_AS(enumerate_configs(Method::wm, 0), std::invalid_argument);
}

TEST_CASE("suggested shapes") {
  auto awm = suggest_config(Method::awm, 2048);
  CHECK(awm.heap == 128);
  CHECK(awm.width == 256);
  CHECK(awm.depth == 1);
  CHECK(memory_cost(awm) <= 2048);

  auto awm8k = suggest_config(Method::awm, 8192);
  CHECK(awm8k.heap == 512);
  CHECK(awm8k.width == 1024);

  auto awm32k = suggest_config(Method::awm, 32768);
  CHECK(awm32k.heap == 2048);
  CHECK(awm32k.width == 4096);

  auto wm = suggest_config(Method::wm, 2048);
  CHECK(wm.heap == 128);
  CHECK(wm.width == 128);
  CHECK(wm.depth == 2);

  auto wm8k = suggest_config(Method::wm, 8192);
  CHECK(wm8k.heap == 128);
  CHECK(wm8k.width == 128);
  CHECK(wm8k.depth == 14);

  auto wm32k = suggest_config(Method::wm, 32768);
  CHECK(wm32k.width == 256);
  CHECK(wm32k.depth == 31);

  CHECK(suggest_config(Method::trunc, 1024).heap == 128);
  CHECK(suggest_config(Method::ss, 6144).heap == 512);
  CHECK(suggest_config(Method::ptrunc, 1200).heap == 100);
  CHECK(suggest_config(Method::hash, 8192).width == 2048);

  auto cmff = suggest_config(Method::cmff, 4096);
  CHECK(cmff.depth == 2);
  CHECK(memory_cost(cmff) <= 4096);

  for (Method m : {Method::trunc, Method::ptrunc, Method::ss, Method::hash, Method::wm,
                   Method::awm, Method::cmff}) {
    CHECK_THROWS_AS(suggest_config(m, 0), std::invalid_argument);
    CHECK_THROWS_AS(suggest_config(m, 2), std::invalid_argument);
  }
}

TEST_CASE("true top-k drops zeros and breaks ties toward smaller ids") {
  std::unordered_map<feature_t, double> w{{1, -2.0}, {2, 2.0}, {3, 1.0}, {4, 0.0}};
  auto top = true_topk(w, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0].feature == 1);
  CHECK(top[1].feature == 2);
  auto all = true_topk(w, 10);
  CHECK(all.size() == 3);  // the zero row never appears
}

TEST_CASE("relative recovery error conventions") {
  std::unordered_map<feature_t, double> w{{1, 3.0}, {2, 2.0}, {3, 1.0}};

  TopKEstimate exact{{1, 3.0}, {2, 2.0}};
  CHECK(rel_err(exact, w, 2) == doctest::Approx(1.0).epsilon(1e-12));

  TopKEstimate off{{1, 2.5}, {2, 2.0}};
  CHECK(rel_err(off, w, 2) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));

  // only the first k estimate rows count
  TopKEstimate noisy{{9, 100.0}, {1, 3.0}, {2, 2.0}};
  CHECK(rel_err(noisy, w, 2) == doctest::Approx(std::sqrt(10005.0)).epsilon(1e-12));

  // no tail: an exact estimate scores 1, anything else is infinite
  std::unordered_map<feature_t, double> tight{{1, 1.0}, {2, -1.0}};
  TopKEstimate hit{{1, 1.0}, {2, -1.0}};
  TopKEstimate miss{{1, 1.0}, {2, -0.5}};
  CHECK(rel_err(hit, tight, 2) == 1.0);
  CHECK(rel_err(miss, tight, 2) == std::numeric_limits<double>::infinity());

  TopKEstimate empty;
  CHECK(rel_err(empty, w, 2) ==
        doctest::Approx(std::sqrt(14.0 / 1.0)).epsilon(1e-12));
}

TEST_CASE("online error rate bookkeeping") {
  CHECK(online_error_rate(3, 12) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(online_error_rate(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(online_error_rate(5, 4), std::invalid_argument);
  OnlineStats s{1, 4};
  CHECK(s.error_rate() == 0.25);
}

TEST_CASE("online pass predicts before updating") {
  DenseModel m(DenseConfig{0.0, make_loss(LossKind::logistic),
                           make_schedule(ScheduleKind::constant, 1.0)});
  // margin 0 predicts +1, so a leading -1 example is always a mistake
  std::vector<LabeledExample> neg{{SparseVector::unit(1), -1}};
  auto stats = run_online(m, neg);
  CHECK(stats.examples == 1);
  CHECK(stats.mistakes == 1);

  DenseModel m2(DenseConfig{0.0, make_loss(LossKind::logistic),
                            make_schedule(ScheduleKind::constant, 1.0)});
  std::vector<LabeledExample> pos{{SparseVector::unit(1), 1},
                                  {SparseVector::unit(1), 1}};
  auto stats2 = run_online(m2, pos);
  CHECK(stats2.mistakes == 0);

  std::vector<LabeledExample> none;
  CHECK_THROWS_AS(run_online(m2, none), std::invalid_argument);
}

TEST_CASE("pearson correlation") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(pearson({1, 2, 3, 4}, {1, -1, 1, -1})) < 0.5);
  CHECK_THROWS_AS(pearson({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
}
