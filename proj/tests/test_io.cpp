#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "wmsketch/awm_sketch.hpp"
#include "wmsketch/baselines.hpp"
#include "wmsketch/libsvm.hpp"
#include "wmsketch/rng.hpp"
#include "wmsketch/snapshot.hpp"
#include "wmsketch/synthetic.hpp"
#include "wmsketch/wm_sketch.hpp"

using namespace wmsketch;

namespace {

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("wmsketch-test-" + std::to_string(SplitMix64(reinterpret_cast<uint64_t>(this)).next()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<LabeledExample> random_stream(uint64_t seed, size_t n, uint32_t dim,
                                          uint32_t sparsity) {
  SplitMix64 rng(seed);
  std::vector<LabeledExample> out;
  for (size_t i = 0; i < n; ++i) {
    std::vector<SparseVector::Entry> entries;
    while (entries.size() < sparsity) {
      auto id = static_cast<feature_t>(rng.below(dim));
      bool dup = false;
      for (const auto& [seen, v] : entries) dup |= seen == id;
      if (!dup) entries.emplace_back(id, rng.real_pos() * 2.0 - 1.0);
    }
    int y = rng.next() & 1 ? 1 : -1;
    out.push_back({SparseVector::from_pairs(std::move(entries)), y});
  }
  return out;
}

}  // namespace

TEST_CASE("libsvm line parsing") {
  auto ex = io::parse_libsvm_line("+1 1:0.5 3:-2");
  CHECK(ex.y == 1);
  REQUIRE(ex.x.size() == 2);
  CHECK(ex.x.begin()->first == 1);
  CHECK(ex.x.begin()->second == 0.5);
  CHECK((ex.x.begin() + 1)->first == 3);
  CHECK((ex.x.begin() + 1)->second == -2.0);

  CHECK(io::parse_libsvm_line("1 2:1").y == 1);
  CHECK(io::parse_libsvm_line("0 2:1").y == -1);
  CHECK(io::parse_libsvm_line("-1 2:1").y == -1);
  CHECK(io::parse_libsvm_line("-1").x.empty());

  auto dup = io::parse_libsvm_line("1 3:0.5 3:0.5");
  REQUIRE(dup.x.size() == 1);
  CHECK(dup.x.begin()->first == 3);
  CHECK(dup.x.begin()->second == 1.0);
}

TEST_CASE("libsvm parse errors carry line and column") {
  try {
    io::parse_libsvm_line("2 1:1", 7);
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() == 1);
  }
  try {
    io::parse_libsvm_line("+1 a:1");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
  try {
    io::parse_libsvm_line("+1 1:abc");
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.column() == 6);
  }
  CHECK_THROWS_AS(io::parse_libsvm_line("+1 1:inf"), io::ParseError);
  CHECK_THROWS_AS(io::parse_libsvm_line(""), io::ParseError);
  CHECK_THROWS_AS(io::parse_libsvm_line("+1 4294967296:1"), io::ParseError);
}

TEST_CASE("libsvm stream parsing skips blanks and reports real line numbers") {
  std::istringstream in("+1 1:1\n\n-1 2:0.5\n");
  auto rows = io::parse_libsvm(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].y == 1);
  CHECK(rows[1].y == -1);

  std::istringstream bad("+1 1:1\n\nbogus 2:1\n");
  try {
    io::parse_libsvm(bad);
    FAIL("expected ParseError");
  } catch (const io::ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("libsvm file round trip and missing files") {
  TempDir tmp;
  std::string path = tmp / "data.libsvm";
  {
    std::ofstream out(path);
    out << "+1 1:0.25 9:1\n-1 3:2\n";
  }
  auto rows = io::load_libsvm(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].x.begin()->first == 3);
  CHECK_THROWS_AS(io::load_libsvm(tmp / "nope.libsvm"), std::runtime_error);
}

TEST_CASE("synthetic generation is deterministic and labeled by the planted model") {
  io::SyntheticSpec spec;
  spec.dim = 512;
  spec.sparsity = 6;
  spec.heavy = 12;
  spec.steps = 400;
  spec.seed = 9;
  auto a = io::generate_synthetic(spec);
  auto b = io::generate_synthetic(spec);
  REQUIRE(a.stream.size() == 400);
  CHECK(a.w_true.size() == 12);
  for (const auto& [id, w] : a.w_true) {
    CHECK(id < 12);
    CHECK(std::abs(w) >= spec.heavy_min);
    CHECK(std::abs(w) <= spec.heavy_max);
  }
  for (size_t i = 0; i < a.stream.size(); ++i) {
    CHECK(a.stream[i].y == b.stream[i].y);
    REQUIRE(a.stream[i].x.size() == b.stream[i].x.size());
    for (size_t j = 0; j < a.stream[i].x.size(); ++j) {
      CHECK(a.stream[i].x.begin()[j].first == b.stream[i].x.begin()[j].first);
      CHECK(a.stream[i].x.begin()[j].second == b.stream[i].x.begin()[j].second);
    }
    double m = 0.0;
    for (const auto& [id, v] : a.stream[i].x) {
      auto it = a.w_true.find(id);
      if (it != a.w_true.end()) m += it->second * v;
    }
    CHECK(a.stream[i].y == (m >= 0.0 ? 1 : -1));  // noise 0: label is the true sign
  }
}

TEST_CASE("synthetic label noise flips the advertised fraction") {
  io::SyntheticSpec spec;
  spec.dim = 256;
  spec.sparsity = 5;
  spec.heavy = 8;
  spec.steps = 20000;
  spec.seed = 4;
  auto clean = io::generate_synthetic(spec);
  spec.noise = 0.2;
  auto noisy = io::generate_synthetic(spec);
  size_t flips = 0;
  for (size_t i = 0; i < clean.stream.size(); ++i)
    flips += clean.stream[i].y != noisy.stream[i].y;
  double rate = static_cast<double>(flips) / static_cast<double>(clean.stream.size());
  CHECK(rate > 0.19);
  CHECK(rate < 0.21);
}

TEST_CASE("zipf skew concentrates the popular ids") {
  io::SyntheticSpec spec;
  spec.dim = 1024;
  spec.sparsity = 10;
  spec.heavy = 4;
  spec.steps = 5000;
  spec.zipf = 1.0;
  spec.seed = 2;
  auto data = io::generate_synthetic(spec);
  size_t head = 0, mid = 0;
  for (const auto& ex : data.stream) {
    for (const auto& [id, v] : ex.x) {
      head += id == 0;
      mid += id == 500;
    }
  }
  CHECK(head > 1000);
  CHECK(mid < 100);
}

TEST_CASE("synthetic validation") {
  io::SyntheticSpec spec;
  auto expect_throw = [](io::SyntheticSpec s) {
    CHECK_THROWS_AS(io::generate_synthetic(s), std::invalid_argument);
  };
  io::SyntheticSpec s = spec;
  s.dim = 0;
  expect_throw(s);
  s = spec;
  s.sparsity = 0;
  expect_throw(s);
  s = spec;
  s.dim = 4;
  s.sparsity = 5;
  expect_throw(s);
  s = spec;
  s.heavy = 5000;
  expect_throw(s);
  s = spec;
  s.heavy_min = 0.0;
  expect_throw(s);
  s = spec;
  s.heavy_min = 3.0;
  s.heavy_max = 1.0;
  expect_throw(s);
  s = spec;
  s.noise = 0.5;
  expect_throw(s);
  s = spec;
  s.zipf = -1.0;
  expect_throw(s);
}

TEST_CASE("count-sketch snapshots round trip byte for byte") {
  TempDir tmp;
  CountSketch cs(21, 128, 2);
  for (uint32_t i = 0; i < 300; ++i) cs.update(i, (i % 9) * 0.25 - 1.0);
  std::string path = tmp / "sketch.csk";
  snapshot::save_countsketch(cs, path);
  CountSketch loaded = snapshot::load_countsketch(path);
  CHECK(loaded.k() == cs.k());
  CHECK(loaded.depth() == cs.depth());
  CHECK(loaded.seed() == cs.seed());
  CHECK(loaded.values() == cs.values());
  std::string again = tmp / "sketch2.csk";
  snapshot::save_countsketch(loaded, again);
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("wm snapshots restore the full learner state") {
  TempDir tmp;
  WmConfig cfg;
  cfg.k = 256;
  cfg.depth = 2;
  cfg.seed = 31;
  cfg.lambda = 0.001;
  cfg.loss = make_loss(LossKind::smoothed_hinge, 1.5);
  cfg.schedule = make_schedule(ScheduleKind::inv_sqrt, 0.4);
  cfg.heap_capacity = 16;
  WmSketch m(cfg);
  auto stream = random_stream(6, 150, 300, 4);
  for (const auto& ex : stream) m.update(ex.x, ex.y);

  std::string path = tmp / "model.wms";
  snapshot::save_wm(m, path);
  WmSketch loaded = snapshot::load_wm(path);
  CHECK(loaded.steps() == m.steps());
  CHECK(loaded.scale() == m.scale());
  CHECK(loaded.heap_capacity() == m.heap_capacity());
  for (feature_t f = 0; f < 300; f += 7) CHECK(loaded.query(f) == m.query(f));

  auto t1 = m.topk(16), t2 = loaded.topk(16);
  REQUIRE(t1.size() == t2.size());
  for (size_t i = 0; i < t1.size(); ++i) {
    CHECK(t1[i].feature == t2[i].feature);
    CHECK(t1[i].weight == t2[i].weight);
  }

  std::string again = tmp / "model2.wms";
  snapshot::save_wm(loaded, again);
  CHECK(slurp(path) == slurp(again));

  // training continues identically from a restore
  auto more = random_stream(61, 50, 300, 4);
  for (const auto& ex : more) {
    m.update(ex.x, ex.y);
    loaded.update(ex.x, ex.y);
  }
  for (feature_t f = 0; f < 300; f += 7) CHECK(loaded.query(f) == m.query(f));
}

TEST_CASE("awm snapshots restore the active set exactly") {
  TempDir tmp;
  AwmConfig cfg;
  cfg.capacity = 24;
  cfg.k = 128;
  cfg.depth = 1;
  cfg.seed = 8;
  cfg.lambda = 0.0;
  cfg.schedule = make_schedule(ScheduleKind::inv_sqrt, 0.5);
  AwmSketch m(cfg);
  auto stream = random_stream(14, 200, 500, 3);
  for (const auto& ex : stream) m.update(ex.x, ex.y);

  std::string path = tmp / "model.awm";
  snapshot::save_awm(m, path);
  AwmSketch loaded = snapshot::load_awm(path);
  CHECK(loaded.steps() == m.steps());
  for (feature_t f = 0; f < 500; f += 11) {
    CHECK(loaded.tracked(f) == m.tracked(f));
    CHECK(loaded.query(f) == m.query(f));
  }
  std::string again = tmp / "model2.awm";
  snapshot::save_awm(loaded, again);
  CHECK(slurp(path) == slurp(again));

  auto more = random_stream(15, 60, 500, 3);
  for (const auto& ex : more) {
    m.update(ex.x, ex.y);
    loaded.update(ex.x, ex.y);
  }
  for (feature_t f = 0; f < 500; f += 11) CHECK(loaded.query(f) == m.query(f));
}

TEST_CASE("dense snapshots keep raw weights and the clock") {
  TempDir tmp;
  DenseConfig cfg{0.01, make_loss(LossKind::logistic),
                  make_schedule(ScheduleKind::inv_strongly_convex, 0.5, 0.01)};
  DenseModel m(cfg);
  auto stream = random_stream(44, 120, 64, 3);
  for (const auto& ex : stream) m.update(ex.x, ex.y);

  std::string path = tmp / "model.dns";
  snapshot::save_dense(m, path);
  DenseModel loaded = snapshot::load_dense(path);
  CHECK(loaded.steps() == m.steps());
  CHECK(loaded.scale() == m.scale());
  CHECK(loaded.size() == m.size());
  for (feature_t f = 0; f < 64; ++f) CHECK(loaded.query(f) == m.query(f));

  std::string again = tmp / "model2.dns";
  snapshot::save_dense(loaded, again);
  CHECK(slurp(path) == slurp(again));

  auto more = random_stream(45, 40, 64, 3);
  for (const auto& ex : more) {
    m.update(ex.x, ex.y);
    loaded.update(ex.x, ex.y);
  }
  for (feature_t f = 0; f < 64; ++f) CHECK(loaded.query(f) == m.query(f));
}

TEST_CASE("injective sketches refuse to serialize") {
  TempDir tmp;
  WmConfig cfg;
  cfg.k = 64;
  cfg.depth = 1;
  cfg.injective = true;
  WmSketch m(cfg);
  CHECK_THROWS_AS(snapshot::save_wm(m, tmp / "model.wms"), std::invalid_argument);
}

TEST_CASE("corrupt snapshots are rejected") {
  TempDir tmp;
  CountSketch cs(3, 64, 2);
  cs.update(1, 1.0);
  std::string path = tmp / "sketch.csk";
  snapshot::save_countsketch(cs, path);

  std::string bytes = slurp(path);
  {
    std::ofstream out(tmp / "truncated.csk", std::ios::binary);
    out << bytes.substr(0, bytes.size() / 2);
  }
  CHECK_THROWS_AS(snapshot::load_countsketch(tmp / "truncated.csk"), std::runtime_error);

  bytes[0] = 'X';
  {
    std::ofstream out(tmp / "badmagic.csk", std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(snapshot::load_countsketch(tmp / "badmagic.csk"), std::runtime_error);
  CHECK_THROWS_AS(snapshot::load_wm(path), std::runtime_error);  // wrong magic for wm
  CHECK_THROWS_AS(snapshot::load_countsketch(tmp / "missing.csk"), std::runtime_error);
}

TEST_CASE("weights csv round trip") {
  TempDir tmp;
  std::vector<WeightEntry> rows{{1, 0.1}, {7, -2.25}, {42, 1e-17}};
  std::string path = tmp / "weights.csv";
  snapshot::write_weights_csv(rows, path);
  auto back = snapshot::read_weights_csv(path);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].feature == rows[i].feature);
    CHECK(back[i].weight == rows[i].weight);
  }
  auto map = snapshot::read_weight_map_csv(path);
  CHECK(map.size() == 3);
  CHECK(map.at(7) == -2.25);
}

TEST_CASE("weights csv rejects bad shapes") {
  TempDir tmp;
  {
    std::ofstream out(tmp / "noheader.csv");
    out << "1,0.5\n";
  }
  CHECK_THROWS_AS(snapshot::read_weights_csv(tmp / "noheader.csv"), std::runtime_error);
  {
    std::ofstream out(tmp / "dup.csv");
    out << "feature_id,weight\n1,0.5\n1,0.25\n";
  }
  CHECK(snapshot::read_weights_csv(tmp / "dup.csv").size() == 2);
  CHECK_THROWS_AS(snapshot::read_weight_map_csv(tmp / "dup.csv"), std::runtime_error);
  {
    std::ofstream out(tmp / "badid.csv");
    out << "feature_id,weight\nx,0.5\n";
  }
  CHECK_THROWS_AS(snapshot::read_weights_csv(tmp / "badid.csv"), std::runtime_error);
  {
    std::ofstream out(tmp / "badweight.csv");
    out << "feature_id,weight\n1,zzz\n";
  }
  CHECK_THROWS_AS(snapshot::read_weights_csv(tmp / "badweight.csv"), std::runtime_error);
  CHECK_THROWS_AS(snapshot::read_weights_csv(tmp / "absent.csv"), std::runtime_error);
}
