#include "wmsketch/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace wmsketch::snapshot {

namespace {

void put_u32(std::string& b, uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& b, uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& b, double v) {
  uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  put_u64(b, u);
}

struct Reader {
  const std::string& buf;
  size_t off = 0;

  void need(size_t n) const {
    if (off + n > buf.size()) throw std::runtime_error("truncated snapshot");
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[off + i])) << (8 * i);
    off += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[off + i])) << (8 * i);
    off += 8;
    return v;
  }
  double f64() {
    uint64_t u = u64();
    double v;
    std::memcpy(&v, &u, sizeof v);
    return v;
  }
  void expect_magic(const char* magic) {
    need(4);
    if (std::memcmp(buf.data() + off, magic, 4) != 0)
      throw std::runtime_error(std::string("bad magic, expected ") + magic);
    off += 4;
  }
  void done() const {
    if (off != buf.size()) throw std::runtime_error("trailing bytes in snapshot");
  }
};

void atomic_write(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed for " + path);
  return data;
}

void refuse_injective(const CountSketch& cs) {
  if (cs.family().identity_buckets())
    throw std::invalid_argument("injective sketch cannot be serialized");
}

void put_learner_block(std::string& b, const OnlineLearner& m) {
  put_u32(b, static_cast<uint32_t>(m.loss().kind));
  put_f64(b, m.loss().smoothing);
  put_u32(b, static_cast<uint32_t>(m.schedule().kind));
  put_f64(b, m.schedule().eta0);
  put_f64(b, m.schedule().lambda);
  put_f64(b, m.lambda());
  put_u64(b, m.steps());
  put_f64(b, m.scale());
}

struct LearnerBlock {
  Loss loss;
  LrSchedule schedule;
  double lambda = 0.0;
  uint64_t t = 0;
  double scale = 1.0;
};

LearnerBlock read_learner_block(Reader& r) {
  LearnerBlock lb;
  uint32_t loss_kind = r.u32();
  if (loss_kind > 1) throw std::runtime_error("unknown loss kind in snapshot");
  lb.loss.kind = static_cast<LossKind>(loss_kind);
  lb.loss.smoothing = r.f64();
  uint32_t sched_kind = r.u32();
  if (sched_kind > 2) throw std::runtime_error("unknown schedule kind in snapshot");
  lb.schedule.kind = static_cast<ScheduleKind>(sched_kind);
  lb.schedule.eta0 = r.f64();
  lb.schedule.lambda = r.f64();
  lb.lambda = r.f64();
  lb.t = r.u64();
  lb.scale = r.f64();
  return lb;
}

void put_heap(std::string& b, const TopKHeap<double>& heap) {
  put_u64(b, heap.size());
  for (const auto& e : heap.entries()) {
    put_u32(b, e.id);
    put_f64(b, e.value);
  }
}

// Entries were stored in heap-array order, which sequential insertion
// reproduces, so a load-save round trip is byte-identical.
void read_heap(Reader& r, TopKHeap<double>& heap) {
  uint64_t n = r.u64();
  if (n > heap.capacity()) throw std::runtime_error("heap larger than its capacity");
  for (uint64_t i = 0; i < n; ++i) {
    feature_t id = r.u32();
    double v = r.f64();
    heap.insert(id, std::abs(v), v);
  }
}

}  // namespace

void save_countsketch(const CountSketch& cs, const std::string& path) {
  refuse_injective(cs);
  std::string b = "CSK1";
  put_u64(b, cs.seed());
  put_u64(b, cs.k());
  put_u32(b, cs.depth());
  for (double v : cs.values()) put_f64(b, v);
  atomic_write(path, b);
}

CountSketch load_countsketch(const std::string& path) {
  std::string data = read_file(path);
  Reader r{data};
  r.expect_magic("CSK1");
  uint64_t seed = r.u64();
  uint64_t k = r.u64();
  uint32_t depth = r.u32();
  CountSketch cs(seed, k, depth);
  for (uint64_t i = 0; i < k; ++i) cs.values()[i] = r.f64();
  r.done();
  return cs;
}

void save_wm(const WmSketch& m, const std::string& path) {
  refuse_injective(m.sketch());
  std::string b = "WMS1";
  put_u64(b, m.sketch().seed());
  put_u64(b, m.sketch().k());
  put_u32(b, m.sketch().depth());
  put_u64(b, m.heap_capacity());
  put_learner_block(b, m);
  for (double v : m.sketch().values()) put_f64(b, v);
  put_heap(b, m.heap());
  atomic_write(path, b);
}

WmSketch load_wm(const std::string& path) {
  std::string data = read_file(path);
  Reader r{data};
  r.expect_magic("WMS1");
  WmConfig cfg;
  cfg.seed = r.u64();
  cfg.k = r.u64();
  cfg.depth = r.u32();
  cfg.heap_capacity = static_cast<size_t>(r.u64());
  LearnerBlock lb = read_learner_block(r);
  cfg.lambda = lb.lambda;
  cfg.loss = lb.loss;
  cfg.schedule = lb.schedule;
  WmSketch m(cfg);
  for (uint64_t i = 0; i < cfg.k; ++i) m.sketch_mutable().values()[i] = r.f64();
  read_heap(r, m.heap_mutable());
  r.done();
  m.restore_clock(lb.t, lb.scale);
  return m;
}

void save_awm(const AwmSketch& m, const std::string& path) {
  refuse_injective(m.sketch());
  std::string b = "AWM1";
  put_u64(b, m.sketch().seed());
  put_u64(b, m.sketch().k());
  put_u32(b, m.sketch().depth());
  put_u64(b, m.capacity());
  put_learner_block(b, m);
  for (double v : m.sketch().values()) put_f64(b, v);
  put_heap(b, m.active_set());
  atomic_write(path, b);
}

AwmSketch load_awm(const std::string& path) {
  std::string data = read_file(path);
  Reader r{data};
  r.expect_magic("AWM1");
  AwmConfig cfg;
  cfg.seed = r.u64();
  cfg.k = r.u64();
  cfg.depth = r.u32();
  cfg.capacity = static_cast<size_t>(r.u64());
  LearnerBlock lb = read_learner_block(r);
  cfg.lambda = lb.lambda;
  cfg.loss = lb.loss;
  cfg.schedule = lb.schedule;
  AwmSketch m(cfg);
  for (uint64_t i = 0; i < cfg.k; ++i) m.sketch_mutable().values()[i] = r.f64();
  read_heap(r, m.active_set_mutable());
  r.done();
  m.restore_clock(lb.t, lb.scale);
  return m;
}

void save_dense(const DenseModel& m, const std::string& path) {
  std::string b = "DNS1";
  put_learner_block(b, m);
  std::vector<WeightEntry> rows;
  rows.reserve(m.raw_weights().size());
  for (const auto& [id, w] : m.raw_weights()) rows.push_back({id, w});
  std::sort(rows.begin(), rows.end(),
            [](const WeightEntry& a, const WeightEntry& b) { return a.feature < b.feature; });
  put_u64(b, rows.size());
  for (const auto& e : rows) {
    put_u32(b, e.feature);
    put_f64(b, e.weight);
  }
  atomic_write(path, b);
}

DenseModel load_dense(const std::string& path) {
  std::string data = read_file(path);
  Reader r{data};
  r.expect_magic("DNS1");
  LearnerBlock lb = read_learner_block(r);
  DenseConfig cfg;
  cfg.lambda = lb.lambda;
  cfg.loss = lb.loss;
  cfg.schedule = lb.schedule;
  DenseModel m(cfg);
  uint64_t n = r.u64();
  for (uint64_t i = 0; i < n; ++i) {
    feature_t id = r.u32();
    double w = r.f64();
    if (!m.raw_weights_mutable().emplace(id, w).second)
      throw std::runtime_error("duplicate feature id in snapshot");
  }
  r.done();
  m.restore_clock(lb.t, lb.scale);
  return m;
}

void write_weights_csv(const std::vector<WeightEntry>& rows, const std::string& path) {
  std::string b = "feature_id,weight\n";
  char line[64];
  for (const auto& e : rows) {
    std::snprintf(line, sizeof line, "%u,%.17g\n", e.feature, e.weight);
    b += line;
  }
  atomic_write(path, b);
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

WeightEntry parse_csv_row(const std::string& line, size_t line_no) {
  size_t comma = line.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": missing comma");
  std::string idx = line.substr(0, comma), val = line.substr(comma + 1);
  errno = 0;
  char* end = nullptr;
  unsigned long long raw = std::strtoull(idx.c_str(), &end, 10);
  if (idx.empty() || errno != 0 || *end != '\0' || raw > std::numeric_limits<uint32_t>::max())
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad feature id");
  errno = 0;
  end = nullptr;
  double w = std::strtod(val.c_str(), &end);
  if (val.empty() || errno != 0 || end != val.c_str() + val.size() || !std::isfinite(w))
    throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad weight");
  return {static_cast<feature_t>(raw), w};
}

}  // namespace

std::vector<WeightEntry> read_weights_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "feature_id,weight")
    throw std::runtime_error("missing feature_id,weight header in " + path);
  std::vector<WeightEntry> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line, line_no));
  }
  return rows;
}

std::unordered_map<feature_t, double> read_weight_map_csv(const std::string& path) {
  std::unordered_map<feature_t, double> out;
  for (const auto& e : read_weights_csv(path)) {
    if (!out.emplace(e.feature, e.weight).second)
      throw std::runtime_error("duplicate feature id " + std::to_string(e.feature) + " in " + path);
  }
  return out;
}

}  // namespace wmsketch::snapshot
