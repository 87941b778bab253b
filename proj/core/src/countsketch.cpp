#include "wmsketch/countsketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmsketch {

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

static void check_shape(uint64_t k, uint32_t depth) {
  if (depth == 0) throw std::invalid_argument("sketch depth must be positive");
  if (k == 0 || k % depth != 0) throw std::invalid_argument("sketch size must be a positive multiple of depth");
}

static hash::HashFamily make_family(uint64_t seed, uint64_t k, uint32_t depth) {
  check_shape(k, depth);
  return hash::HashFamily(seed, depth, static_cast<uint32_t>(k / depth));
}

CountSketch::CountSketch(uint64_t seed, uint64_t k, uint32_t depth)
    : CountSketch(make_family(seed, k, depth), k, depth) {}

CountSketch::CountSketch(hash::HashFamily family, uint64_t k, uint32_t depth)
    : seed_(family.seed()), k_(k), depth_(depth), family_(std::move(family)) {
  check_shape(k, depth);
  width_ = static_cast<uint32_t>(k / depth);
  if (family_.depth() != depth_ || family_.width() != width_)
    throw std::invalid_argument("hash family shape does not match sketch");
  values_.assign(k_, 0.0);
  row_buf_.resize(depth_);
}

void CountSketch::update(feature_t key, double delta) {
  if (!std::isfinite(delta)) throw std::invalid_argument("sketch update must be finite");
  for (uint32_t j = 0; j < depth_; j++) {
    values_[static_cast<size_t>(j) * width_ + family_.bucket(j, key)] +=
        family_.sign(j, key) * delta;
  }
}

double CountSketch::query(feature_t key) const {
  for (uint32_t j = 0; j < depth_; j++) {
    row_buf_[j] = family_.sign(j, key) *
                  values_[static_cast<size_t>(j) * width_ + family_.bucket(j, key)];
  }
  return median(row_buf_);
}

double CountSketch::signed_row_sum(feature_t key) const {
  double sum = 0.0;
  for (uint32_t j = 0; j < depth_; j++) {
    sum += family_.sign(j, key) *
           values_[static_cast<size_t>(j) * width_ + family_.bucket(j, key)];
  }
  return sum;
}

void CountSketch::merge(const CountSketch& other) {
  if (other.k_ != k_ || other.depth_ != depth_ || other.seed_ != seed_ ||
      other.family_.identity_buckets() != family_.identity_buckets())
    throw std::invalid_argument("cannot merge sketches with different configs");
  for (size_t i = 0; i < values_.size(); i++) values_[i] += other.values_[i];
}

CountMin::CountMin(uint64_t seed, uint64_t k, uint32_t depth)
    : seed_(seed), k_(k), depth_(depth), width_(0), family_(make_family(seed, k, depth)) {
  width_ = family_.width();
  values_.assign(k_, 0.0);
}

void CountMin::update(feature_t key, double delta) {
  if (!std::isfinite(delta) || delta < 0.0)
    throw std::invalid_argument("count-min update must be finite and nonnegative");
  for (uint32_t j = 0; j < depth_; j++) {
    values_[static_cast<size_t>(j) * width_ + family_.bucket(j, key)] += delta;
  }
}

double CountMin::query(feature_t key) const {
  double m = values_[family_.bucket(0, key)];
  for (uint32_t j = 1; j < depth_; j++) {
    m = std::min(m, values_[static_cast<size_t>(j) * width_ + family_.bucket(j, key)]);
  }
  return m;
}

}  // namespace wmsketch
