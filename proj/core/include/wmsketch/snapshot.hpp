#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "wmsketch/awm_sketch.hpp"
#include "wmsketch/baselines.hpp"
#include "wmsketch/countsketch.hpp"
#include "wmsketch/types.hpp"
#include "wmsketch/wm_sketch.hpp"

namespace wmsketch::snapshot {

// Binary little-endian formats, one magic per type: CSK1, WMS1, AWM1, DNS1.
// Writes go through a temp file and a rename. Injective (test-mode) sketches
// refuse to serialize since their hash family has no seed to rebuild from.

void save_countsketch(const CountSketch& cs, const std::string& path);
CountSketch load_countsketch(const std::string& path);

void save_wm(const WmSketch& m, const std::string& path);
WmSketch load_wm(const std::string& path);

void save_awm(const AwmSketch& m, const std::string& path);
AwmSketch load_awm(const std::string& path);

void save_dense(const DenseModel& m, const std::string& path);
DenseModel load_dense(const std::string& path);

// "feature_id,weight" with header.
void write_weights_csv(const std::vector<WeightEntry>& rows, const std::string& path);
std::vector<WeightEntry> read_weights_csv(const std::string& path);
std::unordered_map<feature_t, double> read_weight_map_csv(const std::string& path);

}  // namespace wmsketch::snapshot
