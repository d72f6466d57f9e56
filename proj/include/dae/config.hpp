#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/trainer.hpp"

namespace dae {

struct DataConfig {
  MoGSpec spec;
  std::vector<int> counts;
  std::uint64_t seed = 0;
  std::optional<std::pair<int, int>> duplicate;  // (source index, copies)
  std::optional<std::pair<int, int>> image;      // (height, width)

  Dataset generate() const;
};

struct TrainConfig {
  OptimizerConfig opt;
  int p = 1;
  double sigma = 0.0;
};

struct ScheduleConfig {
  double sigma_min = 0.02;
  double sigma_max = 2.0;
  int T = 40;
};

struct DetectConfig {
  double sigma = 0.17;
  std::string stat = "std";
  std::optional<double> threshold;
  std::uint64_t seed = 0;
  int n = 100;
};

struct SteerConfig {
  int target_label = 1;      // 1-based cluster id of the target mode
  int window_begin = 0;
  int window_end = 0;        // 0 = schedule-dependent default (final half)
  double extract_sigma = 0.2;
  std::uint64_t extract_seed = 0;
  std::vector<double> a_grid;
  int n = 100;
  std::uint64_t seed = 0;
};

// Keyed experiment document. Sections are optional; unknown keys anywhere
// are rejected and every random operation requires an explicit seed.
struct ExperimentConfig {
  std::optional<DataConfig> data;
  std::optional<TrainConfig> train;
  std::optional<ScheduleConfig> schedule;
  std::optional<DetectConfig> detect;
  std::optional<SteerConfig> steer;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

}  // namespace dae
