#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dae/common.hpp"
#include "dae/model.hpp"

namespace dae {

struct RepStatistics {
  double std = 0.0;            // population standard deviation of h entries
  double l4l2 = 0.0;           // (sum h^4)^(1/4) / (sum h^2)^(1/2)
  double entropy = 0.0;        // Shannon entropy of h / sum(h), 0 if sum = 0
  double max_minus_min = 0.0;  // range of h
};

enum class StatKind { std_dev, l4l2, entropy, max_minus_min };
StatKind stat_kind_from_string(const std::string& s);
std::string to_string(StatKind k);

RepStatistics rep_stats(const Representation& rep);
double stat_value(const RepStatistics& s, StatKind kind);

struct DetectionResult {
  Representation h;
  double score = 0.0;
  bool flag = false;
};

// Alg. 1 structure: add forward noise, take the representation, threshold the
// chosen statistic.
DetectionResult detect(const DaeModel& m, const Vd& x0, double sigma,
                       double threshold, StatKind stat, std::uint64_t seed);

// Threshold maximizing Youden's J = TPR - FPR over the merged score grid
// (evaluated with >=); ties broken toward the higher threshold.
double calibrate(const std::vector<double>& scores_mem,
                 const std::vector<double>& scores_gen);

// Pairwise P(pos > neg) + 0.5 P(tie).
double auroc(const std::vector<double>& pos, const std::vector<double>& neg);

// Max TPR over thresholds with FPR <= target (both computed with >).
double tpr_at_fpr(const std::vector<double>& pos,
                  const std::vector<double>& neg, double fpr = 0.01);

}  // namespace dae
