#include "dae/detection.hpp"

#include <algorithm>
#include <cmath>

#include "dae/rng.hpp"

namespace dae {

StatKind stat_kind_from_string(const std::string& s) {
  if (s == "std") return StatKind::std_dev;
  if (s == "l4l2") return StatKind::l4l2;
  if (s == "entropy") return StatKind::entropy;
  if (s == "max_minus_min" || s == "maxmin") return StatKind::max_minus_min;
  throw ConfigError("unknown statistic: " + s);
}

std::string to_string(StatKind k) {
  switch (k) {
    case StatKind::std_dev: return "std";
    case StatKind::l4l2: return "l4l2";
    case StatKind::entropy: return "entropy";
    case StatKind::max_minus_min: return "max_minus_min";
  }
  return "?";
}

RepStatistics rep_stats(const Representation& rep) {
  const Vd& h = rep.h;
  const int p = static_cast<int>(h.size());
  require(p >= 2, "rep_stats: p must be >= 2");
  RepStatistics s;
  const double mean = h.mean();
  s.std = std::sqrt(std::max(0.0, h.squaredNorm() / p - mean * mean));
  const double l2 = h.norm();
  if (l2 > 0.0) {
    double s4 = 0.0;
    for (int i = 0; i < p; ++i) s4 += std::pow(h[i], 4);
    s.l4l2 = std::pow(s4, 0.25) / l2;
  }
  const double total = h.sum();
  if (total > 0.0) {
    double ent = 0.0;
    for (int i = 0; i < p; ++i) {
      const double q = h[i] / total;
      if (q > 0.0) ent -= q * std::log(q);
    }
    s.entropy = ent;
  }
  s.max_minus_min = h.maxCoeff() - h.minCoeff();
  return s;
}

double stat_value(const RepStatistics& s, StatKind kind) {
  switch (kind) {
    case StatKind::std_dev: return s.std;
    case StatKind::l4l2: return s.l4l2;
    case StatKind::entropy: return s.entropy;
    case StatKind::max_minus_min: return s.max_minus_min;
  }
  return 0.0;
}

DetectionResult detect(const DaeModel& m, const Vd& x0, double sigma,
                       double threshold, StatKind stat, std::uint64_t seed) {
  require(x0.size() == m.d(), "detect: dimension mismatch");
  Rng rng(seed);
  Vd xt = x0;
  for (int i = 0; i < xt.size(); ++i) xt[i] += sigma * rng.normal();
  DetectionResult r;
  r.h = representation(m, xt);
  r.score = stat_value(rep_stats(r.h), stat);
  r.flag = r.score > threshold;
  return r;
}

double calibrate(const std::vector<double>& scores_mem,
                 const std::vector<double>& scores_gen) {
  require(!scores_mem.empty() && !scores_gen.empty(),
          "calibrate: both score lists must be nonempty");
  std::vector<double> grid = scores_mem;
  grid.insert(grid.end(), scores_gen.begin(), scores_gen.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double best_j = -2.0, best_thr = grid.back();
  for (const double thr : grid) {
    int tp = 0, fp = 0;
    for (double s : scores_mem) tp += (s >= thr);
    for (double s : scores_gen) fp += (s >= thr);
    const double j = static_cast<double>(tp) / scores_mem.size() -
                     static_cast<double>(fp) / scores_gen.size();
    if (j > best_j || (j == best_j && thr > best_thr)) {
      best_j = j;
      best_thr = thr;
    }
  }
  return best_thr;
}

double auroc(const std::vector<double>& pos, const std::vector<double>& neg) {
  require(!pos.empty() && !neg.empty(), "auroc: empty score list");
  double acc = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) acc += 1.0;
      else if (p == n) acc += 0.5;
    }
  }
  return acc / (static_cast<double>(pos.size()) * neg.size());
}

double tpr_at_fpr(const std::vector<double>& pos,
                  const std::vector<double>& neg, double fpr) {
  require(!pos.empty() && !neg.empty(), "tpr_at_fpr: empty score list");
  std::vector<double> grid = pos;
  grid.insert(grid.end(), neg.begin(), neg.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double best_tpr = 0.0;
  for (const double thr : grid) {
    int fp = 0;
    for (double s : neg) fp += (s > thr);
    if (static_cast<double>(fp) / neg.size() > fpr) continue;
    int tp = 0;
    for (double s : pos) tp += (s > thr);
    best_tpr = std::max(best_tpr, static_cast<double>(tp) / pos.size());
  }
  return best_tpr;
}

}  // namespace dae
