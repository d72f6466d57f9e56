#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/model.hpp"

namespace dae {

struct MatchReport {
  // learned column -> target column, -1 when unmatched; injective over >= 0
  std::vector<int> assignment;
  Vd cosines;  // |cosine| per learned column, 0 when unmatched
  std::vector<std::pair<int, double>> unmatched;  // (column, norm)
};

// Greedy maximum-|cosine| assignment over normalized columns, ties by index.
MatchReport match_columns(const Md& W_learned, const Md& W_target);

// ||AA^T - BB^T||_F / sqrt(2k) for orthonormal d x k inputs.
double subspace_distance(const Md& A, const Md& B);

struct EndoCompare {
  double rel_frob_error = 0.0;
  std::vector<std::pair<double, double>> eig_curve_pairs;  // (learned, target)
};
EndoCompare endomorphism_compare(const Md& A_learned, const Md& A_target);

struct JacobianSvdReport {
  Vd singular_values;  // top k, descending
  Md left_vectors;     // d x k
  Md right_vectors;    // d x k
  bool boundary = false;
  double cos_top_to_x = 0.0;
  std::optional<double> cos_top_to_mean;
};
JacobianSvdReport jacobian_svd_report(const DaeModel& m, const Vd& x, int k,
                                      const std::optional<Vd>& cluster_mean = {});

struct CosineMatch {
  Vd max_cos;               // per sample, max |cosine| over training columns
  std::vector<int> argmax;  // -1 for zero-norm samples
};
CosineMatch max_train_cosine(const Md& samples, const Dataset& data);

}  // namespace dae
