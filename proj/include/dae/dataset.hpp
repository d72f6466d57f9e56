#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dae/common.hpp"

namespace dae {

// Ground-truth mixture of Gaussians. Covariances are stored as a spectrum
// plus an optional orthonormal basis per mode (identity if absent), so
// exponentially decaying spectra stay exact and no d x d matrix is needed.
struct MoGSpec {
  int d = 0;
  std::vector<double> weights;                 // rho_k, sums to 1
  std::vector<Vd> means;                       // mu_k
  std::vector<Vd> cov_eigvals;                 // descending, length d
  std::vector<std::optional<Md>> cov_eigvecs;  // per-mode basis or identity

  int modes() const { return static_cast<int>(weights.size()); }
  void validate() const;
  // S_k = mu_k mu_k^T + Sigma_k
  Md second_moment(int k) const;
};

// Column-stacked samples; columns of a cluster are contiguous and clusters
// are ordered by label. Labels are 1-based in [1..M].
struct Dataset {
  Md X;
  std::vector<int> cluster_ids;    // length n
  std::vector<int> cluster_sizes;  // length M
  int d = 0, n = 0, M = 0;

  void validate() const;
  int cluster_offset(int k) const;  // k in [0..M)
  Eigen::Block<const Md> cluster(int k) const;
  Vd cluster_mean(int k) const;
};

struct SeparabilityReport {
  double alpha = 0.0;      // max relative within-cluster deviation
  double beta = 0.0;       // max pairwise cosine of cluster means
  Md per_pair_cosines;     // M x M, unit diagonal
  bool is_separable = false;  // beta < 0
};

struct MarginResult {
  double gamma = 0.0;
  bool warning = false;  // set when gamma <= 0
};

Dataset sample_mog(const MoGSpec& spec, const std::vector<int>& counts,
                   std::uint64_t seed);

SeparabilityReport check_separability(const Dataset& data);

double c_proj(double alpha);

MarginResult compute_margin(const Dataset& data, double s_min, double s_max,
                            const std::vector<int>& p_alloc);

Dataset duplicate_cluster(const Dataset& data, int source_index, int copies);

// K unit vectors with pairwise cosine -1/(K-1), spanning coordinates
// [0..K-1]; column k optionally tilted toward coordinate K by `lift`.
Md simplex_directions(int K, int d);

}  // namespace dae
