#include "dae/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "dae/rng.hpp"

namespace dae {

void MoGSpec::validate() const {
  require(d > 0, "MoGSpec: d must be positive");
  const int K = modes();
  require(K > 0, "MoGSpec: at least one mode");
  require(static_cast<int>(means.size()) == K &&
              static_cast<int>(cov_eigvals.size()) == K,
          "MoGSpec: weights/means/spectra length mismatch");
  require(cov_eigvecs.empty() || static_cast<int>(cov_eigvecs.size()) == K,
          "MoGSpec: cov_eigvecs length mismatch");
  double sum = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "MoGSpec: negative weight");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "MoGSpec: weights must sum to 1");
  for (int k = 0; k < K; ++k) {
    require(means[k].size() == d, "MoGSpec: mean dimension mismatch");
    require(cov_eigvals[k].size() == d,
            "MoGSpec: spectrum must have length d");
    for (int j = 0; j < d; ++j) {
      require(cov_eigvals[k][j] >= 0.0, "MoGSpec: negative eigenvalue");
      if (j > 0)
        require(cov_eigvals[k][j] <= cov_eigvals[k][j - 1] + 1e-15,
                "MoGSpec: spectrum not descending");
    }
    if (!cov_eigvecs.empty() && cov_eigvecs[k].has_value()) {
      const Md& B = *cov_eigvecs[k];
      require(B.rows() == d && B.cols() == d,
              "MoGSpec: basis dimension mismatch");
      const Md G = B.transpose() * B - Md::Identity(d, d);
      require(G.cwiseAbs().maxCoeff() <= 1e-10,
              "MoGSpec: basis not orthonormal");
    }
  }
}

Md MoGSpec::second_moment(int k) const {
  Md S = means[k] * means[k].transpose();
  if (!cov_eigvecs.empty() && cov_eigvecs[k].has_value()) {
    const Md& B = *cov_eigvecs[k];
    S += B * cov_eigvals[k].asDiagonal() * B.transpose();
  } else {
    S += Md(cov_eigvals[k].asDiagonal());
  }
  return S;
}

void Dataset::validate() const {
  require(X.rows() == d && X.cols() == n, "Dataset: shape mismatch");
  require(static_cast<int>(cluster_ids.size()) == n, "Dataset: label length");
  require(static_cast<int>(cluster_sizes.size()) == M, "Dataset: sizes length");
  int total = 0;
  for (int s : cluster_sizes) total += s;
  require(total == n, "Dataset: cluster sizes must sum to n");
  int col = 0;
  for (int k = 0; k < M; ++k) {
    for (int j = 0; j < cluster_sizes[k]; ++j, ++col) {
      require(cluster_ids[col] == k + 1,
              "Dataset: labels must be contiguous and ordered");
    }
  }
}

int Dataset::cluster_offset(int k) const {
  int off = 0;
  for (int i = 0; i < k; ++i) off += cluster_sizes[i];
  return off;
}

Eigen::Block<const Md> Dataset::cluster(int k) const {
  return X.block(0, cluster_offset(k), d, cluster_sizes[k]);
}

Vd Dataset::cluster_mean(int k) const { return cluster(k).rowwise().mean(); }

Dataset sample_mog(const MoGSpec& spec, const std::vector<int>& counts,
                   std::uint64_t seed) {
  spec.validate();
  const int K = spec.modes();
  require(static_cast<int>(counts.size()) == K,
          "sample_mog: counts length mismatch");
  for (int c : counts) require(c >= 1, "sample_mog: counts must be >= 1");

  Dataset out;
  out.d = spec.d;
  out.M = K;
  out.cluster_sizes = counts;
  out.n = 0;
  for (int c : counts) out.n += c;
  out.X.resize(spec.d, out.n);
  out.cluster_ids.resize(out.n);

  int off = 0;
  for (int k = 0; k < K; ++k) {
    const Vd& mu = spec.means[k];
    const Vd& eig = spec.cov_eigvals[k];
    Vd sdev = eig.cwiseSqrt();
    const bool has_basis = !spec.cov_eigvecs.empty() &&
                           spec.cov_eigvecs[k].has_value();
    const std::uint64_t mode_seed =
        derive_seed(seed, static_cast<std::uint64_t>(k));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < counts[k]; ++j) {
      Rng rng(derive_seed(mode_seed, static_cast<std::uint64_t>(j)));
      Vd z(spec.d);
      for (int i = 0; i < spec.d; ++i) z[i] = rng.normal();
      Vd dev = sdev.cwiseProduct(z);
      if (has_basis) dev = (*spec.cov_eigvecs[k]) * dev;
      out.X.col(off + j) = mu + dev;
    }
    for (int j = 0; j < counts[k]; ++j) out.cluster_ids[off + j] = k + 1;
    off += counts[k];
  }
  return out;
}

SeparabilityReport check_separability(const Dataset& data) {
  const int M = data.M;
  std::vector<Vd> means(M);
  std::vector<double> norms(M);
  for (int k = 0; k < M; ++k) {
    means[k] = data.cluster_mean(k);
    norms[k] = means[k].norm();
    if (norms[k] == 0.0)
      throw NumericError("check_separability: cluster " + std::to_string(k + 1) +
                         " has zero-norm mean");
  }
  SeparabilityReport rep;
  rep.alpha = 0.0;
  for (int k = 0; k < M; ++k) {
    const auto Xk = data.cluster(k);
    for (int j = 0; j < Xk.cols(); ++j) {
      const double dev = (Xk.col(j) - means[k]).norm() / norms[k];
      rep.alpha = std::max(rep.alpha, dev);
    }
  }
  rep.per_pair_cosines = Md::Identity(M, M);
  rep.beta = (M > 1) ? -1.0 : 0.0;
  for (int k = 0; k < M; ++k) {
    for (int l = 0; l < M; ++l) {
      if (k == l) continue;
      const double c = means[k].dot(means[l]) / (norms[k] * norms[l]);
      rep.per_pair_cosines(k, l) = c;
      if (c > rep.beta) rep.beta = c;
    }
  }
  rep.is_separable = (M > 1) && (rep.beta < 0.0);
  return rep;
}

double c_proj(double alpha) {
  if (alpha >= 1.0)
    throw NumericError("c_proj: alpha must be < 1");
  const double t = alpha * alpha / (1.0 - alpha * alpha);
  if (t > 1.0)
    throw NumericError("c_proj: alpha^2/(1-alpha^2) exceeds 1");
  return std::sqrt(1.0 - t * t);
}

MarginResult compute_margin(const Dataset& data, double s_min, double s_max,
                            const std::vector<int>& p_alloc) {
  require(s_min <= s_max, "compute_margin: s_min > s_max");
  require(static_cast<int>(p_alloc.size()) == data.M,
          "compute_margin: p_alloc length mismatch");
  const SeparabilityReport rep = check_separability(data);
  if (rep.alpha >= 1.0)
    throw NumericError("compute_margin: alpha >= 1");
  if (!rep.is_separable)
    throw NumericError("compute_margin: data not separable (beta >= 0)");
  const double cp = c_proj(rep.alpha);
  double gamma = std::numeric_limits<double>::infinity();
  for (int k = 0; k < data.M; ++k) {
    const double nrm = data.cluster_mean(k).norm();
    const double own =
        s_min * cp / std::sqrt(static_cast<double>(p_alloc[k])) -
        s_max * rep.alpha;
    const double cross = s_max * std::abs(rep.beta) / 2.0;
    gamma = std::min(gamma, nrm * std::min(own, cross));
  }
  return {gamma, gamma <= 0.0};
}

Dataset duplicate_cluster(const Dataset& data, int source_index, int copies) {
  require(source_index >= 0 && source_index < data.n,
          "duplicate_cluster: source index out of range");
  require(copies >= 2, "duplicate_cluster: copies must be >= 2");

  const Vd x = data.X.col(source_index);
  const int src_cluster = data.cluster_ids[source_index] - 1;

  // source sample leaves its original cluster; the copies form a new
  // trailing rank-1 cluster (empty source clusters are dropped)
  Dataset out;
  out.d = data.d;
  out.n = data.n - 1 + copies;
  out.X.resize(data.d, out.n);
  out.cluster_ids.resize(out.n);
  out.cluster_sizes.clear();

  int col = 0, label = 0;
  for (int k = 0; k < data.M; ++k) {
    const int size_k = data.cluster_sizes[k] - (k == src_cluster ? 1 : 0);
    if (size_k == 0) continue;
    ++label;
    out.cluster_sizes.push_back(size_k);
    const int off = data.cluster_offset(k);
    for (int j = 0; j < data.cluster_sizes[k]; ++j) {
      if (off + j == source_index) continue;
      out.X.col(col) = data.X.col(off + j);
      out.cluster_ids[col] = label;
      ++col;
    }
  }
  ++label;
  out.cluster_sizes.push_back(copies);
  for (int c = 0; c < copies; ++c, ++col) {
    out.X.col(col) = x;
    out.cluster_ids[col] = label;
  }
  out.M = label;
  return out;
}

Md simplex_directions(int K, int d) {
  require(K >= 2, "simplex_directions: K must be >= 2");
  require(d >= K, "simplex_directions: need d >= K");
  Md dirs = Md::Zero(d, K);
  for (int k = 0; k < K; ++k) {
    Vd v = Vd::Constant(K, -1.0 / K);
    v[k] += 1.0;
    dirs.col(k).head(K) = v / v.norm();
  }
  return dirs;
}

}  // namespace dae
