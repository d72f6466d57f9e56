#include "dae/model.hpp"

#include <cmath>

#include "dae/kernels.hpp"
#include "dae/rng.hpp"

namespace dae {

Vd forward(const DaeModel& m, const Vd& x) {
  require(x.size() == m.d(), "forward: dimension mismatch");
  Vd z = m.W1.transpose() * x;
  for (int j = 0; j < z.size(); ++j)
    if (z[j] < 0.0) z[j] = 0.0;
  return m.W2() * z;
}

Md forward_batch(const DaeModel& m, const Md& X) {
  require(X.rows() == m.d(), "forward_batch: dimension mismatch");
  Md H, Y;
  kernels::gemm_tn(m.W1, X, H);
  kernels::relu(H);
  kernels::gemm_nn(m.W2(), H, Y);
  return Y;
}

Representation representation(const DaeModel& m, const Vd& x) {
  require(x.size() == m.d(), "representation: dimension mismatch");
  Representation rep;
  rep.h = m.W1.transpose() * x;
  rep.active_mask.resize(rep.h.size());
  for (int j = 0; j < rep.h.size(); ++j) {
    if (rep.h[j] > 0.0) {
      rep.active_mask[j] = 1;
    } else {
      rep.h[j] = 0.0;
      rep.active_mask[j] = 0;
    }
  }
  return rep;
}

Md representation_batch(const DaeModel& m, const Md& X) {
  require(X.rows() == m.d(), "representation_batch: dimension mismatch");
  Md H;
  kernels::gemm_tn(m.W1, X, H);
  kernels::relu(H);
  return H;
}

Md jacobian(const DaeModel& m, const Vd& x, bool* boundary) {
  require(x.size() == m.d(), "jacobian: dimension mismatch");
  const Vd z = m.W1.transpose() * x;
  if (boundary != nullptr) {
    *boundary = false;
    for (int j = 0; j < z.size(); ++j)
      if (z[j] == 0.0) *boundary = true;
  }
  Md J = Md::Zero(m.d(), m.d());
  const Md& W2 = m.W2();
  for (int j = 0; j < z.size(); ++j)
    if (z[j] > 0.0) J += W2.col(j) * m.W1.col(j).transpose();
  return J;
}

double mc_loss(const DaeModel& m, const Dataset& data, double sigma,
               double lambda, int n_mc, std::uint64_t seed) {
  require(n_mc >= 1, "mc_loss: n_mc must be >= 1");
  require(data.d == m.d(), "mc_loss: dimension mismatch");
  const int n = data.n;
  Vd per_sample(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Vd x = data.X.col(i);
    Vd y(data.d);
    double acc = 0.0;
    for (int r = 0; r < n_mc; ++r) {
      for (int k = 0; k < data.d; ++k) y[k] = x[k] + sigma * rng.normal();
      acc += (forward(m, y) - x).squaredNorm();
    }
    per_sample[i] = acc / n_mc;
  }
  double loss = 0.0;
  for (int i = 0; i < n; ++i) loss += per_sample[i];
  loss /= n;
  loss += lambda * (m.W1.squaredNorm() + m.W2().squaredNorm());
  return loss;
}

double mask_frozen_loss(const DaeModel& m, const Dataset& data, double sigma,
                        double lambda,
                        const std::vector<std::pair<int, int>>& mask_per_cluster) {
  require(static_cast<int>(mask_per_cluster.size()) == data.M,
          "mask_frozen_loss: one block per cluster required");
  std::vector<int> owner(m.p(), -1);
  for (int k = 0; k < data.M; ++k) {
    const auto [b, e] = mask_per_cluster[k];
    require(0 <= b && b <= e && e <= m.p(), "mask_frozen_loss: bad block");
    for (int j = b; j < e; ++j) {
      if (owner[j] != -1)
        throw ConfigError("mask_frozen_loss: overlapping block assignment");
      owner[j] = k;
    }
  }
  double loss = 0.0;
  for (int k = 0; k < data.M; ++k) {
    const auto [b, e] = mask_per_cluster[k];
    const int pk = e - b;
    const auto Xk = data.cluster(k);
    if (pk == 0) {
      loss += Xk.squaredNorm();
      continue;
    }
    const Md W1k = m.W1.middleCols(b, pk);
    const Md W2k = m.W2().middleCols(b, pk);
    const Md Ak = W2k * W1k.transpose();
    loss += (Ak * Xk - Xk).squaredNorm() +
            data.cluster_sizes[k] * sigma * sigma * Ak.squaredNorm();
  }
  loss /= data.n;
  loss += lambda * (m.W1.squaredNorm() + m.W2().squaredNorm());
  return loss;
}

}  // namespace dae
