#include "dae/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "dae/closed_form.hpp"
#include "dae/kernels.hpp"

namespace dae {

MatchReport match_columns(const Md& W_learned, const Md& W_target) {
  require(W_learned.rows() == W_target.rows(),
          "match_columns: dimension mismatch");
  const int p = static_cast<int>(W_learned.cols());
  const int q = static_cast<int>(W_target.cols());

  MatchReport rep;
  rep.assignment.assign(p, -1);
  rep.cosines = Vd::Zero(p);

  Vd ln(p), tn(q);
  for (int i = 0; i < p; ++i) ln[i] = W_learned.col(i).norm();
  for (int j = 0; j < q; ++j) tn[j] = W_target.col(j).norm();

  Md C = Md::Zero(p, q);
  for (int i = 0; i < p; ++i) {
    if (ln[i] == 0.0) continue;
    for (int j = 0; j < q; ++j) {
      if (tn[j] == 0.0) continue;
      C(i, j) = std::abs(W_learned.col(i).dot(W_target.col(j))) / (ln[i] * tn[j]);
    }
  }

  std::vector<bool> used_l(p, false), used_t(q, false);
  const int rounds = std::min(p, q);
  for (int r = 0; r < rounds; ++r) {
    int bi = -1, bj = -1;
    double best = -1.0;
    for (int i = 0; i < p; ++i) {
      if (used_l[i] || ln[i] == 0.0) continue;
      for (int j = 0; j < q; ++j) {
        if (used_t[j] || tn[j] == 0.0) continue;
        if (C(i, j) > best) {
          best = C(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    used_l[bi] = used_t[bj] = true;
    rep.assignment[bi] = bj;
    rep.cosines[bi] = best;
  }
  for (int i = 0; i < p; ++i)
    if (rep.assignment[i] < 0) rep.unmatched.emplace_back(i, ln[i]);
  return rep;
}

double subspace_distance(const Md& A, const Md& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(),
          "subspace_distance: shape mismatch");
  const int k = static_cast<int>(A.cols());
  require(k >= 1, "subspace_distance: empty basis");
  const Md ga = A.transpose() * A - Md::Identity(k, k);
  const Md gb = B.transpose() * B - Md::Identity(k, k);
  if (ga.cwiseAbs().maxCoeff() > 1e-8 || gb.cwiseAbs().maxCoeff() > 1e-8)
    throw ConfigError("subspace_distance: inputs must be orthonormal");
  // ||AA^T - BB^T||_F^2 = 2k - 2 ||A^T B||_F^2
  const double cross = (A.transpose() * B).squaredNorm();
  const double val = std::max(0.0, 2.0 * k - 2.0 * cross);
  return std::sqrt(val) / std::sqrt(2.0 * k);
}

EndoCompare endomorphism_compare(const Md& A_learned, const Md& A_target) {
  require(A_learned.rows() == A_target.rows() &&
              A_learned.cols() == A_target.cols(),
          "endomorphism_compare: shape mismatch");
  EndoCompare out;
  const double tn = A_target.norm();
  out.rel_frob_error = (A_learned - A_target).norm() / (tn > 0.0 ? tn : 1.0);
  const SymEig ea = sym_eig(A_learned);
  const SymEig eb = sym_eig(A_target);
  for (int j = 0; j < ea.eigvals.size(); ++j)
    out.eig_curve_pairs.emplace_back(ea.eigvals[j], eb.eigvals[j]);
  return out;
}

JacobianSvdReport jacobian_svd_report(const DaeModel& m, const Vd& x, int k,
                                      const std::optional<Vd>& cluster_mean) {
  require(k >= 1 && k <= m.d(), "jacobian_svd_report: k out of range");
  JacobianSvdReport rep;
  const Md J = jacobian(m, x, &rep.boundary);
  Eigen::BDCSVD<Md> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
  rep.singular_values = svd.singularValues().head(k);
  rep.left_vectors = svd.matrixU().leftCols(k);
  rep.right_vectors = svd.matrixV().leftCols(k);
  const Vd u = rep.left_vectors.col(0);
  const double xn = x.norm();
  rep.cos_top_to_x = xn > 0.0 ? std::abs(u.dot(x)) / xn : 0.0;
  if (cluster_mean.has_value()) {
    const double mn = cluster_mean->norm();
    rep.cos_top_to_mean = mn > 0.0 ? std::abs(u.dot(*cluster_mean)) / mn : 0.0;
  }
  return rep;
}

CosineMatch max_train_cosine(const Md& samples, const Dataset& data) {
  require(samples.rows() == data.d, "max_train_cosine: dimension mismatch");
  CosineMatch cm;
  kernels::max_cosine(data.X, samples, cm.max_cos, cm.argmax, false);
  return cm;
}

}  // namespace dae
