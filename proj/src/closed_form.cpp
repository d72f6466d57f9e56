#include "dae/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dae {

SymEig sym_eig(const Md& S) {
  require(S.rows() == S.cols(), "sym_eig: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Md> es(S);
  if (es.info() != Eigen::Success)
    throw NumericError("sym_eig: eigendecomposition failed");
  const int d = static_cast<int>(S.rows());
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  const Vd& w = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return w[a] > w[b]; });
  SymEig out;
  out.eigvals.resize(d);
  out.eigvecs.resize(d, d);
  for (int j = 0; j < d; ++j) {
    out.eigvals[j] = w[order[j]];
    Vd v = es.eigenvectors().col(order[j]);
    int arg = 0;
    double best = std::abs(v[0]);
    for (int i = 1; i < d; ++i) {
      if (std::abs(v[i]) > best) {
        best = std::abs(v[i]);
        arg = i;
      }
    }
    if (v[arg] < 0.0) v = -v;
    out.eigvecs.col(j) = v;
  }
  return out;
}

Md rotation_to_ones(const Vd& v) {
  const int p = static_cast<int>(v.size());
  const double nv = v.norm();
  if (nv == 0.0) return Md::Identity(p, p);
  Vd vhat = v / nv;
  Vd ones = Vd::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
  Vd w = vhat - ones;
  const double nw = w.norm();
  if (nw < 1e-14) return Md::Identity(p, p);
  // Householder reflection: H vhat = ones, H symmetric orthogonal; O = H
  return Md::Identity(p, p) - (2.0 / (nw * nw)) * (w * w.transpose());
}

std::pair<int, int> BlockSolution::block_range(int k) const {
  int off = 0;
  for (int i = 0; i < k; ++i) off += p_alloc[i];
  return {off, off + p_alloc[k]};
}

double BlockSolution::s_min() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) v = std::min(v, b.scaling.minCoeff());
  return v;
}

double BlockSolution::s_max() const {
  double v = 0.0;
  for (const auto& b : blocks) v = std::max(v, b.scaling.maxCoeff());
  return v;
}

namespace {

struct LaeParts {
  Md U;
  Vd eigvals;
  Vd scaling;
};

LaeParts lae_parts(const Md& Xk, int p_k, double noise_weight,
                   double lambda_prime) {
  require(p_k >= 1, "lae_minimizer: p_k must be >= 1");
  require(noise_weight >= 0.0, "lae_minimizer: negative noise weight");
  const SymEig eig = sym_eig(Xk * Xk.transpose());
  require(p_k <= eig.eigvals.size(), "lae_minimizer: p_k exceeds dimension");
  const double lam_p = eig.eigvals[p_k - 1];
  if (!(lambda_prime < lam_p))
    throw NumericError(
        "lae_minimizer: lambda' = " + std::to_string(lambda_prime) +
        " >= eigenvalue " + std::to_string(lam_p) + " at rank " +
        std::to_string(p_k));
  LaeParts parts;
  parts.U = eig.eigvecs.leftCols(p_k);
  parts.eigvals = eig.eigvals.head(p_k);
  parts.scaling.resize(p_k);
  for (int j = 0; j < p_k; ++j) {
    const double lam = parts.eigvals[j];
    parts.scaling[j] = std::sqrt((lam - lambda_prime) / (lam + noise_weight));
  }
  return parts;
}

bool is_rank_one_cluster(const Md& Xk) {
  const Vd x0 = Xk.col(0);
  for (int j = 1; j < Xk.cols(); ++j)
    if ((Xk.col(j) - x0).norm() > 1e-12 * std::max(1.0, x0.norm()))
      return false;
  return true;
}

BlockSolution construct_blockwise(const Dataset& data,
                                  const std::vector<int>& p_alloc, double sigma,
                                  double lambda, bool align_ones) {
  require(static_cast<int>(p_alloc.size()) == data.M,
          "construct: p_alloc length mismatch");
  const SeparabilityReport rep = check_separability(data);
  if (!rep.is_separable)
    throw NumericError("construct: data not separable (beta = " +
                       std::to_string(rep.beta) + ")");
  BlockSolution sol;
  sol.p_alloc = p_alloc;
  int p = 0;
  for (int pk : p_alloc) {
    require(pk >= 1, "construct: p_alloc entries must be >= 1");
    p += pk;
  }
  sol.assembled_W.resize(data.d, p);
  int off = 0;
  for (int k = 0; k < data.M; ++k) {
    const Md Xk = data.cluster(k);
    LaeParts parts;
    try {
      parts = lae_parts(Xk, p_alloc[k], data.cluster_sizes[k] * sigma * sigma,
                        data.n * lambda);
    } catch (const NumericError& e) {
      throw NumericError("construct: cluster " + std::to_string(k + 1) + ": " +
                         e.what());
    }
    Block blk;
    blk.U = parts.U;
    blk.eigvals = parts.eigvals;
    blk.scaling = parts.scaling;
    blk.rotation = align_ones
                       ? rotation_to_ones(parts.U.transpose() * data.cluster_mean(k))
                       : Md::Identity(p_alloc[k], p_alloc[k]);
    sol.assembled_W.middleCols(off, p_alloc[k]) = blk.W();
    off += p_alloc[k];
    sol.blocks.push_back(std::move(blk));
  }
  return sol;
}

}  // namespace

Md lae_minimizer(const Md& Xk, int p_k, double noise_weight,
                 double lambda_prime, const std::optional<Md>& rotation) {
  const LaeParts parts = lae_parts(Xk, p_k, noise_weight, lambda_prime);
  Md W = parts.U * parts.scaling.asDiagonal();
  if (rotation.has_value()) {
    require(rotation->rows() == p_k && rotation->cols() == p_k,
            "lae_minimizer: rotation shape mismatch");
    W = W * rotation->transpose();
  }
  return W;
}

BlockSolution construct_theorem_solution(const Dataset& data,
                                         const std::vector<int>& p_alloc,
                                         double sigma, double lambda,
                                         bool align_ones) {
  return construct_blockwise(data, p_alloc, sigma, lambda, align_ones);
}

DaeModel construct_memorization_solution(const Dataset& data, int p,
                                         double sigma, double lambda) {
  require(p >= data.n, "construct_memorization_solution: p must be >= n");
  const int n = data.n;
  for (int i = 0; i < n; ++i) {
    const double ns = data.X.col(i).squaredNorm();
    if (!(n * lambda < ns))
      throw NumericError(
          "construct_memorization_solution: n*lambda >= ||x||^2 for sample " +
          std::to_string(i));
  }
  // singleton-cluster separability
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double c = data.X.col(i).dot(data.X.col(j)) /
                       (data.X.col(i).norm() * data.X.col(j).norm());
      if (!(c < 0.0))
        throw NumericError(
            "construct_memorization_solution: samples " + std::to_string(i) +
            " and " + std::to_string(j) + " have non-negative cosine " +
            std::to_string(c));
    }
  }
  Md W = Md::Zero(data.d, p);
  for (int i = 0; i < n; ++i) {
    const double ns = data.X.col(i).squaredNorm();
    const double r =
        std::sqrt((ns - n * lambda) / (ns * ns + sigma * sigma * ns));
    W.col(i) = r * data.X.col(i);
  }
  return DaeModel::make_tied(std::move(W), sigma);
}

Md wiener_limit(const Md& S, int p_k, double sigma, double lambda,
                double rho_k) {
  require(rho_k > 0.0, "wiener_limit: rho_k must be positive");
  const SymEig eig = sym_eig(S);
  require(p_k <= eig.eigvals.size(), "wiener_limit: p_k exceeds dimension");
  const int d = static_cast<int>(S.rows());
  Md out = Md::Zero(d, d);
  for (int j = 0; j < p_k; ++j) {
    const double lam = eig.eigvals[j];
    const double a =
        std::max(0.0, (lam - lambda / rho_k) / (lam + sigma * sigma));
    if (a == 0.0) continue;
    out += a * eig.eigvecs.col(j) * eig.eigvecs.col(j).transpose();
  }
  return out;
}

BlockSolution construct_hybrid_solution(const Dataset& data,
                                        const std::vector<int>& p_alloc,
                                        double sigma, double lambda) {
  require(static_cast<int>(p_alloc.size()) == data.M,
          "construct_hybrid_solution: p_alloc length mismatch");
  for (int k = 0; k < data.M; ++k) {
    if (data.cluster_sizes[k] > 1 && is_rank_one_cluster(data.cluster(k)))
      require(p_alloc[k] == 1,
              "construct_hybrid_solution: rank-1 cluster " +
                  std::to_string(k + 1) + " must get p_k = 1");
  }
  return construct_blockwise(data, p_alloc, sigma, lambda, true);
}

double memorization_loss_value(const Dataset& data, double sigma) {
  double acc = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double ns = data.X.col(i).squaredNorm();
    acc += sigma * sigma * ns / (sigma * sigma + ns);
  }
  return acc / data.n;
}

double generalization_loss_bound(const MoGSpec& spec,
                                 const std::vector<int>& p_alloc,
                                 double sigma) {
  spec.validate();
  require(static_cast<int>(p_alloc.size()) == spec.modes(),
          "generalization_loss_bound: p_alloc length mismatch");
  double bound = 0.0;
  for (int k = 0; k < spec.modes(); ++k) {
    const SymEig eig = sym_eig(spec.second_moment(k));
    double term = 0.0;
    for (int j = 0; j < eig.eigvals.size(); ++j) {
      const double lam = std::max(0.0, eig.eigvals[j]);
      if (j < p_alloc[k]) {
        const double den = lam + sigma * sigma;
        if (den > 0.0) term += lam * std::pow(sigma, 4) / (den * den);
      } else {
        term += lam;
      }
    }
    bound += spec.weights[k] * term;
  }
  return bound;
}

double generalization_sampling_term(const MoGSpec& spec,
                                    const std::vector<int>& p_alloc,
                                    double sigma, const std::vector<int>& counts,
                                    const std::vector<double>& c_k) {
  require(counts.size() == c_k.size() &&
              static_cast<int>(counts.size()) == spec.modes(),
          "generalization_sampling_term: length mismatch");
  require(sigma > 0.0, "generalization_sampling_term: sigma must be positive");
  double term = 0.0;
  for (int k = 0; k < spec.modes(); ++k)
    term += spec.weights[k] * c_k[k] * p_alloc[k] /
            (sigma * sigma * counts[k]);
  return term;
}

double linf_landscape_norm(const DaeModel& m, const Dataset& data,
                           double lambda, const Vd& a_coeffs) {
  require(a_coeffs.size() == data.n, "linf_landscape_norm: a_coeffs length");
  bool any_active = false;
  double best = lambda;
  const int live = std::min<int>(m.p(), data.n);
  for (int i = 0; i < live; ++i) {
    if (m.W1.col(i).norm() == 0.0) continue;
    any_active = true;
    const Vd x = data.X.col(i);
    best = std::max(best,
                    a_coeffs[i] * x.lpNorm<1>() * x.lpNorm<Eigen::Infinity>() +
                        lambda);
  }
  return any_active ? best : lambda;
}

}  // namespace dae
