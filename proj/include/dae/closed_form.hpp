#pragma once

#include <optional>
#include <vector>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/model.hpp"

namespace dae {

// Symmetric eigendecomposition with descending eigenvalues and a
// deterministic sign convention (largest-magnitude entry of each eigenvector
// positive). Ties broken by index order after sorting.
struct SymEig {
  Vd eigvals;
  Md eigvecs;
};
SymEig sym_eig(const Md& S);

// Orthogonal O with O^T v = (||v||/sqrt(p)) * ones; identity for v = 0.
Md rotation_to_ones(const Vd& v);

struct Block {
  Md U;         // d x p_k orthonormal top eigenvectors of the cluster Gram
  Vd eigvals;   // descending Gram eigenvalues, length p_k
  Vd scaling;   // s_{k,r}
  Md rotation;  // O_k
  Md W() const { return U * scaling.asDiagonal() * rotation.transpose(); }
};

struct BlockSolution {
  std::vector<Block> blocks;
  Md assembled_W;
  std::vector<int> p_alloc;

  DaeModel model(double sigma_train = 0.0) const {
    return DaeModel::make_tied(assembled_W, sigma_train);
  }
  // column range of block k in assembled_W
  std::pair<int, int> block_range(int k) const;
  double s_min() const;
  double s_max() const;
};

// Global minimizer of the regularized linear-autoencoder objective
//   ||W W^T X - X||_F^2 + noise_weight ||W W^T||_F^2 + 2 lambda' ||W||_F^2
// restricted to rank p_k:  W = U_(p) (I + nw L^-1)^{-1/2} (I - l' L^-1)^{1/2} O^T.
Md lae_minimizer(const Md& Xk, int p_k, double noise_weight,
                 double lambda_prime, const std::optional<Md>& rotation = {});

BlockSolution construct_theorem_solution(const Dataset& data,
                                         const std::vector<int>& p_alloc,
                                         double sigma, double lambda,
                                         bool align_ones = true);

DaeModel construct_memorization_solution(const Dataset& data, int p,
                                         double sigma, double lambda);

// Rank-p_k truncation of (S - (lambda/rho_k) I)(S + sigma^2 I)^{-1} in the
// eigenbasis of S; negative shrinkage coefficients clipped at zero.
Md wiener_limit(const Md& S, int p_k, double sigma, double lambda,
                double rho_k);

BlockSolution construct_hybrid_solution(const Dataset& data,
                                        const std::vector<int>& p_alloc,
                                        double sigma, double lambda);

// (1/n) sum_i sigma^2 ||x_i||^2 / (sigma^2 + ||x_i||^2)
double memorization_loss_value(const Dataset& data, double sigma);

// Two spectral terms of the test-loss bound, summed over modes with weights.
// The sampling term C_k p_k / (sigma^2 n_k) carries an unknown proof constant
// and is reported separately by generalization_sampling_term.
double generalization_loss_bound(const MoGSpec& spec,
                                 const std::vector<int>& p_alloc,
                                 double sigma);
double generalization_sampling_term(const MoGSpec& spec,
                                    const std::vector<int>& p_alloc,
                                    double sigma, const std::vector<int>& counts,
                                    const std::vector<double>& c_k);

// max_i a_i ||x_i||_1 ||x_i||_inf + lambda over samples with a live column;
// lambda alone when no block is active.
double linf_landscape_norm(const DaeModel& m, const Dataset& data,
                           double lambda, const Vd& a_coeffs);

}  // namespace dae
