#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dae/common.hpp"
#include "dae/dataset.hpp"

namespace dae {

// Two-layer bias-free ReLU network f(x) = W2 relu(W1^T x). Tied models share
// one storage for both matrices.
struct DaeModel {
  Md W1;
  bool tied = true;
  double sigma_train = 0.0;

  DaeModel() = default;

  static DaeModel make_tied(Md W, double sigma_train = 0.0) {
    DaeModel m;
    m.W1 = std::move(W);
    m.tied = true;
    m.sigma_train = sigma_train;
    return m;
  }

  static DaeModel make_untied(Md W1, Md W2, double sigma_train = 0.0) {
    require(W1.rows() == W2.rows() && W1.cols() == W2.cols(),
            "DaeModel: W1/W2 shape mismatch");
    DaeModel m;
    m.W1 = std::move(W1);
    m.W2_ = std::move(W2);
    m.tied = false;
    m.sigma_train = sigma_train;
    return m;
  }

  int d() const { return static_cast<int>(W1.rows()); }
  int p() const { return static_cast<int>(W1.cols()); }
  const Md& W2() const { return tied ? W1 : *W2_; }
  Md& W2_mutable() { return tied ? W1 : *W2_; }

 private:
  std::optional<Md> W2_;
};

struct Representation {
  Vd h;                           // relu(W1^T x), entrywise >= 0
  std::vector<std::uint8_t> active_mask;  // h_j > 0
};

Vd forward(const DaeModel& m, const Vd& x);
Md forward_batch(const DaeModel& m, const Md& X);

Representation representation(const DaeModel& m, const Vd& x);
Md representation_batch(const DaeModel& m, const Md& X);

// W2 diag(mask) W1^T at the activity pattern of x. Pre-activations exactly at
// zero use mask = 0; `boundary` is set when that occurs.
Md jacobian(const DaeModel& m, const Vd& x, bool* boundary = nullptr);

// Monte-Carlo estimate of the regularized objective; a dedicated noise
// substream per sample index makes the estimate independent of iteration
// order.
double mc_loss(const DaeModel& m, const Dataset& data, double sigma,
               double lambda, int n_mc, std::uint64_t seed);

// Exact expectation with ReLU masks frozen blockwise: cluster k is
// reconstructed by columns [block.first, block.second) only.
double mask_frozen_loss(const DaeModel& m, const Dataset& data, double sigma,
                        double lambda,
                        const std::vector<std::pair<int, int>>& mask_per_cluster);

}  // namespace dae
