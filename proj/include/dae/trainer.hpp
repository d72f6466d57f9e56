#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/model.hpp"

namespace dae {

enum class OptimizerKind { rmsprop, adam, adamw };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::rmsprop;
  double lr = 1e-3;
  double weight_decay = 0.0;  // lambda of the regularized objective
  long steps = 1;
  int batch = 0;  // 0 = full batch
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
  bool tied = true;
  double init_scale = 1e-2;  // entries ~ N(0, (init_scale/sqrt(d))^2)
  long record_every = 0;     // 0 = steps/100
  // Iteration-slot -> sample-index map; empty = identity. Lets callers permute
  // data columns while keeping the slot-keyed noise stream aligned.
  std::vector<int> sample_order;

  void validate() const;
};

struct TrainTrace {
  std::vector<long> recorded_steps;
  std::vector<double> loss_history;       // periodic mc_loss estimates
  std::vector<double> grad_norm_history;  // same sampling period
  DaeModel final_model;
};

DaeModel init_weights(int d, int p, double scale, std::uint64_t seed);

// on_checkpoint (optional) fires at every recording step with a snapshot.
TrainTrace train(const Dataset& data, double sigma, int p,
                 const OptimizerConfig& cfg,
                 const std::function<void(long, const DaeModel&)>& on_checkpoint = {});

// Max relative error between the analytic gradient of the single-sample loss
// (fixed noise draw) and central finite differences.
double grad_check(const DaeModel& m, const Vd& x, double sigma,
                  std::uint64_t seed, double h);

}  // namespace dae
