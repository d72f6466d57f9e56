#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/model.hpp"

namespace dae {

struct NoiseSchedule {
  std::vector<double> sigmas;  // strictly decreasing, last entry >= 0

  int steps() const { return static_cast<int>(sigmas.size()) - 1; }
  void validate() const;
};

// Geometric sigma spacing over [sigma_min, sigma_max] with sigma_0 = 0
// appended so the final step jumps fully to the denoiser output.
NoiseSchedule ve_schedule(double sigma_min, double sigma_max, int T);

struct Denoiser {
  double sigma = 0.0;
  int dim = -1;
  std::shared_ptr<const DaeModel> model;  // null for non-parametric denoisers
  std::function<Vd(const Vd&)> fn;
};

struct DenoiserBank {
  std::vector<Denoiser> entries;

  void validate() const;
  const Denoiser& nearest(double sigma) const;
  void add_model(double sigma, DaeModel m);
  void add(Denoiser d);
};

Vd ddim_step(const DenoiserBank& bank, const Vd& x_t, double sigma_t,
             double sigma_prev);

Md sample(const DenoiserBank& bank, const NoiseSchedule& schedule,
          int n_samples, std::uint64_t seed);

// Posterior mean under the empirical distribution, log-sum-exp stabilized.
Denoiser empirical_denoiser(const Dataset& data, double sigma);

struct OneStepResult {
  Vd noisy;
  Vd denoised;
  double mse;
};
OneStepResult one_step_denoise(const DaeModel& m, const Vd& x0, double sigma,
                               std::uint64_t seed);

namespace detail {
// Shared trajectory driver; `steer` (optional) is applied to the hidden
// representation inside [window_begin, window_end).
struct SteerSpec {
  Vd v;
  double a = 0.0;
  int window_begin = 0;
  int window_end = 0;
};
Md sample_trajectories(const DenoiserBank& bank, const NoiseSchedule& schedule,
                       int n_samples, std::uint64_t seed,
                       const SteerSpec* steer);
}  // namespace detail

}  // namespace dae
