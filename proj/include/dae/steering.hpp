#pragma once

#include <cstdint>

#include "dae/common.hpp"
#include "dae/model.hpp"
#include "dae/sampler.hpp"

namespace dae {

struct SteeringVector {
  Vd v;                      // mean representation of the target set
  double source_sigma = 0.0;  // noise level at extraction
  int target_label = 0;
};

// v = (1/s) sum over target columns of relu(W1^T (x + sigma eps)).
SteeringVector steering_vector(const DaeModel& m, const Md& targets,
                               double sigma, std::uint64_t seed);

// W2 (relu(W1^T x) + a v): the representation is steered after the ReLU, so
// it may leave the non-negative orthant; the decoder is linear.
Vd steered_forward(const DaeModel& m, const Vd& x, double a,
                   const SteeringVector& sv);

struct StepWindow {
  int begin = 0;  // step indices into the schedule, half-open [begin, end)
  int end = 0;
};

// DDIM sampling with the steered representation inside the window and the
// plain forward map outside it.
Md steer_sample(const DenoiserBank& bank, const NoiseSchedule& schedule,
                const SteeringVector& sv, double a, StepWindow window, int n,
                std::uint64_t seed);

}  // namespace dae
