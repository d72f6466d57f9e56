#include "dae/steering.hpp"

#include "dae/rng.hpp"

namespace dae {

SteeringVector steering_vector(const DaeModel& m, const Md& targets,
                               double sigma, std::uint64_t seed) {
  require(targets.cols() >= 1, "steering_vector: empty target set");
  require(targets.rows() == m.d(), "steering_vector: dimension mismatch");
  const int s = static_cast<int>(targets.cols());
  Vd v = Vd::Zero(m.p());
  for (int j = 0; j < s; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    Vd xt = targets.col(j);
    for (int i = 0; i < xt.size(); ++i) xt[i] += sigma * rng.normal();
    v += representation(m, xt).h;
  }
  SteeringVector sv;
  sv.v = v / s;
  sv.source_sigma = sigma;
  return sv;
}

Vd steered_forward(const DaeModel& m, const Vd& x, double a,
                   const SteeringVector& sv) {
  require(x.size() == m.d(), "steered_forward: dimension mismatch");
  require(sv.v.size() == m.p(), "steered_forward: steering vector length");
  Vd h = m.W1.transpose() * x;
  for (int j = 0; j < h.size(); ++j)
    if (h[j] < 0.0) h[j] = 0.0;
  if (a != 0.0) h += a * sv.v;
  return m.W2() * h;
}

Md steer_sample(const DenoiserBank& bank, const NoiseSchedule& schedule,
                const SteeringVector& sv, double a, StepWindow window, int n,
                std::uint64_t seed) {
  detail::SteerSpec spec;
  spec.v = sv.v;
  spec.a = a;
  spec.window_begin = window.begin;
  spec.window_end = window.end;
  return detail::sample_trajectories(bank, schedule, n, seed, &spec);
}

}  // namespace dae
