#include "dae/sampler.hpp"

#include <cmath>

#include "dae/rng.hpp"

namespace dae {

void NoiseSchedule::validate() const {
  require(sigmas.size() >= 2, "NoiseSchedule: need at least two levels");
  for (size_t i = 1; i < sigmas.size(); ++i)
    require(sigmas[i] < sigmas[i - 1], "NoiseSchedule: must strictly decrease");
  require(sigmas.back() >= 0.0, "NoiseSchedule: last entry must be >= 0");
}

NoiseSchedule ve_schedule(double sigma_min, double sigma_max, int T) {
  require(0.0 < sigma_min && sigma_min < sigma_max,
          "ve_schedule: need 0 < sigma_min < sigma_max");
  require(T >= 2, "ve_schedule: T must be >= 2");
  NoiseSchedule s;
  s.sigmas.reserve(T + 1);
  for (int t = T; t >= 1; --t) {
    const double frac = static_cast<double>(T - t) / (T - 1);
    s.sigmas.push_back(sigma_max * std::pow(sigma_min / sigma_max, frac));
  }
  s.sigmas.push_back(0.0);
  s.validate();
  return s;
}

void DenoiserBank::validate() const {
  require(!entries.empty(), "DenoiserBank: empty bank");
  for (size_t i = 0; i < entries.size(); ++i) {
    require(static_cast<bool>(entries[i].fn) || entries[i].model != nullptr,
            "DenoiserBank: entry without denoiser");
    for (size_t j = i + 1; j < entries.size(); ++j)
      require(entries[i].sigma != entries[j].sigma,
              "DenoiserBank: duplicate sigma");
  }
}

const Denoiser& DenoiserBank::nearest(double sigma) const {
  if (entries.empty()) throw ConfigError("DenoiserBank: empty bank");
  size_t best = 0;
  double bd = std::abs(entries[0].sigma - sigma);
  for (size_t i = 1; i < entries.size(); ++i) {
    const double d = std::abs(entries[i].sigma - sigma);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return entries[best];
}

void DenoiserBank::add_model(double sigma, DaeModel m) {
  Denoiser d;
  d.sigma = sigma;
  d.dim = m.d();
  d.model = std::make_shared<DaeModel>(std::move(m));
  auto mp = d.model;
  d.fn = [mp](const Vd& x) { return forward(*mp, x); };
  entries.push_back(std::move(d));
}

void DenoiserBank::add(Denoiser d) { entries.push_back(std::move(d)); }

Vd ddim_step(const DenoiserBank& bank, const Vd& x_t, double sigma_t,
             double sigma_prev) {
  require(sigma_t > 0.0 && sigma_t > sigma_prev && sigma_prev >= 0.0,
          "ddim_step: need sigma_t > sigma_prev >= 0");
  const Denoiser& den = bank.nearest(sigma_t);
  const Vd fx = den.fn(x_t);
  const double eta = (sigma_t - sigma_prev) / sigma_t;
  return x_t + eta * (fx - x_t);
}

namespace detail {

Md sample_trajectories(const DenoiserBank& bank, const NoiseSchedule& schedule,
                       int n_samples, std::uint64_t seed,
                       const SteerSpec* steer) {
  bank.validate();
  schedule.validate();
  require(n_samples >= 1, "sample: n_samples must be >= 1");
  const int T = schedule.steps();
  if (steer != nullptr) {
    require(0 <= steer->window_begin && steer->window_begin <= steer->window_end &&
                steer->window_end <= T,
            "steer_sample: window out of range");
  }

  int d = -1;
  for (const auto& e : bank.entries) {
    if (e.model != nullptr) d = e.model->d();
    else if (e.dim > 0) d = e.dim;
  }
  if (d <= 0)
    throw ConfigError("sample: cannot infer dimension from the bank");

  Md out(d, n_samples);
  const double sigma_T = schedule.sigmas.front();
  std::vector<std::string> failures(n_samples);

#pragma omp parallel for schedule(static)
  for (int j = 0; j < n_samples; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    Vd x(d);
    for (int i = 0; i < d; ++i) x[i] = sigma_T * rng.normal();
    for (int step = 0; step < T; ++step) {
      const double st = schedule.sigmas[step];
      const double sp = schedule.sigmas[step + 1];
      const Denoiser& den = bank.nearest(st);
      Vd fx;
      const bool in_window = steer != nullptr && step >= steer->window_begin &&
                             step < steer->window_end;
      if (in_window && den.model == nullptr) {
        failures[j] = "steering window requires model-backed denoisers";
        break;
      }
      if (in_window) {
        const DaeModel& m = *den.model;
        Vd h = m.W1.transpose() * x;
        for (int i = 0; i < h.size(); ++i)
          if (h[i] < 0.0) h[i] = 0.0;
        h += steer->a * steer->v;
        fx = m.W2() * h;
      } else {
        fx = den.fn(x);
      }
      const double eta = (st - sp) / st;
      x += eta * (fx - x);
      if (!x.allFinite()) {
        failures[j] = "trajectory " + std::to_string(j) +
                      " produced non-finite values at step " +
                      std::to_string(step) + " (sigma " + std::to_string(st) +
                      ")";
        break;
      }
    }
    out.col(j) = x;
  }
  for (const auto& f : failures)
    if (!f.empty()) throw NumericError("sample: NaN guard: " + f);
  return out;
}

}  // namespace detail

Md sample(const DenoiserBank& bank, const NoiseSchedule& schedule,
          int n_samples, std::uint64_t seed) {
  return detail::sample_trajectories(bank, schedule, n_samples, seed, nullptr);
}

Denoiser empirical_denoiser(const Dataset& data, double sigma) {
  require(sigma > 0.0, "empirical_denoiser: sigma must be positive");
  Denoiser d;
  d.sigma = sigma;
  d.dim = data.d;
  const Md X = data.X;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  d.fn = [X, inv2s2](const Vd& y) {
    const int n = static_cast<int>(X.cols());
    Vd logw(n);
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      logw[i] = -(y - X.col(i)).squaredNorm() * inv2s2;
      mx = std::max(mx, logw[i]);
    }
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += std::exp(logw[i] - mx);
    Vd out = Vd::Zero(y.size());
    for (int i = 0; i < n; ++i)
      out += (std::exp(logw[i] - mx) / z) * X.col(i);
    return out;
  };
  return d;
}

OneStepResult one_step_denoise(const DaeModel& m, const Vd& x0, double sigma,
                               std::uint64_t seed) {
  require(x0.size() == m.d(), "one_step_denoise: dimension mismatch");
  Rng rng(seed);
  OneStepResult r;
  r.noisy = x0;
  for (int i = 0; i < x0.size(); ++i) r.noisy[i] += sigma * rng.normal();
  r.denoised = forward(m, r.noisy);
  r.mse = (r.denoised - x0).squaredNorm() / x0.size();
  return r;
}

}  // namespace dae
