#include "dae/trainer.hpp"

#include <cmath>

#include "dae/kernels.hpp"
#include "dae/rng.hpp"

namespace dae {

namespace {

constexpr std::uint64_t kSaltInit1 = 0x5EED0001;
constexpr std::uint64_t kSaltInit2 = 0x5EED0002;
constexpr std::uint64_t kSaltNoise = 0x5EED0011;
constexpr std::uint64_t kSaltBatch = 0x5EED0012;
constexpr std::uint64_t kSaltRecord = 0x5EED0013;

Md gaussian_matrix(int rows, int cols, std::uint64_t seed, double sd) {
  Md M(rows, cols);
  kernels::fill_gaussian(M, seed);
  if (sd != 1.0) M *= sd;
  return M;
}

struct Moments {
  Md m1, m2;
  void init(int d, int p) {
    m1 = Md::Zero(d, p);
    m2 = Md::Zero(d, p);
  }
};

void apply_update(Md& W, Moments& mom, const Md& G, const OptimizerConfig& cfg,
                  long t, double decoupled_decay) {
  const Eigen::Index n = W.cols(), d = W.rows();
  const double b1 = cfg.beta1, b2 = cfg.beta2, lr = cfg.lr, eps = cfg.eps;
  switch (cfg.kind) {
    case OptimizerKind::rmsprop: {
#pragma omp parallel for schedule(static)
      for (Eigen::Index j = 0; j < n; ++j) {
        double* w = W.col(j).data();
        double* v = mom.m2.col(j).data();
        const double* g = G.col(j).data();
        for (Eigen::Index i = 0; i < d; ++i) {
          v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
          w[i] -= lr * g[i] / (std::sqrt(v[i]) + eps);
        }
      }
      break;
    }
    case OptimizerKind::adam:
    case OptimizerKind::adamw: {
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
#pragma omp parallel for schedule(static)
      for (Eigen::Index j = 0; j < n; ++j) {
        double* w = W.col(j).data();
        double* m = mom.m1.col(j).data();
        double* v = mom.m2.col(j).data();
        const double* g = G.col(j).data();
        for (Eigen::Index i = 0; i < d; ++i) {
          m[i] = b1 * m[i] + (1.0 - b1) * g[i];
          v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
          if (decoupled_decay != 0.0) w[i] -= lr * decoupled_decay * w[i];
          w[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
      }
      break;
    }
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  require(lr >= 0.0, "OptimizerConfig: lr must be non-negative");
  require(steps >= 1, "OptimizerConfig: steps must be >= 1");
  require(beta1 >= 0.0 && beta1 < 1.0, "OptimizerConfig: beta1 in [0,1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "OptimizerConfig: beta2 in [0,1)");
  require(eps > 0.0, "OptimizerConfig: eps must be positive");
  require(batch >= 0, "OptimizerConfig: batch must be >= 0");
  require(weight_decay >= 0.0, "OptimizerConfig: weight_decay >= 0");
}

DaeModel init_weights(int d, int p, double scale, std::uint64_t seed) {
  require(d >= 1 && p >= 1, "init_weights: bad dimensions");
  const double sd = scale / std::sqrt(static_cast<double>(d));
  return DaeModel::make_tied(
      gaussian_matrix(d, p, derive_seed(seed, kSaltInit1), sd));
}

TrainTrace train(const Dataset& data, double sigma, int p,
                 const OptimizerConfig& cfg,
                 const std::function<void(long, const DaeModel&)>& on_checkpoint) {
  cfg.validate();
  require(p >= 1, "train: p must be >= 1");
  if (!cfg.sample_order.empty()) {
    require(static_cast<int>(cfg.sample_order.size()) == data.n,
            "train: sample_order length mismatch");
    for (int idx : cfg.sample_order)
      require(idx >= 0 && idx < data.n, "train: sample_order index range");
  }

  const int d = data.d;
  const int B = cfg.batch == 0 ? data.n : cfg.batch;
  const double sd = cfg.init_scale / std::sqrt(static_cast<double>(d));

  Md W1 = gaussian_matrix(d, p, derive_seed(cfg.seed, kSaltInit1), sd);
  Md W2;
  if (!cfg.tied) W2 = gaussian_matrix(d, p, derive_seed(cfg.seed, kSaltInit2), sd);

  Moments mom1, mom2;
  mom1.init(d, p);
  if (!cfg.tied) mom2.init(d, p);

  const std::uint64_t noise_root = derive_seed(cfg.seed, kSaltNoise);
  const std::uint64_t batch_root = derive_seed(cfg.seed, kSaltBatch);
  const long rec_every =
      cfg.record_every > 0 ? cfg.record_every : std::max<long>(1, cfg.steps / 100);

  TrainTrace trace;
  auto current_model = [&]() {
    return cfg.tied ? DaeModel::make_tied(W1, sigma)
                    : DaeModel::make_untied(W1, W2, sigma);
  };

  Md X0(d, B), Y(d, B), Z, H, R, G1, G2, Mbuf;
  std::vector<int> slots(B);
  double initial_loss = -1.0;

  for (long t = 1; t <= cfg.steps; ++t) {
    if (cfg.batch == 0) {
      for (int s = 0; s < B; ++s) slots[s] = s;
    } else {
      Rng br(derive_seed(batch_root, static_cast<std::uint64_t>(t)));
      for (int s = 0; s < B; ++s)
        slots[s] = static_cast<int>(br.uniform_int(data.n));
    }
    const std::uint64_t step_seed =
        derive_seed(noise_root, static_cast<std::uint64_t>(t));
#pragma omp parallel for schedule(static)
    for (int s = 0; s < B; ++s) {
      const int idx = cfg.sample_order.empty() ? slots[s]
                                               : cfg.sample_order[slots[s]];
      Rng rng(derive_seed(step_seed, static_cast<std::uint64_t>(s)));
      const double* x = data.X.col(idx).data();
      double* x0 = X0.col(s).data();
      double* y = Y.col(s).data();
      for (int i = 0; i < d; ++i) {
        x0[i] = x[i];
        y[i] = x[i] + sigma * rng.normal();
      }
    }

    kernels::gemm_tn(W1, Y, Z);
    H = Z;
    kernels::relu(H);
    const Md& W2ref = cfg.tied ? W1 : W2;
    kernels::gemm_nn(W2ref, H, R);
    R -= X0;

    const double batch_loss = kernels::col_squared_norms(R).sum() / B;
    if (initial_loss < 0.0) initial_loss = batch_loss;
    if (!(batch_loss < 1e6 * std::max(initial_loss, 1e-12)))
      throw NumericError("train: divergence guard tripped at step " +
                         std::to_string(t));

    kernels::gemm_nt(R, H, G2);
    G2 *= 2.0 / B;
    kernels::gemm_tn(W2ref, R, Mbuf);
    kernels::relu_mask_apply(Z, Mbuf);
    kernels::gemm_nt(Y, Mbuf, G1);
    G1 *= 2.0 / B;

    const double lambda = cfg.weight_decay;
    double grad_norm = 0.0;
    if (cfg.tied) {
      Md G = G1 + G2;
      double decoupled = 0.0;
      if (cfg.kind == OptimizerKind::adamw) {
        decoupled = 2.0 * lambda;
      } else if (lambda != 0.0) {
        G += 4.0 * lambda * W1;
      }
      grad_norm = G.norm();
      apply_update(W1, mom1, G, cfg, t, decoupled);
    } else {
      double decoupled = 0.0;
      if (cfg.kind == OptimizerKind::adamw) {
        decoupled = lambda;
      } else if (lambda != 0.0) {
        G1 += 2.0 * lambda * W1;
        G2 += 2.0 * lambda * W2;
      }
      grad_norm = std::sqrt(G1.squaredNorm() + G2.squaredNorm());
      apply_update(W1, mom1, G1, cfg, t, decoupled);
      apply_update(W2, mom2, G2, cfg, t, decoupled);
    }

    if (t % rec_every == 0 || t == cfg.steps) {
      const DaeModel snapshot = current_model();
      trace.recorded_steps.push_back(t);
      trace.loss_history.push_back(
          mc_loss(snapshot, data, sigma, lambda, 1,
                  derive_seed(cfg.seed, kSaltRecord, static_cast<std::uint64_t>(t))));
      trace.grad_norm_history.push_back(grad_norm);
      if (on_checkpoint) on_checkpoint(t, snapshot);
    }
  }

  trace.final_model = current_model();
  return trace;
}

double grad_check(const DaeModel& m, const Vd& x, double sigma,
                  std::uint64_t seed, double h) {
  require(x.size() == m.d(), "grad_check: dimension mismatch");
  const int d = m.d(), p = m.p();
  Vd eps_draw(d);
  {
    Rng rng(seed);
    for (int i = 0; i < d; ++i) eps_draw[i] = rng.normal();
  }
  const Vd y = x + sigma * eps_draw;

  auto loss_at = [&](const Md& W1, const Md& W2) {
    Vd z = W1.transpose() * y;
    for (int j = 0; j < p; ++j)
      if (z[j] < 0.0) z[j] = 0.0;
    return (W2 * z - x).squaredNorm();
  };

  // analytic gradient
  Vd z = m.W1.transpose() * y;
  Vd hvec = z.cwiseMax(0.0);
  const Vd r = m.W2() * hvec - x;
  Md G2 = 2.0 * r * hvec.transpose();
  Vd mvec = m.W2().transpose() * r;
  for (int j = 0; j < p; ++j)
    if (!(z[j] > 0.0)) mvec[j] = 0.0;
  Md G1 = 2.0 * y * mvec.transpose();

  auto numeric = [&](bool first_layer, int i, int j) {
    Md W1p = m.W1, W1m = m.W1, W2p = m.W2(), W2m = m.W2();
    if (first_layer) {
      W1p(i, j) += h;
      W1m(i, j) -= h;
      if (m.tied) {
        W2p(i, j) += h;
        W2m(i, j) -= h;
      }
    } else {
      W2p(i, j) += h;
      W2m(i, j) -= h;
    }
    return (loss_at(W1p, W2p) - loss_at(W1m, W2m)) / (2.0 * h);
  };

  double max_rel = 0.0;
  auto compare = [&](double ga, double gn) {
    const double mag = std::max(std::abs(ga), std::abs(gn));
    if (mag <= 1e-8) return;
    max_rel = std::max(max_rel, std::abs(ga - gn) / mag);
  };

  if (m.tied) {
    const Md G = G1 + G2;
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < d; ++i) compare(G(i, j), numeric(true, i, j));
  } else {
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < d; ++i) {
        compare(G1(i, j), numeric(true, i, j));
        compare(G2(i, j), numeric(false, i, j));
      }
  }
  return max_rel;
}

}  // namespace dae
