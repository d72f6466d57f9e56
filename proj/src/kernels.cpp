#include "dae/kernels.hpp"

#include <atomic>
#include <limits>
#include <cmath>

#include "dae/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dae::kernels {

namespace {
std::atomic<int> g_threads{0};  // 0 = library default
}

void set_threads(int n) {
  g_threads.store(n > 0 ? n : 0);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#endif
}

int threads() {
#ifdef _OPENMP
  const int n = g_threads.load();
  return n > 0 ? n : omp_get_max_threads();
#else
  return 1;
#endif
}

// Each output column is owned by exactly one thread and its inner loops run
// in the same order as the serial reference, so results match bit-for-bit.

void gemm_tn(const Md& A, const Md& B, Md& C) {
  const Eigen::Index p = A.cols(), n = B.cols(), d = A.rows();
  require(B.rows() == d, "gemm_tn: inner dimension mismatch");
  C.resize(p, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* bj = B.col(j).data();
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < p; ++i) {
      const double* ai = A.col(i).data();
      double acc = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) acc += ai[k] * bj[k];
      cj[i] = acc;
    }
  }
}

void gemm_nn(const Md& A, const Md& B, Md& C) {
  const Eigen::Index d = A.rows(), p = A.cols(), n = B.cols();
  require(B.rows() == p, "gemm_nn: inner dimension mismatch");
  C.resize(d, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < d; ++i) cj[i] = 0.0;
    const double* bj = B.col(j).data();
    for (Eigen::Index k = 0; k < p; ++k) {
      const double bkj = bj[k];
      if (bkj == 0.0) continue;
      const double* ak = A.col(k).data();
      for (Eigen::Index i = 0; i < d; ++i) cj[i] += bkj * ak[i];
    }
  }
}

void gemm_nt(const Md& A, const Md& B, Md& C) {
  const Eigen::Index d = A.rows(), n = A.cols(), p = B.rows();
  require(B.cols() == n, "gemm_nt: inner dimension mismatch");
  C.resize(d, p);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < p; ++j) {
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < d; ++i) cj[i] = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double bjk = B(j, k);
      if (bjk == 0.0) continue;
      const double* ak = A.col(k).data();
      for (Eigen::Index i = 0; i < d; ++i) cj[i] += bjk * ak[i];
    }
  }
}

void relu(Md& Z) {
  const Eigen::Index n = Z.cols(), m = Z.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    double* zj = Z.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i)
      if (zj[i] < 0.0) zj[i] = 0.0;
  }
}

void relu_mask_apply(const Md& Z, Md& G) {
  require(Z.rows() == G.rows() && Z.cols() == G.cols(),
          "relu_mask_apply: shape mismatch");
  const Eigen::Index n = Z.cols(), m = Z.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* zj = Z.col(j).data();
    double* gj = G.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i)
      if (!(zj[i] > 0.0)) gj[i] = 0.0;
  }
}

Vd col_squared_norms(const Md& R) {
  const Eigen::Index n = R.cols(), m = R.rows();
  Vd out(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* rj = R.col(j).data();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) acc += rj[i] * rj[i];
    out[j] = acc;
  }
  return out;
}

void fill_gaussian(Md& E, std::uint64_t seed) {
  const Eigen::Index n = E.cols(), m = E.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    double* ej = E.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i) ej[i] = rng.normal();
  }
}

void max_cosine(const Md& T, const Md& S, Vd& best, std::vector<int>& argmax,
                bool absolute) {
  require(T.rows() == S.rows(), "max_cosine: dimension mismatch");
  const Eigen::Index m = S.cols(), nt = T.cols(), d = T.rows();
  Vd tn(nt);
  for (Eigen::Index i = 0; i < nt; ++i) tn[i] = T.col(i).norm();
  best.resize(m);
  argmax.assign(m, -1);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j) {
    const double sn = S.col(j).norm();
    double b = -std::numeric_limits<double>::infinity();
    int arg = -1;
    if (sn > 0.0) {
      for (Eigen::Index i = 0; i < nt; ++i) {
        if (tn[i] == 0.0) continue;
        double dot = 0.0;
        const double* ti = T.col(i).data();
        const double* sj = S.col(j).data();
        for (Eigen::Index k = 0; k < d; ++k) dot += ti[k] * sj[k];
        double c = dot / (tn[i] * sn);
        if (absolute) c = std::abs(c);
        if (c > b) {
          b = c;
          arg = static_cast<int>(i);
        }
      }
    }
    best[j] = arg >= 0 ? b : 0.0;
    argmax[j] = arg;
  }
}

namespace serial {

void gemm_tn(const Md& A, const Md& B, Md& C) {
  const Eigen::Index p = A.cols(), n = B.cols(), d = A.rows();
  require(B.rows() == d, "gemm_tn: inner dimension mismatch");
  C.resize(p, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* bj = B.col(j).data();
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < p; ++i) {
      const double* ai = A.col(i).data();
      double acc = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) acc += ai[k] * bj[k];
      cj[i] = acc;
    }
  }
}

void gemm_nn(const Md& A, const Md& B, Md& C) {
  const Eigen::Index d = A.rows(), p = A.cols(), n = B.cols();
  require(B.rows() == p, "gemm_nn: inner dimension mismatch");
  C.resize(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < d; ++i) cj[i] = 0.0;
    const double* bj = B.col(j).data();
    for (Eigen::Index k = 0; k < p; ++k) {
      const double bkj = bj[k];
      if (bkj == 0.0) continue;
      const double* ak = A.col(k).data();
      for (Eigen::Index i = 0; i < d; ++i) cj[i] += bkj * ak[i];
    }
  }
}

void gemm_nt(const Md& A, const Md& B, Md& C) {
  const Eigen::Index d = A.rows(), n = A.cols(), p = B.rows();
  require(B.cols() == n, "gemm_nt: inner dimension mismatch");
  C.resize(d, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double* cj = C.col(j).data();
    for (Eigen::Index i = 0; i < d; ++i) cj[i] = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double bjk = B(j, k);
      if (bjk == 0.0) continue;
      const double* ak = A.col(k).data();
      for (Eigen::Index i = 0; i < d; ++i) cj[i] += bjk * ak[i];
    }
  }
}

void relu(Md& Z) {
  const Eigen::Index n = Z.cols(), m = Z.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double* zj = Z.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i)
      if (zj[i] < 0.0) zj[i] = 0.0;
  }
}

void relu_mask_apply(const Md& Z, Md& G) {
  require(Z.rows() == G.rows() && Z.cols() == G.cols(),
          "relu_mask_apply: shape mismatch");
  const Eigen::Index n = Z.cols(), m = Z.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* zj = Z.col(j).data();
    double* gj = G.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i)
      if (!(zj[i] > 0.0)) gj[i] = 0.0;
  }
}

Vd col_squared_norms(const Md& R) {
  const Eigen::Index n = R.cols(), m = R.rows();
  Vd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* rj = R.col(j).data();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) acc += rj[i] * rj[i];
    out[j] = acc;
  }
  return out;
}

void fill_gaussian(Md& E, std::uint64_t seed) {
  const Eigen::Index n = E.cols(), m = E.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(j)));
    double* ej = E.col(j).data();
    for (Eigen::Index i = 0; i < m; ++i) ej[i] = rng.normal();
  }
}

void max_cosine(const Md& T, const Md& S, Vd& best, std::vector<int>& argmax,
                bool absolute) {
  require(T.rows() == S.rows(), "max_cosine: dimension mismatch");
  const Eigen::Index m = S.cols(), nt = T.cols(), d = T.rows();
  Vd tn(nt);
  for (Eigen::Index i = 0; i < nt; ++i) tn[i] = T.col(i).norm();
  best.resize(m);
  argmax.assign(m, -1);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double sn = S.col(j).norm();
    double b = -std::numeric_limits<double>::infinity();
    int arg = -1;
    if (sn > 0.0) {
      for (Eigen::Index i = 0; i < nt; ++i) {
        if (tn[i] == 0.0) continue;
        double dot = 0.0;
        const double* ti = T.col(i).data();
        const double* sj = S.col(j).data();
        for (Eigen::Index k = 0; k < d; ++k) dot += ti[k] * sj[k];
        double c = dot / (tn[i] * sn);
        if (absolute) c = std::abs(c);
        if (c > b) {
          b = c;
          arg = static_cast<int>(i);
        }
      }
    }
    best[j] = arg >= 0 ? b : 0.0;
    argmax[j] = arg;
  }
}

}  // namespace serial

}  // namespace dae::kernels
