#pragma once

#include <cstdint>
#include <vector>

#include "dae/common.hpp"

// Data-parallel kernels behind the numeric hot paths. Every kernel has an
// OpenMP implementation (namespace kernels) and a serial reference
// (namespace kernels::serial) with the identical operation order, so the
// two are comparable bit-for-bit and results do not depend on the thread
// count. Reductions accumulate per-column partials and combine them in
// fixed index order.

namespace dae::kernels {

void set_threads(int n);
int threads();

// C = A^T * B          (A: d x p, B: d x n, C: p x n)
void gemm_tn(const Md& A, const Md& B, Md& C);
// C = A * B            (A: d x p, B: p x n, C: d x n)
void gemm_nn(const Md& A, const Md& B, Md& C);
// C = A * B^T          (A: d x n, B: p x n, C: d x p)
void gemm_nt(const Md& A, const Md& B, Md& C);

// Z <- max(Z, 0)
void relu(Md& Z);
// G(i,j) <- Z(i,j) > 0 ? G(i,j) : 0
void relu_mask_apply(const Md& Z, Md& G);

// per-column squared norms of R
Vd col_squared_norms(const Md& R);

// E(:,j) filled with N(0,1) draws from substream derive_seed(seed, j)
void fill_gaussian(Md& E, std::uint64_t seed);

// per-column max cosine (signed or absolute) of S against the columns of T
void max_cosine(const Md& T, const Md& S, Vd& best, std::vector<int>& argmax,
                bool absolute);

namespace serial {
void gemm_tn(const Md& A, const Md& B, Md& C);
void gemm_nn(const Md& A, const Md& B, Md& C);
void gemm_nt(const Md& A, const Md& B, Md& C);
void relu(Md& Z);
void relu_mask_apply(const Md& Z, Md& G);
Vd col_squared_norms(const Md& R);
void fill_gaussian(Md& E, std::uint64_t seed);
void max_cosine(const Md& T, const Md& S, Vd& best, std::vector<int>& argmax,
                bool absolute);
}  // namespace serial

}  // namespace dae::kernels
