// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ringqed
{

struct EigenPair
{
  double value;
  Eigen::VectorXd vector;  // unit 2-norm
};

struct ArnoldiOptions
{
  int krylov_dim = 0;  // 0 picks max(2 * nev + 20, 40)
  int max_restarts = 60;
  double tol = 1e-10;
  unsigned seed = 12345;
};

// Real eigenpairs of a real sparse (non-symmetric) matrix closest to `sigma`,
// found by Arnoldi iteration on (A - sigma I)^{-1} with explicit restarts.
// Pairs whose Ritz value is markedly complex are dropped. Results are sorted
// by descending eigenvalue. Throws NumericError when the wanted Ritz pairs do
// not converge.
std::vector<EigenPair> eigs_shift_invert(const Eigen::SparseMatrix<double> &a, double sigma, int nev,
                                         const ArnoldiOptions &opts = {});

}  // namespace ringqed
