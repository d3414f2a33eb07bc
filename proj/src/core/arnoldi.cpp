// SPDX-License-Identifier: Apache-2.0

#include "arnoldi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "errors.hpp"

namespace ringqed
{

namespace
{

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct RitzPair
{
  std::complex<double> theta;
  Eigen::VectorXcd y;
  double residual;  // |h_{m+1,m} y_m| / |theta|
};

}  // namespace

std::vector<EigenPair> eigs_shift_invert(const Eigen::SparseMatrix<double> &a, double sigma, int nev,
                                         const ArnoldiOptions &opts)
{
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || n == 0 || nev < 1)
    throw Error(ErrorCode::InvalidArgument, "eigs_shift_invert: bad problem dimensions");
  nev = std::min(nev, n);

  Eigen::SparseMatrix<double> shifted = a;
  {
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    shifted -= sigma * eye;
  }
  shifted.prune(0.0);
  shifted.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw NumericError("shift-invert factorization failed: " + lu.lastErrorMessage(), 0, 0.0);

  int m = opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * nev + 20, 40);
  m = std::min(m, n);

  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec start(n);
  for (int i = 0; i < n; ++i)
    start[i] = 1.0 + 0.5 * dist(rng);

  double worst_residual = 0.0;
  std::vector<RitzPair> wanted;
  Mat basis;

  for (int restart = 0; restart <= opts.max_restarts; ++restart)
  {
    basis.setZero(n, m + 1);
    Mat hess = Mat::Zero(m + 1, m);
    basis.col(0) = start.normalized();

    int steps = m;
    for (int j = 0; j < m; ++j)
    {
      Vec w = lu.solve(basis.col(j));
      // Modified Gram-Schmidt plus one refinement sweep.
      for (int pass = 0; pass < 2; ++pass)
      {
        for (int i = 0; i <= j; ++i)
        {
          const double hij = basis.col(i).dot(w);
          hess(i, j) += hij;
          w -= hij * basis.col(i);
        }
      }
      const double beta = w.norm();
      hess(j + 1, j) = beta;
      if (beta < 1e-13 * hess.col(j).head(j + 1).norm() || beta == 0.0)
      {
        steps = j + 1;  // invariant subspace found
        hess(j + 1, j) = 0.0;
        break;
      }
      basis.col(j + 1) = w / beta;
    }

    Eigen::EigenSolver<Mat> es(hess.topLeftCorner(steps, steps));
    if (es.info() != Eigen::Success)
      throw NumericError("Hessenberg eigen-decomposition failed", restart, 0.0);

    std::vector<RitzPair> ritz;
    const double tail = hess(steps, steps - 1);
    for (int i = 0; i < steps; ++i)
    {
      RitzPair rp;
      rp.theta = es.eigenvalues()[i];
      rp.y = es.eigenvectors().col(i);
      rp.residual = std::abs(tail * rp.y[steps - 1]) / std::max(std::abs(rp.theta), 1e-300);
      ritz.push_back(std::move(rp));
    }
    std::sort(ritz.begin(), ritz.end(),
              [](const RitzPair &l, const RitzPair &r) { return std::abs(l.theta) > std::abs(r.theta); });

    wanted.assign(ritz.begin(), ritz.begin() + std::min<int>(nev, static_cast<int>(ritz.size())));
    worst_residual = 0.0;
    for (const auto &rp : wanted)
      worst_residual = std::max(worst_residual, rp.residual);

    if (worst_residual <= opts.tol || steps < m)
    {
      std::vector<EigenPair> out;
      for (const auto &rp : wanted)
      {
        if (std::abs(rp.theta.imag()) > 1e-8 * std::abs(rp.theta))
          continue;
        Eigen::VectorXcd x = basis.leftCols(steps) * rp.y;
        // Rotate so the dominant entry is real, then drop the imaginary part.
        Eigen::Index k = 0;
        x.cwiseAbs().maxCoeff(&k);
        x *= std::conj(x[k]) / std::abs(x[k]);
        EigenPair ep;
        ep.value = sigma + 1.0 / rp.theta.real();
        ep.vector = x.real().normalized();
        out.push_back(std::move(ep));
      }
      std::sort(out.begin(), out.end(),
                [](const EigenPair &l, const EigenPair &r) { return l.value > r.value; });
      return out;
    }

    // Explicit restart on the span of the wanted Ritz vectors.
    Eigen::VectorXcd combo = Eigen::VectorXcd::Zero(n);
    for (const auto &rp : wanted)
      combo += basis.leftCols(steps) * rp.y;
    start = combo.real() + combo.imag();
    if (start.norm() == 0.0)
      start = basis.col(0);
  }

  throw NumericError("Arnoldi iteration did not converge", opts.max_restarts, worst_residual);
}

}  // namespace ringqed
