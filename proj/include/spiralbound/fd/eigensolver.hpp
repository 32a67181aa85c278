#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "spiralbound/fd/laplacian.hpp"

namespace spiralbound::fd {

struct EigenOptions {
  int k = 8;
  double tol = 1e-8;     // acceptance: ||A v - lambda v|| / ||v|| <= tol
  double shift = 0.0;    // spectral shift; reduced automatically if not below lambda_min
  std::uint64_t seed = 12345;
  int max_basis = 0;     // 0 -> min(max(3k+16, 24), 96)
  int max_restarts = 60;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending, one per accepted pair
  std::vector<double> residuals;    // ||A v - lambda v|| / ||v||
  int k_requested = 0;
  double h = 0.0;
  double R = 0.0;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double shift_used = 0.0;
  int op_applications = 0;
  bool converged = false;
  std::vector<Eigen::VectorXd> vectors;  // interior-ordered eigenvectors
};

/// k smallest eigenpairs of the Dirichlet Laplacian by thick-restart Lanczos
/// on (A - shift I)^-1 with a sparse LDLT factorization. Acceptance is by the
/// explicit residual in A; the starting vector is seeded, so runs are
/// deterministic.
inline SpectrumResult lowest_eigenvalues(const DirichletLaplacian& op,
                                         const EigenOptions& opts = {}) {
  const std::int64_t n = op.size();
  if (n == 0) throw std::invalid_argument("lowest_eigenvalues: empty operator");
  const int k = std::min<std::int64_t>(std::max(opts.k, 1), n);
  int m = opts.max_basis > 0 ? opts.max_basis : std::min(std::max(3 * k + 16, 24), 96);
  m = int(std::min<std::int64_t>(m, n));
  if (m < k + 2) m = int(std::min<std::int64_t>(k + 2, n));

  SpectrumResult out;
  out.k_requested = k;
  out.h = op.h();
  out.R = op.R();

  // factorize A - shift I; LDLT inertia tells us whether the shift sits below
  // the spectrum, and we back off until it does
  double shift = std::max(opts.shift, 0.0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  for (int attempt = 0;; ++attempt) {
    Eigen::SparseMatrix<double> As = op.assemble(shift);
    ldlt.compute(As);
    const bool pd = ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0;
    if (pd) break;
    if (attempt >= 4)
      throw std::runtime_error("lowest_eigenvalues: could not find a definite shift");
    shift = (attempt == 3) ? 0.0 : 0.5 * shift;
  }
  out.shift_used = shift;

  Eigen::MatrixXd V(n, m);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  auto fresh_vector = [&](int ncols) {
    Eigen::VectorXd v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = uni(rng);
    if (ncols > 0) {
      v -= V.leftCols(ncols) * (V.leftCols(ncols).transpose() * v);
      v -= V.leftCols(ncols) * (V.leftCols(ncols).transpose() * v);
    }
    v.normalize();
    return v;
  };

  V.col(0) = fresh_vector(0);
  int locked = 0;  // kept Ritz vectors at the front after a restart
  double last_beta = 0.0;
  Eigen::VectorXd next_v;

  std::vector<double> best_res;
  for (int cycle = 0; cycle < opts.max_restarts; ++cycle) {
    for (int j = locked; j < m; ++j) {
      Eigen::VectorXd w = ldlt.solve(V.col(j));
      ++out.op_applications;
      Eigen::VectorXd c = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * c;
      Eigen::VectorXd c2 = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * c2;
      c += c2;
      for (int i = 0; i <= j; ++i) {
        T(i, j) = c[i];
        T(j, i) = c[i];
      }
      const double beta = w.norm();
      if (j + 1 < m) {
        if (beta < 1e-12) {
          V.col(j + 1) = fresh_vector(j + 1);
          T(j, j + 1) = T(j + 1, j) = 0.0;
        } else {
          V.col(j + 1) = w / beta;
          T(j, j + 1) = T(j + 1, j) = beta;
        }
      } else {
        last_beta = beta;
        next_v = beta < 1e-12 ? fresh_vector(m) : Eigen::VectorXd(w / beta);
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("lowest_eigenvalues: dense eigensolve failed");
    // top-k of (A - shift)^-1 = k smallest of A above the shift
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return es.eigenvalues()[a] > es.eigenvalues()[b];
    });

    Eigen::MatrixXd U = V * es.eigenvectors()(Eigen::all,
                                              std::vector<int>(order.begin(), order.begin() + k));
    best_res.assign(k, 0.0);
    bool all_ok = true;
    std::vector<double> lambdas(k);
    for (int i = 0; i < k; ++i) {
      const double mu = es.eigenvalues()[order[i]];
      lambdas[i] = mu > 0.0 ? shift + 1.0 / mu : std::numeric_limits<double>::infinity();
      const Eigen::VectorXd Au = op.apply(U.col(i));
      best_res[i] = (Au - lambdas[i] * U.col(i)).norm() / U.col(i).norm();
      all_ok = all_ok && best_res[i] <= opts.tol && std::isfinite(lambdas[i]);
    }

    if (all_ok || cycle == opts.max_restarts - 1) {
      std::vector<int> asc(k);
      for (int i = 0; i < k; ++i) asc[i] = i;
      std::sort(asc.begin(), asc.end(),
                [&](int a, int b) { return lambdas[a] < lambdas[b]; });
      for (int i : asc) {
        out.eigenvalues.push_back(lambdas[i]);
        out.residuals.push_back(best_res[i]);
        out.vectors.push_back(U.col(i));
      }
      out.converged = all_ok;
      return out;
    }

    // thick restart: keep the leading Ritz vectors plus the residual direction
    const int keep = std::min(k + 8, m - 8);
    Eigen::MatrixXd Y = es.eigenvectors()(Eigen::all,
                                          std::vector<int>(order.begin(), order.begin() + keep));
    Eigen::MatrixXd Vk = V * Y;
    V.leftCols(keep) = Vk;
    T.setZero();
    for (int i = 0; i < keep; ++i) T(i, i) = es.eigenvalues()[order[i]];
    V.col(keep) = next_v;
    locked = keep;
  }
  return out;  // unreachable
}

/// Sum of (lambda - eigenvalue)_+^sigma over the computed spectrum. Requires
/// a converged result whose window extends past lambda.
inline double moment_sum(const SpectrumResult& result, double sigma, double lambda) {
  if (!result.converged)
    throw std::runtime_error("moment_sum: eigensolver did not converge");
  if (result.eigenvalues.empty() || result.eigenvalues.back() < lambda)
    throw std::runtime_error(
        "moment_sum: spectral window not exhausted (largest computed eigenvalue " +
        (result.eigenvalues.empty() ? std::string("none")
                                    : std::to_string(result.eigenvalues.back())) +
        " is still below lambda=" + std::to_string(lambda) + "); increase k");
  double acc = 0.0;
  for (double ev : result.eigenvalues)
    if (ev < lambda) acc += std::pow(lambda - ev, sigma);
  return acc;
}

}  // namespace spiralbound::fd
