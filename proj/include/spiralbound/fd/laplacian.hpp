#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spiralbound/fd/grid.hpp"

namespace spiralbound::fd {

/// Symmetric 5-point Dirichlet Laplacian restricted to the interior nodes:
/// (A u)_ij = (4 u_ij - sum of interior neighbors) / h^2, Dirichlet nodes
/// eliminated. Self-contained (owns its neighbor table), so it outlives the
/// grid it was built from. Matrix-free application plus an assembled copy
/// for direct factorization.
class DirichletLaplacian {
 public:
  explicit DirichletLaplacian(const GridDomain& g)
      : n_(std::int64_t(g.interior_count())),
        h_(g.h),
        R_(g.R),
        inv_h2_(1.0 / (g.h * g.h)) {
    nb_.assign(std::size_t(n_) * 4, -1);
    const int side = g.side();
    for (std::int64_t k = 0; k < n_; ++k) {
      const std::int64_t id = g.interior_nodes[std::size_t(k)];
      const std::int64_t off[4] = {-side, side, -1, 1};
      // nodes on the lattice hull are always Dirichlet (R < (n+1)h), so the
      // neighbor ids stay in range
      for (int q = 0; q < 4; ++q)
        nb_[std::size_t(k) * 4 + q] = g.interior_index[std::size_t(id + off[q])];
    }
  }

  std::int64_t size() const { return n_; }
  double h() const { return h_; }
  double R() const { return R_; }

  /// Upper bound on the spectrum from the Gershgorin row sums: 8/h^2.
  double gershgorin_max() const { return 8.0 * inv_h2_; }

  void apply(std::span<const double> x, std::span<double> y) const {
    if (std::int64_t(x.size()) != n_ || std::int64_t(y.size()) != n_)
      throw std::invalid_argument("DirichletLaplacian::apply: size mismatch");
    for (std::int64_t k = 0; k < n_; ++k) {
      double acc = 4.0 * x[std::size_t(k)];
      for (int q = 0; q < 4; ++q) {
        const std::int32_t nb = nb_[std::size_t(k) * 4 + q];
        if (nb >= 0) acc -= x[std::size_t(nb)];
      }
      y[std::size_t(k)] = acc * inv_h2_;
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(x.size());
    apply(std::span<const double>(x.data(), std::size_t(x.size())),
          std::span<double>(y.data(), std::size_t(y.size())));
    return y;
  }

  /// Assembled sparse copy of A - shift*I.
  Eigen::SparseMatrix<double> assemble(double shift = 0.0) const {
    Eigen::SparseMatrix<double> A(n_, n_);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(n_) * 5);
    for (std::int64_t k = 0; k < n_; ++k) {
      trip.emplace_back(k, k, 4.0 * inv_h2_ - shift);
      for (int q = 0; q < 4; ++q) {
        const std::int32_t nb = nb_[std::size_t(k) * 4 + q];
        if (nb >= 0) trip.emplace_back(k, nb, -inv_h2_);
      }
    }
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
  }

 private:
  std::int64_t n_;
  double h_;
  double R_;
  double inv_h2_;
  std::vector<std::int32_t> nb_;
};

}  // namespace spiralbound::fd
