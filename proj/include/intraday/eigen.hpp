#pragma once

// Dense symmetric matrices and a cyclic Jacobi eigenvalue solver.

#include <cstddef>
#include <span>
#include <vector>

namespace intraday {

/// Square matrix stored row-major in full (both triangles).
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  SymmetricMatrix(std::size_t n, std::vector<double> row_major);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const double> data() const { return a_; }

  double trace() const;
  /// Largest |a_ij - a_ji|.
  double asymmetry() const;
  /// Frobenius norm of the off-diagonal part.
  double off_diagonal_norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

struct EigenResult {
  std::vector<double> values;  // descending
  int sweeps = 0;
  double residual = 0.0;  // off-diagonal Frobenius norm at exit
};

struct JacobiOptions {
  int max_sweeps = 50;
  double symmetry_tolerance = 1e-10;
  /// Convergence when the off-diagonal norm falls below this times max(1, ||A||_F).
  double relative_tolerance = 1e-14;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations with a fixed
/// (row, column) sweep order. Throws NumericError for asymmetric input or
/// when the sweep cap is reached (message carries the residual).
EigenResult eigen_spectrum(const SymmetricMatrix& matrix, const JacobiOptions& options = {});

}  // namespace intraday
