#include "intraday/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"

namespace intraday {

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw std::invalid_argument("SymmetricMatrix: expected n*n entries");
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
  return t;
}

double SymmetricMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) worst = std::max(worst, std::abs(a_[i * n_ + j] - a_[j * n_ + i]));
  return worst;
}

double SymmetricMatrix::off_diagonal_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j) s += a_[i * n_ + j] * a_[i * n_ + j];
  return std::sqrt(s);
}

EigenResult eigen_spectrum(const SymmetricMatrix& matrix, const JacobiOptions& options) {
  const std::size_t n = matrix.size();
  if (const double asym = matrix.asymmetry(); asym > options.symmetry_tolerance) {
    throw NumericError("eigen_spectrum: matrix is not symmetric (max asymmetry " + format_number(asym) + ")");
  }

  // Work on the upper triangle only; a(i, j) with i < j.
  std::vector<double> a(matrix.data().begin(), matrix.data().end());
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];

  double total = 0.0;
  for (const double x : matrix.data()) total += x * x;
  const double tolerance = options.relative_tolerance * std::max(1.0, std::sqrt(total));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };

  EigenResult result;
  double residual = off_norm();
  int sweep = 0;
  while (residual > tolerance) {
    if (sweep == options.max_sweeps) {
      throw NumericError("eigen_spectrum: no convergence after " + std::to_string(sweep) +
                         " sweeps (off-diagonal residual " + format_number(residual) + ")");
    }
    ++sweep;
    // Early sweeps skip elements well below the current off-diagonal size;
    // later sweeps drop elements negligible next to both diagonal entries.
    const double threshold = sweep <= 3 ? 0.2 * residual / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        if (std::abs(apq) <= threshold) continue;
        if (sweep > 4) {
          const double g = 100.0 * std::abs(apq);
          if (std::abs(diag[p]) + g == std::abs(diag[p]) && std::abs(diag[q]) + g == std::abs(diag[q])) {
            a[p * n + q] = 0.0;
            continue;
          }
        }
        const double theta = (diag[q] - diag[p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        diag[p] -= t * apq;
        diag[q] += t * apq;
        a[p * n + q] = 0.0;
        for (std::size_t r = 0; r < p; ++r) {
          double& g = a[r * n + p];
          double& h = a[r * n + q];
          const double gv = g;
          const double hv = h;
          g = gv - s * (hv + gv * tau);
          h = hv + s * (gv - hv * tau);
        }
        for (std::size_t r = p + 1; r < q; ++r) {
          double& g = a[p * n + r];
          double& h = a[r * n + q];
          const double gv = g;
          const double hv = h;
          g = gv - s * (hv + gv * tau);
          h = hv + s * (gv - hv * tau);
        }
        double* row_p = &a[p * n];
        double* row_q = &a[q * n];
        for (std::size_t r = q + 1; r < n; ++r) {
          const double gv = row_p[r];
          const double hv = row_q[r];
          row_p[r] = gv - s * (hv + gv * tau);
          row_q[r] = hv + s * (gv - hv * tau);
        }
      }
    }
    residual = off_norm();
  }

  result.values = std::move(diag);
  std::sort(result.values.begin(), result.values.end(), std::greater<>());
  result.sweeps = sweep;
  result.residual = residual;
  return result;
}

}  // namespace intraday
