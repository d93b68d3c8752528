#pragma once

// Dense complex matrix foundation: sampling grids, amplitude matrices,
// Hermitian eigendecomposition and singular value decomposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "schmidt_lab/error.hpp"

namespace schmidt {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Uniform n x n mesh over [p_min, p_max] x [q_min, q_max].
struct Grid {
  double p_min = 0.0;
  double p_max = 1.0;
  double q_min = 0.0;
  double q_max = 1.0;
  std::size_t n = 2;

  double dp() const { return (p_max - p_min) / static_cast<double>(n - 1); }
  double dq() const { return (q_max - q_min) / static_cast<double>(n - 1); }
  double p(std::size_t j) const { return p_min + static_cast<double>(j) * dp(); }
  double q(std::size_t j) const { return q_min + static_cast<double>(j) * dq(); }

  std::vector<double> p_nodes() const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = p(j);
    return out;
  }
  std::vector<double> q_nodes() const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = q(j);
    return out;
  }

  /// True when both axes share the same window, so (j, k) and (k, j) sample mirrored points.
  bool symmetric_window() const { return p_min == q_min && p_max == q_max; }

  friend bool operator==(const Grid &, const Grid &) = default;
};

inline Grid make_grid(double p_min, double p_max, double q_min, double q_max, std::size_t n) {
  for (double b : {p_min, p_max, q_min, q_max})
    if (!std::isfinite(b)) throw DomainError("grid bounds must be finite");
  if (!(p_min < p_max)) throw DomainError("grid requires p_min < p_max");
  if (!(q_min < q_max)) throw DomainError("grid requires q_min < q_max");
  if (n < 2) throw DomainError("grid requires at least 2 points per axis");
  return Grid{p_min, p_max, q_min, q_max, n};
}

/// Samples psi(p_j1, q_j2) on a Grid. Rows follow p, columns follow q.
class AmplitudeMatrix {
public:
  AmplitudeMatrix(Grid grid, Matrix entries, bool normalized = false)
      : grid_(grid), entries_(std::move(entries)), normalized_(normalized) {
    const auto n = static_cast<Eigen::Index>(grid_.n);
    if (entries_.rows() != n || entries_.cols() != n)
      throw DomainError("amplitude matrix shape does not match grid (" + std::to_string(grid_.n) +
                        " points per axis)");
    if (!entries_.allFinite()) throw DomainError("amplitude matrix has non-finite entries");
    if (normalized_ && std::abs(entries_.squaredNorm() - 1.0) > 1e-12)
      throw DomainError("amplitude matrix flagged normalized but its Frobenius norm is not 1");
  }

  const Grid &grid() const noexcept { return grid_; }
  const Matrix &entries() const noexcept { return entries_; }
  bool normalized() const noexcept { return normalized_; }
  std::size_t size() const noexcept { return grid_.n; }

  cplx operator()(std::size_t j1, std::size_t j2) const {
    return entries_(static_cast<Eigen::Index>(j1), static_cast<Eigen::Index>(j2));
  }

private:
  Grid grid_;
  Matrix entries_;
  bool normalized_;
};

template <class F>
concept AmplitudeFunction = std::invocable<const F &, double, double> &&
                            std::convertible_to<std::invoke_result_t<const F &, double, double>, cplx>;

template <AmplitudeFunction F>
AmplitudeMatrix sample_amplitude(const F &f, const Grid &grid) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  Matrix m(n, n);
  for (Eigen::Index j1 = 0; j1 < n; ++j1) {
    const double p = grid.p(static_cast<std::size_t>(j1));
    for (Eigen::Index j2 = 0; j2 < n; ++j2) {
      const double q = grid.q(static_cast<std::size_t>(j2));
      const cplx v = static_cast<cplx>(f(p, q));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("non-finite amplitude at node (" + std::to_string(j1) + ", " +
                          std::to_string(j2) + ")");
      m(j1, j2) = v;
    }
  }
  return AmplitudeMatrix(grid, std::move(m), false);
}

inline AmplitudeMatrix normalize(const AmplitudeMatrix &a) {
  const double norm = a.entries().norm();
  if (norm == 0.0) throw DomainError("cannot normalize an all-zero amplitude matrix");
  return AmplitudeMatrix(a.grid(), a.entries() / norm, true);
}

/// Eigenpairs of a Hermitian matrix, eigenvalues non-increasing, eigenvectors in columns.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline EigenSystem hermitian_eig(const Matrix &m) {
  if (m.rows() != m.cols()) throw DomainError("hermitian_eig requires a square matrix");
  if (m.size() == 0) throw DomainError("hermitian_eig requires a non-empty matrix");
  if (!m.allFinite()) throw DomainError("hermitian_eig input has non-finite entries");
  const double scale = max_abs(m);
  if (max_abs(m - m.adjoint()) > 1e-10 * scale)
    throw DomainError("hermitian_eig input is not Hermitian within tolerance");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");

  // Solver returns ascending order; stable sort by descending value keeps discovery order on ties.
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto &ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ev(a) > ev(b); });

  EigenSystem out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = ev(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// A = U * diag(singular_values) * V, with U columns and V rows orthonormal.
struct SvdResult {
  Matrix u;
  RealVector singular_values;
  Matrix v;
};

inline void require_finite(const Matrix &a, const char *what) {
  if (!a.allFinite()) throw DomainError(std::string(what) + " input has non-finite entries");
}

inline bool is_real(const Matrix &a) { return a.imag().isZero(0.0); }

inline SvdResult svd(const Matrix &a) {
  require_finite(a, "svd");
  if (a.size() == 0) throw DomainError("svd requires a non-empty matrix");
  if (is_real(a)) {
    // Same factorization in real arithmetic, several times cheaper.
    Eigen::BDCSVD<Eigen::MatrixXd> solver(a.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) throw ConvergenceError("singular value decomposition failed");
    return SvdResult{solver.matrixU().cast<cplx>(), solver.singularValues(), solver.matrixV().transpose().cast<cplx>()};
  }
  Eigen::BDCSVD<Matrix> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw ConvergenceError("singular value decomposition failed");
  return SvdResult{solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
}

/// Singular values only, non-increasing.
inline RealVector singular_values(const Matrix &a) {
  require_finite(a, "svd");
  if (a.size() == 0) throw DomainError("svd requires a non-empty matrix");
  if (is_real(a)) {
    Eigen::BDCSVD<Eigen::MatrixXd> solver(a.real());
    if (solver.info() != Eigen::Success) throw ConvergenceError("singular value decomposition failed");
    return solver.singularValues();
  }
  Eigen::BDCSVD<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw ConvergenceError("singular value decomposition failed");
  return solver.singularValues();
}

/// ||a - b||_F / ||b||_F, or the absolute error when b is zero.
inline double relative_frobenius_error(const Matrix &a, const Matrix &b) {
  const double denom = b.norm();
  const double diff = (a - b).norm();
  return denom == 0.0 ? diff : diff / denom;
}

} // namespace schmidt
