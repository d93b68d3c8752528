#pragma once

// Schmidt decomposition of a discretized two-variable amplitude.
//
//   psi(p_j1, q_j2) = sum_k sqrt(lambda_k) u_k(p_j1) v_k(q_j2)
//
// Two routes are available. The direct route takes the SVD of the amplitude
// matrix. The Gram route diagonalizes M = psi psi^+ = U D U^+ and recovers the
// partner modes as V = D^{-1/2} U^+ psi, with a small additive epsilon on D so
// near-zero weights do not divide by zero. Both return the same contract.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schmidt_lab/error.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt {

enum class Gauge {
  largest_real_positive, ///< largest-modulus component of each p-mode real and positive
  none,
};

enum class Route {
  direct_svd,
  gram_eigen,
};

struct DecompositionOptions {
  /// Drop weights with lambda_k / lambda_1 below this.
  double truncation_relative_threshold = 1e-14;
  /// Added to the Gram eigenvalues before inversion (Gram route only).
  double regularization_epsilon = 1e-12;
  Gauge gauge = Gauge::largest_real_positive;
  Route route = Route::direct_svd;
  /// Optional hard cap on the retained rank, applied after the threshold.
  std::optional<std::size_t> max_rank;

  void validate() const {
    if (!(truncation_relative_threshold >= 0.0 && truncation_relative_threshold < 1.0))
      throw DomainError("truncation threshold must lie in [0, 1)");
    if (!(regularization_epsilon >= 1e-16 && regularization_epsilon <= 1e-10))
      throw DomainError("regularization epsilon must lie in [1e-16, 1e-10]");
    if (max_rank && *max_rank == 0) throw DomainError("max_rank must be positive");
  }
};

struct SchmidtResult {
  /// Retained weights, non-increasing, renormalized to sum to 1.
  std::vector<double> lambdas;
  /// Singular values of the normalized input for the retained modes (not renormalized).
  std::vector<double> singular_values;
  /// p-modes u_k as columns (n x r).
  Matrix modes_p;
  /// q-modes v_k as columns (n x r); v_k is row k of V in psi = U S V.
  Matrix modes_q;
  double schmidt_number = 1.0;
  double entropy = 0.0;
  /// K and S over every weight before truncation.
  double untruncated_schmidt_number = 1.0;
  double untruncated_entropy = 0.0;
  /// Weight dropped by truncation (sum of squared discarded singular values).
  double discarded_weight = 0.0;
  /// ||psi - sum_k s_k u_k v_k^T||_F / ||psi||_F over the retained terms.
  double reconstruction_error = 0.0;

  std::size_t rank() const noexcept { return lambdas.size(); }
  Vector mode_p(std::size_t k) const { return modes_p.col(static_cast<Eigen::Index>(k)); }
  Vector mode_q(std::size_t k) const { return modes_q.col(static_cast<Eigen::Index>(k)); }
};

namespace detail {

inline void check_weights(std::span<const double> lambdas) {
  if (lambdas.empty()) throw DomainError("weight sequence is empty");
  double sum = 0.0;
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw DomainError("weights must be finite");
    if (l < 0.0) throw DomainError("weights must be non-negative");
    sum += l;
  }
  if (sum == 0.0) throw DomainError("weights are all zero");
  if (std::abs(sum - 1.0) > 1e-10) throw DomainError("weights must sum to 1");
}

} // namespace detail

/// K = 1 / sum lambda_k^2.
inline double schmidt_number(std::span<const double> lambdas) {
  detail::check_weights(lambdas);
  double s2 = 0.0;
  for (double l : lambdas) s2 += l * l;
  return 1.0 / s2;
}

/// S = -sum lambda_k log2 lambda_k in bits, with 0 log 0 = 0.
inline double entanglement_entropy(std::span<const double> lambdas) {
  detail::check_weights(lambdas);
  double s = 0.0;
  for (double l : lambdas)
    if (l > 0.0) s -= l * std::log2(l);
  return s;
}

/// Squared singular values renormalized to sum to 1.
inline std::vector<double> weights_from_singular_values(const RealVector &sv) {
  std::vector<double> w(static_cast<std::size_t>(sv.size()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    w[static_cast<std::size_t>(k)] = sv(k) * sv(k);
    total += w[static_cast<std::size_t>(k)];
  }
  if (total == 0.0) throw DomainError("matrix has no nonzero singular values");
  for (double &x : w) x /= total;
  return w;
}

/// Discrete inner product <a|b> = sum conj(a_j) b_j. Inputs are expected unit-normalized.
inline cplx mode_overlap(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) throw DomainError("mode_overlap: length mismatch");
  if (a.size() == 0 || a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0)
    throw DomainError("mode_overlap: zero vector");
  return a.dot(b);
}

namespace detail {

inline void apply_gauge(Matrix &u, Matrix &v) {
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    Eigen::Index idx = 0;
    u.col(k).cwiseAbs().maxCoeff(&idx);
    const cplx pivot = u(idx, k);
    if (std::abs(pivot) == 0.0) continue;
    const cplx phase = pivot / std::abs(pivot);
    u.col(k) *= std::conj(phase);
    u(idx, k) = std::abs(pivot);
    v.col(k) *= phase;
  }
}

inline std::size_t retained_rank(const RealVector &sv, const DecompositionOptions &opts) {
  const double top = sv.size() > 0 ? sv(0) * sv(0) : 0.0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double w = sv(k) * sv(k);
    if (top == 0.0 || w < opts.truncation_relative_threshold * top) break;
    if (opts.truncation_relative_threshold > 0.0 && w == 0.0) break;
    ++r;
  }
  r = std::max<std::size_t>(r, 1);
  if (opts.max_rank) r = std::min(r, *opts.max_rank);
  return r;
}

struct RawModes {
  RealVector sv; // all singular values, non-increasing
  Matrix u;      // n x m
  Matrix v;      // n x m, columns are the q-modes
};

inline RawModes direct_modes(const Matrix &psi) {
  auto s = svd(psi);
  return RawModes{std::move(s.singular_values), std::move(s.u), s.v.transpose()};
}

inline RawModes gram_modes(const Matrix &psi, const DecompositionOptions &opts) {
  const Matrix m = psi * psi.adjoint();
  // psi psi^+ is Hermitian up to rounding; symmetrize before the tolerance check.
  auto es = hermitian_eig(0.5 * (m + m.adjoint()));
  const auto n = psi.rows();
  RealVector sv(n);
  for (Eigen::Index k = 0; k < n; ++k) sv(k) = std::sqrt(std::max(es.eigenvalues(k), 0.0));
  RealVector inv(n);
  for (Eigen::Index k = 0; k < n; ++k)
    inv(k) = 1.0 / std::sqrt(std::max(es.eigenvalues(k), 0.0) + opts.regularization_epsilon);
  // Rows of V = D^{-1/2} U^+ psi; stored transposed so each column is a q-mode.
  Matrix vrows = inv.asDiagonal() * (es.eigenvectors.adjoint() * psi);
  return RawModes{std::move(sv), std::move(es.eigenvectors), vrows.transpose()};
}

} // namespace detail

inline SchmidtResult schmidt_decompose(const AmplitudeMatrix &a, const DecompositionOptions &opts = {}) {
  opts.validate();
  if (a.size() == 0) throw DomainError("schmidt_decompose: empty matrix");
  if (!a.normalized()) throw DomainError("schmidt_decompose requires a normalized amplitude matrix");
  const Matrix &psi = a.entries();

  auto raw = opts.route == Route::direct_svd ? detail::direct_modes(psi) : detail::gram_modes(psi, opts);

  const auto all = weights_from_singular_values(raw.sv);
  const std::size_t r = detail::retained_rank(raw.sv, opts);
  const auto ri = static_cast<Eigen::Index>(r);

  SchmidtResult out;
  out.untruncated_schmidt_number = schmidt_number(all);
  out.untruncated_entropy = entanglement_entropy(all);

  double kept = 0.0;
  for (std::size_t k = 0; k < r; ++k) kept += raw.sv(static_cast<Eigen::Index>(k)) * raw.sv(static_cast<Eigen::Index>(k));
  double total = kept;
  for (Eigen::Index k = ri; k < raw.sv.size(); ++k) total += raw.sv(k) * raw.sv(k);
  out.discarded_weight = (total - kept) / total;

  out.lambdas.resize(r);
  out.singular_values.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    const double s = raw.sv(static_cast<Eigen::Index>(k));
    out.singular_values[k] = s;
    out.lambdas[k] = s * s / kept;
  }
  out.modes_p = raw.u.leftCols(ri);
  out.modes_q = raw.v.leftCols(ri);
  if (opts.gauge == Gauge::largest_real_positive) detail::apply_gauge(out.modes_p, out.modes_q);

  out.schmidt_number = schmidt_number(out.lambdas);
  out.entropy = entanglement_entropy(out.lambdas);

  const RealVector s = Eigen::Map<const RealVector>(out.singular_values.data(), ri);
  const Matrix approx = out.modes_p * s.asDiagonal() * out.modes_q.transpose();
  out.reconstruction_error = relative_frobenius_error(approx, psi);
  return out;
}

/// Reassembles sum_k s_k u_k v_k^T over the first `rank` retained terms (all when omitted).
inline AmplitudeMatrix reconstruct(const SchmidtResult &result, const Grid &grid,
                                   std::optional<std::size_t> rank = std::nullopt) {
  const auto n = static_cast<Eigen::Index>(grid.n);
  if (result.modes_p.rows() != n || result.modes_q.rows() != n)
    throw DomainError("reconstruct: mode length does not match grid");
  const std::size_t r = rank ? *rank : result.rank();
  if (r == 0 || r > result.rank()) throw DomainError("reconstruct: rank out of range");
  const auto ri = static_cast<Eigen::Index>(r);
  const RealVector s = Eigen::Map<const RealVector>(result.singular_values.data(), ri);
  Matrix m = result.modes_p.leftCols(ri) * s.asDiagonal() * result.modes_q.leftCols(ri).transpose();
  return AmplitudeMatrix(grid, std::move(m), false);
}

/// Sum of the first r renormalized weights.
inline double captured_weight(const SchmidtResult &result, std::size_t r) {
  r = std::min(r, result.rank());
  double s = 0.0;
  for (std::size_t k = 0; k < r; ++k) s += result.lambdas[k];
  return s;
}

} // namespace schmidt
