#pragma once

// Two-photon polarization state of a type-II biphoton after tracing out
// frequency, in the ordered basis (|HH>, |HV>, |VH>, |VV>), signal (x) idler.
//
//   rho = 1/2 [[0,0,0,0],[0,1,F,0],[0,F*,1,0],[0,0,0,0]],  F = sum_pq psi_pq conj(psi_qp)
//
// F uses elementwise (not Hermitian) conjugation of the transposed sample.
// No quadrature weights are needed: on a uniform mesh the cell area factors
// out of both F and the Frobenius normalization.

#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "schmidt_lab/error.hpp"
#include "schmidt_lab/schmidt.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt::polarization {

using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

inline constexpr std::array<std::string_view, 4> basis_labels{"HH", "HV", "VH", "VV"};

inline cplx coherence(const AmplitudeMatrix &a) {
  if (!a.normalized()) throw DomainError("coherence requires a normalized amplitude matrix");
  if (!a.grid().symmetric_window())
    throw DomainError("coherence requires identical p and q windows so the transpose samples mirrored points");
  const Matrix &m = a.entries();
  return (m.array() * m.transpose().array().conjugate()).sum();
}

struct PolarizationDensityMatrix {
  Matrix4 rho;
};

inline PolarizationDensityMatrix polarization_density_matrix(cplx f) {
  if (std::abs(f) > 1.0 + 1e-12) throw DomainError("coherence parameter must satisfy |F| <= 1");
  Matrix4 rho = Matrix4::Zero();
  rho(1, 1) = 0.5;
  rho(2, 2) = 0.5;
  rho(1, 2) = 0.5 * f;
  rho(2, 1) = 0.5 * std::conj(f);
  return {rho};
}

struct MixtureComponent {
  double weight;
  Vector4 state;
};

/// (|HV> + |VH>)/sqrt2 with weight (1+F)/2 and (|HV> - |VH>)/sqrt2 with weight (1-F)/2.
inline std::array<MixtureComponent, 2> mixture_decomposition(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("mixture_decomposition requires 0 <= F <= 1");
  const double h = std::sqrt(0.5);
  Vector4 plus(0.0, h, h, 0.0);
  Vector4 minus(0.0, h, -h, 0.0);
  return {MixtureComponent{0.5 * (1.0 + f), plus}, MixtureComponent{0.5 * (1.0 - f), minus}};
}

inline Matrix4 assemble(const std::array<MixtureComponent, 2> &mix) {
  Matrix4 rho = Matrix4::Zero();
  for (const auto &c : mix) rho += c.weight * c.state * c.state.adjoint();
  return rho;
}

struct DensityDiagnostics {
  double trace_deviation;
  double hermiticity_deviation;
  double min_eigenvalue;
  double purity;
};

inline DensityDiagnostics density_matrix_checks(const Matrix4 &rho) {
  DensityDiagnostics d{};
  d.trace_deviation = std::abs(rho.trace() - cplx(1.0, 0.0));
  d.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  // Eigenvalues of the Hermitian part; the deviation above says how far that is from rho.
  const Matrix4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  d.purity = (rho * rho).trace().real();
  return d;
}

struct CoherenceReport {
  cplx f;
  double weight_plus;
  double weight_minus;
  /// True when Im F is above 1e-10 and the real-F mixture picture is incomplete.
  bool imaginary_part_significant;
  PolarizationDensityMatrix density;
  std::vector<double> lambdas;
  double schmidt_number;
  double entropy;
};

inline CoherenceReport coherence_report(const AmplitudeMatrix &a, const SchmidtResult &schmidt) {
  const cplx f = coherence(a);
  return CoherenceReport{f,
                         0.5 * (1.0 + f.real()),
                         0.5 * (1.0 - f.real()),
                         std::abs(f.imag()) > 1e-10,
                         polarization_density_matrix(f),
                         schmidt.lambdas,
                         schmidt.schmidt_number,
                         schmidt.entropy};
}

} // namespace schmidt::polarization
