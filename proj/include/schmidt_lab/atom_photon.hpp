#pragma once

// Atom-photon spontaneous emission in one dimension.
//
// Everything is expressed through three dimensionless numbers:
//   xi0 = (M c^2 / hbar w) (gamma / w)   atomic constant, ~ M / (137 m)
//   eta = v_rec / (gamma a0)            momentum spread of the initial packet
//   tau = gamma t                       time in excited-state lifetimes
//
// Coordinate representation (p: photon, q: atom):
//   psi(p, q) = theta(tau - p) exp(-(tau - p)/2) exp(-eta^2 (p+q)^2 / (2 (1 + i tau eta^2 xi0)))
// Momentum representation (nu: photon detuning, pi: atom momentum):
//   psi(nu, pi) = exp(-pi^2/2) / (nu + 1/(2 xi0) - eta pi + i/2)

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schmidt_lab/error.hpp"
#include "schmidt_lab/schmidt.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt::atom_photon {

struct AtomPhotonParams {
  double xi0 = 100.0;
  double eta = 0.03;
  double tau = 10.0;

  void validate() const {
    if (!std::isfinite(xi0) || !std::isfinite(eta) || !std::isfinite(tau))
      throw DomainError("atom-photon parameters must be finite");
    if (!(xi0 > 0.0)) throw DomainError("xi0 must be positive");
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    if (!(tau > 0.0)) throw DomainError("tau must be positive");
  }
};

inline AtomPhotonParams make_params(double xi0, double eta, double tau) {
  AtomPhotonParams p{xi0, eta, tau};
  p.validate();
  return p;
}

/// Below this tau the coordinate amplitude is outside its asymptotic regime (tau >> 1).
inline constexpr double coordinate_model_min_tau = 3.0;

inline cplx coord_amplitude(const AtomPhotonParams &params, double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("coord_amplitude: non-finite coordinate");
  const double lag = params.tau - p;
  if (lag < 0.0) return {0.0, 0.0}; // theta(0) = 1: the light-front node is kept
  const double e2 = params.eta * params.eta;
  const double s = p + q;
  const cplx spread(1.0, params.tau * e2 * params.xi0);
  return std::exp(-0.5 * lag) * std::exp(-e2 * s * s / (2.0 * spread));
}

inline cplx momentum_amplitude(const AtomPhotonParams &params, double nu_ph, double pi_a) {
  if (!std::isfinite(nu_ph) || !std::isfinite(pi_a))
    throw DomainError("momentum_amplitude: non-finite coordinate");
  const cplx denom(nu_ph + 0.5 / params.xi0 - params.eta * pi_a, 0.5);
  return std::exp(-0.5 * pi_a * pi_a) / denom;
}

/// xi0 ~ alpha M / m with alpha = 1/137.
inline double xi0_estimate(double mass_ratio) {
  if (!(mass_ratio > 0.0)) throw DomainError("mass ratio must be positive");
  return mass_ratio / 137.0;
}

/// Initial packet width minimizing the packet variance at time tau.
inline double eta_opt(double xi0, double tau) {
  if (!(xi0 > 0.0) || !(tau > 0.0)) throw DomainError("eta_opt requires positive xi0 and tau");
  return 1.0 / std::sqrt(xi0 * tau);
}

struct ValidityReport {
  double eta_upper = 0.0;    ///< 1/sqrt(xi0): packet spreading stays small
  double eta_lower = 0.0;    ///< 1/xi0: packet small against the reduced wavelength
  double packet_ratio = 0.0; ///< a0 / reduced wavelength = 1/(xi0 eta)
  double strictness = 3.0;
  bool satisfied = false;
  /// Satisfied, but with less than a factor 2 of headroom to a strict bound.
  bool marginal = false;
  std::vector<std::string> messages;
};

inline ValidityReport validity_check(const AtomPhotonParams &params, double strictness = 3.0) {
  if (!(params.xi0 > 0.0) || !(params.eta > 0.0)) throw DomainError("validity_check requires positive xi0 and eta");
  if (!(strictness >= 1.0)) throw DomainError("strictness must be >= 1");

  ValidityReport r;
  r.strictness = strictness;
  r.eta_upper = 1.0 / std::sqrt(params.xi0);
  r.eta_lower = 1.0 / params.xi0;
  r.packet_ratio = 1.0 / (params.xi0 * params.eta);

  constexpr double slack = 1e-12;
  const double lo = strictness * r.eta_lower;
  const double hi = r.eta_upper / strictness;
  const bool above_lo = params.eta >= lo * (1.0 - slack);
  const bool below_hi = params.eta <= hi * (1.0 + slack);
  r.satisfied = above_lo && below_hi;

  if (!below_hi)
    r.messages.push_back("eta = " + std::to_string(params.eta) + " violates the upper bound eta << 1/sqrt(xi0) = " +
                         std::to_string(r.eta_upper) + ": packet spreading during emission is not small");
  if (!above_lo)
    r.messages.push_back("eta = " + std::to_string(params.eta) + " violates the lower bound eta >> 1/xi0 = " +
                         std::to_string(r.eta_lower) + ": packet is not small against the wavelength");
  if (r.satisfied) {
    const double headroom = std::min(params.eta / lo, hi / params.eta);
    if (headroom < 2.0) {
      r.marginal = true;
      r.messages.push_back("eta sits within a factor 2 of the validity window edge (headroom " +
                           std::to_string(headroom) + ")");
    }
  }
  if (params.tau < coordinate_model_min_tau)
    r.messages.push_back("tau = " + std::to_string(params.tau) +
                         " is below 3; the coordinate amplitude assumes tau >> 1");
  return r;
}

/// L_k(x) by the three-term recurrence.
inline double laguerre(int k, double x) {
  if (k < 0) throw DomainError("Laguerre degree must be non-negative");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 - x) * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// C_k L_k(tau - p) exp(-(tau - p)/2) theta(tau - p) sampled at p_nodes, unit norm in the discrete inner product.
inline Vector laguerre_mode(int k, double tau, std::span<const double> p_nodes) {
  if (k < 0) throw DomainError("Laguerre mode index must be non-negative");
  Vector v(static_cast<Eigen::Index>(p_nodes.size()));
  for (std::size_t j = 0; j < p_nodes.size(); ++j) {
    const double x = tau - p_nodes[j];
    v(static_cast<Eigen::Index>(j)) = x < 0.0 ? 0.0 : laguerre(k, x) * std::exp(-0.5 * x);
  }
  const double norm = v.norm();
  if (norm == 0.0) throw DomainError("laguerre_mode: no grid node lies at p <= tau");
  return v / norm;
}

enum class DynamicsConvention {
  printed, ///< squared weights inside both K0 and S0, exactly as the closed forms are usually quoted
  weights, ///< weights enter the Schmidt-number and entropy formulas directly
};

struct EntanglementPair {
  double schmidt_number = 1.0;
  double entropy = 0.0;
};

namespace detail {
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline EntanglementPair measures(std::span<const double> w, DynamicsConvention c) {
  double s2 = 0.0;
  double s = 0.0;
  for (double x : w) {
    s2 += x * x;
    s -= c == DynamicsConvention::printed ? xlog2x(x * x) : xlog2x(x);
  }
  return {1.0 / s2, s};
}
} // namespace detail

/// Excited-state and emitted-photon populations exp(-tau), 1 - exp(-tau).
inline std::pair<double, double> population_weights(double tau) {
  const double e = std::exp(-tau);
  return {e, -std::expm1(-tau)};
}

/// K0 and S0 from the two-level populations alone (no fine structure).
inline EntanglementPair zero_order_dynamics(double tau, DynamicsConvention c = DynamicsConvention::printed) {
  if (!(tau >= 0.0)) throw DomainError("zero_order_dynamics requires tau >= 0");
  const auto [le, lg] = population_weights(tau);
  const double w[2] = {le, lg};
  return detail::measures(w, c);
}

/// Large-tau, small-eta residual entanglement.
inline EntanglementPair asymptotics(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("asymptotics requires 0 < eta < 1");
  const double e2 = eta * eta;
  return {1.0 + e2, e2 / std::numbers::ln2 * (std::log(1.0 / eta) + 0.5 * (1.0 + std::numbers::ln2))};
}

// ---------------------------------------------------------------------------
// Discretization windows and grid policy.

/// Half-length of the photon window behind the light front (amplitude factor e^{-20} at the far edge).
inline constexpr double coordinate_p_span = 40.0;
/// Gaussian widths of margin on the atom axis.
inline constexpr double coordinate_q_widths = 6.0;
inline constexpr double momentum_nu_half_width = 60.0;
inline constexpr double momentum_pi_half_width = 6.0;

/// Modulus width of the Gaussian factor in the centre-of-inertia coordinate p + q.
inline double gaussian_width(const AtomPhotonParams &params) {
  const double a = params.tau * params.eta * params.eta * params.xi0;
  return std::sqrt(1.0 + a * a) / params.eta;
}

inline Grid coordinate_window(const AtomPhotonParams &params, std::size_t n, double margin_scale = 1.0) {
  const double w = gaussian_width(params);
  const double p_max = params.tau;
  const double p_min = params.tau - coordinate_p_span * margin_scale;
  const double m = coordinate_q_widths * w * margin_scale;
  return make_grid(p_min, p_max, -p_max - m, -p_min + m, n);
}

inline Grid momentum_window(std::size_t n, double margin_scale = 1.0) {
  return make_grid(-momentum_nu_half_width * margin_scale, momentum_nu_half_width * margin_scale,
                   -momentum_pi_half_width * margin_scale, momentum_pi_half_width * margin_scale, n);
}

struct GridPolicy {
  std::size_t n = 400;
  /// Replaces the automatic window when set (n is taken from the policy, not the override).
  std::optional<Grid> window;
  bool convergence_check = true;
  double drift_tolerance = 1e-6;
};

inline AmplitudeMatrix sample_coordinate(const AtomPhotonParams &params, const Grid &grid) {
  return sample_amplitude([&](double p, double q) { return coord_amplitude(params, p, q); }, grid);
}

inline AmplitudeMatrix sample_momentum(const AtomPhotonParams &params, const Grid &grid) {
  return sample_amplitude([&](double nu, double pi) { return momentum_amplitude(params, nu, pi); }, grid);
}

/// Largest |lambda_k - lambda'_k| between two weight spectra (shorter one padded with zeros).
inline double spectrum_drift(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

inline std::vector<double> spectrum_of(const AmplitudeMatrix &m) {
  return weights_from_singular_values(singular_values(normalize(m).entries()));
}

/// Result of sampling a model on its window and decomposing it.
struct ModelDecomposition {
  AmplitudeMatrix matrix;
  SchmidtResult result;
  /// Spectrum drift against the enlarged window at the same node spacing (when checked).
  std::optional<double> window_drift;
};

namespace detail {

/// n' so that (n' - 1) = scale (n - 1), keeping the node spacing.
inline std::size_t scaled_points(std::size_t n, double scale) {
  return static_cast<std::size_t>(std::llround(scale * static_cast<double>(n - 1))) + 1;
}

template <class AutoWindow>
Grid policy_grid(const GridPolicy &policy, AutoWindow &&automatic) {
  if (!policy.window) return automatic();
  const Grid &w = *policy.window;
  return make_grid(w.p_min, w.p_max, w.q_min, w.q_max, policy.n);
}

template <class Sampler>
std::optional<double> window_check(const GridPolicy &policy, const std::vector<double> &base, Sampler &&sample_scaled,
                                   const char *what) {
  if (!policy.convergence_check || policy.window) return std::nullopt;
  const double drift = spectrum_drift(base, sample_scaled());
  if (drift > policy.drift_tolerance)
    throw ConvergenceError(std::string(what) + " window does not capture the amplitude: spectrum drift " +
                           std::to_string(drift) + " exceeds " + std::to_string(policy.drift_tolerance) +
                           " when the margins are enlarged");
  return drift;
}

} // namespace detail

/// Coordinate-model weights only; cheaper than a full decomposition (no modes).
inline std::vector<double> coordinate_spectrum(const AtomPhotonParams &params, const GridPolicy &policy,
                                               std::optional<double> *drift = nullptr) {
  params.validate();
  const Grid grid = detail::policy_grid(policy, [&] { return coordinate_window(params, policy.n); });
  auto base = spectrum_of(sample_coordinate(params, grid));
  auto d = detail::window_check(
      policy, base,
      [&] {
        return spectrum_of(
            sample_coordinate(params, coordinate_window(params, detail::scaled_points(policy.n, 1.5), 1.5)));
      },
      "coordinate");
  if (drift) *drift = d;
  return base;
}

inline ModelDecomposition decompose_coordinate(const AtomPhotonParams &params, const GridPolicy &policy,
                                               const DecompositionOptions &opts = {}) {
  params.validate();
  const Grid grid = detail::policy_grid(policy, [&] { return coordinate_window(params, policy.n); });
  auto m = normalize(sample_coordinate(params, grid));
  auto result = schmidt_decompose(m, opts);
  auto base = weights_from_singular_values(
      Eigen::Map<const RealVector>(result.singular_values.data(), static_cast<Eigen::Index>(result.rank())));
  auto drift = detail::window_check(
      policy, base,
      [&] {
        return spectrum_of(
            sample_coordinate(params, coordinate_window(params, detail::scaled_points(policy.n, 1.5), 1.5)));
      },
      "coordinate");
  return ModelDecomposition{std::move(m), std::move(result), drift};
}

inline ModelDecomposition decompose_momentum(const AtomPhotonParams &params, const GridPolicy &policy,
                                             const DecompositionOptions &opts = {}) {
  params.validate();
  const Grid grid = detail::policy_grid(policy, [&] { return momentum_window(policy.n); });
  auto m = normalize(sample_momentum(params, grid));
  auto result = schmidt_decompose(m, opts);
  auto base = weights_from_singular_values(
      Eigen::Map<const RealVector>(result.singular_values.data(), static_cast<Eigen::Index>(result.rank())));
  auto drift = detail::window_check(
      policy, base,
      [&] { return spectrum_of(sample_momentum(params, momentum_window(detail::scaled_points(policy.n, 2.0), 2.0))); },
      "momentum");
  return ModelDecomposition{std::move(m), std::move(result), drift};
}

struct DynamicsPoint {
  double tau = 0.0;
  double k0 = 1.0;
  double s0 = 0.0;
  double schmidt_number = 1.0;
  double entropy = 0.0;
  /// Composite weights: the initial-state population followed by the scaled fine-structure spectrum.
  std::vector<double> lambdas;
  std::optional<double> window_drift;
};

/// Composite spectrum {lambda_e} U {lambda_g mu_k}, mu_k the coordinate-model weights at tau.
inline std::vector<double> composite_weights(double tau, std::span<const double> fine) {
  const auto [le, lg] = population_weights(tau);
  std::vector<double> w;
  w.reserve(fine.size() + 1);
  w.push_back(le);
  for (double mu : fine) w.push_back(lg * mu);
  double total = 0.0;
  for (double x : w) total += x;
  for (double &x : w) x /= total;
  return w;
}

inline DynamicsPoint full_dynamics(const AtomPhotonParams &params, const GridPolicy &policy,
                                   DynamicsConvention c = DynamicsConvention::printed) {
  std::optional<double> drift;
  const auto fine = coordinate_spectrum(params, policy, &drift);
  DynamicsPoint pt;
  pt.tau = params.tau;
  const auto z = zero_order_dynamics(params.tau, c);
  pt.k0 = z.schmidt_number;
  pt.s0 = z.entropy;
  pt.lambdas = composite_weights(params.tau, fine);
  const auto m = detail::measures(pt.lambdas, c);
  pt.schmidt_number = m.schmidt_number;
  pt.entropy = m.entropy;
  pt.window_drift = drift;
  return pt;
}

} // namespace schmidt::atom_photon
