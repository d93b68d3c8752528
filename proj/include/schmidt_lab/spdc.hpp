#pragma once

// Type-II collinear, frequency-degenerate SPDC biphoton amplitude
//
//   psi(p, q) = exp(-(p + q)^2) * sinc(0.5 (X_o p + X_e q))
//
// with p, q the ordinary/extraordinary detunings in units of the pump
// bandwidth sigma and X_{o,e} = (k'_p - k'_{o,e}) L sigma.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "schmidt_lab/error.hpp"
#include "schmidt_lab/schmidt.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt::spdc {

/// Group-delay mismatch per crystal length, ps/mm.
inline constexpr double default_d_o = 0.076;
inline constexpr double default_d_e = 0.266;

struct SpdcParams {
  double length_mm = 1.0;
  double sigma_per_ps = 10.0;
  double d_o = default_d_o;
  double d_e = default_d_e;
  double x_o = 0.0;
  double x_e = 0.0;
};

inline SpdcParams spdc_params(double length_mm, double sigma_per_ps, double d_o = default_d_o,
                              double d_e = default_d_e) {
  if (!std::isfinite(length_mm) || !(length_mm > 0.0)) throw DomainError("crystal length must be positive");
  if (!std::isfinite(sigma_per_ps) || !(sigma_per_ps > 0.0)) throw DomainError("pump bandwidth must be positive");
  if (!std::isfinite(d_o) || !std::isfinite(d_e)) throw DomainError("group delays must be finite");
  // L * sigma first: results depend on the pair only through this product.
  const double ls = length_mm * sigma_per_ps;
  return SpdcParams{length_mm, sigma_per_ps, d_o, d_e, d_o * ls, d_e * ls};
}

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

inline double pump_envelope(double p, double q) {
  const double s = p + q;
  return std::exp(-s * s);
}

inline double phase_matching(double x_o, double x_e, double p, double q) {
  return sinc(0.5 * (x_o * p + x_e * q));
}

inline double biphoton_amplitude(const SpdcParams &params, double p, double q) {
  return pump_envelope(p, q) * phase_matching(params.x_o, params.x_e, p, q);
}

/// Default half-width of the square detuning window, in units of sigma.
inline constexpr double default_half_width = 30.0;
inline constexpr std::size_t default_points = 512;
/// Largest sinc phase advance allowed between neighbouring nodes.
inline constexpr double max_phase_step = std::numbers::pi / 8.0;

inline Grid spdc_window(std::size_t n, double half_width = default_half_width) {
  if (!(half_width > 0.0)) throw DomainError("window half-width must be positive");
  return make_grid(-half_width, half_width, -half_width, half_width, n);
}

/// Sinc phase advance per grid step along the faster axis.
inline double phase_step(const SpdcParams &params, const Grid &grid) {
  return 0.5 * std::max(std::abs(params.x_o) * grid.dp(), std::abs(params.x_e) * grid.dq());
}

/// Smallest n resolving the sinc oscillation on a window of the given half-width.
inline std::size_t required_points(const SpdcParams &params, double half_width = default_half_width) {
  const double fastest = 0.5 * std::max(std::abs(params.x_o), std::abs(params.x_e));
  const double steps = fastest * 2.0 * half_width / max_phase_step;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(steps - 1e-9)) + 1);
}

/// n used when the caller does not pin one: at least 512, rounded up to a multiple of 64.
inline std::size_t auto_points(const SpdcParams &params, double half_width = default_half_width) {
  const std::size_t need = required_points(params, half_width);
  const std::size_t rounded = (need + 63) / 64 * 64;
  return std::max(default_points, rounded);
}

inline void check_resolution(const SpdcParams &params, const Grid &grid) {
  const double step = phase_step(params, grid);
  if (step > max_phase_step * (1.0 + 1e-12)) {
    const double half = 0.5 * std::max(grid.p_max - grid.p_min, grid.q_max - grid.q_min);
    throw ConvergenceError("sinc oscillation under-resolved (phase step " + std::to_string(step) +
                           " > pi/8); use n >= " + std::to_string(required_points(params, half)));
  }
}

inline AmplitudeMatrix sample_biphoton(const SpdcParams &params, const Grid &grid) {
  return sample_amplitude([&](double p, double q) { return biphoton_amplitude(params, p, q); }, grid);
}

struct SpdcDecomposition {
  AmplitudeMatrix matrix;
  SchmidtResult result;
};

/// Samples, resolution-checks, normalizes and decomposes. n defaults to auto_points().
inline SpdcDecomposition decompose_biphoton(const SpdcParams &params, std::optional<std::size_t> n = std::nullopt,
                                            const DecompositionOptions &opts = {},
                                            std::optional<Grid> window = std::nullopt) {
  const std::size_t points = n ? *n : auto_points(params);
  const Grid grid = window ? make_grid(window->p_min, window->p_max, window->q_min, window->q_max, points)
                           : spdc_window(points);
  check_resolution(params, grid);
  auto m = normalize(sample_biphoton(params, grid));
  auto r = schmidt_decompose(m, opts);
  return SpdcDecomposition{std::move(m), std::move(r)};
}

} // namespace schmidt::spdc
