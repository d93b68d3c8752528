#pragma once

// Batch runs behind the command-line front end. Each run returns its JSON
// summary and output files in memory; writing them out is a separate step so
// the same run can be compared byte for byte.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "schmidt_lab/atom_photon.hpp"
#include "schmidt_lab/error.hpp"
#include "schmidt_lab/io.hpp"
#include "schmidt_lab/polarization.hpp"
#include "schmidt_lab/schmidt.hpp"
#include "schmidt_lab/spdc.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt::runs {

using io::json;

inline constexpr int schema_version = 1;

enum class Command {
  atom_photon_coord,
  atom_photon_momentum,
  atom_photon_dynamics,
  spdc,
  spdc_length_sweep,
  decompose,
};

inline const std::map<std::string, Command> &command_names() {
  static const std::map<std::string, Command> names{
      {"atom-photon-coord", Command::atom_photon_coord},
      {"atom-photon-momentum", Command::atom_photon_momentum},
      {"atom-photon-dynamics", Command::atom_photon_dynamics},
      {"spdc", Command::spdc},
      {"spdc-length-sweep", Command::spdc_length_sweep},
      {"decompose", Command::decompose},
  };
  return names;
}

inline std::string command_name(Command c) {
  for (const auto &[k, v] : command_names())
    if (v == c) return k;
  return "?";
}

inline Command parse_command(const std::string &s) {
  const auto it = command_names().find(s);
  if (it == command_names().end()) throw DomainError("unknown command '" + s + "'");
  return it->second;
}

enum class Format { json_summary, csv_spectrum, csv_modes, csv_sweep };

inline Format parse_format(const std::string &s) {
  if (s == "json-summary") return Format::json_summary;
  if (s == "csv-spectrum") return Format::csv_spectrum;
  if (s == "csv-modes") return Format::csv_modes;
  if (s == "csv-sweep") return Format::csv_sweep;
  throw DomainError("unknown output format '" + s + "'");
}

struct RunConfig {
  Command command = Command::spdc;
  std::optional<int> preset;

  // Atom-photon models.
  double xi0 = 100.0;
  double eta = 0.03;
  double tau = 10.0;
  std::vector<double> taus;
  double strictness = 3.0;
  atom_photon::DynamicsConvention convention = atom_photon::DynamicsConvention::printed;

  // SPDC.
  double length_mm = 0.5;
  double sigma = 10.0;
  double d_o = spdc::default_d_o;
  double d_e = spdc::default_d_e;
  std::vector<double> lengths;

  // Discretization and decomposition.
  std::optional<std::size_t> n;
  std::optional<Grid> window; ///< n inside is ignored
  DecompositionOptions decomposition;
  bool convergence_check = true;
  std::size_t modes = 0; ///< 0: command default

  std::string input_file;
  std::set<Format> formats; ///< empty: everything the command produces
  unsigned jobs = 1;

  bool wants(Format f) const { return formats.empty() || formats.count(f) != 0; }
};

/// Inclusive arithmetic range start, start + step, ... <= stop.
inline std::vector<double> arithmetic_range(double start, double stop, double step) {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || !(step > 0.0) || stop < start)
    throw DomainError("range requires start <= stop and a positive step");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

/// Figure presets. Each sets the command and exactly the parameters in the figure caption.
inline void apply_preset(int fig, RunConfig &c) {
  c.preset = fig;
  switch (fig) {
  case 1:
    c.command = Command::atom_photon_coord;
    c.xi0 = 100.0, c.eta = 0.03, c.tau = 10.0, c.n = 800;
    break;
  case 2:
    c.command = Command::atom_photon_dynamics;
    c.xi0 = 100.0, c.eta = 0.03, c.taus = arithmetic_range(0.25, 10.0, 0.25), c.n = 400;
    break;
  case 3:
    c.command = Command::atom_photon_momentum;
    c.xi0 = 100.0, c.eta = 0.03, c.n = 800;
    break;
  case 4:
    c.command = Command::spdc_length_sweep;
    c.sigma = 10.0, c.lengths = arithmetic_range(0.25, 4.0, 0.25);
    break;
  case 5:
    c.command = Command::spdc;
    c.length_mm = 0.5, c.sigma = 10.0, c.n = 512;
    break;
  case 6:
    c.command = Command::spdc;
    c.length_mm = 4.0, c.sigma = 10.0;
    break;
  default: throw DomainError("figure presets are --fig1 .. --fig6");
  }
}

struct RunOutput {
  json summary;
  /// File name (relative to the output directory) -> content, in emission order.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads; results keep input order.
template <class Fn>
auto parallel_map(std::size_t count, unsigned jobs, Fn &&fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < count; i += workers) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto &s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Summary fragments.

namespace detail {

inline json grid_json(const Grid &g) {
  return json{{"p_min", g.p_min}, {"p_max", g.p_max}, {"q_min", g.q_min}, {"q_max", g.q_max}, {"n", g.n}};
}

inline json options_json(const DecompositionOptions &o) {
  return json{{"route", o.route == Route::direct_svd ? "svd" : "gram"},
              {"gauge", o.gauge == Gauge::largest_real_positive ? "largest" : "none"},
              {"truncation_relative_threshold", o.truncation_relative_threshold},
              {"regularization_epsilon", o.regularization_epsilon}};
}

inline json schmidt_json(const SchmidtResult &r) {
  json top = json::array();
  for (std::size_t k = 0; k < std::min<std::size_t>(32, r.rank()); ++k) top.push_back(r.lambdas[k]);
  return json{{"rank", r.rank()},
              {"lambdas_top32", top},
              {"schmidt_number", r.schmidt_number},
              {"entropy_bits", r.entropy},
              {"untruncated_schmidt_number", r.untruncated_schmidt_number},
              {"untruncated_entropy_bits", r.untruncated_entropy},
              {"discarded_weight", r.discarded_weight},
              {"reconstruction_error", r.reconstruction_error}};
}

inline std::string spectrum_csv(const SchmidtResult &r) {
  io::CsvTable t({"k", "lambda_k", "cumulative_weight"});
  double cum = 0.0;
  for (std::size_t k = 0; k < r.rank(); ++k) {
    cum += r.lambdas[k];
    t.add_row({static_cast<double>(k + 1), r.lambdas[k], cum});
  }
  return t.str();
}

/// coordinate, mode1_re, mode1_im, ... for the first r columns.
inline std::string modes_csv(const std::vector<double> &coords, const Matrix &modes, std::size_t r,
                             const std::string &coord_name) {
  r = std::min<std::size_t>(r, static_cast<std::size_t>(modes.cols()));
  std::vector<std::string> header{coord_name};
  for (std::size_t k = 1; k <= r; ++k) {
    header.push_back("mode" + std::to_string(k) + "_re");
    header.push_back("mode" + std::to_string(k) + "_im");
  }
  io::CsvTable t(std::move(header));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    std::vector<double> row{coords[j]};
    for (std::size_t k = 0; k < r; ++k) {
      const cplx v = modes(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      row.push_back(v.real());
      row.push_back(v.imag());
    }
    t.add_row(row);
  }
  return t.str();
}

inline std::string densities_csv(const std::vector<double> &coords, const Matrix &modes, std::size_t r,
                                 const std::string &coord_name) {
  r = std::min<std::size_t>(r, static_cast<std::size_t>(modes.cols()));
  std::vector<std::string> header{coord_name};
  for (std::size_t k = 1; k <= r; ++k) header.push_back("density" + std::to_string(k));
  io::CsvTable t(std::move(header));
  for (std::size_t j = 0; j < coords.size(); ++j) {
    std::vector<double> row{coords[j]};
    for (std::size_t k = 0; k < r; ++k)
      row.push_back(std::norm(modes(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))));
    t.add_row(row);
  }
  return t.str();
}

inline json validity_json(const atom_photon::ValidityReport &v) {
  return json{{"eta_lower", v.eta_lower},   {"eta_upper", v.eta_upper}, {"packet_ratio", v.packet_ratio},
              {"strictness", v.strictness}, {"satisfied", v.satisfied}, {"marginal", v.marginal},
              {"messages", v.messages}};
}

inline json base_summary(const RunConfig &c) {
  json s;
  s["schema"] = schema_version;
  s["command"] = command_name(c.command);
  s["preset"] = c.preset ? json("fig" + std::to_string(*c.preset)) : json(nullptr);
  return s;
}

inline std::size_t default_points(const RunConfig &c, std::size_t fallback) { return c.n ? *c.n : fallback; }

inline atom_photon::GridPolicy policy_for(const RunConfig &c, std::size_t n) {
  atom_photon::GridPolicy p;
  p.n = n;
  p.window = c.window;
  p.convergence_check = c.convergence_check;
  return p;
}

inline void add_modes(RunOutput &out, const RunConfig &c, const SchmidtResult &r, const Grid &g,
                      std::size_t default_modes, const std::string &p_name, const std::string &q_name,
                      const std::string &p_file, const std::string &q_file) {
  if (!c.wants(Format::csv_modes)) return;
  const std::size_t m = c.modes ? c.modes : default_modes;
  out.files.emplace_back(p_file, modes_csv(g.p_nodes(), r.modes_p, m, p_name));
  out.files.emplace_back(q_file, modes_csv(g.q_nodes(), r.modes_q, m, q_name));
}

inline void finish(RunOutput &out, const RunConfig &c) {
  if (c.wants(Format::json_summary)) out.files.insert(out.files.begin(), {"summary.json", io::to_json_text(out.summary)});
}

inline atom_photon::AtomPhotonParams atom_params(const RunConfig &c) {
  return atom_photon::make_params(c.xi0, c.eta, c.tau);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Runs.

inline RunOutput run_atom_photon_coord(const RunConfig &c) {
  const auto params = detail::atom_params(c);
  const auto policy = detail::policy_for(c, detail::default_points(c, 400));
  const auto dec = atom_photon::decompose_coordinate(params, policy, c.decomposition);
  const auto &r = dec.result;
  const Grid &g = dec.matrix.grid();

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"xi0", params.xi0}, {"eta", params.eta}, {"tau", params.tau},
                         {"eta_opt", atom_photon::eta_opt(params.xi0, params.tau)}};
  s["validity"] = detail::validity_json(atom_photon::validity_check(params, c.strictness));
  s["grid"] = detail::grid_json(g);
  s["decomposition"] = detail::options_json(c.decomposition);
  s["results"] = detail::schmidt_json(r);
  s["asymptotics"] = json{{"K_inf", atom_photon::asymptotics(params.eta).schmidt_number},
                          {"S_inf_bits", atom_photon::asymptotics(params.eta).entropy}};
  s["grid_convergence"] = json{{"window_spectrum_drift", dec.window_drift ? json(*dec.window_drift) : json(nullptr)}};

  // |<laguerre_k | mode_j>| for k = 0..4 and the first five numerical modes.
  const auto nodes = g.p_nodes();
  const std::size_t cols = std::min<std::size_t>(5, r.rank());
  std::vector<std::string> header{"laguerre_k"};
  for (std::size_t j = 1; j <= cols; ++j) header.push_back("mode" + std::to_string(j));
  io::CsvTable overlaps(header);
  json table = json::array();
  for (int k = 0; k < 5; ++k) {
    const Vector lag = atom_photon::laguerre_mode(k, params.tau, nodes);
    std::vector<double> row{static_cast<double>(k)};
    for (std::size_t j = 0; j < cols; ++j) row.push_back(std::abs(mode_overlap(lag, r.mode_p(j))));
    table.push_back(json(std::vector<double>(row.begin() + 1, row.end())));
    overlaps.add_row(row);
  }
  s["laguerre_overlap"] = table;

  if (c.wants(Format::csv_spectrum)) out.files.emplace_back("spectrum.csv", detail::spectrum_csv(r));
  detail::add_modes(out, c, r, g, 3, "p", "q", "modes_p.csv", "modes_q.csv");
  if (c.wants(Format::csv_modes)) out.files.emplace_back("laguerre_overlap.csv", overlaps.str());
  detail::finish(out, c);
  return out;
}

inline RunOutput run_atom_photon_momentum(const RunConfig &c) {
  const auto params = detail::atom_params(c);
  const auto policy = detail::policy_for(c, detail::default_points(c, 400));
  const auto dec = atom_photon::decompose_momentum(params, policy, c.decomposition);
  const auto &r = dec.result;
  const Grid &g = dec.matrix.grid();
  const auto asym = atom_photon::asymptotics(params.eta);

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"xi0", params.xi0}, {"eta", params.eta}};
  s["validity"] = detail::validity_json(atom_photon::validity_check(params, c.strictness));
  s["grid"] = detail::grid_json(g);
  s["decomposition"] = detail::options_json(c.decomposition);
  s["results"] = detail::schmidt_json(r);
  s["asymptotics"] = json{{"K_inf", asym.schmidt_number},
                          {"S_inf_bits", asym.entropy},
                          {"K_minus_1_over_eta_squared", (r.schmidt_number - 1.0) / (params.eta * params.eta)}};
  s["grid_convergence"] = json{{"window_spectrum_drift", dec.window_drift ? json(*dec.window_drift) : json(nullptr)}};

  if (c.wants(Format::csv_spectrum)) out.files.emplace_back("spectrum.csv", detail::spectrum_csv(r));
  detail::add_modes(out, c, r, g, 2, "nu_ph", "pi_a", "modes_photon.csv", "modes_atom.csv");
  if (c.wants(Format::csv_modes)) {
    const std::size_t m = c.modes ? c.modes : 2;
    out.files.emplace_back("densities_photon.csv", detail::densities_csv(g.p_nodes(), r.modes_p, m, "nu_ph"));
    out.files.emplace_back("densities_atom.csv", detail::densities_csv(g.q_nodes(), r.modes_q, m, "pi_a"));
  }
  detail::finish(out, c);
  return out;
}

inline RunOutput run_atom_photon_dynamics(const RunConfig &c) {
  const std::vector<double> taus = c.taus.empty() ? std::vector<double>{c.tau} : c.taus;
  for (double t : taus) atom_photon::make_params(c.xi0, c.eta, t);
  const auto policy = detail::policy_for(c, detail::default_points(c, 400));
  const auto points = parallel_map(taus.size(), c.jobs, [&](std::size_t i) {
    return atom_photon::full_dynamics(atom_photon::make_params(c.xi0, c.eta, taus[i]), policy, c.convention);
  });

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"xi0", c.xi0},
                         {"eta", c.eta},
                         {"taus", taus},
                         {"convention", c.convention == atom_photon::DynamicsConvention::printed ? "printed" : "weights"},
                         {"n", policy.n}};
  s["decomposition"] = detail::options_json(c.decomposition);
  io::CsvTable t({"tau", "K0", "S0", "K", "S", "K_minus_K0", "S_minus_S0"});
  double max_dk = 0.0;
  double max_ds = 0.0;
  double max_drift = 0.0;
  for (const auto &p : points) {
    t.add_row({p.tau, p.k0, p.s0, p.schmidt_number, p.entropy, p.schmidt_number - p.k0, p.entropy - p.s0});
    max_dk = std::max(max_dk, std::abs(p.schmidt_number - p.k0));
    max_ds = std::max(max_ds, std::abs(p.entropy - p.s0));
    if (p.window_drift) max_drift = std::max(max_drift, *p.window_drift);
  }
  const auto &last = points.back();
  const auto asym = atom_photon::asymptotics(c.eta);
  s["results"] = json{{"max_abs_K_minus_K0", max_dk},
                      {"max_abs_S_minus_S0", max_ds},
                      {"final_tau", last.tau},
                      {"final_K", last.schmidt_number},
                      {"final_S_bits", last.entropy},
                      {"K_inf", asym.schmidt_number},
                      {"S_inf_bits", asym.entropy}};
  s["grid_convergence"] = json{{"max_window_spectrum_drift", c.convergence_check ? json(max_drift) : json(nullptr)}};
  if (c.wants(Format::csv_sweep)) out.files.emplace_back("dynamics.csv", t.str());
  detail::finish(out, c);
  return out;
}

namespace detail {

struct SpdcPoint {
  spdc::SpdcParams params;
  std::size_t n;
  double f;
  double k;
  double s;
};

/// F, K and S from singular values only (no modes).
inline SpdcPoint spdc_measures(const spdc::SpdcParams &p, std::size_t n, const Grid &grid) {
  spdc::check_resolution(p, grid);
  const auto m = normalize(spdc::sample_biphoton(p, grid));
  const auto w = weights_from_singular_values(singular_values(m.entries()));
  return SpdcPoint{p, n, polarization::coherence(m).real(), schmidt_number(w), entanglement_entropy(w)};
}

inline Grid spdc_grid(const RunConfig &c, std::size_t n) {
  if (!c.window) return spdc::spdc_window(n);
  return make_grid(c.window->p_min, c.window->p_max, c.window->q_min, c.window->q_max, n);
}

} // namespace detail

inline RunOutput run_spdc(const RunConfig &c) {
  const auto params = spdc::spdc_params(c.length_mm, c.sigma, c.d_o, c.d_e);
  const std::size_t n = c.n ? *c.n : spdc::auto_points(params);
  const auto dec = spdc::decompose_biphoton(params, n, c.decomposition, c.window);
  const auto &r = dec.result;
  const Grid &g = dec.matrix.grid();
  const auto report = polarization::coherence_report(dec.matrix, r);
  const auto diag = polarization::density_matrix_checks(report.density.rho);

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"L_mm", params.length_mm}, {"sigma_per_ps", params.sigma_per_ps}, {"d_o_ps_per_mm", params.d_o},
                         {"d_e_ps_per_mm", params.d_e}, {"X_o", params.x_o},          {"X_e", params.x_e}};
  s["grid"] = detail::grid_json(g);
  s["decomposition"] = detail::options_json(c.decomposition);
  s["results"] = detail::schmidt_json(r);
  s["results"]["captured_weight_first_8"] = captured_weight(r, 8);

  json rho = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(json::array({report.density.rho(i, j).real(), report.density.rho(i, j).imag()}));
    rho.push_back(row);
  }
  json basis = json::array();
  for (auto b : polarization::basis_labels) basis.push_back(std::string(b));
  s["polarization"] = json{{"F_re", report.f.real()},
                           {"F_im", report.f.imag()},
                           {"imaginary_part_significant", report.imaginary_part_significant},
                           {"basis", basis},
                           {"rho_re_im", rho},
                           {"mixture", json::array({json{{"state", "(HV+VH)/sqrt2"}, {"weight", report.weight_plus}},
                                                    json{{"state", "(HV-VH)/sqrt2"}, {"weight", report.weight_minus}}})},
                           {"purity", diag.purity},
                           {"min_eigenvalue", diag.min_eigenvalue}};

  if (c.convergence_check) {
    // Same window at twice the resolution, and the doubled window at the same spacing.
    const std::size_t n2 = 2 * n - 1;
    const auto refined = detail::spdc_measures(params, n2, detail::spdc_grid(c, n2));
    Grid wide = g;
    wide.p_min *= 2, wide.p_max *= 2, wide.q_min *= 2, wide.q_max *= 2, wide.n = n2;
    const auto widened = detail::spdc_measures(params, n2, wide);
    auto deltas = [&](const detail::SpdcPoint &p) {
      return json{{"n", p.n},
                  {"delta_F", p.f - report.f.real()},
                  {"delta_K", p.k - r.untruncated_schmidt_number},
                  {"delta_S", p.s - r.untruncated_entropy}};
    };
    s["grid_convergence"] = json{{"refined", deltas(refined)}, {"window_doubled", deltas(widened)}};
  } else {
    s["grid_convergence"] = nullptr;
  }

  if (c.wants(Format::csv_spectrum)) out.files.emplace_back("spectrum.csv", detail::spectrum_csv(r));
  detail::add_modes(out, c, r, g, 4, "p", "q", "modes_ordinary.csv", "modes_extraordinary.csv");
  detail::finish(out, c);
  return out;
}

inline RunOutput run_spdc_length_sweep(const RunConfig &c) {
  const std::vector<double> lengths = c.lengths.empty() ? std::vector<double>{c.length_mm} : c.lengths;
  std::vector<spdc::SpdcParams> params;
  for (double l : lengths) params.push_back(spdc::spdc_params(l, c.sigma, c.d_o, c.d_e));
  const auto points = parallel_map(params.size(), c.jobs, [&](std::size_t i) {
    const std::size_t n = c.n ? *c.n : spdc::auto_points(params[i]);
    return detail::spdc_measures(params[i], n, detail::spdc_grid(c, n));
  });

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"sigma_per_ps", c.sigma}, {"d_o_ps_per_mm", c.d_o}, {"d_e_ps_per_mm", c.d_e}, {"L_mm", lengths}};
  s["note"] = "results depend on L and sigma only through the product L*sigma; rescale L for another sigma";
  io::CsvTable t({"L", "X_o", "X_e", "F", "K", "S"});
  json rows = json::array();
  for (const auto &p : points) {
    t.add_row({p.params.length_mm, p.params.x_o, p.params.x_e, p.f, p.k, p.s});
    rows.push_back(json{{"L_mm", p.params.length_mm}, {"n", p.n}, {"F", p.f}, {"K", p.k}, {"S_bits", p.s}});
  }
  s["results"] = rows;
  if (c.wants(Format::csv_sweep)) out.files.emplace_back("spdc_length_sweep.csv", t.str());
  detail::finish(out, c);
  return out;
}

inline RunOutput run_generic_schmidt(const RunConfig &c) {
  if (c.input_file.empty()) throw DomainError("decompose requires an input matrix file");
  Matrix m = io::parse_matrix_file(c.input_file);
  const auto n = static_cast<std::size_t>(m.rows());
  if (n < 2) throw DomainError("decompose requires at least a 2x2 matrix");
  const Grid g = make_grid(0.0, static_cast<double>(n - 1), 0.0, static_cast<double>(n - 1), n);
  const auto a = normalize(AmplitudeMatrix(g, std::move(m)));
  const auto r = schmidt_decompose(a, c.decomposition);

  RunOutput out;
  auto &s = out.summary = detail::base_summary(c);
  s["parameters"] = json{{"input", std::filesystem::path(c.input_file).filename().string()}, {"n", n}};
  s["decomposition"] = detail::options_json(c.decomposition);
  s["results"] = detail::schmidt_json(r);
  if (c.wants(Format::csv_spectrum)) out.files.emplace_back("spectrum.csv", detail::spectrum_csv(r));
  detail::add_modes(out, c, r, g, 4, "index", "index", "modes_p.csv", "modes_q.csv");
  detail::finish(out, c);
  return out;
}

inline RunOutput run(const RunConfig &c) {
  switch (c.command) {
  case Command::atom_photon_coord: return run_atom_photon_coord(c);
  case Command::atom_photon_momentum: return run_atom_photon_momentum(c);
  case Command::atom_photon_dynamics: return run_atom_photon_dynamics(c);
  case Command::spdc: return run_spdc(c);
  case Command::spdc_length_sweep: return run_spdc_length_sweep(c);
  case Command::decompose: return run_generic_schmidt(c);
  }
  throw DomainError("unhandled command");
}

inline void write_output(const RunOutput &out, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  for (const auto &[name, content] : out.files) io::write_file((dir / name).string(), content);
}

/// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_convergence_failure = 3;
inline constexpr int exit_parse_failure = 4;

} // namespace schmidt::runs
