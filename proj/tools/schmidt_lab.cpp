// schmidt_lab: Schmidt-mode analysis of atom-photon and SPDC biphoton amplitudes.
//
//   schmidt_lab <command> [options]
//   schmidt_lab --fig5 --out results/fig5
//   schmidt_lab decompose matrix.txt --out results/generic

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schmidt_lab/runs.hpp"

namespace {

using schmidt::runs::RunConfig;

/// Reads a flat JSON object whose keys mirror the long flag names.
class ConfigJSON : public CLI::Config {
public:
  std::string to_config(const CLI::App *, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception &e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must be a flat JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto &[key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto &v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

private:
  static std::string scalar(const std::string &key, const nlohmann::json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
      std::ostringstream os;
      os.precision(17);
      os << v.get<double>();
      return os.str();
    }
    throw CLI::ConversionError("config key '" + key + "' must hold scalars or an array of scalars");
  }
};

std::vector<double> parse_range(const std::string &spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception &) {
      throw schmidt::DomainError("range '" + spec + "' must be start:stop:step");
    }
  }
  if (parts.size() != 3) throw schmidt::DomainError("range '" + spec + "' must be start:stop:step");
  return schmidt::runs::arithmetic_range(parts[0], parts[1], parts[2]);
}

struct Flags {
  std::string command;
  std::string input;
  std::optional<double> xi0, eta, tau, strictness, length, sigma, d_o, d_e, trunc, epsilon;
  std::vector<double> taus, lengths, window;
  std::string tau_range, length_range;
  std::optional<std::size_t> n, modes;
  std::string gauge, route, convention;
  std::vector<std::string> formats;
  std::string out = ".";
  unsigned jobs = 1;
  bool no_convergence_check = false;
  bool fig[7] = {};
};

RunConfig resolve(const Flags &f) {
  RunConfig c;
  int preset = 0;
  for (int k = 1; k <= 6; ++k) {
    if (!f.fig[k]) continue;
    if (preset) throw schmidt::DomainError("only one figure preset may be given");
    preset = k;
  }
  if (preset) schmidt::runs::apply_preset(preset, c);
  if (!f.command.empty()) {
    const auto cmd = schmidt::runs::parse_command(f.command);
    if (preset && cmd != c.command)
      throw schmidt::DomainError("--fig" + std::to_string(preset) + " is a " + schmidt::runs::command_name(c.command) +
                                 " preset, not " + f.command);
    c.command = cmd;
  } else if (!preset) {
    throw schmidt::DomainError("a command or a figure preset is required");
  }

  if (f.xi0) c.xi0 = *f.xi0;
  if (f.eta) c.eta = *f.eta;
  if (f.tau) c.tau = *f.tau;
  if (f.strictness) c.strictness = *f.strictness;
  if (!f.taus.empty()) c.taus = f.taus;
  if (!f.tau_range.empty()) c.taus = parse_range(f.tau_range);
  if (f.length) c.length_mm = *f.length;
  if (f.sigma) c.sigma = *f.sigma;
  if (f.d_o) c.d_o = *f.d_o;
  if (f.d_e) c.d_e = *f.d_e;
  if (!f.lengths.empty()) c.lengths = f.lengths;
  if (!f.length_range.empty()) c.lengths = parse_range(f.length_range);
  if (f.n) c.n = *f.n;
  if (f.modes) c.modes = *f.modes;
  if (!f.window.empty()) {
    if (f.window.size() != 4) throw schmidt::DomainError("--window takes p_min,p_max,q_min,q_max");
    c.window = schmidt::make_grid(f.window[0], f.window[1], f.window[2], f.window[3], 2);
  }
  if (f.trunc) c.decomposition.truncation_relative_threshold = *f.trunc;
  if (f.epsilon) c.decomposition.regularization_epsilon = *f.epsilon;
  if (f.gauge == "none") c.decomposition.gauge = schmidt::Gauge::none;
  if (f.route == "gram") c.decomposition.route = schmidt::Route::gram_eigen;
  if (f.convention == "weights") c.convention = schmidt::atom_photon::DynamicsConvention::weights;
  for (const auto &fmt : f.formats) c.formats.insert(schmidt::runs::parse_format(fmt));
  c.jobs = f.jobs;
  c.convergence_check = !f.no_convergence_check;
  c.input_file = f.input;
  if (c.command == schmidt::runs::Command::decompose && c.input_file.empty())
    throw schmidt::DomainError("decompose requires an input file");
  if (c.n && *c.n < 2) throw schmidt::DomainError("--n must be at least 2");
  c.decomposition.validate();
  return c;
}

void print_brief(const nlohmann::ordered_json &s, std::ostream &os) {
  os << s["command"].get<std::string>();
  if (!s["preset"].is_null()) os << " (" << s["preset"].get<std::string>() << ")";
  os << "\n";
  const auto &r = s["results"];
  if (r.is_object() && r.contains("schmidt_number")) {
    os << "  K = " << r["schmidt_number"].get<double>() << ", S = " << r["entropy_bits"].get<double>()
       << " bits, rank " << r["rank"].get<std::size_t>() << "\n";
  }
  if (s.contains("polarization")) {
    const auto &p = s["polarization"];
    os << "  F = " << p["F_re"].get<double>() << "\n";
  }
}

} // namespace

int main(int argc, char **argv) {
  namespace runs = schmidt::runs;

  CLI::App app{"Schmidt-mode analysis of two-variable amplitudes"};
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "flat JSON file mirroring flag names; flags take precedence");

  Flags f;
  std::vector<std::string> names;
  for (const auto &[k, v] : runs::command_names()) names.push_back(k);
  app.add_option("command", f.command, "subcommand")->check(CLI::IsMember(names));
  app.add_option("input", f.input, "matrix file for the decompose command");

  app.add_option("--xi0", f.xi0, "atomic constant xi0");
  app.add_option("--eta", f.eta, "momentum-spread parameter eta");
  app.add_option("--tau", f.tau, "dimensionless time gamma*t");
  app.add_option("--taus", f.taus, "comma-separated tau list (dynamics)")->delimiter(',');
  app.add_option("--tau-range", f.tau_range, "tau range start:stop:step (dynamics)");
  app.add_option("--strictness", f.strictness, "factor used for the eta validity window");
  app.add_option("--convention", f.convention, "zero-order dynamics convention")
      ->check(CLI::IsMember({"printed", "weights"}));

  app.add_option("--L", f.length, "crystal length in mm");
  app.add_option("--lengths", f.lengths, "comma-separated crystal lengths (sweep)")->delimiter(',');
  app.add_option("--L-range", f.length_range, "length range start:stop:step in mm (sweep)");
  app.add_option("--sigma", f.sigma, "pump bandwidth in 1/ps");
  app.add_option("--d-o", f.d_o, "k'_p - k'_o per length, ps/mm");
  app.add_option("--d-e", f.d_e, "k'_p - k'_e per length, ps/mm");

  app.add_option("--n", f.n, "grid points per axis")->envname("SCHMIDT_LAB_DEFAULT_N");
  app.add_option("--window", f.window, "p_min,p_max,q_min,q_max")->delimiter(',');
  app.add_option("--trunc", f.trunc, "relative truncation threshold on lambda_k/lambda_1");
  app.add_option("--epsilon", f.epsilon, "diagonal regularization for the gram route");
  app.add_option("--gauge", f.gauge, "mode phase convention")->check(CLI::IsMember({"largest", "none"}));
  app.add_option("--route", f.route, "decomposition route")->check(CLI::IsMember({"svd", "gram"}));
  app.add_option("--modes", f.modes, "number of modes written to the mode CSVs");
  app.add_flag("--no-convergence-check", f.no_convergence_check, "skip window/refinement checks");

  app.add_option("--out", f.out, "output directory");
  app.add_option("--format", f.formats, "json-summary,csv-spectrum,csv-modes,csv-sweep")->delimiter(',');
  app.add_option("--jobs", f.jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  for (int k = 1; k <= 6; ++k)
    app.add_flag("--fig" + std::to_string(k), f.fig[k], "figure " + std::to_string(k) + " preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::Error &e) {
    app.exit(e);
    return runs::exit_config_error;
  }

  try {
    const RunConfig config = resolve(f);
    const auto start = std::chrono::steady_clock::now();
    const auto out = runs::run(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    runs::write_output(out, f.out);
    std::ofstream log(std::filesystem::path(f.out) / "run.log");
    log << "command=" << runs::command_name(config.command) << "\nwall_clock_seconds=" << seconds << "\n";
    print_brief(out.summary, std::cout);
    return runs::exit_ok;
  } catch (const schmidt::ParseError &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return runs::exit_parse_failure;
  } catch (const schmidt::ConvergenceError &e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return runs::exit_convergence_failure;
  } catch (const schmidt::DomainError &e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return runs::exit_config_error;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
