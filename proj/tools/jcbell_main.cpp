// jcbell: CHSH nonlocality, entanglement and asymptotics of a two-level atom
// coupled to a single cavity mode under resonant Jaynes-Cummings dynamics.
//
// Subcommands:
//   sweep       time series of bell / bell_lower / entropy / ppt_min columns
//   bell        maximal CHSH value for one state at one time
//   asymptotic  closed-form t->infinity report, including the coherent-state
//               entanglement witness
//   curve       exact (entropy, bell) relation over the Schmidt angle
//
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "jcbell/entanglement.hpp"
#include "jcbell/errors.hpp"
#include "jcbell/sweep.hpp"

namespace {

using namespace jcbell;

struct CommonFlags {
  std::string config_path;
  std::string field;
  std::string atom;
  double lambda_bar = -1.0;
  double sigma = -1.0;
  int quad_order = -1;
  int coarse_steps = -1;
  int refine_iters = -1;
  double refine_tol = -1.0;
  int max_dim = -1;
  double tail_tol = -1.0;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--config", flags->config_path, "JSON experiment config");
  cmd->add_option("--field", flags->field,
                  "field spec: fock:k | smsv:r,theta | coherent:re,im");
  cmd->add_option("--atom", flags->atom, "atom spec: g | e | g:RE[,IM];e:RE[,IM]");
  cmd->add_option("--lambda-bar", flags->lambda_bar, "mean coupling");
  cmd->add_option("--sigma", flags->sigma, "coupling noise std deviation");
  cmd->add_option("--quad-order", flags->quad_order, "Gauss-Hermite order");
  cmd->add_option("--coarse-steps", flags->coarse_steps, "scan grid per angle");
  cmd->add_option("--refine-iters", flags->refine_iters, "Nelder-Mead iterations");
  cmd->add_option("--refine-tol", flags->refine_tol, "Nelder-Mead tolerance");
  cmd->add_option("--max-dim", flags->max_dim, "Fock truncation limit");
  cmd->add_option("--tail-tol", flags->tail_tol, "allowed truncated tail mass");
}

Complex parse_complex_pair(const std::string& text, const std::string& where) {
  std::stringstream ss(text);
  std::string item;
  std::vector<double> vals;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      vals.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(where + ": bad numeric component '" + item + "'");
    }
  }
  if (vals.empty() || vals.size() > 2)
    throw ConfigError(where + ": expected RE or RE,IM");
  return Complex(vals[0], vals.size() == 2 ? vals[1] : 0.0);
}

void apply_atom_spec(const std::string& text, InitialStateSpec* spec) {
  if (text == "g") {
    spec->weight_g = 1.0;
    spec->weight_e = 0.0;
    return;
  }
  if (text == "e") {
    spec->weight_g = 0.0;
    spec->weight_e = 1.0;
    return;
  }
  // superposition form g:RE[,IM];e:RE[,IM]
  spec->weight_g = 0.0;
  spec->weight_e = 0.0;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    if (part.rfind("g:", 0) == 0)
      spec->weight_g = parse_complex_pair(part.substr(2), "atom.g");
    else if (part.rfind("e:", 0) == 0)
      spec->weight_e = parse_complex_pair(part.substr(2), "atom.e");
    else
      throw ConfigError("atom: expected g, e or g:..;e:.. got '" + text + "'");
  }
}

ExperimentConfig assemble_config(const CommonFlags& flags, bool needs_grid) {
  ExperimentConfig cfg;
  bool have_state = false;
  if (!flags.config_path.empty()) {
    cfg = load_config_file(flags.config_path);
    have_state = true;
  }
  if (!flags.field.empty()) {
    cfg.initial_state.field_g = parse_field_spec(flags.field);
    cfg.initial_state.field_e = cfg.initial_state.field_g;
    if (flags.atom.empty() && !have_state) {
      cfg.initial_state.weight_g = 0.0;  // default: excited atom
      cfg.initial_state.weight_e = 1.0;
    }
    have_state = true;
  }
  if (!flags.atom.empty()) apply_atom_spec(flags.atom, &cfg.initial_state);
  if (!have_state)
    throw ConfigError("no initial state: pass --config or --field");
  if (flags.lambda_bar > 0) cfg.noise.lambda_bar = flags.lambda_bar;
  if (flags.sigma >= 0) cfg.noise.sigma = flags.sigma;
  if (flags.quad_order > 0) cfg.noise.quad_order = flags.quad_order;
  if (flags.coarse_steps > 0) cfg.scan.coarse_steps = flags.coarse_steps;
  if (flags.refine_iters >= 0) cfg.scan.refine_iters = flags.refine_iters;
  if (flags.refine_tol > 0) cfg.scan.refine_tol = flags.refine_tol;
  if (flags.max_dim > 0) cfg.truncation.max_dim = flags.max_dim;
  if (flags.tail_tol > 0) cfg.truncation.tail_tol = flags.tail_tol;
  if (needs_grid && flags.config_path.empty())
    throw ConfigError("time_grid: provide --config or grid flags");
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

int run_sweep_cmd(const CommonFlags& flags, double t0, double t1, int steps,
                  const std::string& outputs_csv, const std::string& format,
                  const std::string& out_path) {
  ExperimentConfig cfg = assemble_config(flags, /*needs_grid=*/false);
  if (flags.config_path.empty() && (std::isnan(t1) || steps <= 0))
    throw ConfigError("time_grid: pass --steps/--start/--stop or a config file");
  if (!std::isnan(t0)) cfg.time_grid.start = t0;
  if (!std::isnan(t1)) cfg.time_grid.stop = t1;
  if (steps > 0) cfg.time_grid.steps = steps;
  if (cfg.time_grid.steps < 2) throw ConfigError("time_grid.steps: must be >= 2");
  if (cfg.time_grid.start < 0) throw ConfigError("time_grid.start: must be >= 0");
  if (cfg.time_grid.stop <= cfg.time_grid.start)
    throw ConfigError("time_grid.stop: must exceed start");

  if (!outputs_csv.empty()) {
    cfg.outputs.clear();
    std::stringstream ss(outputs_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "bell")
        cfg.outputs.push_back(OutputKind::bell);
      else if (item == "bell_lower")
        cfg.outputs.push_back(OutputKind::bell_lower);
      else if (item == "entropy")
        cfg.outputs.push_back(OutputKind::entropy);
      else if (item == "ppt_min")
        cfg.outputs.push_back(OutputKind::ppt_min);
      else
        throw ConfigError("outputs: unknown column '" + item + "'");
    }
  }
  if (cfg.outputs.empty()) cfg.outputs = {OutputKind::bell};

  const EmitFormat fmt =
      format == "json" ? EmitFormat::json : EmitFormat::csv;
  if (format != "csv" && format != "json")
    throw ConfigError("format: expected csv or json");

  const auto records = run_sweep(cfg);
  if (out_path.empty() || out_path == "-") {
    emit(records, cfg.outputs, fmt, std::cout);
  } else {
    emit_to_file(records, cfg.outputs, fmt, out_path);
  }
  return 0;
}

int run_bell_cmd(const CommonFlags& flags, double t) {
  ExperimentConfig cfg = assemble_config(flags, /*needs_grid=*/false);
  const HybridPureState initial = cfg.initial_state.build(cfg.truncation);
  const HybridDensityMatrix rho = noisy_density_matrix(initial, cfg.noise, t);
  const BellResult res = bell_max_scan(rho, cfg.scan);
  const double lower = identity_lower_bound(rho);
  std::ostringstream os;
  os << "{\n"
     << "  \"t\": " << format_number(t) << ",\n"
     << "  \"bell\": " << format_number(res.value) << ",\n"
     << "  \"bell_lower\": " << format_number(lower) << ",\n"
     << "  \"euler\": [" << format_number(res.euler[0]) << ", "
     << format_number(res.euler[1]) << ", " << format_number(res.euler[2])
     << "],\n"
     << "  \"sum1\": " << format_number(res.sum1) << ",\n"
     << "  \"sum2\": " << format_number(res.sum2) << "\n}\n";
  std::cout << os.str();
  return 0;
}

int run_asymptotic_cmd(const CommonFlags& flags, bool with_bell) {
  ExperimentConfig cfg = assemble_config(flags, /*needs_grid=*/false);
  const HybridPureState initial = cfg.initial_state.build(cfg.truncation);
  const HybridDensityMatrix rho = asymptotic_density_matrix(initial);
  const double eg_norm = rho.eg.norm();
  const double ppt_min = ppt_min_eigenvalue(rho);

  std::ostringstream os;
  os << "{\n"
     << "  \"dim\": " << rho.dim() << ",\n"
     << "  \"trace\": " << format_number(rho.trace()) << ",\n"
     << "  \"rho_eg_frobenius\": " << format_number(eg_norm) << ",\n"
     << "  \"ppt_min\": " << format_number(ppt_min) << ",\n"
     << "  \"separable_blocks\": " << (eg_norm == 0.0 ? "true" : "false");
  if (with_bell) {
    const BellResult res = bell_max_scan(rho, cfg.scan);
    os << ",\n  \"bell\": " << format_number(res.value);
  }
  // The witness applies to a product state with a real coherent field.
  const InitialStateSpec& spec = cfg.initial_state;
  const bool coherent_product =
      spec.field_g.kind == FieldSpec::Kind::coherent &&
      spec.field_e.kind == FieldSpec::Kind::coherent &&
      spec.field_g.alpha == spec.field_e.alpha &&
      spec.field_g.alpha.imag() == 0.0 && spec.weight_g.imag() == 0.0 &&
      spec.weight_e.imag() == 0.0;
  if (coherent_product && spec.weight_e.real() != 0.0) {
    const auto witness =
        coherent_witness(spec.weight_g.real(), spec.weight_e.real(),
                         spec.field_g.alpha.real());
    if (witness) {
      os << ",\n  \"witness\": {\n"
         << "    \"n_star\": " << witness->n_star << ",\n"
         << "    \"mu_minus\": " << format_number(witness->mu_minus) << ",\n"
         << "    \"a11\": " << format_number(witness->a11) << ",\n"
         << "    \"a12\": " << format_number(witness->a12) << ",\n"
         << "    \"a22\": " << format_number(witness->a22) << ",\n"
         << "    \"p_of_n\": " << format_number(witness->p_of_n) << "\n  }";
    } else {
      os << ",\n  \"witness\": null";
    }
  }
  os << "\n}\n";
  std::cout << os.str();
  return 0;
}

int run_curve_cmd(int points, const std::string& out_path) {
  if (points < 2) throw ConfigError("curve: --points must be >= 2");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = 0.25 * M_PI * i / (points - 1);
  const auto curve = entropy_bell_curve(grid);
  std::ostringstream os;
  os << "theta,entropy,bell\n";
  for (int i = 0; i < points; ++i)
    os << format_number(grid[i]) << ',' << format_number(curve[i].first) << ','
       << format_number(curve[i].second) << '\n';
  write_text(out_path, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qubit-boson CHSH nonlocality under Jaynes-Cummings dynamics"};
  app.require_subcommand(1);

  CommonFlags sweep_flags;
  double t0 = NAN, t1 = NAN;
  int steps = -1;
  std::string outputs, format = "csv", out_path;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "time series over a grid");
  add_common_flags(sweep_cmd, &sweep_flags);
  sweep_cmd->add_option("--start", t0, "grid start time");
  sweep_cmd->add_option("--stop", t1, "grid stop time");
  sweep_cmd->add_option("--steps", steps, "number of grid points (>= 2)");
  sweep_cmd->add_option("--outputs", outputs,
                        "comma list of bell,bell_lower,entropy,ppt_min");
  sweep_cmd->add_option("--format", format, "csv or json");
  sweep_cmd->add_option("--out", out_path, "output path (default stdout)");

  CommonFlags bell_flags;
  double bell_t = 0.0;
  CLI::App* bell_cmd = app.add_subcommand("bell", "single state, single time");
  add_common_flags(bell_cmd, &bell_flags);
  bell_cmd->add_option("--time", bell_t, "evolution time")->required();

  CommonFlags asym_flags;
  bool asym_bell = false;
  CLI::App* asym_cmd =
      app.add_subcommand("asymptotic", "closed-form t->infinity report");
  add_common_flags(asym_cmd, &asym_flags);
  asym_cmd->add_flag("--bell", asym_bell, "also scan the asymptotic Bell value");

  int curve_points = 65;
  std::string curve_out;
  CLI::App* curve_cmd =
      app.add_subcommand("curve", "entropy vs Bell over the Schmidt angle");
  curve_cmd->add_option("--points", curve_points, "grid points on [0, pi/4]");
  curve_cmd->add_option("--out", curve_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
    if (sweep_cmd->parsed())
      return run_sweep_cmd(sweep_flags, t0, t1, steps, outputs, format, out_path);
    if (bell_cmd->parsed()) return run_bell_cmd(bell_flags, bell_t);
    if (asym_cmd->parsed()) return run_asymptotic_cmd(asym_flags, asym_bell);
    if (curve_cmd->parsed()) return run_curve_cmd(curve_points, curve_out);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
