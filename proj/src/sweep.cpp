#include "jcbell/sweep.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "jcbell/entanglement.hpp"
#include "jcbell/errors.hpp"

namespace jcbell {

using nlohmann::json;

FockVector FieldSpec::build(const TruncationPolicy& policy) const {
  switch (kind) {
    case Kind::fock:
      return make_fock(k, policy);
    case Kind::smsv:
      return make_smsv(r, theta, policy);
    case Kind::coherent:
      return make_coherent(alpha, policy);
    case Kind::raw:
      return from_amps(amps);
  }
  throw ConfigError("field: unknown kind");
}

FieldSpec parse_field_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("field: expected fock:k, smsv:r,theta or coherent:re,im, got '" +
                      text + "'");
  const std::string family = text.substr(0, colon);
  const std::string args = text.substr(colon + 1);
  auto split_fields = [&](size_t expected) {
    std::vector<double> vals;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        size_t pos = 0;
        vals.push_back(std::stod(item, &pos));
        if (pos != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError("field: bad numeric component '" + item + "' in '" +
                          text + "'");
      }
    }
    if (vals.size() != expected)
      throw ConfigError("field: '" + text + "' needs " +
                        std::to_string(expected) + " numeric field(s)");
    return vals;
  };

  FieldSpec spec;
  if (family == "fock") {
    const auto v = split_fields(1);
    if (v[0] < 0 || v[0] != std::floor(v[0]))
      throw ConfigError("field: fock index must be a non-negative integer");
    spec.kind = FieldSpec::Kind::fock;
    spec.k = static_cast<int>(v[0]);
  } else if (family == "smsv") {
    const auto v = split_fields(2);
    spec.kind = FieldSpec::Kind::smsv;
    spec.r = v[0];
    spec.theta = v[1];
  } else if (family == "coherent") {
    const auto v = split_fields(2);
    spec.kind = FieldSpec::Kind::coherent;
    spec.alpha = Complex(v[0], v[1]);
  } else {
    throw ConfigError("field: unknown family '" + family + "'");
  }
  return spec;
}

HybridPureState InitialStateSpec::build(const TruncationPolicy& policy) const {
  const double w2 = std::norm(weight_g) + std::norm(weight_e);
  if (std::abs(w2 - 1.0) > 1e-9)
    throw ConfigError("initial_state: atom weights must be normalized (|g|^2+|e|^2 = " +
                      std::to_string(w2) + ")");
  FockVector fg = field_g.build(policy);
  FockVector fe = field_e.build(policy);
  HybridPureState state(std::move(fg), std::move(fe));
  state.phi_g.amps *= weight_g;
  state.phi_e.amps *= weight_e;
  return state;
}

const char* output_name(OutputKind kind) {
  switch (kind) {
    case OutputKind::bell:
      return "bell";
    case OutputKind::bell_lower:
      return "bell_lower";
    case OutputKind::entropy:
      return "entropy";
    case OutputKind::ppt_min:
      return "ppt_min";
  }
  return "?";
}

namespace {

OutputKind parse_output(const std::string& name) {
  if (name == "bell") return OutputKind::bell;
  if (name == "bell_lower") return OutputKind::bell_lower;
  if (name == "entropy") return OutputKind::entropy;
  if (name == "ppt_min") return OutputKind::ppt_min;
  throw ConfigError("outputs: unknown column '" + name +
                    "' (expected bell, bell_lower, entropy, ppt_min)");
}

Complex parse_weight(const json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(where + ": expected a number or [re, im]");
}

FieldSpec parse_field_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_field_spec(j.get<std::string>());
  if (j.is_object() && j.contains("amps")) {
    FieldSpec spec;
    spec.kind = FieldSpec::Kind::raw;
    for (const auto& a : j.at("amps")) spec.amps.push_back(parse_weight(a, where + ".amps"));
    if (spec.amps.empty()) throw ConfigError(where + ".amps: empty list");
    return spec;
  }
  throw ConfigError(where + ": expected a field spec string or {\"amps\": [...]}");
}

InitialStateSpec parse_initial_state(const json& j) {
  if (!j.is_object())
    throw ConfigError("initial_state: expected an object");
  InitialStateSpec spec;
  if (j.contains("phi_g") || j.contains("phi_e")) {
    if (!j.contains("phi_g") || !j.contains("phi_e"))
      throw ConfigError("initial_state: phi_g and phi_e must be given together");
    const json& pg = j.at("phi_g");
    const json& pe = j.at("phi_e");
    spec.field_g = parse_field_json(pg.contains("field") ? pg.at("field") : pg,
                                    "initial_state.phi_g");
    spec.field_e = parse_field_json(pe.contains("field") ? pe.at("field") : pe,
                                    "initial_state.phi_e");
    spec.weight_g = pg.contains("weight")
                        ? parse_weight(pg.at("weight"), "initial_state.phi_g.weight")
                        : Complex(1.0, 0.0);
    spec.weight_e = pe.contains("weight")
                        ? parse_weight(pe.at("weight"), "initial_state.phi_e.weight")
                        : Complex(1.0, 0.0);
    return spec;
  }
  if (!j.contains("field"))
    throw ConfigError("initial_state.field: missing");
  spec.field_g = parse_field_json(j.at("field"), "initial_state.field");
  spec.field_e = spec.field_g;
  if (!j.contains("atom")) throw ConfigError("initial_state.atom: missing");
  const json& atom = j.at("atom");
  if (atom.is_string()) {
    const std::string s = atom.get<std::string>();
    if (s == "g") {
      spec.weight_g = 1.0;
      spec.weight_e = 0.0;
    } else if (s == "e") {
      spec.weight_g = 0.0;
      spec.weight_e = 1.0;
    } else {
      throw ConfigError("initial_state.atom: expected \"g\", \"e\" or weights");
    }
  } else if (atom.is_object()) {
    spec.weight_g = atom.contains("g")
                        ? parse_weight(atom.at("g"), "initial_state.atom.g")
                        : Complex(0.0, 0.0);
    spec.weight_e = atom.contains("e")
                        ? parse_weight(atom.at("e"), "initial_state.atom.e")
                        : Complex(0.0, 0.0);
  } else {
    throw ConfigError("initial_state.atom: expected \"g\", \"e\" or weights");
  }
  return spec;
}

ExperimentConfig parse_config_fields(const json& j);

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  try {
    return parse_config_fields(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace {

ExperimentConfig parse_config_fields(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("initial_state"))
    throw ConfigError("initial_state: missing");
  cfg.initial_state = parse_initial_state(j.at("initial_state"));

  if (j.contains("noise")) {
    const json& n = j.at("noise");
    if (n.contains("lambda_bar")) cfg.noise.lambda_bar = n.at("lambda_bar").get<double>();
    if (n.contains("sigma")) cfg.noise.sigma = n.at("sigma").get<double>();
    if (n.contains("quad_order")) cfg.noise.quad_order = n.at("quad_order").get<int>();
    if (cfg.noise.lambda_bar <= 0) throw ConfigError("noise.lambda_bar: must be > 0");
    if (cfg.noise.sigma < 0) throw ConfigError("noise.sigma: must be >= 0");
    if (cfg.noise.quad_order < 1) throw ConfigError("noise.quad_order: must be >= 1");
  }

  if (j.contains("time_grid")) {
    const json& g = j.at("time_grid");
    if (!g.contains("start") || !g.contains("stop") || !g.contains("steps"))
      throw ConfigError("time_grid: needs start, stop and steps");
    cfg.time_grid.start = g.at("start").get<double>();
    cfg.time_grid.stop = g.at("stop").get<double>();
    cfg.time_grid.steps = g.at("steps").get<int>();
  }
  if (cfg.time_grid.steps < 2) throw ConfigError("time_grid.steps: must be >= 2");
  if (cfg.time_grid.start < 0) throw ConfigError("time_grid.start: must be >= 0");
  if (cfg.time_grid.stop <= cfg.time_grid.start)
    throw ConfigError("time_grid.stop: must exceed start");

  if (j.contains("outputs")) {
    if (!j.at("outputs").is_array()) throw ConfigError("outputs: expected an array");
    for (const auto& o : j.at("outputs"))
      cfg.outputs.push_back(parse_output(o.get<std::string>()));
  }
  if (cfg.outputs.empty()) throw ConfigError("outputs: at least one column required");

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    if (s.contains("coarse_steps")) cfg.scan.coarse_steps = s.at("coarse_steps").get<int>();
    if (s.contains("refine_iters")) cfg.scan.refine_iters = s.at("refine_iters").get<int>();
    if (s.contains("refine_tol")) cfg.scan.refine_tol = s.at("refine_tol").get<double>();
    if (cfg.scan.coarse_steps < 8) throw ConfigError("scan.coarse_steps: must be >= 8");
  }

  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    if (t.contains("max_dim")) cfg.truncation.max_dim = t.at("max_dim").get<int>();
    if (t.contains("tail_tol")) cfg.truncation.tail_tol = t.at("tail_tol").get<double>();
    if (cfg.truncation.max_dim < 1) throw ConfigError("truncation.max_dim: must be >= 1");
    if (cfg.truncation.tail_tol <= 0) throw ConfigError("truncation.tail_tol: must be > 0");
  }
  return cfg;
}

}  // namespace

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

namespace {

int worker_count(int jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("JCBELL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<long>(n, jobs));
}

}  // namespace

std::vector<SweepRecord> run_sweep(const ExperimentConfig& config) {
  const HybridPureState initial = config.initial_state.build(config.truncation);
  require_normalized(initial, 1e-9);

  bool needs_rho = false, needs_scan = false;
  for (OutputKind k : config.outputs) {
    if (k != OutputKind::entropy) needs_rho = true;
    if (k == OutputKind::bell) needs_scan = true;
  }
  (void)needs_scan;

  std::vector<SweepRecord> records(config.time_grid.steps);
  auto compute_point = [&](int i) {
    SweepRecord rec;
    rec.t = config.time_grid.at(i);
    HybridDensityMatrix rho;
    if (needs_rho) rho = noisy_density_matrix(initial, config.noise, rec.t);
    for (OutputKind k : config.outputs) {
      switch (k) {
        case OutputKind::bell:
          rec.values.push_back(bell_max_scan(rho, config.scan).value);
          break;
        case OutputKind::bell_lower:
          rec.values.push_back(identity_lower_bound(rho));
          break;
        case OutputKind::entropy:
          rec.values.push_back(von_neumann_entropy(
              evolve_pure(initial, config.noise.lambda_bar, rec.t)));
          break;
        case OutputKind::ppt_min:
          rec.values.push_back(ppt_min_eigenvalue(rho));
          break;
      }
    }
    records[i] = std::move(rec);
  };

  const int workers = worker_count(config.time_grid.steps);
  if (workers <= 1) {
    for (int i = 0; i < config.time_grid.steps; ++i) compute_point(i);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (int i = w; i < config.time_grid.steps; i += workers)
            compute_point(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  return records;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit(const std::vector<SweepRecord>& records,
          const std::vector<OutputKind>& outputs, EmitFormat format,
          std::ostream& os) {
  if (records.empty()) throw ConfigError("emit: no records");
  if (format == EmitFormat::csv) {
    os << "t";
    for (OutputKind k : outputs) os << ',' << output_name(k);
    os << '\n';
    for (const SweepRecord& r : records) {
      os << format_number(r.t);
      for (double v : r.values) os << ',' << format_number(v);
      os << '\n';
    }
  } else {
    os << "[\n";
    for (size_t i = 0; i < records.size(); ++i) {
      os << "  {\"t\": " << format_number(records[i].t);
      for (size_t c = 0; c < outputs.size(); ++c)
        os << ", \"" << output_name(outputs[c])
           << "\": " << format_number(records[i].values[c]);
      os << (i + 1 < records.size() ? "},\n" : "}\n");
    }
    os << "]\n";
  }
}

void emit_to_file(const std::vector<SweepRecord>& records,
                  const std::vector<OutputKind>& outputs, EmitFormat format,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("emit: cannot open '" + path + "' for writing");
  emit(records, outputs, format, out);
  out.flush();
  if (!out) throw ConfigError("emit: write failed for '" + path + "'");
}

}  // namespace jcbell
