#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jcbell/bell_optimizer.hpp"
#include "jcbell/hybrid.hpp"
#include "jcbell/jc_dynamics.hpp"

namespace jcbell {

// One field-state family, parsed from the spec syntax
//   fock:k | smsv:r,theta | coherent:re,im
// or from a raw {"amps": [...]} escape hatch.
struct FieldSpec {
  enum class Kind { fock, smsv, coherent, raw } kind = Kind::fock;
  int k = 0;
  double r = 0.0, theta = 0.0;
  Complex alpha{0.0, 0.0};
  std::vector<Complex> amps;

  FockVector build(const TruncationPolicy& policy) const;
};

FieldSpec parse_field_spec(const std::string& text);

// Initial hybrid state: weight_g |g>|field_g> + weight_e |e>|field_e>.
// Product configs use the same field for both components.
struct InitialStateSpec {
  Complex weight_g{0.0, 0.0};
  Complex weight_e{1.0, 0.0};
  FieldSpec field_g;
  FieldSpec field_e;

  HybridPureState build(const TruncationPolicy& policy) const;
};

struct TimeGrid {
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;

  double at(int i) const { return start + (stop - start) * i / (steps - 1); }
};

enum class OutputKind { bell, bell_lower, entropy, ppt_min };

const char* output_name(OutputKind kind);

struct ExperimentConfig {
  InitialStateSpec initial_state;
  NoiseModel noise;
  TimeGrid time_grid;
  std::vector<OutputKind> outputs;
  RotationScanConfig scan;
  TruncationPolicy truncation;
};

// Parses a JSON config document. Errors name the offending field.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct SweepRecord {
  double t = 0.0;
  std::vector<double> values;  // one per requested output, in config order
};

// Evaluates every requested output on every grid point. Grid points are
// independent; workers are capped by the JCBELL_THREADS environment variable.
// Records come back ordered by grid index regardless of parallelism.
std::vector<SweepRecord> run_sweep(const ExperimentConfig& config);

enum class EmitFormat { csv, json };

// CSV: header "t,<columns...>" then one row per record; JSON: array of
// objects with identical keys. All numbers carry 12 significant digits, so
// output is byte-stable for fixed inputs.
void emit(const std::vector<SweepRecord>& records,
          const std::vector<OutputKind>& outputs, EmitFormat format,
          std::ostream& os);
void emit_to_file(const std::vector<SweepRecord>& records,
                  const std::vector<OutputKind>& outputs, EmitFormat format,
                  const std::string& path);

// 12-significant-digit formatting used by all emitters.
std::string format_number(double v);

}  // namespace jcbell
