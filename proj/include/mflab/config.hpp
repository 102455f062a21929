#pragma once

#include <map>
#include <string>
#include <vector>

#include "mflab/dynamics.hpp"

namespace mflab {

// Flat key-value configuration with [section] headers and '#' comments;
// keys are addressed as "section.key". Diff-friendly experiment provenance.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_num(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  // "section.key=value"
  void set_override(const std::string& assignment);
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

enum class ExperimentKind {
  Steady,
  Evolve,
  LinearDecay,
  Spectral,
  Envelope,
  Energy,
  Convergence
};

enum class LinearDataKind { Compact, BulkOnly, LpMarginal };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Steady;

  HalfPlaneGrid grid = HalfPlaneGrid::desk_default();

  PotentialKind potential_kind = PotentialKind::Cosine;
  std::string potential_csv;
  double delta = 0.5;

  SchemeConfig scheme;

  double t_final = 10.0;
  double record_every = 0.5;
  double snapshot_every = 0.0;

  SeedParams seed;

  double mu = 1.0;
  LinearDataKind linear_data = LinearDataKind::Compact;

  double spectral_eta_max = 3.0;
  int spectral_n_eta = 61;
  int spectral_n_random = 10000;

  double envelope_m = -1.0;  // < 0: derive from the xi_1 rule
  double envelope_c = -1.0;  // < 0: measure from the linearized decay
  double envelope_t_min = 1.0;

  double steady_tol = 5e-3;
  int steady_max_iter = 100000;

  std::string out_dir = "out";

  DoubleWellPotential make_potential() const;
};

struct Diagnostic {
  std::string field;
  std::string message;
};

// Builds a typed config from the key-value form; unknown keys and malformed
// values are reported through diagnostics. Returns the config with
// defaults applied; callers must treat it as unusable when diagnostics
// contain errors.
ExperimentConfig resolve_config(const KeyValueConfig& kv,
                                std::vector<Diagnostic>& diagnostics);

// Dry-run checks: ranges, referenced files, explicit-scheme stability.
std::vector<Diagnostic> validate_config(const KeyValueConfig& kv);

std::string to_string(ExperimentKind k);

}  // namespace mflab
