#include "mflab/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mflab {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config: malformed section at line " +
                          std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key at line " + std::to_string(lineno));
    cfg.kv_[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return kv_.count(key) != 0;
}

std::string KeyValueConfig::get(const std::string& key,
                                const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double KeyValueConfig::get_num(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " is not a number: " + it->second);
  }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_num(key, fallback);
  const int i = static_cast<int>(v);
  if (double(i) != v)
    throw ConfigError("config: " + key + " must be an integer");
  return i;
}

void KeyValueConfig::set_override(const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: " +
                      assignment);
  kv_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

DoubleWellPotential ExperimentConfig::make_potential() const {
  if (potential_kind == PotentialKind::Cosine)
    return DoubleWellPotential::cosine();
  return DoubleWellPotential::from_csv(potential_csv);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Steady: return "steady";
    case ExperimentKind::Evolve: return "evolve";
    case ExperimentKind::LinearDecay: return "linear-decay";
    case ExperimentKind::Spectral: return "spectral";
    case ExperimentKind::Envelope: return "envelope";
    case ExperimentKind::Energy: return "energy";
    case ExperimentKind::Convergence: return "convergence";
  }
  return "?";
}

namespace {

const std::vector<std::string> kKnownKeys = {
    "experiment.kind",    "grid.lx",           "grid.ly",
    "grid.nx",            "grid.ny",           "potential.kind",
    "potential.csv",      "potential.delta",   "scheme.dt",
    "scheme.method",      "scheme.bc_x",       "scheme.bc_top",
    "run.t_final",        "run.record_every",  "run.snapshot_every",
    "seed.kind",          "seed.shift",        "seed.amplitude",
    "seed.center_x",      "seed.center_y",     "seed.width",
    "seed.xi1",           "seed.xi2",          "linear.mu",
    "linear.data",        "spectral.eta_max",  "spectral.n_eta",
    "spectral.n_random",  "envelope.m",        "envelope.c",
    "envelope.t_min",     "steady.tol",        "steady.max_iter",
    "output.dir"};

}  // namespace

ExperimentConfig resolve_config(const KeyValueConfig& kv,
                                std::vector<Diagnostic>& diag) {
  ExperimentConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) ==
        kKnownKeys.end())
      diag.push_back({key, "unknown key"});
  }
  auto num = [&](const std::string& key, double fallback) {
    try {
      return kv.get_num(key, fallback);
    } catch (const ConfigError& e) {
      diag.push_back({key, e.what()});
      return fallback;
    }
  };
  auto integer = [&](const std::string& key, int fallback) {
    try {
      return kv.get_int(key, fallback);
    } catch (const ConfigError& e) {
      diag.push_back({key, e.what()});
      return fallback;
    }
  };

  const std::string kind = kv.get("experiment.kind", "steady");
  if (kind == "steady")
    c.kind = ExperimentKind::Steady;
  else if (kind == "evolve")
    c.kind = ExperimentKind::Evolve;
  else if (kind == "linear-decay")
    c.kind = ExperimentKind::LinearDecay;
  else if (kind == "spectral")
    c.kind = ExperimentKind::Spectral;
  else if (kind == "envelope")
    c.kind = ExperimentKind::Envelope;
  else if (kind == "energy")
    c.kind = ExperimentKind::Energy;
  else if (kind == "convergence")
    c.kind = ExperimentKind::Convergence;
  else
    diag.push_back({"experiment.kind", "unknown experiment: " + kind});

  const double lx = num("grid.lx", 100.0);
  const double ly = num("grid.ly", 50.0);
  const int nx = integer("grid.nx", 801);
  const int ny = integer("grid.ny", 201);
  if (lx <= 0 || ly <= 0)
    diag.push_back({"grid.lx", "domain extents must be positive"});
  else if (nx < 3 || ny < 3)
    diag.push_back({"grid.nx", "need at least 3 nodes per direction"});
  else
    c.grid = HalfPlaneGrid(lx, ly, nx, ny);

  const std::string pk = kv.get("potential.kind", "cosine");
  if (pk == "cosine")
    c.potential_kind = PotentialKind::Cosine;
  else if (pk == "tabulated")
    c.potential_kind = PotentialKind::UserTabulated;
  else
    diag.push_back({"potential.kind", "unknown potential kind: " + pk});
  c.potential_csv = kv.get("potential.csv", "");
  if (c.potential_kind == PotentialKind::UserTabulated &&
      c.potential_csv.empty())
    diag.push_back({"potential.csv", "tabulated potential needs a CSV path"});
  c.delta = num("potential.delta", 0.5);
  if (!(c.delta > 0.0 && c.delta < 1.0))
    diag.push_back({"potential.delta", "delta must be in (0, 1)"});

  c.scheme.dt = num("scheme.dt", 0.01);
  if (!(c.scheme.dt > 0.0))
    diag.push_back({"scheme.dt", "dt must be positive"});
  const std::string method = kv.get("scheme.method", "semi-implicit");
  if (method == "semi-implicit")
    c.scheme.scheme = Scheme::SemiImplicit;
  else if (method == "explicit-euler")
    c.scheme.scheme = Scheme::ExplicitEuler;
  else
    diag.push_back({"scheme.method", "unknown method: " + method});
  const std::string bcx = kv.get("scheme.bc_x", "clamp-profile");
  if (bcx == "clamp-profile")
    c.scheme.bc_x = LateralBC::ClampToProfile;
  else if (bcx == "clamp-pm-one")
    c.scheme.bc_x = LateralBC::ClampToPlusMinusOne;
  else
    diag.push_back({"scheme.bc_x", "unknown lateral bc: " + bcx});
  const std::string bct = kv.get("scheme.bc_top", "clamp-profile");
  if (bct == "clamp-profile")
    c.scheme.bc_top = TopBC::ClampToProfile;
  else if (bct == "neumann")
    c.scheme.bc_top = TopBC::HomogeneousNeumann;
  else
    diag.push_back({"scheme.bc_top", "unknown top bc: " + bct});

  c.t_final = num("run.t_final", 10.0);
  c.record_every = num("run.record_every", 0.5);
  c.snapshot_every = num("run.snapshot_every", 0.0);
  if (!(c.t_final > 0.0))
    diag.push_back({"run.t_final", "t_final must be positive"});
  if (!(c.record_every > 0.0))
    diag.push_back({"run.record_every", "record_every must be positive"});

  const std::string sk = kv.get("seed.kind", "perturbed");
  if (sk == "shifted")
    c.seed.kind = SeedKind::Shifted;
  else if (sk == "perturbed")
    c.seed.kind = SeedKind::Perturbed;
  else
    diag.push_back({"seed.kind", "unknown seed kind: " + sk});
  c.seed.shift = num("seed.shift", 0.0);
  c.seed.amplitude = num("seed.amplitude", 0.3);
  c.seed.center_x = num("seed.center_x", 0.0);
  c.seed.center_y = num("seed.center_y", 2.0);
  c.seed.width = num("seed.width", 2.0);
  c.seed.xi1 = num("seed.xi1", 1.0);
  c.seed.xi2 = num("seed.xi2", 1.0);
  if (std::abs(c.seed.amplitude) >= 1.0)
    diag.push_back({"seed.amplitude", "|amplitude| must be below 1"});
  if (!(c.seed.width > 0.0))
    diag.push_back({"seed.width", "width must be positive"});
  if (c.seed.xi1 < 0.0 || c.seed.xi2 < 0.0)
    diag.push_back({"seed.xi1", "corridor allowances must be >= 0"});

  c.mu = num("linear.mu", 1.0);
  if (!(c.mu > 0.0)) diag.push_back({"linear.mu", "mu must be positive"});
  const std::string ld = kv.get("linear.data", "compact");
  if (ld == "compact")
    c.linear_data = LinearDataKind::Compact;
  else if (ld == "bulk-only")
    c.linear_data = LinearDataKind::BulkOnly;
  else if (ld == "lp-marginal")
    c.linear_data = LinearDataKind::LpMarginal;
  else
    diag.push_back({"linear.data", "unknown linear data kind: " + ld});

  c.spectral_eta_max = num("spectral.eta_max", 3.0);
  c.spectral_n_eta = integer("spectral.n_eta", 61);
  c.spectral_n_random = integer("spectral.n_random", 10000);

  c.envelope_m = num("envelope.m", -1.0);
  c.envelope_c = num("envelope.c", -1.0);
  c.envelope_t_min = num("envelope.t_min", 1.0);

  c.steady_tol = num("steady.tol", 5e-3);
  c.steady_max_iter = integer("steady.max_iter", 100000);
  if (!(c.steady_tol > 0.0))
    diag.push_back({"steady.tol", "tol must be positive"});

  c.out_dir = kv.get("output.dir", "out");
  return c;
}

std::vector<Diagnostic> validate_config(const KeyValueConfig& kv) {
  std::vector<Diagnostic> diag;
  ExperimentConfig c = resolve_config(kv, diag);
  if (!diag.empty()) return diag;

  if (c.potential_kind == PotentialKind::UserTabulated) {
    if (!std::filesystem::exists(c.potential_csv)) {
      diag.push_back({"potential.csv", "file not found: " + c.potential_csv});
      return diag;
    }
    try {
      c.make_potential().validate();
    } catch (const Error& e) {
      diag.push_back({"potential.csv", e.what()});
    }
  }

  try {
    double max_w2 = 1.0;
    if (diag.empty()) max_w2 = c.make_potential().max_abs_w2();
    validate_scheme(c.scheme, c.grid, std::max(max_w2, c.mu));
  } catch (const Error& e) {
    diag.push_back({"scheme.dt", e.what()});
  }
  return diag;
}

}  // namespace mflab
