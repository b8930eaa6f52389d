#include "icf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace icf {

namespace {

struct KeyValue {
  std::string value;
  bool used = false;
};

using Sections = std::map<std::string, std::map<std::string, KeyValue>>;

Sections read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Sections sections;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    if (section.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    sections[section][key] = {trim(line.substr(eq + 1)), false};
  }
  return sections;
}

class SpecReader {
 public:
  explicit SpecReader(Sections sections) : sections_(std::move(sections)) {}

  bool has(const std::string& sec, const std::string& key) {
    auto s = sections_.find(sec);
    return s != sections_.end() && s->second.count(key);
  }
  std::string get_string(const std::string& sec, const std::string& key,
                         const std::string& fallback, bool required = false) {
    auto s = sections_.find(sec);
    if (s == sections_.end() || !s->second.count(key)) {
      if (required) throw ConfigError(sec + "." + key + ": missing required key");
      return fallback;
    }
    auto& kv = s->second[key];
    kv.used = true;
    return kv.value;
  }
  double get_double(const std::string& sec, const std::string& key, double fallback,
                    bool required = false) {
    const std::string raw =
        get_string(sec, key, format_fallback(fallback), required);
    try {
      std::size_t pos;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument("trailing garbage");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(sec + "." + key + ": not a number: '" + raw + "'");
    }
  }
  long get_long(const std::string& sec, const std::string& key, long fallback) {
    const std::string raw = get_string(sec, key, std::to_string(fallback));
    try {
      std::size_t pos;
      const long v = std::stol(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument("trailing garbage");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(sec + "." + key + ": not an integer: '" + raw + "'");
    }
  }

  void reject_unused() const {
    for (const auto& [sec, kvs] : sections_) {
      if (sec != "flow" && sec != "grid" && sec != "output")
        throw ConfigError("unknown section [" + sec + "]");
      for (const auto& [key, kv] : kvs)
        if (!kv.used) throw ConfigError(sec + "." + key + ": unknown key");
    }
  }

 private:
  static std::string format_fallback(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  }
  Sections sections_;
};

}  // namespace

double harmonic_value(const std::string& name, double theta, double phi) {
  if (name == "cos_sq_theta") return std::cos(theta) * std::cos(theta);
  if (name == "cos_theta") return std::cos(theta);
  if (name == "cos2phi_sin2theta")
    return std::cos(2 * phi) * std::sin(theta) * std::sin(theta);
  throw ConfigError("flow.harmonic: unknown profile '" + name + "'");
}

RunSpec parse_config(const std::string& path) {
  SpecReader r(read_ini(path));
  RunSpec spec;

  const std::string mode = r.get_string("flow", "mode", "flow");
  if (mode == "flow")
    spec.mode = RunMode::flow;
  else if (mode == "counterexample")
    spec.mode = RunMode::counterexample;
  else if (mode == "validate")
    spec.mode = RunMode::validate;
  else
    throw ConfigError("flow.mode: expected flow|counterexample|validate, got '" + mode + "'");

  const long kappa = r.get_long("flow", "kappa", spec.mode == RunMode::counterexample ? -1 : 0);
  if (kappa != 0 && kappa != 1 && kappa != -1)
    throw ConfigError("flow.kappa: must be one of {0, 1, -1}");
  spec.kappa = static_cast<int>(kappa);

  spec.speed = r.get_string("flow", "speed", "mean_curvature");
  spec.alpha = r.get_double("flow", "alpha", 1.0);
  spec.surface = r.get_string("flow", "surface", "sphere");
  spec.rho0 = r.get_double("flow", "rho0", 1.0);
  spec.amplitude = r.get_double("flow", "amplitude",
                                spec.mode == RunMode::counterexample ? 0.3 : 0.0);
  spec.harmonic = r.get_string("flow", "harmonic", "cos_sq_theta");
  spec.fbar = r.get_string("flow", "fbar", "quadrupole");
  spec.shift = r.get_double("flow", "shift", 6.0);
  spec.eps0 = r.get_double("flow", "eps0", 0.1);
  spec.t_end = r.get_double("flow", "t_end", 1.0, spec.mode != RunMode::validate);
  spec.cfl_safety = r.get_double("flow", "cfl_safety", 0.2);
  spec.max_steps = r.get_long("flow", "max_steps", 5000000);

  spec.n_theta = static_cast<int>(r.get_long("grid", "n_theta", 32));
  spec.n_phi = static_cast<int>(r.get_long("grid", "n_phi", 64));

  spec.record_every = r.get_double("output", "record_every", 0.05);
  spec.out_dir = r.get_string("output", "dir", "out");
  r.reject_unused();

  if (spec.mode != RunMode::validate) {
    if (!(spec.t_end > 0.0)) throw ConfigError("flow.t_end: must be positive");
    check_flow_exponent(spec.alpha, spec.kappa);
    speed_by_name(spec.speed);
    if (spec.n_theta < 4 || spec.n_phi < 4 || spec.n_phi % 2 != 0)
      throw ConfigError("grid: need n_theta >= 4 and even n_phi >= 4");
    if (!(spec.record_every > 0.0)) throw ConfigError("output.record_every: must be positive");
    if (!(spec.cfl_safety > 0.0 && spec.cfl_safety <= 1.0))
      throw ConfigError("flow.cfl_safety: must lie in (0,1]");
    if (spec.max_steps <= 0) throw ConfigError("flow.max_steps: must be positive");
  }
  if (spec.mode == RunMode::flow) {
    if (spec.surface != "sphere" && spec.surface != "perturbed_sphere" &&
        spec.surface != "shifted_graph")
      throw ConfigError("flow.surface: expected sphere|perturbed_sphere|shifted_graph");
    if (!(spec.rho0 > 0.0)) throw ConfigError("flow.rho0: must be positive");
    if (spec.surface == "perturbed_sphere") harmonic_value(spec.harmonic, 1.0, 1.0);
  }
  if (spec.mode == RunMode::counterexample) {
    if (spec.kappa != -1) throw ConfigError("flow.kappa: counterexample runs in H^3");
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
      throw ConfigError("flow.alpha: counterexample needs alpha in (0,1)");
    make_fbar(spec.fbar, spec.amplitude);
  }
  return spec;
}

SurfaceState build_initial_surface(const RunSpec& spec) {
  auto grid = std::make_shared<SphericalGrid>(spec.n_theta, spec.n_phi);
  if (spec.surface == "sphere") return make_constant_state(std::move(grid), spec.rho0);
  if (spec.surface == "perturbed_sphere") {
    SurfaceState s;
    s.u.resize(grid->size());
    for (int i = 0; i < grid->n_theta(); ++i)
      for (int j = 0; j < grid->n_phi(); ++j)
        s.u[grid->index(i, j)] =
            spec.rho0 + spec.amplitude * harmonic_value(spec.harmonic, grid->theta(i), grid->phi(j));
    s.grid = std::move(grid);
    return s;
  }
  return build_initial(SpaceForm(-1), make_fbar(spec.fbar, spec.amplitude), spec.shift,
                       std::move(grid));
}

FlowConfig to_flow_config(const RunSpec& spec) {
  FlowConfig cfg;
  cfg.sf = SpaceForm(spec.kappa);
  cfg.speed = spec.speed;
  cfg.alpha = spec.alpha;
  cfg.initial = build_initial_surface(spec);
  cfg.t_end = spec.t_end;
  cfg.cfl_safety = spec.cfl_safety;
  cfg.max_steps = spec.max_steps;
  cfg.record_every = spec.record_every;
  return cfg;
}

CounterexampleConfig to_counterexample_config(const RunSpec& spec) {
  CounterexampleConfig cfg;
  cfg.alpha = spec.alpha;
  cfg.fbar_name = spec.fbar;
  cfg.fbar_amplitude = spec.amplitude;
  cfg.shift_s = spec.shift;
  cfg.n_theta = spec.n_theta;
  cfg.n_phi = spec.n_phi;
  cfg.t_end = spec.t_end;
  cfg.eps0 = spec.eps0;
  cfg.record_every = spec.record_every;
  cfg.cfl_safety = spec.cfl_safety;
  return cfg;
}

}  // namespace icf
