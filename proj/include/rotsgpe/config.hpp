#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "basis.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "sampler.hpp"
#include "units.hpp"

namespace rotsgpe {

/// Number with its unit tag exactly as written in the config.
struct Quantity {
  double value = 0.0;
  std::string unit;
  friend bool operator==(const Quantity&, const Quantity&) = default;
};

inline std::string to_string(const Quantity& q) {
  return q.unit.empty() ? fmt_double(q.value) : fmt_double(q.value) + " " + q.unit;
}

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& msg, int line) : std::runtime_error(format(msg, line)), line_(line) {}
  int line() const { return line_; }

 private:
  static std::string format(const std::string& msg, int line) {
    return line > 0 ? "config line " + std::to_string(line) + ": " + msg : "config: " + msg;
  }
  int line_;
};

enum class Dim { Frequency, Rotation, Mass, Length, TrapLength, Temperature, Energy, Time, Dimensionless };

namespace detail {

inline const std::map<std::string, double>& unit_table(Dim d) {
  // factor to the canonical unit of the dimension; trap-relative tags are
  // handled separately
  static const std::map<std::string, double> freq{{"Hz", 1.0}, {"kHz", 1e3}, {"rad/s", 1.0 / constants::two_pi}};
  static const std::map<std::string, double> rot{{"omega_r", 1.0}};
  static const std::map<std::string, double> mass{{"kg", 1.0}, {"u", 1.66053906660e-27}, {"amu", 1.66053906660e-27}};
  static const std::map<std::string, double> len{{"m", 1.0}, {"nm", 1e-9}, {"um", 1e-6}, {"a0", 5.29177210903e-11}};
  static const std::map<std::string, double> tlen{{"r0", 1.0}};
  static const std::map<std::string, double> temp{{"K", 1.0}, {"uK", 1e-6}, {"nK", 1e-9}};
  static const std::map<std::string, double> energy{{"J", 1.0}, {"eps000", 1.0}, {"hbar_omega_r", 1.0}, {"nK", 1e-9}};
  static const std::map<std::string, double> time{{"s", 1.0}, {"ms", 1e-3}, {"periods", 1.0}, {"1/omega_r", 1.0}};
  static const std::map<std::string, double> none{{"", 1.0}, {"dimensionless", 1.0}};
  switch (d) {
    case Dim::Frequency: return freq;
    case Dim::Rotation: return rot;
    case Dim::Mass: return mass;
    case Dim::Length: return len;
    case Dim::TrapLength: return tlen;
    case Dim::Temperature: return temp;
    case Dim::Energy: return energy;
    case Dim::Time: return time;
    case Dim::Dimensionless: return none;
  }
  return none;
}

inline const char* dim_name(Dim d) {
  switch (d) {
    case Dim::Frequency: return "frequency";
    case Dim::Rotation: return "rotation";
    case Dim::Mass: return "mass";
    case Dim::Length: return "length";
    case Dim::TrapLength: return "length in r0";
    case Dim::Temperature: return "temperature";
    case Dim::Energy: return "energy";
    case Dim::Time: return "time";
    case Dim::Dimensionless: return "dimensionless";
  }
  return "?";
}

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

inline Quantity parse_quantity(const YAML::Node& n, Dim d, const std::string& key) {
  if (!n.IsScalar()) throw ConfigError("'" + key + "' must be a scalar like \"8.3 Hz\"", line_of(n));
  const std::string s = n.Scalar();
  std::istringstream is(s);
  Quantity q;
  std::string num;
  is >> num;
  const char* b = num.data();
  const char* e = num.data() + num.size();
  auto [p, ec] = std::from_chars(b, e, q.value);
  if (ec != std::errc() || p != e) throw ConfigError("'" + key + "': cannot read a number from '" + s + "'", line_of(n));
  std::getline(is >> std::ws, q.unit);
  while (!q.unit.empty() && std::isspace(static_cast<unsigned char>(q.unit.back()))) q.unit.pop_back();
  const auto& tab = unit_table(d);
  if (!tab.count(q.unit)) {
    std::string allowed;
    for (const auto& [u, f] : tab) allowed += (allowed.empty() ? "" : ", ") + (u.empty() ? std::string("<none>") : u);
    throw ConfigError("'" + key + "': unit '" + q.unit + "' is not a " + dim_name(d) + " unit (allowed: " + allowed + ")",
                      line_of(n));
  }
  if (!std::isfinite(q.value)) throw ConfigError("'" + key + "' is not finite", line_of(n));
  return q;
}

template <class T>
T parse_scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "' has the wrong type ('" + (n.IsScalar() ? n.Scalar() : std::string("<node>")) + "')",
                      line_of(n));
  }
}

}  // namespace detail

struct TrapConfig {
  Quantity omega_r{8.3, "Hz"};
  Quantity omega_z{5.3, "Hz"};
  Quantity Omega{0.979, "omega_r"};
  friend bool operator==(const TrapConfig&, const TrapConfig&) = default;
};

struct SpeciesConfig {
  Quantity mass{1.443160648e-25, "kg"};
  Quantity scattering_length{5.313e-9, "m"};
  friend bool operator==(const SpeciesConfig&, const SpeciesConfig&) = default;
};

struct InitialConfig {
  Quantity T{12, "nK"};
  Quantity mu{0.5, "eps000"};
  std::size_t n_samples = 500;
  friend bool operator==(const InitialConfig&, const InitialConfig&) = default;
};

struct QuenchConfig {
  std::vector<Quantity> T{{1, "nK"}};
  Quantity mu{3.5, "eps000"};
  friend bool operator==(const QuenchConfig&, const QuenchConfig&) = default;
};

struct DynamicsConfig {
  Quantity Gamma{0.01, "dimensionless"};
  Quantity dt{1e-3, "1/omega_r"};
  Quantity t_end{50, "s"};
  std::size_t snapshot_stride = 100;
  bool noise_on = true;
  friend bool operator==(const DynamicsConfig&, const DynamicsConfig&) = default;
};

struct AnalysisConfig {
  Quantity window{2.5, "periods"};
  std::size_t n_samples = 50;
  Quantity filter_radius{10, "r0"};
  Quantity bin_width{0.25, "r0"};
  Quantity bin_max{20, "r0"};
  int grid_M = 256;
  Quantity grid_extent{12, "r0"};
  Quantity skip{5, "periods"};     // start of the first analysis window
  Quantity spacing{5, "periods"};  // between analysis windows
  bool half_quantum = true;
  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct EnsembleConfig {
  std::size_t n_traj = 1;
  std::uint64_t seed = 1;
  friend bool operator==(const EnsembleConfig&, const EnsembleConfig&) = default;
};

struct ThermoConfig {
  double N_atoms = 1.3e5;
  double Omega_min = 0.0;
  double Omega_max = 0.999;
  std::size_t n_Omega = 100;
  Quantity Q_max{15, "r0"};
  std::size_t n_Q = 301;
  friend bool operator==(const ThermoConfig&, const ThermoConfig&) = default;
};

struct RunConfig {
  std::string name = "default";
  TrapConfig trap;
  SpeciesConfig species;
  int Nbar = 4;
  MuConvention mu_convention = MuConvention::AxialOffset;
  InitialConfig initial;
  QuenchConfig quench;
  DynamicsConfig dynamics;
  AnalysisConfig analysis;
  EnsembleConfig ensemble;
  ThermoConfig thermo;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  // ---- derived, SI or dimensionless

  TrapGeometry geometry() const {
    auto hz = [](const Quantity& q) { return q.value * detail::unit_table(Dim::Frequency).at(q.unit); };
    return TrapGeometry::from_hz(hz(trap.omega_r), hz(trap.omega_z), trap.Omega.value,
                                 species.mass.value * detail::unit_table(Dim::Mass).at(species.mass.unit));
  }
  double scattering_length_m() const {
    return species.scattering_length.value * detail::unit_table(Dim::Length).at(species.scattering_length.unit);
  }
  double Omega_frac() const { return trap.Omega.value; }
  double lambda() const { return lambda_2d(scattering_length_m(), geometry()); }
  ModeTable modes() const { return enumerate_modes(Nbar, Omega_frac()); }
  double E_R_joule() const { return CutoffSpec{Nbar}.E_R_joule(geometry()); }

  static double kelvin(const Quantity& q) { return q.value * detail::unit_table(Dim::Temperature).at(q.unit); }

  /// 3D chemical potential in J.
  double joule(const Quantity& q) const {
    const TrapGeometry g = geometry();
    if (q.unit == "eps000") return q.value * g.eps000();
    if (q.unit == "hbar_omega_r") return q.value * g.energy_unit();
    if (q.unit == "nK") return q.value * 1e-9 * constants::k_B;
    return q.value;
  }

  /// Time in 1/omega_r.
  double dimensionless_time(const Quantity& q) const {
    const TrapGeometry g = geometry();
    if (q.unit == "periods") return q.value * constants::two_pi;
    if (q.unit == "1/omega_r") return q.value;
    return q.value * detail::unit_table(Dim::Time).at(q.unit) * g.omega_r;
  }

  InitialEnsembleSpec initial_spec() const {
    return InitialEnsembleSpec::from_physical(kelvin(initial.T), joule(initial.mu), geometry(), mu_convention,
                                              initial.n_samples, ensemble.seed);
  }

  EvolutionParams evolution(std::size_t iT) const {
    const TrapGeometry g = geometry();
    EvolutionParams p;
    p.lambda = lambda();
    p.mu_tilde = mu_2d_dimensionless(joule(quench.mu), g, mu_convention);
    p.T_tilde = dimensionless_temperature(kelvin(quench.T.at(iT)), g);
    p.Gamma = dynamics.Gamma.value;
    p.dt = dimensionless_time(dynamics.dt);
    p.t_end = dimensionless_time(dynamics.t_end);
    p.noise_on = dynamics.noise_on;
    p.snapshot_stride = dynamics.snapshot_stride;
    return p;
  }

  void validate() const {
    geometry().validate();
    if (Nbar < 0) throw ConfigError("cutoff.Nbar must be >= 0", 0);
    if (!(scattering_length_m() > 0.0)) throw ConfigError("species.scattering_length must be positive", 0);
    if (!(kelvin(initial.T) > 0.0)) throw ConfigError("initial.T must be positive", 0);
    if (quench.T.empty()) throw ConfigError("quench.T needs at least one temperature", 0);
    for (const auto& T : quench.T)
      if (!(kelvin(T) > 0.0)) throw ConfigError("quench.T values must be positive", 0);
    if (!(dynamics.Gamma.value >= 0.0)) throw ConfigError("dynamics.Gamma must be >= 0", 0);
    if (!(dimensionless_time(dynamics.dt) > 0.0)) throw ConfigError("dynamics.dt must be positive", 0);
    if (!(dimensionless_time(dynamics.t_end) >= 0.0)) throw ConfigError("dynamics.t_end must be >= 0", 0);
    if (dynamics.snapshot_stride == 0) throw ConfigError("dynamics.snapshot_stride must be >= 1", 0);
    if (analysis.n_samples == 0) throw ConfigError("analysis.n_samples must be >= 1", 0);
    if (analysis.grid_M < 2) throw ConfigError("analysis.grid_M must be >= 2", 0);
    if (!(analysis.bin_width.value > 0.0)) throw ConfigError("analysis.bin_width must be positive", 0);
    if (ensemble.n_traj == 0) throw ConfigError("ensemble.n_traj must be >= 1", 0);
    initial_spec().validate();
  }
};

// ------------------------------------------------------------ parsing

namespace detail {

class Reader {
 public:
  explicit Reader(const YAML::Node& root) : root_(root) {}

  YAML::Node section(const char* name) const {
    const YAML::Node n = root_[name];
    if (n && !n.IsMap()) throw ConfigError(std::string("section '") + name + "' must be a mapping", line_of(n));
    return n;
  }

  static void check_keys(const YAML::Node& sec, const std::string& name, std::initializer_list<const char*> keys) {
    if (!sec) return;
    for (const auto& kv : sec) {
      const auto k = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw ConfigError("unknown key '" + name + "." + k + "'", line_of(kv.first));
    }
  }

 private:
  YAML::Node root_;
};

inline void read_q(const YAML::Node& sec, const char* key, const std::string& path, Dim d, Quantity& out) {
  if (!sec) return;
  const YAML::Node n = sec[key];
  if (n) out = parse_quantity(n, d, path + "." + key);
}

template <class T>
void read_s(const YAML::Node& sec, const char* key, const std::string& path, T& out) {
  if (!sec) return;
  const YAML::Node n = sec[key];
  if (n) out = parse_scalar<T>(n, path + "." + key);
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  using namespace detail;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  RunConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("top level must be a mapping", line_of(root));
  for (const auto& kv : root) {
    const auto k = kv.first.as<std::string>();
    static const char* known[] = {"name",     "trap",     "species",  "cutoff",   "initial", "quench",
                                  "dynamics", "analysis", "ensemble", "thermo"};
    bool ok = false;
    for (const char* a : known) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown section '" + k + "'", line_of(kv.first));
  }
  Reader r(root);
  if (root["name"]) c.name = parse_scalar<std::string>(root["name"], "name");

  auto trap = r.section("trap");
  Reader::check_keys(trap, "trap", {"omega_r", "omega_z", "Omega"});
  read_q(trap, "omega_r", "trap", Dim::Frequency, c.trap.omega_r);
  read_q(trap, "omega_z", "trap", Dim::Frequency, c.trap.omega_z);
  read_q(trap, "Omega", "trap", Dim::Rotation, c.trap.Omega);

  auto sp = r.section("species");
  Reader::check_keys(sp, "species", {"mass", "scattering_length"});
  read_q(sp, "mass", "species", Dim::Mass, c.species.mass);
  read_q(sp, "scattering_length", "species", Dim::Length, c.species.scattering_length);

  auto cut = r.section("cutoff");
  Reader::check_keys(cut, "cutoff", {"Nbar", "E_R", "mu_convention"});
  if (cut && cut["Nbar"] && cut["E_R"]) throw ConfigError("give either cutoff.Nbar or cutoff.E_R, not both", line_of(cut["E_R"]));
  read_s(cut, "Nbar", "cutoff", c.Nbar);
  if (cut && cut["E_R"]) {
    Quantity q = parse_quantity(cut["E_R"], Dim::Energy, "cutoff.E_R");
    if (q.unit != "hbar_omega_r") throw ConfigError("cutoff.E_R must be given in hbar_omega_r", line_of(cut["E_R"]));
    try {
      c.Nbar = CutoffSpec::from_energy(q.value).Nbar;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(cut["E_R"]));
    }
  }
  if (cut && cut["mu_convention"]) {
    try {
      c.mu_convention = mu_convention_from_string(parse_scalar<std::string>(cut["mu_convention"], "cutoff.mu_convention"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(cut["mu_convention"]));
    }
  }

  auto ini = r.section("initial");
  Reader::check_keys(ini, "initial", {"T", "mu", "n_samples"});
  read_q(ini, "T", "initial", Dim::Temperature, c.initial.T);
  read_q(ini, "mu", "initial", Dim::Energy, c.initial.mu);
  read_s(ini, "n_samples", "initial", c.initial.n_samples);

  auto qu = r.section("quench");
  Reader::check_keys(qu, "quench", {"T", "mu"});
  if (qu && qu["T"]) {
    const YAML::Node t = qu["T"];
    c.quench.T.clear();
    if (t.IsSequence()) {
      for (const auto& e : t) c.quench.T.push_back(parse_quantity(e, Dim::Temperature, "quench.T"));
    } else {
      c.quench.T.push_back(parse_quantity(t, Dim::Temperature, "quench.T"));
    }
  }
  read_q(qu, "mu", "quench", Dim::Energy, c.quench.mu);

  auto dy = r.section("dynamics");
  Reader::check_keys(dy, "dynamics", {"Gamma", "dt", "t_end", "snapshot_stride", "noise_on"});
  read_q(dy, "Gamma", "dynamics", Dim::Dimensionless, c.dynamics.Gamma);
  read_q(dy, "dt", "dynamics", Dim::Time, c.dynamics.dt);
  read_q(dy, "t_end", "dynamics", Dim::Time, c.dynamics.t_end);
  read_s(dy, "snapshot_stride", "dynamics", c.dynamics.snapshot_stride);
  read_s(dy, "noise_on", "dynamics", c.dynamics.noise_on);

  auto an = r.section("analysis");
  Reader::check_keys(an, "analysis", {"window", "n_samples", "filter_radius", "bin_width", "bin_max", "grid_M",
                                      "grid_extent", "skip", "spacing", "half_quantum"});
  read_q(an, "window", "analysis", Dim::Time, c.analysis.window);
  read_s(an, "n_samples", "analysis", c.analysis.n_samples);
  read_q(an, "filter_radius", "analysis", Dim::TrapLength, c.analysis.filter_radius);
  read_q(an, "bin_width", "analysis", Dim::TrapLength, c.analysis.bin_width);
  read_q(an, "bin_max", "analysis", Dim::TrapLength, c.analysis.bin_max);
  read_s(an, "grid_M", "analysis", c.analysis.grid_M);
  read_q(an, "grid_extent", "analysis", Dim::TrapLength, c.analysis.grid_extent);
  read_q(an, "skip", "analysis", Dim::Time, c.analysis.skip);
  read_q(an, "spacing", "analysis", Dim::Time, c.analysis.spacing);
  read_s(an, "half_quantum", "analysis", c.analysis.half_quantum);

  auto en = r.section("ensemble");
  Reader::check_keys(en, "ensemble", {"n_traj", "seed"});
  read_s(en, "n_traj", "ensemble", c.ensemble.n_traj);
  read_s(en, "seed", "ensemble", c.ensemble.seed);

  auto th = r.section("thermo");
  Reader::check_keys(th, "thermo", {"N_atoms", "Omega_min", "Omega_max", "n_Omega", "Q_max", "n_Q"});
  read_s(th, "N_atoms", "thermo", c.thermo.N_atoms);
  read_s(th, "Omega_min", "thermo", c.thermo.Omega_min);
  read_s(th, "Omega_max", "thermo", c.thermo.Omega_max);
  read_s(th, "n_Omega", "thermo", c.thermo.n_Omega);
  read_q(th, "Q_max", "thermo", Dim::TrapLength, c.thermo.Q_max);
  read_s(th, "n_Q", "thermo", c.thermo.n_Q);

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what(), 0);
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line());
  }
}

/// Canonical text form; parse_config(dump_config(c)) == c.
inline std::string dump_config(const RunConfig& c) {
  YAML::Emitter e;
  auto q = [](const Quantity& x) { return to_string(x); };
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << c.name;
  e << YAML::Key << "trap" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "omega_r" << YAML::Value << q(c.trap.omega_r);
  e << YAML::Key << "omega_z" << YAML::Value << q(c.trap.omega_z);
  e << YAML::Key << "Omega" << YAML::Value << q(c.trap.Omega);
  e << YAML::EndMap;
  e << YAML::Key << "species" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "mass" << YAML::Value << q(c.species.mass);
  e << YAML::Key << "scattering_length" << YAML::Value << q(c.species.scattering_length);
  e << YAML::EndMap;
  e << YAML::Key << "cutoff" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "Nbar" << YAML::Value << c.Nbar;
  e << YAML::Key << "mu_convention" << YAML::Value << to_string(c.mu_convention);
  e << YAML::EndMap;
  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "T" << YAML::Value << q(c.initial.T);
  e << YAML::Key << "mu" << YAML::Value << q(c.initial.mu);
  e << YAML::Key << "n_samples" << YAML::Value << c.initial.n_samples;
  e << YAML::EndMap;
  e << YAML::Key << "quench" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "T" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& T : c.quench.T) e << q(T);
  e << YAML::EndSeq;
  e << YAML::Key << "mu" << YAML::Value << q(c.quench.mu);
  e << YAML::EndMap;
  e << YAML::Key << "dynamics" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "Gamma" << YAML::Value << q(c.dynamics.Gamma);
  e << YAML::Key << "dt" << YAML::Value << q(c.dynamics.dt);
  e << YAML::Key << "t_end" << YAML::Value << q(c.dynamics.t_end);
  e << YAML::Key << "snapshot_stride" << YAML::Value << c.dynamics.snapshot_stride;
  e << YAML::Key << "noise_on" << YAML::Value << c.dynamics.noise_on;
  e << YAML::EndMap;
  e << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "window" << YAML::Value << q(c.analysis.window);
  e << YAML::Key << "n_samples" << YAML::Value << c.analysis.n_samples;
  e << YAML::Key << "filter_radius" << YAML::Value << q(c.analysis.filter_radius);
  e << YAML::Key << "bin_width" << YAML::Value << q(c.analysis.bin_width);
  e << YAML::Key << "bin_max" << YAML::Value << q(c.analysis.bin_max);
  e << YAML::Key << "grid_M" << YAML::Value << c.analysis.grid_M;
  e << YAML::Key << "grid_extent" << YAML::Value << q(c.analysis.grid_extent);
  e << YAML::Key << "skip" << YAML::Value << q(c.analysis.skip);
  e << YAML::Key << "spacing" << YAML::Value << q(c.analysis.spacing);
  e << YAML::Key << "half_quantum" << YAML::Value << c.analysis.half_quantum;
  e << YAML::EndMap;
  e << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_traj" << YAML::Value << c.ensemble.n_traj;
  e << YAML::Key << "seed" << YAML::Value << c.ensemble.seed;
  e << YAML::EndMap;
  e << YAML::Key << "thermo" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "N_atoms" << YAML::Value << fmt_double(c.thermo.N_atoms);
  e << YAML::Key << "Omega_min" << YAML::Value << fmt_double(c.thermo.Omega_min);
  e << YAML::Key << "Omega_max" << YAML::Value << fmt_double(c.thermo.Omega_max);
  e << YAML::Key << "n_Omega" << YAML::Value << c.thermo.n_Omega;
  e << YAML::Key << "Q_max" << YAML::Value << q(c.thermo.Q_max);
  e << YAML::Key << "n_Q" << YAML::Value << c.thermo.n_Q;
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace rotsgpe
