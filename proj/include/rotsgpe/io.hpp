#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "basis.hpp"
#include "dynamics.hpp"
#include "field.hpp"

namespace rotsgpe {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

// ------------------------------------------------------------ text formatting

/// Shortest decimal that reads back to the same double.
inline std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("fmt_double: conversion failed");
  return std::string(buf.data(), p);
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& header(std::initializer_list<std::string_view> cols) {
    bool first = true;
    for (auto c : cols) {
      if (!first) os_ << ',';
      os_ << csv_field(c);
      first = false;
    }
    os_ << '\n';
    return *this;
  }

  CsvWriter& operator<<(double v) { return put(fmt_double(v)); }
  CsvWriter& operator<<(long v) { return put(std::to_string(v)); }
  CsvWriter& operator<<(int v) { return put(std::to_string(v)); }
  CsvWriter& operator<<(std::size_t v) { return put(std::to_string(v)); }
  CsvWriter& operator<<(std::string_view s) { return put(csv_field(s)); }
  CsvWriter& operator<<(const char* s) { return put(csv_field(s)); }

  void endrow() {
    os_ << '\n';
    first_ = true;
  }

 private:
  CsvWriter& put(const std::string& s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  std::ostream& os_;
  bool first_ = true;
};

// ------------------------------------------------------------ little-endian primitives

namespace detail {

template <class U>
U byteswap_if_big(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) r = static_cast<U>((r << 8) | ((v >> (8 * i)) & 0xFF));
    return r;
  }
  return v;
}

template <class U>
void put_le(std::ostream& os, U v) {
  v = byteswap_if_big(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

inline void put_f64(std::ostream& os, double d) { put_le(os, std::bit_cast<std::uint64_t>(d)); }

template <class U>
U get_le(std::istream& is, const char* what) {
  U v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(U));
  if (is.gcount() != static_cast<std::streamsize>(sizeof(U)))
    throw std::runtime_error(std::string("checkpoint: truncated while reading ") + what);
  return byteswap_if_big(v);
}

inline double get_f64(std::istream& is, const char* what) { return std::bit_cast<double>(get_le<std::uint64_t>(is, what)); }

}  // namespace detail

// ------------------------------------------------------------ checkpoints

inline constexpr std::array<char, 4> checkpoint_magic{'S', 'G', 'P', 'F'};
inline constexpr std::uint32_t checkpoint_version = 1;

struct CheckpointHeader {
  std::uint32_t version = checkpoint_version;
  std::uint32_t Nbar = 0;
  double Omega_frac = 0.0;
  std::uint64_t count = 0;
  double time = 0.0;
};

struct Checkpoint {
  CheckpointHeader header;
  FieldState state;
};

inline void write_checkpoint(std::ostream& os, const FieldState& f, const ModeTable& table) {
  if (f.size() != table.size())
    throw std::invalid_argument("write_checkpoint: field has " + std::to_string(f.size()) + " modes, table has " +
                                std::to_string(table.size()));
  os.write(checkpoint_magic.data(), 4);
  detail::put_le<std::uint32_t>(os, checkpoint_version);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(table.Nbar()));
  detail::put_f64(os, table.Omega_frac());
  detail::put_le<std::uint64_t>(os, f.size());
  detail::put_f64(os, f.time);
  for (const auto& c : f.coeffs) {
    detail::put_f64(os, c.real());
    detail::put_f64(os, c.imag());
  }
  if (!os) throw std::runtime_error("write_checkpoint: stream error");
}

/// Reads one record. Returns false at a clean end of stream.
inline bool read_checkpoint(std::istream& is, Checkpoint& out) {
  std::array<char, 4> magic{};
  is.read(magic.data(), 4);
  if (is.gcount() == 0 && is.eof()) return false;
  if (is.gcount() != 4 || magic != checkpoint_magic)
    throw std::runtime_error("checkpoint: bad magic (expected \"SGPF\")");
  auto& h = out.header;
  h.version = detail::get_le<std::uint32_t>(is, "version");
  if (h.version != checkpoint_version)
    throw std::runtime_error("checkpoint: unsupported format version " + std::to_string(h.version));
  h.Nbar = detail::get_le<std::uint32_t>(is, "Nbar");
  h.Omega_frac = detail::get_f64(is, "Omega_frac");
  h.count = detail::get_le<std::uint64_t>(is, "mode count");
  h.time = detail::get_f64(is, "time");
  if (h.count > (std::uint64_t{1} << 32)) throw std::runtime_error("checkpoint: implausible mode count");
  out.state.time = h.time;
  out.state.coeffs.resize(h.count);
  for (auto& c : out.state.coeffs) {
    const double re = detail::get_f64(is, "payload");
    const double im = detail::get_f64(is, "payload");
    c = {re, im};
  }
  return true;
}

/// Checks that a header matches the mode table enumerated for its (Nbar, Omega).
inline ModeTable table_for(const CheckpointHeader& h) {
  ModeTable t = enumerate_modes(static_cast<int>(h.Nbar), h.Omega_frac);
  if (t.size() != h.count)
    throw std::runtime_error("checkpoint: header says " + std::to_string(h.count) + " modes but (Nbar=" +
                             std::to_string(h.Nbar) + ", Omega=" + fmt_double(h.Omega_frac) + ") gives " +
                             std::to_string(t.size()));
  return t;
}

inline void save_checkpoint(const std::filesystem::path& p, const FieldState& f, const ModeTable& table) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  write_checkpoint(os, f, table);
}

inline Checkpoint load_checkpoint(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + p.string());
  Checkpoint c;
  try {
    if (!read_checkpoint(is, c)) throw std::runtime_error("checkpoint: empty file");
    table_for(c.header);
  } catch (const std::exception& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
  return c;
}

// ------------------------------------------------------------ archives

inline nlohmann::json to_json(const EvolutionParams& p) {
  return {{"lambda", p.lambda}, {"mu_tilde", p.mu_tilde}, {"T_tilde", p.T_tilde},         {"Gamma", p.Gamma},
          {"dt", p.dt},         {"t_end", p.t_end},       {"noise_on", p.noise_on}, {"snapshot_stride", p.snapshot_stride}};
}

inline EvolutionParams params_from_json(const nlohmann::json& j) {
  EvolutionParams p;
  p.lambda = j.at("lambda").get<double>();
  p.mu_tilde = j.at("mu_tilde").get<double>();
  p.T_tilde = j.at("T_tilde").get<double>();
  p.Gamma = j.at("Gamma").get<double>();
  p.dt = j.at("dt").get<double>();
  p.t_end = j.at("t_end").get<double>();
  p.noise_on = j.at("noise_on").get<bool>();
  p.snapshot_stride = j.at("snapshot_stride").get<std::size_t>();
  return p;
}

inline void write_observables_csv(std::ostream& os, const std::vector<Observables>& obs) {
  CsvWriter w(os);
  w.header({"t", "N_GP", "E_GP", "L_z"});
  for (const auto& o : obs) {
    w << o.t << o.N_GP << o.E_GP << o.L_z;
    w.endrow();
  }
}

inline std::vector<Observables> read_observables_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);
  if (line.rfind("t,N_GP,E_GP,L_z", 0) != 0) throw std::runtime_error("observables.csv: unexpected header '" + line + "'");
  std::vector<Observables> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    Observables o;
    double* dst[4] = {&o.t, &o.N_GP, &o.E_GP, &o.L_z};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 4; ++k) {
      auto [q, ec] = std::from_chars(p, end, *dst[k]);
      if (ec != std::errc()) throw std::runtime_error("observables.csv line " + std::to_string(lineno) + ": bad number");
      p = q;
      if (k < 3) {
        if (p == end || *p != ',') throw std::runtime_error("observables.csv line " + std::to_string(lineno) + ": expected ','");
        ++p;
      }
    }
    out.push_back(o);
  }
  return out;
}

/// Directory layout: snapshots.sgpf (concatenated checkpoint records),
/// observables.csv, meta.json.
inline void write_archive(const std::filesystem::path& dir, const TrajectoryArchive& ar, const ModeTable& table,
                          const nlohmann::json& extra = nlohmann::json::object()) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "snapshots.sgpf", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (dir / "snapshots.sgpf").string());
    for (const auto& s : ar.snapshots) write_checkpoint(os, s, table);
  }
  {
    std::ofstream os(dir / "observables.csv");
    write_observables_csv(os, ar.observables);
  }
  nlohmann::json meta = {{"format", "rotsgpe-archive"},
                         {"version", 1},
                         {"Nbar", table.Nbar()},
                         {"Omega_frac", table.Omega_frac()},
                         {"modes", table.size()},
                         {"seed", ar.seed},
                         {"traj", ar.traj},
                         {"rng", "philox4x32-10"},
                         {"params", to_json(ar.params)},
                         {"snapshots", ar.snapshots.size()},
                         {"warnings", ar.warnings}};
  if (!extra.empty()) meta["extra"] = extra;
  std::ofstream os(dir / "meta.json");
  os << meta.dump(2) << '\n';
}

inline TrajectoryArchive read_archive(const std::filesystem::path& dir, ModeTable* table_out = nullptr) {
  TrajectoryArchive ar;
  nlohmann::json meta;
  {
    std::ifstream is(dir / "meta.json");
    if (!is) throw std::runtime_error("archive " + dir.string() + ": missing meta.json");
    meta = nlohmann::json::parse(is);
  }
  ar.seed = meta.at("seed").get<std::uint64_t>();
  ar.traj = meta.at("traj").get<std::uint32_t>();
  ar.params = params_from_json(meta.at("params"));
  ar.warnings = meta.value("warnings", std::vector<std::string>{});
  const ModeTable table = enumerate_modes(meta.at("Nbar").get<int>(), meta.at("Omega_frac").get<double>());
  {
    std::ifstream is(dir / "snapshots.sgpf", std::ios::binary);
    if (!is) throw std::runtime_error("archive " + dir.string() + ": missing snapshots.sgpf");
    Checkpoint c;
    while (read_checkpoint(is, c)) {
      if (c.header.count != table.size()) throw std::runtime_error("archive: snapshot mode count mismatch");
      ar.snapshots.push_back(c.state);
    }
  }
  {
    std::ifstream is(dir / "observables.csv");
    if (!is) throw std::runtime_error("archive " + dir.string() + ": missing observables.csv");
    ar.observables = read_observables_csv(is);
  }
  if (table_out) *table_out = table;
  return ar;
}

// ------------------------------------------------------------ density grids

/// Raw grid: "SGPD", u32 version, u32 M, f64 extent, then M*M complex
/// little-endian pairs, row-major in y.
inline void write_density_grid(std::ostream& os, int M, double extent, const std::vector<Complex>& psi) {
  os.write("SGPD", 4);
  detail::put_le<std::uint32_t>(os, 1);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(M));
  detail::put_f64(os, extent);
  for (const auto& c : psi) {
    detail::put_f64(os, c.real());
    detail::put_f64(os, c.imag());
  }
}

}  // namespace rotsgpe
