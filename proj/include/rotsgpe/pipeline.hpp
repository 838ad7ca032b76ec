#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "analysis.hpp"
#include "basis.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "io.hpp"
#include "quadrature.hpp"
#include "reservoir.hpp"
#include "sampler.hpp"
#include "transforms.hpp"

#define ROTSGPE_VERSION "0.1.0"

namespace rotsgpe {

/// Worker threads from SGPE_WORKERS, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* s = std::getenv("SGPE_WORKERS")) {
    const int n = std::atoi(s);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ------------------------------------------------------------ reservoir views of a config

inline ReservoirSpec quench_reservoir(const RunConfig& c, std::size_t iT) {
  ReservoirSpec s;
  s.T = RunConfig::kelvin(c.quench.T.at(iT));
  s.mu = c.joule(c.quench.mu);
  s.E_R = c.E_R_joule();
  s.scattering_length = c.scattering_length_m();
  s.trap = c.geometry();
  return s;
}

// ------------------------------------------------------------ thermo and rate tables

/// Ideal gas without cutoff at T = T_C(N, Omega) for each Omega on the grid.
inline void emit_thermo_tables(const RunConfig& c, std::ostream& os) {
  CsvWriter w(os);
  w.header({"Omega_frac", "T_C", "N_NC", "Lz_per_N", "sigma_Lz", "Lz_lo", "Lz_hi", "diverging"});
  const TrapGeometry base = c.geometry();
  const std::size_t n = std::max<std::size_t>(c.thermo.n_Omega, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double f =
        n == 1 ? c.thermo.Omega_min : c.thermo.Omega_min + (c.thermo.Omega_max - c.thermo.Omega_min) * i / (n - 1.0);
    TrapGeometry t = base;
    t.Omega = f * t.omega_r;
    ReservoirSpec s;
    s.trap = t;
    s.T = transition_temperature(c.thermo.N_atoms, t);
    s.mu = 0.0;
    s.E_R = 0.0;
    const auto m = angular_momentum_moments(s);
    const bool div = !std::isfinite(m.Lz_per_N) || !std::isfinite(m.sigma_Lz) || f > 1.0 - 1e-9;
    w << f << s.T << m.N_NC << m.Lz_per_N << m.sigma_Lz << m.Lz_per_N - m.sigma_Lz << m.Lz_per_N + m.sigma_Lz
      << (div ? 1 : 0);
    w.endrow();
  }
}

inline void emit_rate_profile(const RunConfig& c, std::size_t iT, std::ostream& os) {
  const ReservoirSpec s = quench_reservoir(c, iT);
  const double r0 = s.trap.r0();
  const std::size_t n = std::max<std::size_t>(c.thermo.n_Q, 2);
  std::vector<double> Q(n);
  for (std::size_t i = 0; i < n; ++i) Q[i] = c.thermo.Q_max.value * r0 * static_cast<double>(i) / (n - 1.0);
  CsvWriter w(os);
  w.header({"Q_r0", "G1", "region"});
  for (const auto& p : growth_rate_profile(Q, s)) {
    w << p.Q / r0 << p.G1 << to_string(p.region);
    w.endrow();
  }
}

inline void emit_rate_summary(const RunConfig& c, std::ostream& os) {
  CsvWriter w(os);
  w.header({"T_nK", "G1_in", "G2_in", "gamma", "G1_out", "G2_out", "M_amp", "gamma_dimensionless", "divergent"});
  for (std::size_t i = 0; i < c.quench.T.size(); ++i) {
    const ReservoirSpec s = quench_reservoir(c, i);
    const RateSet r = compute_rates(s);
    w << s.T * 1e9 << r.G1_in << r.G2_in << r.gamma << r.G1_out << r.G2_out << r.M_amp << r.gamma_dimensionless(s.T)
      << (r.divergent ? 1 : 0);
    w.endrow();
  }
}

// ------------------------------------------------------------ ensemble (Fig. 3) analysis

struct EnsembleAnalysis {
  std::size_t n_samples = 0;
  CondensateResult po;
  VortexSet vortices;
  double mean_N = 0.0;
};

inline EnsembleAnalysis analyze_ensemble(const std::vector<FieldState>& samples, const ModeTable& table,
                                         const AnalysisConfig& a) {
  EnsembleAnalysis r;
  r.n_samples = samples.size();
  r.po = penrose_onsager(ensemble_onebody_matrix(samples, a.half_quantum));
  for (const auto& s : samples) r.mean_N += norm_gp(s.coeffs);
  r.mean_N /= static_cast<double>(samples.size());
  CoeffVector scaled = r.po.mode.coeffs;
  for (auto& c : scaled) c *= std::sqrt(std::max(r.po.N0, 0.0));
  const auto g = density_grid(scaled, table, a.grid_extent.value, a.grid_M);
  r.vortices = detect_vortices(g, a.filter_radius.value);
  return r;
}

inline EnsembleAnalysis analyze_initial_ensemble(const RunConfig& c, const ModeTable& table) {
  return analyze_ensemble(sample_ensemble(c.initial_spec(), table), table, c.analysis);
}

// ------------------------------------------------------------ trajectory analysis

struct WindowSummary {
  double t_start = 0.0;
  double N0 = 0.0;
  double N_C_mean = 0.0;  // half quantum removed when configured
  int n_pos = 0;
  int n_neg = 0;
  int multi = 0;
};

struct TrajectorySummary {
  std::size_t iT = 0;
  double T_K = 0.0;
  std::uint32_t traj = 0;
  bool ok = false;
  std::string error;
  std::vector<double> t;
  std::vector<double> N_C;
  std::vector<WindowSummary> windows;
  CondensateResult final_po;
  VortexSet final_vortices;
  PairHistogram histogram;
  std::vector<HistogramPeak> peaks;
  FractionResult fraction;
  FractionResult fraction_raw;  // without the half-quantum subtraction
  double T_C = 0.0;
  double ideal = 0.0;
  ResolutionCheck resolution;
  std::vector<std::string> warnings;
  DensityGrid final_grid;
};

/// Window starts: skip, skip + spacing, ... while the window fits, plus the
/// window ending at the last snapshot.
inline std::vector<double> window_starts(double t0, double t_last, double skip, double spacing, double window) {
  std::vector<double> s;
  if (t_last - t0 < window - 1e-9) return s;
  if (spacing > 0.0)
    for (double ts = t0 + skip; ts + window <= t_last - 0.5 * spacing + 1e-9; ts += spacing) s.push_back(ts);
  s.push_back(std::max(t0, t_last - window));
  return s;
}

inline TrajectorySummary analyze_trajectory(const TrajectoryArchive& ar, const ModeTable& table, const RunConfig& c) {
  TrajectorySummary r;
  r.traj = ar.traj;
  r.warnings = ar.warnings;
  const TrapGeometry geo = c.geometry();
  r.T_K = ar.params.T_tilde * geo.energy_unit() / constants::k_B;
  const double half = c.analysis.half_quantum ? 0.5 * static_cast<double>(table.size()) : 0.0;
  for (const auto& o : ar.observables) {
    r.t.push_back(o.t);
    r.N_C.push_back(o.N_GP - half);
  }
  if (ar.snapshots.empty()) throw std::runtime_error("analyze_trajectory: archive has no snapshots");
  const double window = c.dimensionless_time(c.analysis.window);
  const double t0 = ar.snapshots.front().time, t1 = ar.snapshots.back().time;
  const auto starts = window_starts(t0, t1, c.dimensionless_time(c.analysis.skip),
                                    c.dimensionless_time(c.analysis.spacing), window);
  if (starts.empty()) throw std::runtime_error("analyze_trajectory: trajectory shorter than one analysis window");

  auto mean_NGP = [&](double ts) {
    double s = 0.0;
    int n = 0;
    for (const auto& o : ar.observables)
      if (o.t >= ts - 1e-9 && o.t <= ts + window + 1e-9) {
        s += o.N_GP;
        ++n;
      }
    return s / std::max(n, 1);
  };

  for (std::size_t w = 0; w < starts.size(); ++w) {
    const double ts = starts[w];
    const auto rho = short_time_density_matrix(ar, ts, window, c.analysis.n_samples, c.analysis.half_quantum);
    auto po = penrose_onsager(rho);
    CoeffVector scaled = po.mode.coeffs;
    for (auto& v : scaled) v *= std::sqrt(std::max(po.N0, 0.0));
    auto grid = density_grid(scaled, table, c.analysis.grid_extent.value, c.analysis.grid_M);
    auto vs = detect_vortices(grid, c.analysis.filter_radius.value);
    WindowSummary ws{ts, po.N0, mean_NGP(ts) - half, vs.count(1), vs.count(-1), vs.multi_charge_cells};
    r.windows.push_back(ws);
    if (w + 1 == starts.size()) {
      r.final_po = std::move(po);
      r.final_vortices = std::move(vs);
      r.final_grid = std::move(grid);
    }
  }
  r.histogram = pair_histogram(r.final_vortices, c.analysis.bin_width.value, c.analysis.bin_max.value);
  r.peaks = histogram_peaks(r.histogram);
  r.resolution = check_resolution(r.final_grid, ar.params.mu_tilde);
  if (!r.resolution.ok) {
    std::ostringstream os;
    os << "density grid has " << std::setprecision(3) << r.resolution.points_per_xi
       << " points per healing length (xi = " << r.resolution.xi << " r0); vortex cores may be under-resolved";
    r.warnings.push_back(os.str());
  }

  ReservoirSpec s;
  s.T = r.T_K;
  s.mu = c.joule(c.quench.mu);
  s.E_R = c.E_R_joule();
  s.scattering_length = c.scattering_length_m();
  s.trap = geo;
  const double N_NC = noncondensate_number(s);
  const double N_GP_mean = mean_NGP(starts.back());
  r.fraction = condensate_fraction(r.final_po.N0, N_GP_mean, table.size(), N_NC, c.analysis.half_quantum);
  r.fraction_raw = condensate_fraction(r.final_po.N0, N_GP_mean, table.size(), N_NC, false);
  r.T_C = transition_temperature(r.fraction.N_C + N_NC, geo);
  r.ideal = ideal_condensate_fraction(r.T_K, r.T_C);
  r.ok = true;
  return r;
}

// ------------------------------------------------------------ quench driver

struct QuenchResult {
  std::vector<TrajectorySummary> trajectories;
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += !t.ok;
    return n;
  }
};

struct QuenchOptions {
  std::filesystem::path out_dir;  // empty: nothing written
  bool write_archives = true;
  unsigned workers = 0;  // 0: worker_count()
  std::ostream* log = nullptr;
  std::optional<std::size_t> only_sample;  // run a single initial-sample index
};

inline std::uint32_t noise_traj_id(std::size_t iT, std::size_t j, std::size_t n_traj) {
  return static_cast<std::uint32_t>(iT * n_traj + j);
}

namespace detail {

inline void write_quench_tables(const std::filesystem::path& dir, const QuenchResult& q) {
  std::ofstream g(dir / "growth.csv"), wf(dir / "windows.csv"), fr(dir / "fraction.csv"), hi(dir / "histograms.csv"),
      pk(dir / "peaks.csv"), vx(dir / "vortices.csv"), sp(dir / "spectrum.csv");
  CsvWriter G(g), W(wf), F(fr), H(hi), P(pk), V(vx), S(sp);
  G.header({"T_nK", "traj", "t", "N_C"});
  W.header({"T_nK", "traj", "t_start", "N0", "N_C_mean", "n_pos", "n_neg", "multi"});
  F.header({"T_nK", "traj", "N0", "N_C", "N_NC", "fraction", "T_C_nK", "ideal", "N_C_raw", "fraction_raw"});
  H.header({"T_nK", "traj", "bin_lo", "bin_hi", "count"});
  P.header({"T_nK", "traj", "position", "height", "prominence"});
  V.header({"T_nK", "traj", "x", "y", "charge"});
  S.header({"T_nK", "traj", "index", "eigenvalue"});
  for (const auto& t : q.trajectories) {
    if (!t.ok) continue;
    const double T = t.T_K * 1e9;
    for (std::size_t i = 0; i < t.t.size(); ++i) {
      G << T << static_cast<std::size_t>(t.traj) << t.t[i] << t.N_C[i];
      G.endrow();
    }
    for (const auto& w : t.windows) {
      W << T << static_cast<std::size_t>(t.traj) << w.t_start << w.N0 << w.N_C_mean << w.n_pos << w.n_neg << w.multi;
      W.endrow();
    }
    F << T << static_cast<std::size_t>(t.traj) << t.fraction.N0 << t.fraction.N_C << t.fraction.N_NC
      << t.fraction.fraction << t.T_C * 1e9 << t.ideal << t.fraction_raw.N_C << t.fraction_raw.fraction;
    F.endrow();
    for (std::size_t b = 0; b < t.histogram.counts.size(); ++b) {
      H << T << static_cast<std::size_t>(t.traj) << t.histogram.bin_edges[b] << t.histogram.bin_edges[b + 1]
        << t.histogram.counts[b];
      H.endrow();
    }
    H << T << static_cast<std::size_t>(t.traj) << t.histogram.bin_edges.back() << "inf" << t.histogram.overflow;
    H.endrow();
    for (const auto& p : t.peaks) {
      P << T << static_cast<std::size_t>(t.traj) << p.position << p.height << p.prominence;
      P.endrow();
    }
    for (const auto& v : t.final_vortices.vortices) {
      V << T << static_cast<std::size_t>(t.traj) << v.x << v.y << v.charge;
      V.endrow();
    }
    for (std::size_t i = 0; i < t.final_po.spectrum.size(); ++i) {
      S << T << static_cast<std::size_t>(t.traj) << i << t.final_po.spectrum[i];
      S.endrow();
    }
  }
}

}  // namespace detail

/// Samples n_traj initial states, evolves each under every quench
/// temperature, analyses, and (if out_dir is set) writes archives, tables and a
/// manifest. A failing trajectory is recorded and does not stop the others.
inline QuenchResult run_quench(const RunConfig& c, const QuenchOptions& opt = {}) {
  c.validate();
  const ModeTable table = c.modes();
  const QuadratureTables quad = build_quadrature(table);
  const auto init = c.initial_spec();
  const std::size_t nT = c.quench.T.size(), nJ = c.ensemble.n_traj;

  QuenchResult res;
  std::vector<std::size_t> jobs;
  for (std::size_t iT = 0; iT < nT; ++iT)
    for (std::size_t j = 0; j < nJ; ++j)
      if (!opt.only_sample || *opt.only_sample == j) jobs.push_back(iT * nJ + j);
  if (jobs.empty()) throw std::invalid_argument("run_quench: no trajectory selected");
  res.trajectories.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  auto say = [&](const std::string& s) {
    if (!opt.log) return;
    std::lock_guard lk(log_mu);
    *opt.log << s << std::endl;
  };
  if (!opt.out_dir.empty()) std::filesystem::create_directories(opt.out_dir);

  auto work = [&]() {
    for (std::size_t slot; (slot = next.fetch_add(1)) < jobs.size();) {
      const std::size_t iT = jobs[slot] / nJ, j = jobs[slot] % nJ;
      auto& out = res.trajectories[slot];
      out.iT = iT;
      out.T_K = RunConfig::kelvin(c.quench.T[iT]);
      out.traj = noise_traj_id(iT, j, nJ);
      try {
        const FieldState a0 = sample_wigner(init, table, static_cast<std::uint32_t>(j));
        const EvolutionParams p = c.evolution(iT);
        say("T=" + fmt_double(out.T_K * 1e9) + " nK traj " + std::to_string(j) + ": evolving " +
            std::to_string(p.steps()) + " steps");
        const TrajectoryArchive ar = evolve(a0, p, table, quad, c.ensemble.seed, out.traj);
        out = analyze_trajectory(ar, table, c);
        out.iT = iT;
        if (!opt.out_dir.empty() && opt.write_archives) {
          const auto dir = opt.out_dir / ("T" + std::to_string(iT)) / ("traj" + std::to_string(j));
          write_archive(dir, ar, table, {{"initial_sample", j}, {"T_nK", out.T_K * 1e9}});
          std::ofstream g(dir / "condensate.sgpd", std::ios::binary);
          write_density_grid(g, out.final_grid.M, out.final_grid.extent, out.final_grid.psi);
        }
        say("T=" + fmt_double(out.T_K * 1e9) + " nK traj " + std::to_string(j) + ": N0=" +
            fmt_double(out.final_po.N0) + " fraction=" + fmt_double(out.fraction.fraction));
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        say("T index " + std::to_string(iT) + " traj " + std::to_string(j) + " failed: " + e.what());
      }
    }
  };
  const unsigned W = std::min<unsigned>(opt.workers ? opt.workers : worker_count(), static_cast<unsigned>(jobs.size()));
  if (W <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < W; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (!opt.out_dir.empty()) {
    detail::write_quench_tables(opt.out_dir, res);
    {
      std::ofstream cf(opt.out_dir / "config.yaml");
      cf << dump_config(c);
    }
    nlohmann::json m;
    m["code_version"] = ROTSGPE_VERSION;
    m["config"] = dump_config(c);
    m["seed"] = c.ensemble.seed;
    m["modes"] = table.size();
    m["workers"] = W;
    nlohmann::json runs = nlohmann::json::array();
    for (std::size_t k = 0; k < res.trajectories.size(); ++k) {
      const auto& t = res.trajectories[k];
      runs.push_back({{"T_index", jobs[k] / nJ},
                      {"initial_sample", jobs[k] % nJ},
                      {"noise_traj", t.traj},
                      {"ok", t.ok},
                      {"error", t.error},
                      {"warnings", t.warnings}});
    }
    m["runs"] = runs;
    m["failures"] = res.failures();
    std::ofstream mf(opt.out_dir / "manifest.json");
    mf << m.dump(2) << '\n';
  }
  return res;
}

// ------------------------------------------------------------ verify

struct GateResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<GateResult> gates;
  bool ok() const {
    return std::all_of(gates.begin(), gates.end(), [](const GateResult& g) { return g.pass; });
  }
};

/// Random in-band field with independent complex Gaussian coefficients.
inline FieldState random_field(const ModeTable& table, std::uint64_t seed, double scale = 1.0) {
  auto rng = make_stream(seed, 0, StreamPurpose::Test);
  ComplexGaussian g(scale * scale);
  FieldState f;
  f.coeffs.resize(table.size());
  for (auto& c : f.coeffs) c = g(rng);
  return f;
}

inline VerifyReport verify(const RunConfig& c) {
  VerifyReport rep;
  auto fmt = [](double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
  };
  const ModeTable table = c.modes();

  {  // mode count against a brute-force scan of the cutoff inequality
    std::size_t brute = 0;
    const double f = c.Omega_frac();
    const int lmax = static_cast<int>(std::ceil((c.Nbar + 1) / (1.0 - f))) + 2;
    for (int n = 0; 2 * n <= c.Nbar; ++n)
      for (int l = -lmax; l <= lmax; ++l)
        if (2.0 * n + std::abs(l) - f * l <= c.Nbar + detail::cutoff_slack) ++brute;
    rep.gates.push_back({"modes=" + std::to_string(table.size()), brute == table.size(),
                         "brute-force scan gives " + std::to_string(brute)});
  }

  const QuadratureTables quad = build_quadrature(table);
  SpectralWorkspace ws(table, quad);
  {  // round trip
    const FieldState a = random_field(table, c.ensemble.seed);
    CoeffVector back(table.size());
    ws.synthesize(a.coeffs, quad.projection);
    ws.analyse(quad.projection, back);
    double err = 0.0, nrm = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      err = std::max(err, std::abs(back[k] - a.coeffs[k]));
      nrm = std::max(nrm, std::abs(a.coeffs[k]));
    }
    rep.gates.push_back({"quadrature round trip", err <= 1e-12 * nrm, "max error " + fmt(err / nrm)});
  }
  {  // conservation smoke: one trap period, no reservoir
    EvolutionParams p;
    p.lambda = c.lambda();
    p.Gamma = 0.0;
    p.noise_on = false;
    p.dt = 1e-3;
    p.t_end = 2.0 * std::numbers::pi;
    p.snapshot_stride = p.steps();
    const FieldState a = random_field(table, c.ensemble.seed + 1, 2.0);
    const auto ar = evolve(a, p, table, quad, c.ensemble.seed, 0, {}, false);
    const auto& o0 = ar.observables.front();
    const auto& o1 = ar.observables.back();
    const double dN = std::abs(o1.N_GP / o0.N_GP - 1.0);
    const double dE = std::abs(o1.E_GP / o0.E_GP - 1.0);
    const double dL = std::abs(o1.L_z - o0.L_z) / std::max(std::abs(o0.L_z), o0.N_GP);
    const double worst = std::max({dN, dE, dL});
    rep.gates.push_back({"conservation (1 period)", worst <= 1e-8,
                         "relative drift N " + fmt(dN) + ", E " + fmt(dE) + ", L_z " + fmt(dL)});
  }
  {  // sampler moments: mean of |alpha|^2 over the band against sum(N + 1/2)
    const auto spec = c.initial_spec();
    const auto N = thermal_occupations(table, spec);
    const std::size_t S = 400;
    double mean = 0.0, var_expect = 0.0, expect = 0.0;
    for (double n : N) {
      expect += n + 0.5;
      var_expect += (n + 0.5) * (n + 0.5);
    }
    auto rng = make_stream(spec.seed, 0, StreamPurpose::Test);
    for (std::size_t s = 0; s < S; ++s) mean += norm_gp(sample_wigner(N, rng).coeffs);
    mean /= static_cast<double>(S);
    const double z = (mean - expect) / std::sqrt(var_expect / static_cast<double>(S));
    rep.gates.push_back({"sampler moments", std::abs(z) < 5.0,
                         "mean N_GP " + fmt(mean) + " vs " + fmt(expect) + " (" + fmt(z) + " sigma)"});
  }
  return rep;
}

}  // namespace rotsgpe
