#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <rotsgpe/rotsgpe.hpp>

#ifndef ROTSGPE_PRESET_DIR
#define ROTSGPE_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace rotsgpe;

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
};

fs::path preset_path(const std::string& name) {
  const char* env = std::getenv("SGPE_PRESET_DIR");
  const fs::path dir = env ? fs::path(env) : fs::path(ROTSGPE_PRESET_DIR);
  return dir / (name + ".yaml");
}

RunConfig resolve(const Common& o) {
  if (!o.config.empty() && !o.preset.empty()) throw std::runtime_error("give --config or --preset, not both");
  RunConfig c;
  if (!o.config.empty())
    c = load_config(o.config);
  else if (!o.preset.empty())
    c = load_config(preset_path(o.preset).string());
  if (o.seed) c.ensemble.seed = *o.seed;
  return c;
}

void add_common(CLI::App* app, Common& o, bool with_out = true) {
  app->add_option("--config", o.config, "YAML run configuration");
  app->add_option("--preset", o.preset, "named preset from the presets directory");
  app->add_option("--seed", o.seed, "override ensemble.seed");
  if (with_out) app->add_option("--out", o.out, "output file or directory");
}

// stdout when path is empty
template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  f(os);
}

bool is_archive(const fs::path& p) { return fs::is_directory(p) && fs::exists(p / "meta.json"); }

void write_ensemble_report(const fs::path& dir, const EnsembleAnalysis& r) {
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "spectrum.csv");
    CsvWriter w(os);
    w.header({"index", "eigenvalue"});
    for (std::size_t i = 0; i < r.po.spectrum.size(); ++i) {
      w << i << r.po.spectrum[i];
      w.endrow();
    }
  }
  {
    std::ofstream os(dir / "vortices.csv");
    CsvWriter w(os);
    w.header({"x", "y", "charge"});
    for (const auto& v : r.vortices.vortices) {
      w << v.x << v.y << v.charge;
      w.endrow();
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotating-frame stochastic projected GPE toolkit"};
  app.require_subcommand(1);

  Common o;
  std::size_t traj = 0;
  bool traj_set = false;
  std::string input;
  std::size_t t_index = 0;

  auto* thermo = app.add_subcommand("thermo", "ideal-gas T_C and <L_z> tables against rotation");
  add_common(thermo, o);

  auto* rates = app.add_subcommand("rates", "reservoir rates and the G1 profile at the quench temperatures");
  add_common(rates, o);

  auto* sample = app.add_subcommand("sample", "Wigner samples of the initial ensemble as checkpoints");
  add_common(sample, o);
  sample->add_option("--traj", traj, "write only this sample index")->each([&](const std::string&) { traj_set = true; });

  auto* evolve_cmd = app.add_subcommand("evolve", "evolve one checkpoint into a trajectory archive");
  add_common(evolve_cmd, o);
  evolve_cmd->add_option("--input", input, "checkpoint file")->required();
  evolve_cmd->add_option("--traj", traj, "noise stream index");
  evolve_cmd->add_option("--temperature-index", t_index, "index into quench.T");

  auto* analyze = app.add_subcommand("analyze", "condensate, vortices and histograms from an archive or sample set");
  add_common(analyze, o);
  analyze->add_option("--input", input, "archive directory or directory of checkpoints")->required();

  auto* quench = app.add_subcommand("quench", "full quench protocol over the ensemble and temperatures");
  add_common(quench, o);
  quench->add_option("--traj", traj, "run only this initial-sample index")->each([&](const std::string&) {
    traj_set = true;
  });

  auto* verify_cmd = app.add_subcommand("verify", "fast invariant gates");
  add_common(verify_cmd, o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig c = resolve(o);

    if (*thermo) {
      with_output(o.out, [&](std::ostream& os) { emit_thermo_tables(c, os); });
      return 0;
    }

    if (*rates) {
      if (o.out.empty()) {
        emit_rate_summary(c, std::cout);
        for (std::size_t i = 0; i < c.quench.T.size(); ++i) {
          std::cout << "\n# profile T=" << to_string(c.quench.T[i]) << "\n";
          emit_rate_profile(c, i, std::cout);
        }
      } else {
        fs::create_directories(o.out);
        with_output((fs::path(o.out) / "rates_summary.csv").string(), [&](std::ostream& os) { emit_rate_summary(c, os); });
        for (std::size_t i = 0; i < c.quench.T.size(); ++i)
          with_output((fs::path(o.out) / ("rates_profile_T" + std::to_string(i) + ".csv")).string(),
                      [&](std::ostream& os) { emit_rate_profile(c, i, os); });
      }
      return 0;
    }

    if (*sample) {
      const fs::path dir = o.out.empty() ? fs::path("samples") : fs::path(o.out);
      fs::create_directories(dir);
      const ModeTable table = c.modes();
      const auto spec = c.initial_spec();
      const std::size_t lo = traj_set ? traj : 0, hi = traj_set ? traj + 1 : spec.n_samples;
      for (std::size_t j = lo; j < hi; ++j) {
        char name[32];
        std::snprintf(name, sizeof name, "sample_%05zu.sgpf", j);
        save_checkpoint(dir / name, sample_wigner(spec, table, static_cast<std::uint32_t>(j)), table);
      }
      std::cout << "wrote " << hi - lo << " checkpoints (" << table.size() << " modes) to " << dir << "\n";
      return 0;
    }

    if (*evolve_cmd) {
      const Checkpoint ck = load_checkpoint(input);
      const ModeTable table = table_for(ck.header);
      if (static_cast<int>(ck.header.Nbar) != c.Nbar || ck.header.Omega_frac != c.Omega_frac())
        throw std::runtime_error("checkpoint band (Nbar, Omega) differs from the configuration");
      const QuadratureTables quad = build_quadrature(table);
      const auto p = c.evolution(t_index);
      const auto ar = evolve(ck.state, p, table, quad, c.ensemble.seed, static_cast<std::uint32_t>(traj));
      const fs::path dir = o.out.empty() ? fs::path("archive") : fs::path(o.out);
      write_archive(dir, ar, table, {{"input", input}});
      for (const auto& w : ar.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "wrote " << ar.snapshots.size() << " snapshots to " << dir << "\n";
      return 0;
    }

    if (*analyze) {
      const fs::path in(input);
      const fs::path dir = o.out.empty() ? fs::path("analysis") : fs::path(o.out);
      if (is_archive(in)) {
        ModeTable table;
        const auto ar = read_archive(in, &table);
        QuenchResult q;
        q.trajectories.push_back(analyze_trajectory(ar, table, c));
        fs::create_directories(dir);
        detail::write_quench_tables(dir, q);
        std::ofstream g(dir / "condensate.sgpd", std::ios::binary);
        const auto& t = q.trajectories.front();
        write_density_grid(g, t.final_grid.M, t.final_grid.extent, t.final_grid.psi);
        for (const auto& w : t.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "N0=" << t.final_po.N0 << " vortices +" << t.final_vortices.count(1) << " -"
                  << t.final_vortices.count(-1) << " fraction=" << t.fraction.fraction << " ideal=" << t.ideal << "\n";
      } else if (fs::is_directory(in)) {
        std::vector<FieldState> samples;
        std::optional<ModeTable> table;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(in))
          if (e.path().extension() == ".sgpf") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
          const auto ck = load_checkpoint(f);
          if (!table) table = table_for(ck.header);
          if (ck.header.count != table->size()) throw std::runtime_error(f.string() + ": mode count differs");
          samples.push_back(ck.state);
        }
        if (samples.empty()) throw std::runtime_error("no .sgpf checkpoints in " + in.string());
        const auto r = analyze_ensemble(samples, *table, c.analysis);
        write_ensemble_report(dir, r);
        std::cout << "samples=" << samples.size() << " N0=" << r.po.N0 << " vortices +" << r.vortices.count(1) << " -"
                  << r.vortices.count(-1) << "\n";
      } else {
        throw std::runtime_error(input + " is neither an archive nor a directory of checkpoints");
      }
      return 0;
    }

    if (*quench) {
      QuenchOptions opt;
      opt.out_dir = o.out.empty() ? fs::path("quench") : fs::path(o.out);
      opt.log = &std::cerr;
      if (traj_set) opt.only_sample = traj;
      const auto r = run_quench(c, opt);
      std::cout << "trajectories=" << r.trajectories.size() << " failures=" << r.failures() << " -> " << opt.out_dir
                << "\n";
      return r.failures() ? 1 : 0;
    }

    if (*verify_cmd) {
      const auto rep = verify(c);
      for (const auto& g : rep.gates) std::cout << g.name << " " << (g.pass ? "PASS" : "FAIL") << "  (" << g.detail << ")\n";
      return rep.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
