#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <rotsgpe/config.hpp>
#include <rotsgpe/io.hpp>

using namespace rotsgpe;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rotsgpe_test_" + name);
  fs::remove_all(p);
  return p;
}

FieldState awkward_field(std::size_t n) {
  FieldState f;
  f.time = 12.375;
  for (std::size_t k = 0; k < n; ++k)
    f.coeffs.push_back({std::ldexp(1.0, -static_cast<int>(k % 60)) * (k % 3 ? -1 : 1) + 1e-300 * k,
                        std::nextafter(0.1 * k, 1e9)});
  f.coeffs[1] = {-0.0, std::numeric_limits<double>::denorm_min()};
  return f;
}

bool same_bits(const FieldState& a, const FieldState& b) {
  return a.coeffs.size() == b.coeffs.size() &&
         std::memcmp(a.coeffs.data(), b.coeffs.data(), a.coeffs.size() * sizeof(Complex)) == 0 &&
         std::memcmp(&a.time, &b.time, sizeof(double)) == 0;
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitExact) {
  const auto t = enumerate_modes(4, 0.979);
  const auto f = awkward_field(t.size());
  std::stringstream ss;
  write_checkpoint(ss, f, t);
  EXPECT_EQ(ss.str().size(), 4 + 4 + 4 + 8 + 8 + 8 + 16 * t.size());
  Checkpoint c;
  ASSERT_TRUE(read_checkpoint(ss, c));
  EXPECT_TRUE(same_bits(f, c.state));
  EXPECT_EQ(c.header.Nbar, 4u);
  EXPECT_EQ(c.header.Omega_frac, 0.979);
  EXPECT_EQ(table_for(c.header).size(), t.size());
  EXPECT_FALSE(read_checkpoint(ss, c));
}

TEST(Checkpoint, LittleEndianLayout) {
  const auto t = enumerate_modes(0, 0.0);
  FieldState f{{Complex(1.0, 0.0)}, 0.0};
  std::stringstream ss;
  write_checkpoint(ss, f, t);
  const std::string s = ss.str();
  EXPECT_EQ(s.substr(0, 4), "SGPF");
  EXPECT_EQ(static_cast<unsigned char>(s[4]), 1u);
  EXPECT_EQ(s[5], 0);
  // 1.0 = 0x3FF0000000000000, last two bytes of the real part
  EXPECT_EQ(static_cast<unsigned char>(s[36 + 6]), 0xF0u);
  EXPECT_EQ(static_cast<unsigned char>(s[36 + 7]), 0x3Fu);
}

TEST(Checkpoint, RejectsBadMagicAndTruncation) {
  std::stringstream bad("XXXXabcdefgh");
  Checkpoint c;
  EXPECT_THROW(read_checkpoint(bad, c), std::runtime_error);
  const auto t = enumerate_modes(2, 0.5);
  std::stringstream ss;
  write_checkpoint(ss, awkward_field(t.size()), t);
  std::stringstream cut(ss.str().substr(0, ss.str().size() - 5));
  EXPECT_THROW(read_checkpoint(cut, c), std::runtime_error);
}

TEST(Checkpoint, HeaderMustMatchBand) {
  CheckpointHeader h;
  h.Nbar = 4;
  h.Omega_frac = 0.979;
  h.count = 17;
  EXPECT_THROW(table_for(h), std::runtime_error);
}

TEST(Checkpoint, FileRoundTrip) {
  const auto t = enumerate_modes(4, 0.979);
  const auto f = awkward_field(t.size());
  const auto p = scratch("ck.sgpf");
  save_checkpoint(p, f, t);
  EXPECT_TRUE(same_bits(load_checkpoint(p).state, f));
  fs::remove(p);
}

TEST(Archive, RoundTrip) {
  const auto t = enumerate_modes(3, 0.8);
  TrajectoryArchive ar;
  ar.seed = 99;
  ar.traj = 4;
  ar.params.lambda = 0.005686;
  ar.params.mu_tilde = 4.29819;
  ar.params.T_tilde = 2.51044;
  ar.params.Gamma = 0.01;
  ar.params.dt = 5e-3;
  ar.params.t_end = 1.0 / 3.0;
  ar.params.snapshot_stride = 60;
  ar.warnings = {"w1, with \"quotes\""};
  for (int i = 0; i < 3; ++i) {
    auto f = awkward_field(t.size());
    f.time = 0.1 * i;
    ar.snapshots.push_back(f);
    ar.observables.push_back({0.1 * i, 1.0 / 3 + i, -2.5e-7, 1e300});
  }
  const auto dir = scratch("archive");
  write_archive(dir, ar, t);
  ModeTable back_t;
  const auto back = read_archive(dir, &back_t);
  EXPECT_EQ(back_t.size(), t.size());
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.traj, 4u);
  EXPECT_EQ(back.params.t_end, ar.params.t_end);
  EXPECT_EQ(back.params.lambda, ar.params.lambda);
  EXPECT_EQ(back.params.snapshot_stride, 60u);
  EXPECT_EQ(back.warnings, ar.warnings);
  ASSERT_EQ(back.snapshots.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(same_bits(back.snapshots[i], ar.snapshots[i]));
  ASSERT_EQ(back.observables.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back.observables[i].t, ar.observables[i].t);
    EXPECT_EQ(back.observables[i].N_GP, ar.observables[i].N_GP);
    EXPECT_EQ(back.observables[i].E_GP, ar.observables[i].E_GP);
    EXPECT_EQ(back.observables[i].L_z, ar.observables[i].L_z);
  }
  fs::remove_all(dir);
}

TEST(Csv, QuotingAndShortestDoubles) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(fmt_double(0.1), "0.1");
  EXPECT_EQ(std::stod(fmt_double(1.0 / 3)), 1.0 / 3);
}

TEST(Config, DefaultsAreThePaperBand) {
  const auto c = parse_config("");
  EXPECT_EQ(c.modes().size(), 291u);
  EXPECT_NEAR(c.lambda(), 0.005686, 5e-6);
  const auto p = c.evolution(0);
  EXPECT_NEAR(p.T_tilde, 2.51044, 1e-4);
  EXPECT_NEAR(p.mu_tilde, 4.29819, 1e-4);
  const auto s = c.initial_spec();
  EXPECT_NEAR(s.T_tilde, 30.1252, 1e-3);
  EXPECT_NEAR(s.mu_tilde, 0.340361, 1e-5);
}

TEST(Config, UnitTags) {
  const auto c = parse_config(R"(
trap:
  omega_r: 52.150438 rad/s
  Omega: 0.5 omega_r
species:
  mass: 86.909180527 u
  scattering_length: 100.4 a0
quench:
  T: [1000 uK, 3 nK]
dynamics:
  dt: 0.5 ms
  t_end: 2 periods
)");
  EXPECT_NEAR(c.geometry().omega_r, 52.150438, 1e-9);
  EXPECT_NEAR(c.geometry().mass / 1.443160648e-25, 1.0, 1e-6);
  EXPECT_NEAR(c.scattering_length_m(), 5.313e-9, 1e-12);
  EXPECT_EQ(c.quench.T.size(), 2u);
  EXPECT_NEAR(RunConfig::kelvin(c.quench.T[0]), 1e-3, 1e-15);
  EXPECT_NEAR(c.dimensionless_time(c.dynamics.dt), 0.5e-3 * 52.150438, 1e-12);
  EXPECT_NEAR(c.dimensionless_time(c.dynamics.t_end), 2 * constants::two_pi, 1e-12);
}

TEST(Config, CutoffByEnergy) {
  EXPECT_EQ(parse_config("cutoff:\n  E_R: 3 hbar_omega_r\n").Nbar, 2);
  EXPECT_THROW(parse_config("cutoff:\n  E_R: 3 hbar_omega_r\n  Nbar: 2\n"), ConfigError);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("trap:\n  omega_r: 8.3 Hz\n  omegaz: 5 Hz\n"), 3);
  EXPECT_EQ(line_of("name: x\nbogus: 1\n"), 2);
  EXPECT_EQ(line_of("trap:\n  omega_r: 8.3 nK\n"), 2);
  EXPECT_EQ(line_of("dynamics:\n  Gamma: 0.01\n  dt: fast\n"), 3);
  EXPECT_EQ(line_of("analysis:\n  grid_M: many\n"), 2);
  try {
    parse_config("trap:\n  omega_r: 8.3 nK\n");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("config line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("frequency"), std::string::npos);
  }
}

TEST(Config, RejectsInconsistentValues) {
  EXPECT_THROW(parse_config("initial:\n  mu: 5 eps000\n"), ConfigError);
  EXPECT_THROW(parse_config("dynamics:\n  snapshot_stride: 0\n"), ConfigError);
}

TEST(Config, DumpRoundTrip) {
  auto c = parse_config("name: round\nquench:\n  T: [1 nK, 2.5 nK]\nensemble:\n  seed: 12345678901\n");
  c.analysis.half_quantum = false;
  const auto back = parse_config(dump_config(c));
  EXPECT_TRUE(back == c);
}

TEST(Config, PresetsParse) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(ROTSGPE_PRESET_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(load_config(e.path().string())) << e.path();
    ++n;
  }
  EXPECT_GE(n, 3);
}
