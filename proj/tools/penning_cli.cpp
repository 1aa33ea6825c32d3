// penning: command-line front end for the two-electron trap simulator.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 physics-domain error,
// 4 numerical abort. Failures print one JSON error record on stderr.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "json.hpp"
#include "penning/classical.hpp"
#include "penning/config_io.hpp"
#include "penning/errors.hpp"
#include "penning/protocols.hpp"
#include "penning/report.hpp"
#include "penning/trap_model.hpp"

using namespace penning;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kHz = 1.0 / kTwoPi;

enum class Format { csv, json };

struct Globals {
  std::string config_path;
  std::string out_dir = "out";
  Format format = Format::csv;
  std::optional<int> cutoff;
  std::optional<double> delta_over_omega;
  std::uint64_t seed = 0;
};

class Run {
 public:
  Run(const Globals& g, std::string command, ojson overrides)
      : g_(g), command_(std::move(command)), overrides_(std::move(overrides)) {
    config_ = g.config_path.empty() ? representative_config() : load_config(g.config_path);
    if (g.cutoff) config_.fock_cutoff = *g.cutoff;
    if (g.delta_over_omega) config_.delta_over_omega = *g.delta_over_omega;
    validate(config_);
  }

  const TrapConfig& config() const { return config_; }

  void report(const std::string& stem, const Report& r) {
    for (const auto& q : r) std::cout << q.name << " = " << format_number(q.value) << (q.unit.empty() ? "" : " ") << q.unit << "\n";
    if (g_.format == Format::csv) {
      write(stem + ".csv", report_csv(r));
    } else {
      write(stem + ".json", report_json(r).dump(2) + "\n");
    }
  }

  void table(const std::string& stem, const Table& t) {
    if (g_.format == Format::csv) {
      write(stem + ".csv", table_csv(t));
    } else {
      write(stem + ".json", table_json(t).dump(2) + "\n");
    }
  }

  void write(const std::string& name, const std::string& content) {
    write_text_file((std::filesystem::path(g_.out_dir) / name).string(), content);
    outputs_.push_back(name);
  }

  void finish() {
    RunManifest m{command_, config_to_json(config_), overrides_, PENNING_VERSION, outputs_};
    write_text_file((std::filesystem::path(g_.out_dir) / (command_ + ".manifest.json")).string(),
                    to_json(m).dump(2) + "\n");
  }

 private:
  const Globals& g_;
  std::string command_;
  ojson overrides_;
  TrapConfig config_;
  std::vector<std::string> outputs_;
};

ojson given_options(const CLI::App& app) {
  ojson j = ojson::object();
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    const auto& res = opt->results();
    if (opt->get_expected_max() == 0) {
      j[opt->get_name()] = true;
    } else if (res.size() == 1) {
      j[opt->get_name()] = res.front();
    } else {
      j[opt->get_name()] = res;
    }
  }
  return j;
}

double rabi_or_default(const TrapConfig& c, double rabi_hz) {
  return rabi_hz > 0.0 ? kTwoPi * rabi_hz : rabi_frequency(c);
}

Elimination parse_mode(const std::string& s) {
  if (s == "effective") return Elimination::effective;
  if (s == "exact") return Elimination::exact;
  throw ConfigError("mode must be 'effective' or 'exact'");
}

void cmd_freqs(Run& run) {
  const TrapConfig& c = run.config();
  const ModeFrequencies f = derive_frequencies(c);
  const RotatingFrameFrequencies r = single_particle_rotating(c);
  run.report("freqs", {{"omega_c_over_2pi", f.omega_c * kHz, "Hz"},
                       {"omega_c_prime_over_2pi", f.omega_c_prime * kHz, "Hz"},
                       {"omega_z_over_2pi", c.omega_z * kHz, "Hz"},
                       {"omega_m_over_2pi", f.omega_m * kHz, "Hz"},
                       {"omega_s_over_2pi", f.omega_s * kHz, "Hz"},
                       {"omega_a_prime_over_2pi", f.omega_a_prime * kHz, "Hz"},
                       {"omega_wall_over_2pi", c.omega_wall * kHz, "Hz"},
                       {"rotating_cyclotron_over_2pi", r.cyclotron * kHz, "Hz"},
                       {"rotating_axial_over_2pi", r.axial * kHz, "Hz"},
                       {"rotating_magnetron_over_2pi", r.magnetron * kHz, "Hz"}});
}

void cmd_equilibrium(Run& run) {
  const TrapConfig& c = run.config();
  const Equilibrium eq = rotating_wall_equilibrium(c);
  run.report("equilibrium", {{"x0", eq.x0, "m"},
                             {"x0_trap_units", eq.x0 / trap_units(c.omega_z).length, "sqrt(hbar/(m omega_z))"},
                             {"omega_wall_over_2pi", c.omega_wall * kHz, "Hz"},
                             {"window_low_over_2pi", eq.window_low * kHz, "Hz"},
                             {"window_high_over_2pi", eq.window_high * kHz, "Hz"},
                             {"radial_curvature", eq.radial_curvature, "rad^2/s^2"}});
}

void cmd_modes(Run& run) {
  const ModeSpectrum s = normal_modes(run.config());
  Report r;
  for (const auto& m : s.modes) {
    r.push_back({to_string(m.symmetry) + "_" + to_string(m.branch) + "_over_2pi", m.frequency * kHz, "Hz"});
  }
  for (ModeBranch b : {ModeBranch::cyclotron, ModeBranch::axial, ModeBranch::magnetron}) {
    r.push_back({to_string(b) + "_splitting_over_2pi", s.splitting(b) * kHz, "Hz"});
  }
  run.report("modes", r);
}

void cmd_audit(Run& run) {
  const TrapConfig& c = run.config();
  const LeakageReport a = leakage_audit(c, normal_modes(c));
  Report r;
  for (const auto& e : a.entries) {
    r.push_back({e.term + "_coupling_over_2pi", e.coupling * kHz, "Hz"});
    r.push_back({e.term + "_detuning_over_2pi", e.detuning * kHz, "Hz"});
    r.push_back({e.term + "_ratio", e.ratio, ""});
  }
  r.push_back({"max_ratio", a.max_ratio, ""});
  run.report("audit", r);
}

void cmd_budget(Run& run) {
  const TrapConfig& c = run.config();
  const TimingBudget b = timing_budget(c);
  run.report("budget", {{"rabi_over_2pi", rabi_frequency(c) * kHz, "Hz"},
                        {"t_dec", b.t_dec, "s"},
                        {"t_meas", b.t_meas, "s"},
                        {"pulse_budget", b.pulse_budget, "s"},
                        {"delta_over_omega", c.delta_over_omega, ""},
                        {"required_rabi_over_2pi", b.required_rabi * kHz, "Hz"},
                        {"required_z0", b.required_z0, "m"}});
}

void emit_protocol(Run& run, const std::string& stem, const ProtocolResult& p, Report extra) {
  Report r{{"rabi_over_2pi", p.rabi * kHz, "Hz"},
           {"fidelity", p.target_fidelity, ""},
           {"concurrence", concurrence(p.final_state), ""}};
  for (const auto& [k, v] : p.metadata) r.push_back({k, v, k.ends_with("_s") ? "s" : "1/Omega"});
  r.insert(r.end(), extra.begin(), extra.end());
  run.report(stem, r);
  run.write(stem + ".state.txt", to_text(p.final_state));
  run.write(stem + ".sequence.txt", to_text(p.sequence, p.rabi));
}

struct MetrologyFlags {
  bool ideal_ghz = false;
  int uncorrelated = 0;
  std::string mode = "effective";
  double phase_step = 1e-3;
  int shots = 0;
  double rabi_hz = 0.0;
};

void cmd_metrology(Run& run, const MetrologyFlags& f, std::uint64_t seed) {
  const TrapConfig& c = run.config();
  if (!(f.phase_step > 0.0)) throw ConfigError("phase step must be > 0");
  const std::vector<double> phases = periodic_phase_grid(f.phase_step);
  FringeCurve curve;
  double rabi = 0.0;
  if (f.ideal_ghz) {
    curve = ideal_ghz_curve(phases, c.fock_cutoff);
  } else if (f.uncorrelated > 0) {
    curve = uncorrelated_ramsey_curve(f.uncorrelated, phases);
  } else {
    rabi = rabi_or_default(c, f.rabi_hz);
    curve = metrology_curve(rabi, c.delta_over_omega * rabi, phases, parse_mode(f.mode), c.fock_cutoff);
  }
  const UncertaintyFigure u = uncertainty_figure(curve);
  Report r{{"figure", u.figure, "1/sqrt(T t)"},
           {"optimal_phase", u.optimal_phase, "rad"},
           {"shot_noise", kShotNoiseFigure, "1/sqrt(T t)"},
           {"heisenberg", kHeisenbergFigure, "1/sqrt(T t)"},
           {"phase_points", static_cast<double>(phases.size()), ""}};
  if (f.shots > 0) {
    if (rabi == 0.0) throw ConfigError("--shots applies to the two-electron protocol only");
    const RamseyPoint p = ramsey_run(rabi, c.delta_over_omega * rabi, u.optimal_phase, 1.0, parse_mode(f.mode),
                                     c.fock_cutoff);
    const HilbertSpace space(c.fock_cutoff);
    QuantumState s{space, Eigen::VectorXcd::Zero(space.dimension())};
    for (int n = 0; n < space.levels(); ++n) s.amplitudes[space.index(Spin::down, Spin::down, n)] = std::sqrt(p.probabilities[n]);
    const NumberStatistics sampled = sample_number(s, f.shots, seed);
    r.push_back({"shots", static_cast<double>(f.shots), ""});
    r.push_back({"sampled_mean", sampled.mean, ""});
    r.push_back({"sampled_variance", sampled.variance, ""});
  }
  run.report("metrology", r);
  Table t{{"phase_rad", "mean_n", "variance_n"}, {}};
  for (std::size_t i = 0; i < curve.phase.size(); ++i) t.rows.push_back({curve.phase[i], curve.mean[i], curve.variance[i]});
  run.table("metrology.fringe", t);
}

struct PartialFlags {
  int points = 200;
  double phase_step = 1e-3;
};

void cmd_scan_partial(Run& run, const PartialFlags& f) {
  const TrapConfig& c = run.config();
  if (f.points < 2) throw ConfigError("--points must be >= 2");
  if (!(f.phase_step > 0.0)) throw ConfigError("phase step must be > 0");
  const double rabi = 1.0;
  const PartialScan scan = partial_protocol_scan(rabi, partial_t3_grid(rabi, f.points), f.phase_step, c.fock_cutoff);
  Table t{{"sqrt6_omega_t3", "figure", "shot_noise", "heisenberg"}, {}};
  for (const auto& row : scan.rows) t.rows.push_back({row.sqrt6_omega_t3, row.figure, kShotNoiseFigure, kHeisenbergFigure});
  run.table("scan-partial", t);
  double lowest = scan.rows.front().figure;
  for (const auto& row : scan.rows) lowest = std::min(lowest, row.figure);
  const auto& best = scan.rows[scan.best];
  run.report("scan-partial.summary", {{"best_sqrt6_omega_t3", best.sqrt6_omega_t3, ""},
                                      {"best_figure", best.figure, "1/sqrt(T t)"},
                                      {"best_optimal_phase", best.optimal_phase, "rad"},
                                      {"curve_minimum", lowest, "1/sqrt(T t)"},
                                      {"points", static_cast<double>(f.points), ""}});
}

struct ClassicalFlags {
  double amplitude_x0 = 50.0;
  double periods = 1000.0;
  double scaled_ratio = 10.0;
  double step_phase = 0.05;
  int sample_every = 20;
  bool drive = false;
  double drive_detuning = 0.01;
  std::vector<double> stretch_offset{0.0, 0.0, 0.0};
  double threshold = 0.5;
  std::string rotation = "tangent";
  bool dump_state = false;
};

void cmd_classical(Run& run, const ClassicalFlags& f) {
  const TrapConfig base = run.config();
  const TrapConfig c = f.scaled_ratio > 0.0 ? scaled_config(base, f.scaled_ratio) : base;
  if (!(f.periods > 0.0)) throw ConfigError("--periods must be > 0");
  if (f.stretch_offset.size() != 3) throw ConfigError("--stretch-offset takes three values");
  if (f.rotation != "tangent" && f.rotation != "exact") throw ConfigError("--rotation must be 'tangent' or 'exact'");
  const Equilibrium eq = rotating_wall_equilibrium(c);
  StabilityOptions o;
  o.excitation = f.drive ? Excitation::continuous_drive : Excitation::initial_displacement;
  o.drive_detuning = f.drive_detuning;
  o.threshold = f.threshold;
  o.stretch_offset = Eigen::Vector3d(f.stretch_offset[0], f.stretch_offset[1], f.stretch_offset[2]);
  o.cyclotron_phase_per_step = f.step_phase;
  o.sample_every = f.sample_every;
  o.rotation = f.rotation == "tangent" ? RotationRule::tangent : RotationRule::exact_angle;
  const double duration = f.periods * kTwoPi / c.omega_z;
  const StabilityRun res = stretch_stability(c, f.amplitude_x0 * eq.x0, duration, o);

  const Trajectory& tr = res.trajectory;
  Table t{{"t_trap_units", "x_st", "y_st", "z_st"}, {}};
  t.rows.reserve(tr.time.size());
  for (std::size_t i = 0; i < tr.time.size(); ++i) {
    t.rows.push_back({tr.time[i] / tr.units.time, tr.stretch[i].x(), tr.stretch[i].y(), tr.stretch[i].z()});
  }
  run.table("classical", t);

  const StabilityReport& s = res.report;
  run.report("classical.report", {{"max_deviation", s.max_deviation, "x0"},
                                  {"energy_drift_total", s.energy_drift_total, ""},
                                  {"energy_drift_per_period", s.energy_drift_per_period, ""},
                                  {"bounded", s.bounded ? 1.0 : 0.0, ""},
                                  {"threshold", s.threshold, "x0"},
                                  {"x0", s.x0, "m"},
                                  {"x0_trap_units", s.x0 / tr.units.length, "sqrt(hbar/(m omega_z))"},
                                  {"z0_amplitude", f.amplitude_x0 * s.x0, "m"},
                                  {"axial_periods", s.axial_periods, ""},
                                  {"omega_c_over_omega_z", cyclotron_frequency(c.b_field) / c.omega_z, ""},
                                  {"b_field", c.b_field, "T"},
                                  {"omega_wall_over_2pi", c.omega_wall * kHz, "Hz"},
                                  {"step_cyclotron_phase", f.step_phase, "rad"},
                                  {"length_unit", tr.units.length, "m"},
                                  {"time_unit", tr.units.time, "s"}});
  if (f.dump_state) {
    std::string dump = "# t_s x1 y1 z1 x2 y2 z2 vx1 vy1 vz1 vx2 vy2 vz2 (SI)\n";
    for (const auto& st : tr.lab) {
      dump += format_number(st.time);
      for (const auto& r : st.positions) {
        for (int k = 0; k < 3; ++k) dump += " " + format_number(r[k]);
      }
      for (const auto& v : st.velocities) {
        for (int k = 0; k < 3; ++k) dump += " " + format_number(v[k]);
      }
      dump += "\n";
    }
    run.write("classical.state.txt", dump);
  }
}

int fail(int code, const std::string& category, const std::string& kind, const std::string& message) {
  ojson rec;
  rec["error"] = {{"category", category}, {"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << rec.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-electron Penning trap entanglement simulator", "penning"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", PENNING_VERSION);

  Globals g;
  app.add_option("--config", g.config_path, "JSON config (defaults to the representative trap)");
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  std::string format = "csv";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--cutoff", g.cutoff, "Fock cutoff n_max");
  app.add_option("--delta-over-omega", g.delta_over_omega, "Off-resonant detuning in units of Omega");
  app.add_option("--seed", g.seed, "Seed for shot sampling")->capture_default_str();

  std::function<void(Run&)> action;
  auto simple = [&](const char* name, const char* help, void (*fn)(Run&)) {
    app.add_subcommand(name, help)->callback([&action, fn] { action = fn; });
  };
  simple("freqs", "Derived trap frequencies", cmd_freqs);
  simple("equilibrium", "Rotating-wall equilibrium of the electron pair", cmd_equilibrium);
  simple("modes", "Normal modes about the equilibrium", cmd_modes);
  simple("audit", "Leakage audit of neglected couplings", cmd_audit);
  simple("budget", "Coherence and Rabi-frequency budget", cmd_budget);

  double bell_rabi_hz = 0.0;
  auto* bell = app.add_subcommand("bell", "Bell-state gate");
  bell->add_option("--rabi-hz", bell_rabi_hz, "Omega/2pi (default: from z0_drive)");
  bell->callback([&] {
    action = [&](Run& run) {
      const double rabi = rabi_or_default(run.config(), bell_rabi_hz);
      emit_protocol(run, "bell", bell_protocol(rabi, run.config().fock_cutoff), {});
    };
  });

  std::string ghz_mode = "effective";
  double ghz_rabi_hz = 0.0;
  bool ghz_optimize = false;
  auto* ghz = app.add_subcommand("ghz", "GHZ-state preparation by composite pi/2 pulse");
  ghz->add_option("--mode", ghz_mode, "Off-resonant segment: effective or exact")->capture_default_str();
  ghz->add_option("--rabi-hz", ghz_rabi_hz, "Omega/2pi (default: from z0_drive)");
  ghz->add_flag("--optimize", ghz_optimize, "Also optimize the duration triple within +-0.02/Omega");
  ghz->callback([&] {
    action = [&](Run& run) {
      const TrapConfig& c = run.config();
      const double rabi = rabi_or_default(c, ghz_rabi_hz);
      const Elimination mode = parse_mode(ghz_mode);
      const double detuning = c.delta_over_omega * rabi;
      Report extra;
      if (ghz_optimize) {
        const TripleOptimum opt =
            optimize_ghz_triple(rabi, detuning, mode, prepare_triple(c.delta_over_omega), 0.02, c.fock_cutoff);
        extra = {{"optimized_fidelity", opt.fidelity, ""},
                 {"optimized_first", opt.triple[0], "1/Omega"},
                 {"optimized_middle", opt.triple[1], "1/Omega"},
                 {"optimized_last", opt.triple[2], "1/Omega"}};
      }
      emit_protocol(run, "ghz", ghz_prepare(rabi, detuning, mode, c.fock_cutoff), extra);
    };
  });

  MetrologyFlags mf;
  auto* met = app.add_subcommand("metrology", "Ramsey uncertainty figure");
  met->add_flag("--ideal-ghz", mf.ideal_ghz, "Ideal GHZ state and readout");
  met->add_option("--uncorrelated", mf.uncorrelated, "Baseline of K independent spins");
  met->add_option("--mode", mf.mode, "Off-resonant segment: effective or exact")->capture_default_str();
  met->add_option("--phase-step", mf.phase_step, "Maximum phase grid spacing (rad)")->capture_default_str();
  met->add_option("--shots", mf.shots, "Also estimate <N> and Var N at the optimal phase from this many shots");
  met->add_option("--rabi-hz", mf.rabi_hz, "Omega/2pi (default: from z0_drive)");
  met->callback([&] { action = [&](Run& run) { cmd_metrology(run, mf, g.seed); }; });

  PartialFlags pf;
  auto* scan = app.add_subcommand("scan-partial", "Partial-protocol scan over t3");
  scan->add_option("--points", pf.points, "Number of t3 grid points")->capture_default_str();
  scan->add_option("--phase-step", pf.phase_step, "Maximum phase grid spacing (rad)")->capture_default_str();
  scan->callback([&] { action = [&](Run& run) { cmd_scan_partial(run, pf); }; });

  ClassicalFlags cf;
  auto* cl = app.add_subcommand("classical", "Classical two-electron trajectory and stretch stability");
  cl->add_option("--amplitude-x0", cf.amplitude_x0, "Common axial displacement in units of x0")->capture_default_str();
  cl->add_option("--periods", cf.periods, "Duration in axial periods")->capture_default_str();
  cl->add_option("--scaled-ratio", cf.scaled_ratio, "omega_c/omega_z of the scaled trap (0 keeps the config)")
      ->capture_default_str();
  cl->add_option("--step-phase", cf.step_phase, "omega_c dt (must be <= 0.05)")->capture_default_str();
  cl->add_option("--sample-every", cf.sample_every, "Steps between output samples")->capture_default_str();
  cl->add_flag("--drive", cf.drive, "Continuous axial drive instead of an initial displacement");
  cl->add_option("--drive-detuning", cf.drive_detuning, "Drive at omega_z (1 + detuning)")->capture_default_str();
  cl->add_option("--stretch-offset", cf.stretch_offset, "Initial offset of r1 - r2 in units of x0 (x y z)")
      ->expected(3);
  cl->add_option("--threshold", cf.threshold, "Boundedness threshold in units of x0")->capture_default_str();
  cl->add_option("--rotation", cf.rotation, "Magnetic rotation angle: tangent or exact")->capture_default_str();
  cl->add_flag("--dump-state", cf.dump_state, "Also write the full lab-frame state at each sample");
  cl->callback([&] { action = [&](Run& run) { cmd_classical(run, cf); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "config", "usage", e.what());
  }
  g.format = format == "json" ? Format::json : Format::csv;

  try {
    const CLI::App* sub = app.get_subcommands().front();
    ojson overrides = given_options(app);
    const ojson sub_options = given_options(*sub);
    for (const auto& [k, v] : sub_options.items()) overrides[k] = v;
    Run run(g, sub->get_name(), overrides);
    action(run);
    run.finish();
  } catch (const ConfigError& e) {
    return fail(2, "config", "invalid_config", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "config", "invalid_argument", e.what());
  } catch (const std::out_of_range& e) {
    return fail(2, "config", "out_of_range", e.what());
  } catch (const PhysicsDomainError& e) {
    return fail(3, "physics", e.kind(), e.what());
  } catch (const NumericalAbort& e) {
    return fail(4, "numerical", "integrator_abort", e.what());
  } catch (const DegenerateFringe& e) {
    return fail(4, "numerical", "degenerate_fringe", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", "unexpected", e.what());
  }
  return 0;
}
