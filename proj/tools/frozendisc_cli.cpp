// frozendisc: command line driver for colored-noise dephasing sweeps.
//
// Exit codes: 0 ok, 1 configuration error, 2 I/O error, 3 validation,
// consistency or numerical failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "frozendisc/discord_optimizer.hpp"
#include "frozendisc/sweep.hpp"

namespace fd = frozendisc;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitFailed = 3;

struct CommonOptions {
  double a = 1.0;
  double tau = 5.0;
  int axis = 3;
  double c1 = 1.0;
  double c2 = -0.6;
  double c3 = 0.6;
  double nu_max = 1.0;
  int steps = 1000;
  int grid_n = 20000;
  std::string out;
  std::string events;
  std::uint64_t seed = 0;
  std::string config;
  bool seconds = false;

  fd::ChannelParams channel() const { return {a, tau, fd::axis_from_int(axis)}; }
  fd::CVector c0() const { return {c1, c2, c3}; }
};

void add_channel_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--a", o.a, "coupling strength a [1/s]")->capture_default_str();
  cmd->add_option("--tau", o.tau, "memory time tau [s]")->capture_default_str();
  cmd->add_option("--axis", o.axis, "noise axis 1=x 2=y 3=z")->capture_default_str();
}

void add_state_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--c1", o.c1, "initial c1")->capture_default_str();
  cmd->add_option("--c2", o.c2, "initial c2")->capture_default_str();
  cmd->add_option("--c3", o.c3, "initial c3")->capture_default_str();
}

void add_time_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--nu-max", o.nu_max, "end of the sweep in nu = t/(2 tau)")->capture_default_str();
  cmd->add_option("--grid-n", o.grid_n, "grid points for event detection")->capture_default_str();
  cmd->add_flag("--seconds", o.seconds, "also display times in seconds (t = 2 tau nu)");
}

void add_config_option(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key=value file; command line flags take precedence");
}

/// Fills options not given on the command line from a key=value file.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw fd::Error(fd::ErrorKind::Io, "cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw fd::Error(fd::ErrorKind::Config, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw fd::Error(fd::ErrorKind::Config, path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw fd::Error(fd::ErrorKind::Config, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string time_label(const CommonOptions& o, double nu) {
  std::ostringstream s;
  s << std::setprecision(10) << "nu=" << nu;
  if (o.seconds) s << " t=" << 2.0 * o.tau * nu << "s";
  return s.str();
}

void print_events(std::ostream& os, const CommonOptions& o, const std::vector<fd::TransitionEvent>& events) {
  for (const auto& e : events) {
    os << "  " << time_label(o, e.nu) << "  " << fd::to_string(e.kind);
    if (e.pre_axis && e.post_axis) {
      os << "  axis " << static_cast<int>(*e.pre_axis) << " -> " << static_cast<int>(*e.post_axis);
    }
    os << '\n';
  }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw fd::Error(fd::ErrorKind::Io, "cannot write " + path);
  f << j.dump(2) << '\n';
  if (!f) throw fd::Error(fd::ErrorKind::Io, "write failed for " + path);
}

int run_sweep_command(CLI::App* cmd, CommonOptions& o) {
  apply_config_file(cmd, o.config);
  fd::SweepConfig cfg;
  cfg.channel = o.channel();
  cfg.c0 = o.c0();
  cfg.nu_max = o.nu_max;
  cfg.steps = o.steps;
  cfg.event_grid = o.grid_n;
  cfg.seed = o.seed;
  cfg.validate();

  // open outputs before the (longer) computation so unwritable paths fail fast
  std::ofstream csv;
  if (!o.out.empty()) {
    csv.open(o.out, std::ios::binary);
    if (!csv) throw fd::Error(fd::ErrorKind::Io, "cannot write " + o.out);
  }
  const fd::SweepResult result = fd::run_sweep(cfg);
  if (o.out.empty()) {
    fd::write_csv(std::cout, result.rows);
  } else {
    fd::write_csv(csv, result.rows);
    csv.close();
    if (!csv) throw fd::Error(fd::ErrorKind::Io, "write failed for " + o.out);
    std::cout << "wrote " << result.rows.size() << " rows to " << o.out << '\n';
  }
  if (!o.events.empty()) {
    write_json_file(o.events, fd::events_to_json(result.events));
    std::cout << "wrote " << result.events.size() << " events to " << o.events << '\n';
    print_events(std::cout, o, result.events);
  }
  return 0;
}

int run_events_command(CLI::App* cmd, CommonOptions& o, bool json_stdout) {
  apply_config_file(cmd, o.config);
  const fd::ChannelParams p = o.channel();
  const fd::CVector c0 = o.c0();
  auto events = fd::detect_transitions(p, c0, o.nu_max, o.grid_n);
  const auto esd = fd::detect_esd(p, c0, o.nu_max, o.grid_n);
  events.insert(events.end(), esd.events.begin(), esd.events.end());
  std::stable_sort(events.begin(), events.end(),
                   [](const fd::TransitionEvent& x, const fd::TransitionEvent& y) { return x.nu < y.nu; });
  if (!o.events.empty()) write_json_file(o.events, fd::events_to_json(events));
  if (json_stdout) {
    std::cout << fd::events_to_json(events).dump(2) << '\n';
    return 0;
  }
  std::cout << "regime: " << fd::to_string(fd::classify_regime(c0, p.axis)) << '\n';
  std::cout << "events (" << events.size() << "):\n";
  print_events(std::cout, o, events);
  if (esd.final_extinction) std::cout << "final entanglement extinction: " << time_label(o, *esd.final_extinction) << '\n';
  const auto witness = fd::non_markovianity_witness(p, o.nu_max, o.grid_n);
  std::cout << "non-Markovianity measure: " << std::setprecision(10) << witness.measure << " over "
            << witness.revival_intervals.size() << " revival intervals\n";
  return 0;
}

struct DiscordOptions {
  double nu = 0.0;
  bool brute_force = false;
  int n_theta = 91;
  int n_phi = 181;
  int refine = 50;
};

int run_discord_command(CLI::App* cmd, CommonOptions& o, const DiscordOptions& d) {
  apply_config_file(cmd, o.config);
  const fd::CVector c = fd::evolve_cvector(o.channel(), d.nu, o.c0());
  const fd::Chi x = fd::chi(c);
  std::cout << std::setprecision(12);
  std::cout << "nu " << d.nu << '\n';
  std::cout << "c " << c.c1() << ' ' << c.c2() << ' ' << c.c3() << '\n';
  std::cout << "mutual_information " << fd::mutual_information_closed(c) << '\n';
  std::cout << "classical_correlation " << fd::classical_correlation_closed(c) << '\n';
  std::cout << "discord " << fd::discord_closed(c) << '\n';
  std::cout << "concurrence " << fd::concurrence(c) << '\n';
  std::cout << "chi " << x.value << " axis " << static_cast<int>(x.axis) << '\n';
  std::cout << "relative_entropy_discord " << fd::relative_entropy_discord(c) << '\n';
  if (d.brute_force) {
    const fd::DensityMatrix rho = fd::to_density_matrix(c);
    const auto best = fd::classical_correlation_optimized(rho, {d.n_theta, d.n_phi}, d.refine);
    std::cout << "classical_correlation_optimized " << best.value << " theta " << best.argmax.theta << " phi "
              << best.argmax.phi << '\n';
    std::cout << "discord_optimized " << fd::discord_optimized(rho, {d.n_theta, d.n_phi}, d.refine) << '\n';
  }
  return 0;
}

struct ValidateOptions {
  double step = 1e-5;
  double max_nu = 5.0;
  int points = 1000;
  std::size_t samples = 100000;
  int mc_points = 10;
  unsigned workers = 1;
  bool ode = false;
  bool corrupt = false;
};

int run_validate_command(CLI::App* cmd, CommonOptions& o, const ValidateOptions& v) {
  apply_config_file(cmd, o.config);
  fd::ValidationConfig cfg;
  cfg.channel = o.channel();
  cfg.integrator = {v.step, v.max_nu,
                    v.ode ? fd::IntegratorScheme::OdeRk4 : fd::IntegratorScheme::VolterraTrapezoid};
  cfg.compare_points = v.points;
  cfg.mc_samples = v.samples;
  cfg.mc_points = v.mc_points;
  cfg.seed = o.seed;
  cfg.workers = v.workers;
  if (v.corrupt) {
    // negative control: growing instead of decaying exponential prefactor
    cfg.closed_form = [](const fd::ChannelParams& p, double nu) { return fd::lambda_decay(p, nu) * std::exp(2.0 * nu); };
  }
  const fd::ValidationReport rep = fd::run_validation(cfg);
  for (const auto& line : rep.lines) std::cout << line << '\n';
  if (!rep.passed) {
    std::cerr << "validation failed: " << rep.worst_offender << '\n';
    return kExitFailed;
  }
  return 0;
}

int run_check_command(const std::string& csv_path, const std::string& events_path) {
  std::ifstream in(csv_path);
  if (!in) throw fd::Error(fd::ErrorKind::Io, "cannot read " + csv_path);
  const auto rows = fd::read_csv(in);
  int bad = 0;
  for (const auto& r : rows) {
    const std::string problem = fd::check_row(r);
    if (!problem.empty()) {
      if (bad < 10) std::cerr << problem << '\n';
      ++bad;
    }
  }
  std::cout << rows.size() << " rows checked, " << bad << " invalid\n";
  if (!events_path.empty() && rows.size() >= 2) {
    std::ifstream ej(events_path);
    if (!ej) throw fd::Error(fd::ErrorKind::Io, "cannot read " + events_path);
    std::vector<fd::TransitionEvent> events;
    try {
      events = fd::events_from_json(nlohmann::json::parse(ej));
    } catch (const nlohmann::json::exception& e) {
      throw fd::Error(fd::ErrorKind::Io, std::string("bad events JSON: ") + e.what());
    }
    const double step = rows[1].nu - rows[0].nu;
    int inconsistent = 0;
    for (const auto& e : events) {
      // the column must change within one grid step of the event
      bool found = false;
      for (std::size_t i = 1; i < rows.size() && !found; ++i) {
        if (rows[i].nu < e.nu - step || rows[i - 1].nu > e.nu + step) continue;
        const bool chi_kind =
            e.kind == fd::EventKind::ChiArgmaxSwitch || e.kind == fd::EventKind::Lambda23Crossing;
        found = chi_kind ? rows[i].chi_axis != rows[i - 1].chi_axis
                         : (rows[i].concurrence > 0.0) != (rows[i - 1].concurrence > 0.0);
      }
      if (!found) {
        std::cerr << "event " << fd::to_string(e.kind) << " at nu=" << e.nu << " has no matching CSV change\n";
        ++inconsistent;
      }
    }
    std::cout << events.size() << " events checked, " << inconsistent << " inconsistent\n";
    bad += inconsistent;
  }
  return bad == 0 ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit discord dynamics under colored-noise dephasing"};
  app.require_subcommand(1);

  CommonOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "tabulate correlations over [0, nu_max] (CSV) and events (JSON)");
  add_channel_options(sweep, sweep_opts);
  add_state_options(sweep, sweep_opts);
  add_time_options(sweep, sweep_opts);
  sweep->add_option("--steps", sweep_opts.steps, "number of intervals; steps+1 rows")->capture_default_str();
  sweep->add_option("--out", sweep_opts.out, "CSV output path (stdout if omitted)");
  sweep->add_option("--events", sweep_opts.events, "JSON event output path");
  sweep->add_option("--seed", sweep_opts.seed, "random seed")->capture_default_str();
  add_config_option(sweep, sweep_opts);

  CommonOptions events_opts;
  bool events_json = false;
  auto* events = app.add_subcommand("events", "sudden transitions, entanglement death/revival and backflow");
  add_channel_options(events, events_opts);
  add_state_options(events, events_opts);
  add_time_options(events, events_opts);
  events->add_option("--events", events_opts.events, "also write the JSON event list here");
  events->add_flag("--json", events_json, "print the JSON event list instead of the summary");
  events->add_option("--seed", events_opts.seed, "random seed")->capture_default_str();
  add_config_option(events, events_opts);

  CommonOptions discord_opts;
  DiscordOptions dopt;
  auto* discord = app.add_subcommand("discord", "correlations of a single Bell-diagonal state");
  add_channel_options(discord, discord_opts);
  add_state_options(discord, discord_opts);
  discord->add_option("--nu", dopt.nu, "evolve the state to this nu first")->capture_default_str();
  discord->add_flag("--brute-force", dopt.brute_force, "also optimise over measurements on qubit B");
  discord->add_option("--grid-theta", dopt.n_theta, "theta grid points")->capture_default_str();
  discord->add_option("--grid-phi", dopt.n_phi, "phi grid points")->capture_default_str();
  discord->add_option("--refine", dopt.refine, "Nelder-Mead refinement iterations")->capture_default_str();
  add_config_option(discord, discord_opts);

  CommonOptions validate_opts;
  ValidateOptions vopt;
  auto* validate = app.add_subcommand("validate", "closed-form Lambda against integrator and Monte Carlo");
  add_channel_options(validate, validate_opts);
  validate->add_option("--step", vopt.step, "integrator step in nu")->capture_default_str();
  validate->add_option("--max-nu", vopt.max_nu, "integration range")->capture_default_str();
  validate->add_option("--points", vopt.points, "comparison points")->capture_default_str();
  validate->add_option("--samples", vopt.samples, "Monte Carlo trajectories")->capture_default_str();
  validate->add_option("--mc-points", vopt.mc_points, "Monte Carlo nu points")->capture_default_str();
  validate->add_option("--workers", vopt.workers, "Monte Carlo threads")->capture_default_str();
  validate->add_flag("--ode", vopt.ode, "use the RK4 ODE reduction instead of Volterra quadrature");
  validate->add_option("--seed", validate_opts.seed, "random seed")->capture_default_str();
  validate->add_flag("--corrupt-lambda-sign", vopt.corrupt, "")->group("");  // negative-control hook
  add_config_option(validate, validate_opts);

  std::string check_csv, check_events;
  auto* check = app.add_subcommand("check", "validate a sweep CSV (and optional events JSON)");
  check->add_option("--csv", check_csv, "sweep CSV")->required();
  check->add_option("--events", check_events, "events JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) return run_sweep_command(sweep, sweep_opts);
    if (*events) return run_events_command(events, events_opts, events_json);
    if (*discord) return run_discord_command(discord, discord_opts, dopt);
    if (*validate) return run_validate_command(validate, validate_opts, vopt);
    if (*check) return run_check_command(check_csv, check_events);
  } catch (const fd::Error& e) {
    std::cerr << e.what() << '\n';
    if (e.kind() == fd::ErrorKind::Io) return kExitIo;
    return e.kind() == fd::ErrorKind::NumericalFailure ? kExitFailed : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
