#pragma once

// Time sweeps, oracle validation runs and their file formats.
//
// CSV: header of SweepRow field names, one row per time point, values
// printed with 12 significant digits ("%.12g"), '\n' line endings.
// JSON events: array of {"nu", "kind", "pre_axis", "post_axis"}; axes are
// 1..3 or null.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frozendisc/bell_diagonal.hpp"
#include "frozendisc/channel.hpp"
#include "frozendisc/geometry_events.hpp"
#include "frozendisc/kernel_oracle.hpp"

namespace frozendisc {

struct SweepConfig {
  ChannelParams channel{1.0, 5.0, Axis::Z};
  CVector c0{1.0, -0.6, 0.6};
  double nu_max = 1.0;
  int steps = 1000;
  int event_grid = 20000;
  std::uint64_t seed = 0;

  void validate() const {
    if (steps < 2) throw Error(ErrorKind::Config, "steps must be >= 2");
    if (!(nu_max > 0.0) || !std::isfinite(nu_max)) throw Error(ErrorKind::Config, "nu_max must be > 0");
  }
};

struct SweepRow {
  double nu, c1, c2, c3;
  double lambda_psi_plus, lambda_psi_minus, lambda_phi_plus, lambda_phi_minus;
  double mutual_info, classical_corr, discord, concurrence;
  double chi_value;
  int chi_axis;
  double q, rel_entropy_discord;
};

inline constexpr std::array<const char*, 16> kSweepColumns = {
    "nu",          "c1",        "c2",      "c3",          "lambda_psi_plus", "lambda_psi_minus",
    "lambda_phi_plus", "lambda_phi_minus", "mutual_info", "classical_corr", "discord", "concurrence",
    "chi_value",   "chi_axis",  "q",       "rel_entropy_discord"};

inline SweepRow make_row(double nu, const CVector& c) {
  const BellSpectrum s = to_spectrum(c);
  const Chi x = chi(c);
  const double mi = mutual_information_closed(c);
  const double cc = classical_correlation_closed(c);
  return {nu,
          c.c1(),
          c.c2(),
          c.c3(),
          s.psi_plus,
          s.psi_minus,
          s.phi_plus,
          s.phi_minus,
          mi,
          cc,
          discord_closed(c),
          concurrence(c),
          x.value,
          static_cast<int>(x.axis),
          closest_classical_info(c).q,
          relative_entropy_discord(c)};
}

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TransitionEvent> events;  // transitions then entanglement events, by nu
};

inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult out;
  out.rows.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  for (int i = 0; i <= cfg.steps; ++i) {
    const double nu = cfg.nu_max * i / cfg.steps;
    out.rows.push_back(make_row(nu, evolve_cvector(cfg.channel, nu, cfg.c0)));
  }
  out.events = detect_transitions(cfg.channel, cfg.c0, cfg.nu_max, cfg.event_grid);
  const auto esd = detect_esd(cfg.channel, cfg.c0, cfg.nu_max, cfg.event_grid);
  out.events.insert(out.events.end(), esd.events.begin(), esd.events.end());
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const TransitionEvent& x, const TransitionEvent& y) { return x.nu < y.nu; });
  return out;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  for (std::size_t i = 0; i < kSweepColumns.size(); ++i) os << (i ? "," : "") << kSweepColumns[i];
  os << '\n';
  for (const SweepRow& r : rows) {
    const std::array<double, 13> head{r.nu,
                                      r.c1,
                                      r.c2,
                                      r.c3,
                                      r.lambda_psi_plus,
                                      r.lambda_psi_minus,
                                      r.lambda_phi_plus,
                                      r.lambda_phi_minus,
                                      r.mutual_info,
                                      r.classical_corr,
                                      r.discord,
                                      r.concurrence,
                                      r.chi_value};
    for (std::size_t i = 0; i < head.size(); ++i) os << (i ? "," : "") << format_number(head[i]);
    os << ',' << r.chi_axis << ',' << format_number(r.q) << ',' << format_number(r.rel_entropy_discord) << '\n';
  }
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Io, "empty CSV");
  std::string expected;
  for (std::size_t i = 0; i < kSweepColumns.size(); ++i) expected += std::string(i ? "," : "") + kSweepColumns[i];
  if (line != expected) throw Error(ErrorKind::Io, "unexpected CSV header: " + line);
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() != kSweepColumns.size()) {
      throw Error(ErrorKind::Io, "line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(kSweepColumns.size()) + " fields");
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12],
                    static_cast<int>(v[13]), v[14], v[15]});
  }
  return rows;
}

/// Reader-side row check: physical c-vector and D = I - C within 1e-9.
/// Returns an empty string when the row is valid.
inline std::string check_row(const SweepRow& r) {
  try {
    CVector c(r.c1, r.c2, r.c3);
  } catch (const Error& e) {
    return e.what();
  }
  if (std::abs(r.discord - (r.mutual_info - r.classical_corr)) > 1e-9) {
    return "discord != mutual_info - classical_corr at nu = " + format_number(r.nu);
  }
  return {};
}

inline nlohmann::json events_to_json(const std::vector<TransitionEvent>& events) {
  nlohmann::json arr = nlohmann::json::array();
  auto axis = [](const std::optional<Axis>& a) -> nlohmann::json {
    return a ? nlohmann::json(static_cast<int>(*a)) : nlohmann::json(nullptr);
  };
  for (const auto& e : events) {
    arr.push_back({{"nu", e.nu}, {"kind", std::string(to_string(e.kind))}, {"pre_axis", axis(e.pre_axis)},
                   {"post_axis", axis(e.post_axis)}});
  }
  return arr;
}

inline std::vector<TransitionEvent> events_from_json(const nlohmann::json& arr) {
  std::vector<TransitionEvent> out;
  for (const auto& o : arr) {
    TransitionEvent e;
    e.nu = o.at("nu").get<double>();
    const auto kind = o.at("kind").get<std::string>();
    bool known = false;
    for (EventKind k : {EventKind::ChiArgmaxSwitch, EventKind::Lambda23Crossing, EventKind::Esd,
                        EventKind::EntanglementRevival}) {
      if (kind == to_string(k)) {
        e.kind = k;
        known = true;
      }
    }
    if (!known) throw Error(ErrorKind::Io, "unknown event kind " + kind);
    if (!o.at("pre_axis").is_null()) e.pre_axis = axis_from_int(o.at("pre_axis").get<int>());
    if (!o.at("post_axis").is_null()) e.post_axis = axis_from_int(o.at("post_axis").get<int>());
    e.bracket = {e.nu, e.nu};
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracle validation

struct ValidationConfig {
  ChannelParams channel{1.0, 5.0, Axis::Z};
  IntegratorConfig integrator{1e-5, 5.0, IntegratorScheme::VolterraTrapezoid};
  int compare_points = 1000;  // nu grid for closed form vs integrator
  std::size_t mc_samples = 100000;
  int mc_points = 10;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double integrator_tolerance = 1e-6;
  double mc_sigmas = 3.0;
  /// Closed form under test; defaults to lambda_decay. Tests swap in a
  /// corrupted variant as a negative control.
  std::function<double(const ChannelParams&, double)> closed_form;
};

struct ValidationReport {
  bool passed = true;
  double max_integrator_error = 0.0;
  double worst_integrator_nu = 0.0;
  double max_z = 0.0;
  double worst_mc_nu = 0.0;
  bool monotone_checked = false;
  bool monotone = true;
  std::vector<std::string> lines;
  std::string worst_offender;
};

inline ValidationReport run_validation(const ValidationConfig& cfg) {
  auto closed = cfg.closed_form ? cfg.closed_form
                                : std::function<double(const ChannelParams&, double)>(
                                      [](const ChannelParams& p, double nu) { return lambda_decay(p, nu); });
  ValidationReport rep;
  std::ostringstream line;
  line << "params a=" << cfg.channel.a << " tau=" << cfg.channel.tau << " 4*a*tau=" << cfg.channel.coupling_ratio()
       << " branch=" << to_string(cfg.channel.branch());
  rep.lines.push_back(line.str());

  const SampledFunction integrated = integrate_memory_kernel(cfg.channel, cfg.integrator);
  double prev = integrated(0.0);
  for (int i = 0; i < cfg.compare_points; ++i) {
    const double nu = cfg.integrator.max_nu * i / (cfg.compare_points - 1);
    const double numeric = integrated(nu);
    const double err = std::abs(closed(cfg.channel, nu) - numeric);
    if (err > rep.max_integrator_error || std::isnan(err)) {
      rep.max_integrator_error = std::isnan(err) ? INFINITY : err;
      rep.worst_integrator_nu = nu;
    }
    if (numeric > prev + 1e-12) rep.monotone = false;
    prev = numeric;
  }
  const bool integrator_ok = rep.max_integrator_error <= cfg.integrator_tolerance;
  line.str("");
  line << "integrator " << to_string(cfg.integrator.scheme) << " step=" << cfg.integrator.step
       << " points=" << cfg.compare_points << " max|closed-integrated|=" << rep.max_integrator_error
       << " at nu=" << rep.worst_integrator_nu << (integrator_ok ? " PASS" : " FAIL");
  rep.lines.push_back(line.str());
  if (!integrator_ok) {
    rep.passed = false;
    std::ostringstream w;
    w << "integrator disagreement at nu=" << rep.worst_integrator_nu
      << " closed=" << closed(cfg.channel, rep.worst_integrator_nu)
      << " integrated=" << integrated(rep.worst_integrator_nu);
    rep.worst_offender = w.str();
  }

  if (cfg.channel.branch() != DampingBranch::Underdamped) {
    rep.monotone_checked = true;
    rep.lines.push_back(std::string("monotone nonincreasing integrated Lambda: ") + (rep.monotone ? "PASS" : "FAIL"));
    if (!rep.monotone) rep.passed = false;
  }

  std::vector<double> grid;
  for (int i = 0; i < cfg.mc_points; ++i) grid.push_back(cfg.integrator.max_nu * i / (cfg.mc_points - 1));
  const MonteCarloEstimate mc = monte_carlo_lambda(cfg.channel, cfg.mc_samples, grid, cfg.seed, cfg.workers);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double expected = closed(cfg.channel, grid[j]);
    const double diff = std::abs(mc.mean[j] - expected);
    const double z = mc.std_error[j] > 0.0 ? diff / mc.std_error[j] : (diff == 0.0 ? 0.0 : INFINITY);
    const bool ok = z <= cfg.mc_sigmas;
    line.str("");
    line << "monte-carlo nu=" << grid[j] << " closed=" << expected << " mc=" << mc.mean[j]
         << " se=" << mc.std_error[j] << " z=" << z << (ok ? " PASS" : " FAIL");
    rep.lines.push_back(line.str());
    if (z > rep.max_z) {
      rep.max_z = z;
      rep.worst_mc_nu = grid[j];
    }
    if (!ok) {
      if (rep.passed || rep.worst_offender.empty()) {
        std::ostringstream w;
        w << "monte-carlo disagreement at nu=" << grid[j] << " closed=" << expected << " mc=" << mc.mean[j]
          << " z=" << z;
        rep.worst_offender = w.str();
      }
      rep.passed = false;
    }
  }
  rep.lines.push_back(rep.passed ? "RESULT PASS" : "RESULT FAIL: " + rep.worst_offender);
  return rep;
}

}  // namespace frozendisc
