#pragma once

// Trajectory analytics for Bell-diagonal states under single-axis colored
// dephasing: closest classical state, relative-entropy discord, sudden
// transitions, entanglement sudden death and the information-backflow
// witness.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frozendisc/bell_diagonal.hpp"
#include "frozendisc/channel.hpp"

namespace frozendisc {

// ---------------------------------------------------------------------------
// Closest classical state

/// Bell states ranked by decreasing weight; equal weights keep kBellOrder.
inline std::array<BellState, 4> ranked_bell_states(const BellSpectrum& s) {
  std::array<BellState, 4> order = kBellOrder;
  std::stable_sort(order.begin(), order.end(),
                   [&](BellState x, BellState y) { return s.weight(x) > s.weight(y); });
  return order;
}

namespace detail {

inline std::array<double, 3> bell_cvector(BellState s) {
  switch (s) {
    case BellState::PsiPlus: return {1, -1, 1};
    case BellState::PsiMinus: return {-1, 1, 1};
    case BellState::PhiPlus: return {1, 1, -1};
    case BellState::PhiMinus: return {-1, -1, -1};
  }
  return {0, 0, 0};
}

}  // namespace detail

/// Equal mixture of two distinct Bell states is a classical state polarised
/// along exactly one axis; returns that axis.
inline Axis pair_axis(BellState x, BellState y) {
  if (x == y) throw Error(ErrorKind::Domain, "a Bell pair needs two distinct states");
  const auto a = detail::bell_cvector(x);
  const auto b = detail::bell_cvector(y);
  for (int i = 0; i < 3; ++i) {
    if (a[i] == b[i]) return static_cast<Axis>(i + 1);
  }
  return Axis::X;  // unreachable for distinct Bell states
}

/// q/2 (P1 + P2) + (1 - q)/2 (P3 + P4).
inline DensityMatrix classical_mixture(const std::array<BellState, 4>& ranked, double q) {
  ComplexMatrix m = q / 2.0 * (bell_projector(ranked[0]) + bell_projector(ranked[1])) +
                    (1.0 - q) / 2.0 * (bell_projector(ranked[2]) + bell_projector(ranked[3]));
  return DensityMatrix(m);
}

struct ClassicalStateInfo {
  std::array<BellState, 4> ranked;  // first two carry weight q/2 each
  double q;
  Axis axis;
};

inline ClassicalStateInfo closest_classical_info(const CVector& c) {
  const BellSpectrum s = to_spectrum(c);
  const auto ranked = ranked_bell_states(s);
  return {ranked, s.weight(ranked[0]) + s.weight(ranked[1]), pair_axis(ranked[0], ranked[1])};
}

inline DensityMatrix closest_classical_state(const CVector& c) {
  const ClassicalStateInfo info = closest_classical_info(c);
  return classical_mixture(info.ranked, info.q);
}

/// The classical Bell-diagonal state polarised along `axis`, i.e. the
/// candidate closest classical state when `axis` carries the dominant
/// correlation. Used to compare the two candidates at a transition.
inline DensityMatrix classical_state_on_axis(const CVector& c, Axis axis) {
  const BellSpectrum s = to_spectrum(c);
  std::array<BellState, 4> pair_first{};
  bool found = false;
  for (std::size_t i = 0; i < 4 && !found; ++i) {
    for (std::size_t j = i + 1; j < 4 && !found; ++j) {
      const BellState x = kBellOrder[i], y = kBellOrder[j];
      if (pair_axis(x, y) != axis) continue;
      std::array<BellState, 4> rest{};
      std::size_t r = 2;
      rest[0] = x;
      rest[1] = y;
      for (BellState b : kBellOrder) {
        if (b != x && b != y) rest[r++] = b;
      }
      // the axis has two complementary pairs; keep the heavier one on top
      const double w = s.weight(x) + s.weight(y);
      if (w >= 0.5) {
        pair_first = rest;
      } else {
        pair_first = {rest[2], rest[3], rest[0], rest[1]};
      }
      found = true;
    }
  }
  return classical_mixture(pair_first, s.weight(pair_first[0]) + s.weight(pair_first[1]));
}

/// D_RE = S(rho || rho_cl), computed with the general matrix relative entropy.
inline double relative_entropy_discord(const CVector& c) {
  return relative_entropy(to_density_matrix(c), closest_classical_state(c));
}

struct ProductApproximation {
  DensityMatrix product;
  double distance;  // S(rho_cl || rho_A (x) rho_B)
};

inline ProductApproximation closest_product_state(const DensityMatrix& rho_cl) {
  if (rho_cl.dim() != 4) throw Error(ErrorKind::Dimension, "closest product state needs a 4x4 state");
  DensityMatrix product(tensor(partial_trace(rho_cl, Subsystem::B).matrix(),
                               partial_trace(rho_cl, Subsystem::A).matrix()));
  const double d = relative_entropy(rho_cl, product);
  return {std::move(product), d};
}

// ---------------------------------------------------------------------------
// Regimes

enum class Regime { First, Second, Third };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::First: return "first";
    case Regime::Second: return "second";
    case Regime::Third: return "third";
  }
  return "?";
}

/// Regime of the initial correlations relative to the noise axis:
/// noise component zero -> second; noise component dominant -> first;
/// otherwise third.
inline Regime classify_regime(const CVector& c0, Axis noise_axis) {
  const double frozen = std::abs(c0[noise_axis]);
  double other = 0.0;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    if (a != noise_axis) other = std::max(other, std::abs(c0[a]));
  }
  if (frozen < tolerance::physicality) return Regime::Second;
  return frozen >= other ? Regime::First : Regime::Third;
}

// ---------------------------------------------------------------------------
// Events

enum class EventKind { ChiArgmaxSwitch, Lambda23Crossing, Esd, EntanglementRevival };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::ChiArgmaxSwitch: return "chi-argmax-switch";
    case EventKind::Lambda23Crossing: return "lambda23-crossing";
    case EventKind::Esd: return "esd";
    case EventKind::EntanglementRevival: return "entanglement-revival";
  }
  return "?";
}

struct TransitionEvent {
  double nu = 0.0;
  EventKind kind = EventKind::ChiArgmaxSwitch;
  std::optional<Axis> pre_axis;
  std::optional<Axis> post_axis;
  std::pair<double, double> bracket{0.0, 0.0};
};

inline std::vector<TransitionEvent> events_of_kind(const std::vector<TransitionEvent>& events, EventKind kind) {
  std::vector<TransitionEvent> out;
  std::copy_if(events.begin(), events.end(), std::back_inserter(out),
               [kind](const TransitionEvent& e) { return e.kind == kind; });
  return out;
}

inline constexpr int kMinEventGrid = 10000;
inline constexpr int kPointsPerPeriod = 20;
inline constexpr double kBracketWidth = 1e-9;
inline constexpr double kEventAgreement = 1e-8;
/// Differences below this are ties; they never trigger an event.
inline constexpr double kTieTolerance = 1e-12;

/// Rejects grids that cannot resolve the oscillation of Lambda.
inline void check_event_resolution(const ChannelParams& p, double nu_max, int grid_n) {
  if (!(nu_max > 0.0)) throw Error(ErrorKind::Domain, "nu_max must be positive");
  if (grid_n < kMinEventGrid) {
    throw Error(ErrorKind::Resolution, "event grid needs at least " + std::to_string(kMinEventGrid) + " points");
  }
  if (p.branch() == DampingBranch::Underdamped) {
    const double period = 2.0 * std::numbers::pi / p.mu();
    const double step = nu_max / grid_n;
    if (period < kPointsPerPeriod * step) {
      throw Error(ErrorKind::Resolution, "oscillation period " + std::to_string(period) + " spans fewer than " +
                                             std::to_string(kPointsPerPeriod) + " grid steps");
    }
  }
}

namespace detail {

/// Bisects f on [lo, hi] (f(lo) >= 0 > f(hi) or the reverse) down to
/// kBracketWidth.
inline std::pair<double, double> bisect(const std::function<double(double)>& f, double lo, double hi) {
  const bool lo_sign = f(lo) >= 0.0;
  while (hi - lo > kBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) >= 0.0) == lo_sign) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

inline double grid_nu(double nu_max, int grid_n, int i) { return nu_max * i / grid_n; }

inline std::vector<TransitionEvent> chi_switches(const ChannelParams& p, const CVector& c0, double nu_max,
                                                 int grid_n) {
  std::vector<TransitionEvent> events;
  Axis incumbent = chi(c0).axis;
  // a tie at nu = 0 is settled by the state one grid step later
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    if (a != incumbent && std::abs(std::abs(c0[a]) - std::abs(c0[incumbent])) <= kTieTolerance) {
      incumbent = chi(evolve_cvector(p, grid_nu(nu_max, grid_n, 1), c0)).axis;
      break;
    }
  }
  for (int i = 1; i <= grid_n; ++i) {
    const double nu = grid_nu(nu_max, grid_n, i);
    const CVector c = evolve_cvector(p, nu, c0);
    Axis challenger = incumbent;
    double strongest = -1.0;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      if (a != incumbent && std::abs(c[a]) > strongest) {
        strongest = std::abs(c[a]);
        challenger = a;
      }
    }
    if (std::abs(c[incumbent]) >= strongest - kTieTolerance) continue;
    const Axis from = incumbent;
    auto margin = [&](double x) {
      const CVector cx = evolve_cvector(p, x, c0);
      return std::abs(cx[from]) - std::abs(cx[challenger]);
    };
    const auto bracket = bisect(margin, grid_nu(nu_max, grid_n, i - 1), nu);
    events.push_back({0.5 * (bracket.first + bracket.second), EventKind::ChiArgmaxSwitch, from, challenger, bracket});
    incumbent = challenger;
  }
  return events;
}

struct BellPair {
  BellState first, second;
  bool contains(BellState s) const { return s == first || s == second; }
};

/// Heaviest Bell pair; near-ties go to the lower axis, as chi() does.
inline BellPair top_pair(const CVector& c) {
  const BellSpectrum s = to_spectrum(c);
  BellPair best{BellState::PsiPlus, BellState::PhiPlus};
  double best_w = -1.0;
  Axis best_axis = Axis::Z;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const BellState x = kBellOrder[i], y = kBellOrder[j];
      const double w = s.weight(x) + s.weight(y);
      const Axis a = pair_axis(x, y);
      const bool tie = std::abs(w - best_w) <= kTieTolerance;
      if ((!tie && w > best_w) || (tie && index_of(a) < index_of(best_axis))) {
        best = {x, y};
        best_w = w;
        best_axis = a;
      }
    }
  }
  return best;
}

/// min weight inside `pair` minus max weight outside it.
inline double pair_margin(const BellSpectrum& s, const BellPair& pair) {
  double outside = -1.0;
  for (BellState b : kBellOrder) {
    if (!pair.contains(b)) outside = std::max(outside, s.weight(b));
  }
  return std::min(s.weight(pair.first), s.weight(pair.second)) - outside;
}

inline std::vector<TransitionEvent> lambda23_crossings(const ChannelParams& p, const CVector& c0, double nu_max,
                                                       int grid_n) {
  std::vector<TransitionEvent> events;
  BellPair incumbent = top_pair(c0);
  if (pair_margin(to_spectrum(c0), incumbent) <= kTieTolerance) {
    incumbent = top_pair(evolve_cvector(p, grid_nu(nu_max, grid_n, 1), c0));
  }
  for (int i = 1; i <= grid_n; ++i) {
    const double nu = grid_nu(nu_max, grid_n, i);
    const CVector c = evolve_cvector(p, nu, c0);
    const BellSpectrum s = to_spectrum(c);
    if (pair_margin(s, incumbent) >= -kTieTolerance) continue;
    const BellPair next = top_pair(c);
    const Axis from = pair_axis(incumbent.first, incumbent.second);
    const Axis to = pair_axis(next.first, next.second);
    if (from != to) {
      const BellPair held = incumbent;
      // weight of the old pair minus the new one: the lambda2/lambda3 gap
      auto margin = [&](double x) {
        const BellSpectrum sx = to_spectrum(evolve_cvector(p, x, c0));
        return sx.weight(held.first) + sx.weight(held.second) - sx.weight(next.first) - sx.weight(next.second);
      };
      const auto bracket = bisect(margin, grid_nu(nu_max, grid_n, i - 1), nu);
      events.push_back({0.5 * (bracket.first + bracket.second), EventKind::Lambda23Crossing, from, to, bracket});
    }
    incumbent = next;
  }
  return events;
}

}  // namespace detail

/// Times where the dominant correlation axis switches, found from two
/// independent characterisations (argmax |c_i| and the ordering of the two
/// middle Bell weights). Both lists are returned, merged by nu; a
/// disagreement between them beyond kEventAgreement is a numerical failure.
inline std::vector<TransitionEvent> detect_transitions(const ChannelParams& p, const CVector& c0, double nu_max,
                                                       int grid_n) {
  check_event_resolution(p, nu_max, grid_n);
  auto chi_events = detail::chi_switches(p, c0, nu_max, grid_n);
  auto lambda_events = detail::lambda23_crossings(p, c0, nu_max, grid_n);
  if (chi_events.size() != lambda_events.size()) {
    throw Error(ErrorKind::NumericalFailure, "chi switches (" + std::to_string(chi_events.size()) +
                                                 ") and lambda2/lambda3 crossings (" +
                                                 std::to_string(lambda_events.size()) + ") disagree");
  }
  for (std::size_t i = 0; i < chi_events.size(); ++i) {
    if (std::abs(chi_events[i].nu - lambda_events[i].nu) > kEventAgreement) {
      throw Error(ErrorKind::NumericalFailure,
                  "transition times disagree at nu = " + std::to_string(chi_events[i].nu));
    }
  }
  std::vector<TransitionEvent> all = std::move(chi_events);
  all.insert(all.end(), lambda_events.begin(), lambda_events.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const TransitionEvent& x, const TransitionEvent& y) { return x.nu < y.nu; });
  return all;
}

struct EntanglementReport {
  std::vector<TransitionEvent> events;  // Esd / EntanglementRevival, by nu
  /// Time of the last death when the state stays separable up to nu_max.
  std::optional<double> final_extinction;
};

/// Sign changes of 2 lambda_max - 1 (concurrence is its positive part).
/// Isolated touching zeros are not reported as deaths.
inline EntanglementReport detect_esd(const ChannelParams& p, const CVector& c0, double nu_max, int grid_n) {
  check_event_resolution(p, nu_max, grid_n);
  auto excess = [&](double nu) { return 2.0 * to_spectrum(evolve_cvector(p, nu, c0)).max() - 1.0; };
  EntanglementReport report;
  bool entangled = excess(0.0) > 0.0;
  for (int i = 1; i <= grid_n; ++i) {
    const double nu = detail::grid_nu(nu_max, grid_n, i);
    const bool now = excess(nu) > 0.0;
    if (now == entangled) continue;
    const auto bracket = detail::bisect([&](double x) { return excess(x) > 0.0 ? 1.0 : -1.0; },
                                        detail::grid_nu(nu_max, grid_n, i - 1), nu);
    report.events.push_back({0.5 * (bracket.first + bracket.second),
                             now ? EventKind::EntanglementRevival : EventKind::Esd, std::nullopt, std::nullopt,
                             bracket});
    entangled = now;
  }
  if (!entangled && !report.events.empty()) report.final_extinction = report.events.back().nu;
  return report;
}

struct NonMarkovianityWitness {
  double measure = 0.0;
  std::vector<std::pair<double, double>> revival_intervals;
};

/// Information backflow of the antipodal pair |+>, |->: their trace distance
/// is |Lambda(nu)|; the measure sums its increase over intervals where it
/// grows.
inline NonMarkovianityWitness non_markovianity_witness(const ChannelParams& p, double nu_max, int grid_n) {
  check_event_resolution(p, nu_max, grid_n);
  auto growth = [&](double nu) {
    const double l = lambda_decay(p, nu);
    const double rate = lambda_decay_rate(p, nu);
    return l >= 0.0 ? rate : -rate;
  };
  auto rising = [&](double nu) { return growth(nu) > 0.0; };

  NonMarkovianityWitness w;
  bool up = rising(0.0);
  double start = 0.0;
  auto close = [&](double end) {
    const double gain = std::abs(lambda_decay(p, end)) - std::abs(lambda_decay(p, start));
    if (gain > 0.0) {
      w.measure += gain;
      w.revival_intervals.emplace_back(start, end);
    }
  };
  for (int i = 1; i <= grid_n; ++i) {
    const double nu = detail::grid_nu(nu_max, grid_n, i);
    const bool now = rising(nu);
    if (now == up) continue;
    const auto bracket = detail::bisect([&](double x) { return rising(x) ? 1.0 : -1.0; },
                                        detail::grid_nu(nu_max, grid_n, i - 1), nu);
    const double edge = 0.5 * (bracket.first + bracket.second);
    if (up) close(edge);
    start = edge;
    up = now;
  }
  if (up) close(nu_max);
  return w;
}

}  // namespace frozendisc
