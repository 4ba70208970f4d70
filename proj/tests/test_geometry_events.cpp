#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "frozendisc/discord_optimizer.hpp"
#include "frozendisc/geometry_events.hpp"
#include "test_support.hpp"

using namespace frozendisc;
using frozendisc::fixtures::max_abs_diff;

namespace {

const ChannelParams kNoise(1.0, 5.0, Axis::Z);
const CVector kStrong(1, -0.6, 0.6);
const CVector kWeak(0.35, -0.3, 0.1);

double entropy_bits(std::initializer_list<double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

// Roots of Lambda^2 = threshold for a=1, tau=5, from a 30-digit root find.
const std::vector<double> kStrongSwitches{0.03464440821693523, 0.13564460512414306, 0.1792287557510894};
const std::vector<double> kWeakSwitches{0.05126866437817749, 0.11322351087188913, 0.20274160263406124,
                                         0.2775633754856488,  0.35251517512989994, 0.4449878651964872,
                                         0.49916931285157384};
const std::vector<double> kStrongEntanglementFlips{0.05336899941716571, 0.11077029242504867, 0.20537070231121587,
                                                  0.27430419530328837, 0.35596510433294454, 0.4401242895372836,
                                                  0.5042383562632152,  0.6115061276341441,  0.6469154099021052};

}  // namespace

TEST(ClosestClassical, RankingAndAxis) {
  const auto info = closest_classical_info(kStrong);
  EXPECT_EQ(info.ranked[0], BellState::PsiPlus);
  EXPECT_EQ(info.ranked[1], BellState::PhiPlus);
  EXPECT_NEAR(info.q, 1.0, 1e-15);
  EXPECT_EQ(info.axis, Axis::X);
  EXPECT_EQ(pair_axis(BellState::PsiPlus, BellState::PsiMinus), Axis::Z);
  EXPECT_EQ(pair_axis(BellState::PsiPlus, BellState::PhiMinus), Axis::Y);
  EXPECT_THROW(pair_axis(BellState::PsiPlus, BellState::PsiPlus), Error);

  // maximally mixed: all tied, Bell order kept
  const auto tied = closest_classical_info(CVector(0, 0, 0));
  EXPECT_EQ(tied.ranked, kBellOrder);
  EXPECT_NEAR(tied.q, 0.5, 1e-15);
}

TEST(ClosestClassical, TopPairAxisIsChiAxis) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 2000; ++trial) {
    const CVector c = fixtures::random_bell_diagonal(rng);
    const auto info = closest_classical_info(c);
    EXPECT_EQ(info.axis, chi(c).axis);
    EXPECT_NEAR(2.0 * info.q - 1.0, chi(c).value, 1e-12);
  }
}

TEST(ClosestClassical, StateIsClassicalAndClose) {
  const auto cl = closest_classical_state(kStrong);
  const ComplexMatrix expected = 0.5 * (bell_projector(BellState::PsiPlus) + bell_projector(BellState::PhiPlus));
  EXPECT_LT(max_abs_diff(cl.matrix(), expected), 1e-15);
  // zero discord for the classical state itself
  EXPECT_LT(discord_optimized(cl, {31, 61}), 1e-9);
}

TEST(RelativeEntropyDiscord, ReferenceValues) {
  EXPECT_NEAR(relative_entropy_discord(kStrong), 0.278071905112638, 1e-10);
  EXPECT_NEAR(relative_entropy_discord(CVector(1, -1, 1)), 1.0, 1e-10);
  EXPECT_NEAR(relative_entropy_discord(CVector(0, 0, 0)), 0.0, 1e-10);
  // weights (0.4375, 0.1125, 0.2375, 0.2125), q = 0.675:
  // S(rho || rho_cl) = 1 + H2(q) - S(rho)
  const double expected =
      1.0 + entropy_bits({0.675, 0.325}) - entropy_bits({0.4375, 0.1125, 0.2375, 0.2125});
  EXPECT_NEAR(relative_entropy_discord(kWeak), expected, 1e-10);
}

TEST(RelativeEntropyDiscord, BeatsEveryOtherClassicalCandidate) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const CVector c = fixtures::random_bell_diagonal(rng);
    const auto rho = to_density_matrix(c);
    const double best = relative_entropy_discord(c);
    EXPECT_GE(best, -1e-12);
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      EXPECT_LE(best, relative_entropy(rho, classical_state_on_axis(c, a)) + 1e-10);
    }
  }
}

TEST(ClosestProduct, DistanceIsOneMinusBinaryEntropy) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const CVector c = fixtures::random_bell_diagonal(rng);
    const auto info = closest_classical_info(c);
    const auto product = closest_product_state(closest_classical_state(c));
    EXPECT_LT(max_abs_diff(product.product.matrix(), ComplexMatrix::Identity(4, 4) / 4.0), 1e-14);
    EXPECT_NEAR(product.distance, 1.0 - entropy_bits({info.q, 1.0 - info.q}), 1e-10);
  }
  EXPECT_THROW(closest_product_state(DensityMatrix::maximally_mixed(2)), Error);
}

TEST(ClassifyRegime, ReferenceCases) {
  EXPECT_EQ(classify_regime(CVector(0.2, -0.2, 0.9), Axis::Z), Regime::First);
  EXPECT_EQ(classify_regime(kStrong, Axis::Z), Regime::Third);
  EXPECT_EQ(classify_regime(CVector(0.5, -0.3, 0.0), Axis::Z), Regime::Second);
  EXPECT_EQ(classify_regime(kStrong, Axis::X), Regime::First);
  EXPECT_EQ(classify_regime(kWeak, Axis::Z), Regime::Third);
}

TEST(DetectTransitions, StrongStateTimesAndAxes) {
  const auto events = detect_transitions(kNoise, kStrong, 1.0, 20000);
  const auto chi_events = events_of_kind(events, EventKind::ChiArgmaxSwitch);
  const auto crossings = events_of_kind(events, EventKind::Lambda23Crossing);
  ASSERT_EQ(chi_events.size(), kStrongSwitches.size());
  ASSERT_EQ(crossings.size(), kStrongSwitches.size());
  for (std::size_t i = 0; i < kStrongSwitches.size(); ++i) {
    EXPECT_NEAR(chi_events[i].nu, kStrongSwitches[i], 1e-8);
    EXPECT_NEAR(crossings[i].nu, kStrongSwitches[i], 1e-8);
    EXPECT_EQ(chi_events[i].pre_axis, crossings[i].pre_axis);
    EXPECT_EQ(chi_events[i].post_axis, crossings[i].post_axis);
    EXPECT_LE(chi_events[i].bracket.second - chi_events[i].bracket.first, kBracketWidth);
  }
  EXPECT_EQ(chi_events[0].pre_axis, Axis::X);
  EXPECT_EQ(chi_events[0].post_axis, Axis::Z);
  EXPECT_EQ(chi_events[1].pre_axis, Axis::Z);
  EXPECT_EQ(chi_events[1].post_axis, Axis::X);
  for (std::size_t i = 1; i < events.size(); ++i) EXPECT_LE(events[i - 1].nu, events[i].nu);
}

TEST(DetectTransitions, WeakStateSevenSwitches) {
  const auto chi_events = events_of_kind(detect_transitions(kNoise, kWeak, 1.0, 20000), EventKind::ChiArgmaxSwitch);
  ASSERT_EQ(chi_events.size(), kWeakSwitches.size());
  for (std::size_t i = 0; i < kWeakSwitches.size(); ++i) EXPECT_NEAR(chi_events[i].nu, kWeakSwitches[i], 1e-8);
}

TEST(DetectTransitions, OverdampedSingleSwitch) {
  const ChannelParams over(0.1, 1.0, Axis::Z);
  const auto chi_events = events_of_kind(detect_transitions(over, kStrong, 5.0, 20000), EventKind::ChiArgmaxSwitch);
  ASSERT_EQ(chi_events.size(), 1u);
  EXPECT_NEAR(chi_events[0].nu, 3.592156015772609, 1e-8);
}

TEST(DetectTransitions, NoEventsWhenNoiseAxisDominates) {
  EXPECT_TRUE(detect_transitions(kNoise, CVector(0.2, -0.2, 0.9), 1.0, 20000).empty());
}

TEST(DetectTransitions, TiesAreNotEvents) {
  // all three |c_i| tie at nu = 0; the noise axis wins right after
  EXPECT_TRUE(detect_transitions(kNoise, CVector(1, -1, 1), 1.0, 20000).empty());
  // |c1| = |c2| for all nu; only the switches to and from the noise axis count
  const auto events = detect_transitions(kNoise, CVector(0.5, -0.5, 0.2), 1.0, 20000);
  const auto chi_events = events_of_kind(events, EventKind::ChiArgmaxSwitch);
  ASSERT_FALSE(chi_events.empty());
  EXPECT_EQ(chi_events[0].pre_axis, Axis::X);
  EXPECT_EQ(chi_events[0].post_axis, Axis::Z);
  for (const auto& e : chi_events) EXPECT_NEAR(std::pow(lambda_decay(kNoise, e.nu), 2), 0.4, 1e-7);
}

TEST(DetectTransitions, ResolutionGuards) {
  try {
    detect_transitions(kNoise, kStrong, 1.0, 9999);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resolution);
  }
  // period 2 pi / ~400 ~ 0.0157 against a step of 0.01
  EXPECT_THROW(detect_transitions(ChannelParams(10.0, 10.0, Axis::Z), kStrong, 100.0, 10000), Error);
  EXPECT_THROW(detect_transitions(kNoise, kStrong, 0.0, 20000), Error);
}

TEST(DetectTransitions, StableUnderGridRefinement) {
  const auto coarse = detect_transitions(kNoise, kWeak, 1.0, 10000);
  const auto fine = detect_transitions(kNoise, kWeak, 1.0, 40000);
  ASSERT_EQ(coarse.size(), fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) EXPECT_NEAR(coarse[i].nu, fine[i].nu, 1e-8);
}

TEST(Transitions, ClassicalCandidatesEquidistantAtSwitch) {
  const auto chi_events = events_of_kind(detect_transitions(kNoise, kStrong, 1.0, 20000), EventKind::ChiArgmaxSwitch);
  for (const auto& e : chi_events) {
    const CVector c = evolve_cvector(kNoise, e.nu, kStrong);
    const auto rho = to_density_matrix(c);
    const double pre = relative_entropy(rho, classical_state_on_axis(c, *e.pre_axis));
    const double post = relative_entropy(rho, classical_state_on_axis(c, *e.post_axis));
    EXPECT_NEAR(pre, post, 1e-7);
  }
}

TEST(Transitions, DiscordFrozenThenClassicalFrozen) {
  const double first = kStrongSwitches[0], second = kStrongSwitches[1];
  const double frozen_d = discord_closed(kStrong);
  for (int i = 0; i <= 200; ++i) {
    const double nu = first * i / 200 * 0.999;
    EXPECT_NEAR(discord_closed(evolve_cvector(kNoise, nu, kStrong)), frozen_d, 1e-9);
  }
  for (int i = 1; i < 200; ++i) {
    const double nu = first + (second - first) * i / 200;
    EXPECT_NEAR(classical_correlation_closed(evolve_cvector(kNoise, nu, kStrong)), correlation_term(0.6), 1e-12);
  }
  // between a down and an up switch of the weak state C sits at correlation_term(0.1)
  const double mid = 0.5 * (kWeakSwitches[0] + kWeakSwitches[1]);
  EXPECT_NEAR(classical_correlation_closed(evolve_cvector(kNoise, mid, kWeak)), correlation_term(0.1), 1e-12);
}

TEST(Transitions, QuantitiesContinuousAcrossSwitch) {
  for (double t : kStrongSwitches) {
    const CVector lo = evolve_cvector(kNoise, t - 1e-7, kStrong);
    const CVector hi = evolve_cvector(kNoise, t + 1e-7, kStrong);
    EXPECT_NEAR(discord_closed(lo), discord_closed(hi), 1e-5);
    EXPECT_NEAR(classical_correlation_closed(lo), classical_correlation_closed(hi), 1e-5);
    EXPECT_NEAR(relative_entropy_discord(lo), relative_entropy_discord(hi), 1e-5);
  }
}

TEST(DetectEsd, StrongStateDeathsAndRevivals) {
  const auto report = detect_esd(kNoise, kStrong, 1.0, 20000);
  ASSERT_EQ(report.events.size(), kStrongEntanglementFlips.size());
  for (std::size_t i = 0; i < report.events.size(); ++i) {
    EXPECT_NEAR(report.events[i].nu, kStrongEntanglementFlips[i], 1e-8);
    EXPECT_EQ(report.events[i].kind, i % 2 == 0 ? EventKind::Esd : EventKind::EntanglementRevival);
    EXPECT_FALSE(report.events[i].pre_axis.has_value());
  }
  ASSERT_TRUE(report.final_extinction.has_value());
  EXPECT_NEAR(*report.final_extinction, kStrongEntanglementFlips.back(), 1e-8);
  EXPECT_NEAR(concurrence(evolve_cvector(kNoise, kStrongEntanglementFlips[0], kStrong)), 0.0, 1e-8);
}

TEST(DetectEsd, TouchingZerosAreNotDeaths) {
  const auto report = detect_esd(kNoise, CVector(1, -1, 1), 1.0, 20000);
  EXPECT_TRUE(report.events.empty());
  EXPECT_FALSE(report.final_extinction.has_value());
  EXPECT_TRUE(detect_esd(kNoise, kWeak, 1.0, 20000).events.empty());
}

TEST(NonMarkovianity, UnderdampedRevivals) {
  const auto w = non_markovianity_witness(kNoise, 1.0, 20000);
  // |Lambda| grows from each zero to the next extremum n pi / mu, where it
  // reaches e^{-n pi / mu}; six such intervals close before nu = 1
  ASSERT_EQ(w.revival_intervals.size(), 6u);
  const double mu = kNoise.mu();
  EXPECT_NEAR(w.revival_intervals[0].first, 0.08114235059009696, 1e-8);
  EXPECT_NEAR(w.revival_intervals[0].second, std::numbers::pi / mu, 1e-8);
  EXPECT_NEAR(w.revival_intervals[5].second, 6 * std::numbers::pi / mu, 1e-8);
  double expected = 0.0;
  for (int n = 1; n <= 6; ++n) expected += std::exp(-n * std::numbers::pi / mu);
  EXPECT_NEAR(expected, 3.586203270563633, 1e-12);
  // interval starts are bisected zeros where |Lambda'| ~ 20
  EXPECT_NEAR(w.measure, expected, 1e-7);
}

TEST(NonMarkovianity, ZeroWithoutOscillation) {
  for (const ChannelParams& p : {ChannelParams(0.1, 1.0, Axis::Z), ChannelParams(0.25, 1.0, Axis::Z)}) {
    const auto w = non_markovianity_witness(p, 10.0, 20000);
    EXPECT_EQ(w.measure, 0.0);
    EXPECT_TRUE(w.revival_intervals.empty());
  }
}

TEST(NonMarkovianity, TraceDistanceOfAntipodalPairIsAbsLambda) {
  ComplexVector plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  for (double nu : {0.03, 0.1, 0.2, 0.7}) {
    const auto a = apply_single(kNoise, nu, DensityMatrix::pure(plus));
    const auto b = apply_single(kNoise, nu, DensityMatrix::pure(minus));
    EXPECT_NEAR(trace_distance(a, b), std::abs(lambda_decay(kNoise, nu)), 1e-12);
  }
}
