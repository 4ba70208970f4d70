#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "frozendisc/kernel_oracle.hpp"

using namespace frozendisc;

namespace {

double max_error(const SampledFunction& f, const ChannelParams& p, int points, double nu_max) {
  double worst = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double nu = nu_max * i / points;
    worst = std::max(worst, std::abs(f(nu) - lambda_decay(p, nu)));
  }
  return worst;
}

double node_error(const SampledFunction& f, const ChannelParams& p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f.values()[i] - lambda_decay(p, f.node(i))));
  return worst;
}

const ChannelParams kUnder(1.0, 5.0, Axis::Z);
const ChannelParams kOver(0.1, 1.0, Axis::Z);
const ChannelParams kCritical(0.25, 1.0, Axis::Z);

}  // namespace

TEST(MemoryKernel, StartsAtOne) {
  for (auto scheme : {IntegratorScheme::VolterraTrapezoid, IntegratorScheme::OdeRk4}) {
    const auto f = integrate_memory_kernel(kUnder, {1e-3, 1.0, scheme});
    EXPECT_DOUBLE_EQ(f(0.0), 1.0);
    EXPECT_DOUBLE_EQ(f.values()[0], 1.0);
  }
}

TEST(MemoryKernel, ReproducesClosedFormOnAllBranches) {
  for (const ChannelParams& p : {kUnder, kOver, kCritical}) {
    const auto f = integrate_memory_kernel(p, {1e-5, 5.0, IntegratorScheme::VolterraTrapezoid});
    EXPECT_LT(max_error(f, p, 1000, 5.0), 1e-6) << "ratio " << p.coupling_ratio();
    const auto g = integrate_memory_kernel(p, {1e-3, 5.0, IntegratorScheme::OdeRk4});
    EXPECT_LT(max_error(g, p, 1000, 5.0), 1e-6) << "ratio " << p.coupling_ratio();
  }
}

TEST(MemoryKernel, VolterraAgreesWithOde) {
  const auto v = integrate_memory_kernel(kUnder, {2e-6, 5.0, IntegratorScheme::VolterraTrapezoid});
  const auto o = integrate_memory_kernel(kUnder, {1e-4, 5.0, IntegratorScheme::OdeRk4});
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double nu = 5.0 * i / 1000;
    worst = std::max(worst, std::abs(v(nu) - o(nu)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(MemoryKernel, ConvergenceOrder) {
  // halving the step shrinks the nodal error by 2^order
  const double e1 = node_error(integrate_memory_kernel(kUnder, {1e-3, 1.0, IntegratorScheme::VolterraTrapezoid}), kUnder);
  const double e2 = node_error(integrate_memory_kernel(kUnder, {5e-4, 1.0, IntegratorScheme::VolterraTrapezoid}), kUnder);
  EXPECT_GT(e1 / e2, 3.2);
  EXPECT_LT(e1 / e2, 4.8);

  const double r1 = node_error(integrate_memory_kernel(kUnder, {4e-3, 1.0, IntegratorScheme::OdeRk4}), kUnder);
  const double r2 = node_error(integrate_memory_kernel(kUnder, {2e-3, 1.0, IntegratorScheme::OdeRk4}), kUnder);
  EXPECT_GT(r1 / r2, 12.8);
}

TEST(MemoryKernel, CoarseStepIsAResolutionError) {
  try {
    integrate_memory_kernel(ChannelParams(10.0, 10.0, Axis::Z), {0.5, 50.0, IntegratorScheme::OdeRk4});
    FAIL() << "expected the integration to blow up";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Resolution);
  }
  EXPECT_THROW(integrate_memory_kernel(kUnder, {0.0, 1.0, IntegratorScheme::OdeRk4}), Error);
}

TEST(MemoryKernel, OverdampedIsMonotone) {
  for (const ChannelParams& p : {kOver, kCritical}) {
    const auto f = integrate_memory_kernel(p, {1e-3, 5.0, IntegratorScheme::VolterraTrapezoid});
    for (std::size_t i = 1; i < f.size(); ++i) ASSERT_LE(f.values()[i], f.values()[i - 1] + 1e-12);
  }
}

TEST(SampledFunction, OutOfRangeThrows) {
  const auto f = integrate_memory_kernel(kUnder, {1e-3, 1.0, IntegratorScheme::OdeRk4});
  EXPECT_NO_THROW(f(1.0));
  EXPECT_THROW(f(1.01), Error);
  EXPECT_THROW(f(-0.01), Error);
}

TEST(Telegraph, FlipCountIsPoisson) {
  const ChannelParams p(1.0, 2.0, Axis::Z);
  const double t = 20.0;  // mean flips t / (2 tau) = 5
  const int n = 20000;
  double sum = 0.0;
  int voids = 0;
  for (int i = 0; i < n; ++i) {
    const auto traj = sample_telegraph(p, mix_seed(99, i), t);
    sum += static_cast<double>(traj.flip_times.size());
    if (traj.flips_before(2.0) == 0) ++voids;  // P = e^{-2/(2 tau)}
  }
  EXPECT_NEAR(sum / n, 5.0, 3.0 * std::sqrt(5.0 / n));
  const double p_void = std::exp(-0.5);
  EXPECT_NEAR(static_cast<double>(voids) / n, p_void, 3.0 * std::sqrt(p_void * (1 - p_void) / n));
}

TEST(Telegraph, Autocorrelation) {
  const ChannelParams p(0.7, 2.0, Axis::Z);
  const int n = 20000;
  double lag0 = 0.0, lag_tau = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto traj = sample_telegraph(p, mix_seed(7, i), 2.0);
    lag0 += traj.value(0.0) * traj.value(0.0);
    lag_tau += traj.value(0.0) * traj.value(2.0);
  }
  EXPECT_NEAR(lag0 / n, 0.49, 1e-12);
  // <G(0)G(t)> = a^2 e^{-t/tau}
  const double expected = 0.49 * std::exp(-1.0);
  EXPECT_NEAR(lag_tau / n, expected, 3.0 * 0.49 / std::sqrt(n));
}

TEST(Telegraph, PhaseIntegratesTheSignal) {
  const auto traj = sample_telegraph(kUnder, 3, 10.0);
  const int steps = 200000;
  double riemann = 0.0;
  for (int i = 0; i < steps; ++i) riemann += traj.value((i + 0.5) * 10.0 / steps) * 10.0 / steps;
  EXPECT_NEAR(traj.accumulated_phase(10.0), riemann, 1e-3);
  EXPECT_DOUBLE_EQ(traj.accumulated_phase(0.0), 0.0);
}

TEST(MonteCarlo, MatchesClosedForm) {
  const std::vector<double> grid{0.0, 0.02, 0.05, 0.1, 0.157, 0.3};
  const auto est = monte_carlo_lambda(kUnder, 20000, grid, 2024);
  EXPECT_DOUBLE_EQ(est.mean[0], 1.0);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double z = (est.mean[j] - lambda_decay(kUnder, grid[j])) / est.std_error[j];
    EXPECT_LT(std::abs(z), 3.0) << "nu " << grid[j];
  }
}

TEST(MonteCarlo, DeterministicAndWorkerIndependent) {
  const std::vector<double> grid{0.05, 0.1};
  const auto a = monte_carlo_lambda(kUnder, 5000, grid, 11, 1);
  const auto b = monte_carlo_lambda(kUnder, 5000, grid, 11, 1);
  const auto c = monte_carlo_lambda(kUnder, 5000, grid, 11, 4);
  const auto d = monte_carlo_lambda(kUnder, 5000, grid, 12, 1);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.mean, c.mean);
  EXPECT_EQ(a.std_error, c.std_error);
  EXPECT_NE(a.mean, d.mean);
}

TEST(MonteCarlo, StandardErrorScalesAsInverseRoot) {
  const std::vector<double> grid{0.1};
  const auto small = monte_carlo_lambda(kUnder, 4000, grid, 5);
  const auto large = monte_carlo_lambda(kUnder, 64000, grid, 5);
  EXPECT_NEAR(small.std_error[0] / large.std_error[0], 4.0, 0.4);
}

TEST(MonteCarlo, RejectsSmallSamples) {
  const std::vector<double> grid{0.1};
  EXPECT_THROW(monte_carlo_lambda(kUnder, 999, grid, 1), Error);
  const std::vector<double> negative{-0.1};
  EXPECT_THROW(monte_carlo_lambda(kUnder, 1000, negative, 1), Error);
}
