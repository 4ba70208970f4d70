#pragma once

// Two independent reference computations of the coherence factor Lambda(nu):
//
//  * deterministic integration of the exponential-memory-kernel master
//    equation for the transverse coherence c(nu),
//        dc/dnu = -(4 a tau)^2 \int_0^nu e^{-2(nu - s)} c(s) ds,   c(0) = 1,
//    either by trapezoidal Volterra quadrature or through the equivalent
//    local ODE c'' + 2 c' + (4 a tau)^2 c = 0, c'(0) = 0;
//  * Monte Carlo averaging of cos(2 phi(t)) over random telegraph fields
//    Gamma(t) = +-a flipping at Poisson rate 1/(2 tau), phi = \int Gamma.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "frozendisc/channel.hpp"

namespace frozendisc {

enum class IntegratorScheme { VolterraTrapezoid, OdeRk4 };

inline std::string_view to_string(IntegratorScheme s) {
  return s == IntegratorScheme::VolterraTrapezoid ? "volterra-trapezoid" : "ode-rk4";
}

struct IntegratorConfig {
  double step = 1e-3;  // in nu
  double max_nu = 5.0;
  IntegratorScheme scheme = IntegratorScheme::VolterraTrapezoid;

  /// Nominal convergence order of the scheme.
  int order() const { return scheme == IntegratorScheme::VolterraTrapezoid ? 2 : 4; }
};

/// Uniformly sampled function with derivative samples; evaluated between
/// nodes by cubic Hermite interpolation.
class SampledFunction {
 public:
  SampledFunction(double step, std::vector<double> values, std::vector<double> slopes)
      : step_(step), values_(std::move(values)), slopes_(std::move(slopes)) {}

  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  double max_nu() const { return step_ * static_cast<double>(values_.size() - 1); }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }
  double node(std::size_t i) const { return step_ * static_cast<double>(i); }

  double operator()(double nu) const {
    if (nu < 0.0 || nu > max_nu() * (1.0 + 1e-12)) {
      throw Error(ErrorKind::Domain, "nu = " + std::to_string(nu) + " outside the sampled range");
    }
    const double x = nu / step_;
    std::size_t i = std::min(static_cast<std::size_t>(x), values_.size() - 2);
    const double t = x - static_cast<double>(i);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] + h11 * step_ * slopes_[i + 1];
  }

 private:
  double step_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

namespace detail {

inline void check_stability(double value, double nu) {
  if (!std::isfinite(value) || std::abs(value) > 1.0 + 1e-6) {
    throw Error(ErrorKind::Resolution,
                "integrated coherence left [-1, 1] at nu = " + std::to_string(nu) + "; reduce the step");
  }
}

inline SampledFunction integrate_volterra(double kappa2, double h, std::size_t n) {
  // M(nu) = \int_0^nu e^{-2(nu-s)} c(s) ds. With the exponential kernel the
  // composite trapezoid sum obeys M_{n+1} = E M_n + h/2 (E c_n + c_{n+1}).
  const double e = std::exp(-2.0 * h);
  std::vector<double> c(n + 1), dc(n + 1);
  c[0] = 1.0;
  dc[0] = 0.0;
  double memory = 0.0;
  const double denom = 1.0 + h * h * kappa2 / 4.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double next =
        (c[k] * (1.0 - h * h * kappa2 * e / 4.0) - 0.5 * h * kappa2 * (1.0 + e) * memory) / denom;
    memory = e * memory + 0.5 * h * (e * c[k] + next);
    c[k + 1] = next;
    dc[k + 1] = -kappa2 * memory;
    check_stability(next, h * static_cast<double>(k + 1));
  }
  return SampledFunction(h, std::move(c), std::move(dc));
}

inline SampledFunction integrate_ode(double kappa2, double h, std::size_t n) {
  std::vector<double> c(n + 1), dc(n + 1);
  c[0] = 1.0;
  dc[0] = 0.0;
  auto accel = [kappa2](double y, double v) { return -2.0 * v - kappa2 * y; };
  for (std::size_t k = 0; k < n; ++k) {
    const double y = c[k], v = dc[k];
    const double k1y = v, k1v = accel(y, v);
    const double k2y = v + 0.5 * h * k1v, k2v = accel(y + 0.5 * h * k1y, v + 0.5 * h * k1v);
    const double k3y = v + 0.5 * h * k2v, k3v = accel(y + 0.5 * h * k2y, v + 0.5 * h * k2v);
    const double k4y = v + h * k3v, k4v = accel(y + h * k3y, v + h * k3v);
    c[k + 1] = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dc[k + 1] = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    check_stability(c[k + 1], h * static_cast<double>(k + 1));
  }
  return SampledFunction(h, std::move(c), std::move(dc));
}

}  // namespace detail

/// Evolves the coherence of |+><+| (transverse to the noise axis) under the
/// memory-kernel master equation; the result samples Lambda(nu) on
/// [0, cfg.max_nu].
inline SampledFunction integrate_memory_kernel(const ChannelParams& params, const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.max_nu > 0.0)) {
    throw Error(ErrorKind::Domain, "integrator step and range must be positive");
  }
  const auto n = static_cast<std::size_t>(std::ceil(cfg.max_nu / cfg.step - 1e-9));
  const double h = cfg.max_nu / static_cast<double>(n);
  const double kappa2 = params.coupling_ratio() * params.coupling_ratio();
  return cfg.scheme == IntegratorScheme::VolterraTrapezoid ? detail::integrate_volterra(kappa2, h, n)
                                                           : detail::integrate_ode(kappa2, h, n);
}

/// splitmix64 finalizer; derives independent per-trajectory seeds.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// One realisation of Gamma(t) on [0, t_max] (seconds).
struct TelegraphTrajectory {
  std::vector<double> flip_times;
  int initial_sign = 1;
  double amplitude = 0.0;
  double t_max = 0.0;

  std::size_t flips_before(double t) const {
    return static_cast<std::size_t>(std::upper_bound(flip_times.begin(), flip_times.end(), t) -
                                     flip_times.begin());
  }

  double value(double t) const {
    const int sign = flips_before(t) % 2 == 0 ? initial_sign : -initial_sign;
    return sign * amplitude;
  }

  /// phi(t) = \int_0^t Gamma(s) ds
  double accumulated_phase(double t) const {
    double phase = 0.0;
    double start = 0.0;
    int sign = initial_sign;
    for (double flip : flip_times) {
      if (flip >= t) break;
      phase += sign * (flip - start);
      start = flip;
      sign = -sign;
    }
    return amplitude * (phase + sign * (t - start));
  }
};

inline TelegraphTrajectory sample_telegraph(const ChannelParams& params, std::uint64_t seed, double t_max) {
  if (!(t_max >= 0.0)) throw Error(ErrorKind::Domain, "t_max must be >= 0");
  std::mt19937_64 rng(seed);
  TelegraphTrajectory traj;
  traj.amplitude = params.a;
  traj.t_max = t_max;
  traj.initial_sign = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
  std::exponential_distribution<double> wait(1.0 / (2.0 * params.tau));
  for (double t = wait(rng); t < t_max; t += wait(rng)) traj.flip_times.push_back(t);
  return traj;
}

struct MonteCarloEstimate {
  std::vector<double> nu;
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t samples = 0;
};

/// Trajectories are summed in fixed blocks; block partial sums are combined
/// in index order, so the result does not depend on `workers`.
inline MonteCarloEstimate monte_carlo_lambda(const ChannelParams& params, std::size_t n_samples,
                                             std::span<const double> nu_grid, std::uint64_t seed,
                                             unsigned workers = 1) {
  if (n_samples < 1000) throw Error(ErrorKind::Domain, "Monte Carlo needs at least 1000 samples");
  for (double nu : nu_grid) require_nonnegative_nu(nu);
  const std::size_t m = nu_grid.size();
  const double nu_max = m == 0 ? 0.0 : *std::max_element(nu_grid.begin(), nu_grid.end());
  const double t_max = params.seconds(nu_max);

  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks * m, 0.0), squares(blocks * m, 0.0);

  auto run_block = [&](std::size_t b) {
    const std::size_t end = std::min(n_samples, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const TelegraphTrajectory traj = sample_telegraph(params, mix_seed(seed, i), t_max);
      for (std::size_t j = 0; j < m; ++j) {
        const double x = std::cos(2.0 * traj.accumulated_phase(params.seconds(nu_grid[j])));
        sums[b * m + j] += x;
        squares[b * m + j] += x * x;
      }
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  MonteCarloEstimate out;
  out.samples = n_samples;
  out.nu.assign(nu_grid.begin(), nu_grid.end());
  const auto n = static_cast<double>(n_samples);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      s += sums[b * m + j];
      s2 += squares[b * m + j];
    }
    const double mean = s / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
    out.mean.push_back(mean);
    out.std_error.push_back(std::sqrt(var / n));
  }
  return out;
}

}  // namespace frozendisc
