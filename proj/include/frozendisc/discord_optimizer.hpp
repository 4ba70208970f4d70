#pragma once

// Brute-force classical correlation and discord of an arbitrary two-qubit
// state: maximise J(rho | {Pi_k}) over projective measurements on qubit B.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "frozendisc/density_ops.hpp"

namespace frozendisc {

/// Projective qubit measurement along n = (sin t cos p, sin t sin p, cos t).
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;

  /// Same projector pair with theta in [0, pi] and phi in [0, 2 pi).
  MeasurementBasis canonical() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double t = std::fmod(theta, two_pi);
    double p = phi;
    if (t < 0.0) t += two_pi;
    if (t > std::numbers::pi) {
      t = two_pi - t;
      p += std::numbers::pi;
    }
    p = std::fmod(p, two_pi);
    if (p < 0.0) p += two_pi;
    return {t, p};
  }

  Eigen::Vector3d direction() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  /// (I + sign n.sigma) / 2
  ComplexMatrix projector(int sign) const {
    const Eigen::Vector3d n = direction();
    ComplexMatrix p = identity2();
    p += static_cast<double>(sign) * (n.x() * sigma_x() + n.y() * sigma_y() + n.z() * sigma_z());
    return p / 2.0;
  }
};

inline constexpr double kZeroProbability = 1e-12;

struct ConditionalOutcome {
  double probability = 0.0;
  /// Empty when the outcome probability is below kZeroProbability; such
  /// outcomes contribute nothing to the conditional entropy.
  std::optional<DensityMatrix> state;
};

struct ConditionalEnsemble {
  std::array<ConditionalOutcome, 2> outcomes;
};

inline ConditionalEnsemble condition_on_measurement(const DensityMatrix& rho, const MeasurementBasis& basis) {
  if (rho.dim() != 4) throw Error(ErrorKind::Dimension, "measurement conditioning needs a 4x4 state");
  ConditionalEnsemble ens;
  for (int k = 0; k < 2; ++k) {
    const ComplexMatrix op = tensor(identity2(), basis.projector(k == 0 ? 1 : -1));
    const ComplexMatrix post = op * rho.matrix() * op;
    const double p = std::max(0.0, post.trace().real());
    ens.outcomes[k].probability = p;
    if (p >= kZeroProbability) ens.outcomes[k].state.emplace(ComplexMatrix(post / p));
  }
  return ens;
}

/// J(rho | {B_k}) = S(rho_A) - sum_k p_k S(rho_k).
inline double conditional_mutual_information(const DensityMatrix& rho, const MeasurementBasis& basis) {
  const ConditionalEnsemble ens = condition_on_measurement(rho, basis);
  double conditional = 0.0;
  for (const auto& o : ens.outcomes) {
    if (o.state) conditional += o.probability * von_neumann_entropy(*o.state);
  }
  return von_neumann_entropy(partial_trace(rho, Subsystem::B)) - conditional;
}

namespace detail {

inline double qubit_entropy(double a, double d, std::complex<double> b) {
  const double half_tr = 0.5 * (a + d);
  const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  const std::array<double, 2> eig{half_tr + radius, half_tr - radius};
  return shannon_entropy(eig);
}

/// Fast J evaluation for the optimiser. After a rank-1 projection on B the
/// conditional state is rho_A|k (x) Pi_k, so only the 2x2 block
/// Tr_B[(I (x) Pi_k) rho] is needed.
class JEvaluator {
 public:
  explicit JEvaluator(const DensityMatrix& rho)
      : rho_(rho.matrix()), entropy_a_(von_neumann_entropy(partial_trace(rho, Subsystem::B))) {}

  double operator()(double theta, double phi) const {
    const double nx = std::sin(theta) * std::cos(phi);
    const double ny = std::sin(theta) * std::sin(phi);
    const double nz = std::cos(theta);
    double conditional = 0.0;
    for (int sign : {1, -1}) {
      // projector entries Pi_{b'b}
      const double s = static_cast<double>(sign);
      const std::complex<double> p00 = 0.5 * (1.0 + s * nz);
      const std::complex<double> p11 = 0.5 * (1.0 - s * nz);
      const std::complex<double> p01 = 0.5 * s * std::complex<double>(nx, -ny);
      const std::complex<double> p10 = std::conj(p01);
      // block(i, j) = sum_{b, b'} rho(2i + b, 2j + b') Pi(b', b)
      auto block = [&](int i, int j) {
        return rho_(2 * i, 2 * j) * p00 + rho_(2 * i, 2 * j + 1) * p10 + rho_(2 * i + 1, 2 * j) * p01 +
               rho_(2 * i + 1, 2 * j + 1) * p11;
      };
      const double a = block(0, 0).real();
      const double d = block(1, 1).real();
      const std::complex<double> b = block(0, 1);
      const double p = a + d;
      if (p < kZeroProbability) continue;
      conditional += p * qubit_entropy(a / p, d / p, b / p);
    }
    return entropy_a_ - conditional;
  }

  double entropy_a() const { return entropy_a_; }

 private:
  Eigen::Matrix4cd rho_;
  double entropy_a_;
};

}  // namespace detail

struct MeasurementGrid {
  int n_theta = 91;  // theta in [0, pi], endpoints included
  int n_phi = 181;   // phi in [0, 2 pi), endpoint excluded

  double theta(int i) const { return n_theta == 1 ? 0.0 : std::numbers::pi * i / (n_theta - 1); }
  double phi(int j) const { return 2.0 * std::numbers::pi * j / n_phi; }
};

struct ClassicalCorrelationResult {
  double value = 0.0;
  MeasurementBasis argmax;
};

/// Grid search over (theta, phi) followed by `refine_iters` Nelder-Mead
/// iterations started at the best grid point. Only strict improvements
/// replace the incumbent, so flat landscapes return the lowest-index grid
/// point.
inline ClassicalCorrelationResult classical_correlation_optimized(const DensityMatrix& rho,
                                                                  const MeasurementGrid& grid = {},
                                                                  int refine_iters = 50) {
  if (rho.dim() != 4) throw Error(ErrorKind::Dimension, "classical correlation needs a 4x4 state");
  if (grid.n_theta < 2 || grid.n_phi < 1 || refine_iters < 0) {
    throw Error(ErrorKind::Domain, "measurement grid needs n_theta >= 2, n_phi >= 1, refine_iters >= 0");
  }
  const detail::JEvaluator j_of(rho);

  double best = -std::numeric_limits<double>::infinity();
  MeasurementBasis arg;
  for (int i = 0; i < grid.n_theta; ++i) {
    for (int k = 0; k < grid.n_phi; ++k) {
      const double v = j_of(grid.theta(i), grid.phi(k));
      if (v > best) {
        best = v;
        arg = {grid.theta(i), grid.phi(k)};
      }
    }
  }

  if (refine_iters > 0) {
    struct Vertex {
      double t, p, f;  // f = -J
    };
    auto eval = [&](double t, double p) { return Vertex{t, p, -j_of(t, p)}; };
    const double dt = std::numbers::pi / (grid.n_theta - 1);
    const double dp = 2.0 * std::numbers::pi / grid.n_phi;
    std::array<Vertex, 3> s{eval(arg.theta, arg.phi), eval(arg.theta + dt, arg.phi),
                            eval(arg.theta, arg.phi + dp)};
    for (int it = 0; it < refine_iters; ++it) {
      std::sort(s.begin(), s.end(), [](const Vertex& x, const Vertex& y) { return x.f < y.f; });
      const double ct = 0.5 * (s[0].t + s[1].t);
      const double cp = 0.5 * (s[0].p + s[1].p);
      const Vertex r = eval(ct + (ct - s[2].t), cp + (cp - s[2].p));
      if (r.f < s[0].f) {
        const Vertex e = eval(ct + 2.0 * (ct - s[2].t), cp + 2.0 * (cp - s[2].p));
        s[2] = e.f < r.f ? e : r;
      } else if (r.f < s[1].f) {
        s[2] = r;
      } else {
        const bool outside = r.f < s[2].f;
        const Vertex c = outside ? eval(ct + 0.5 * (r.t - ct), cp + 0.5 * (r.p - cp))
                                 : eval(ct + 0.5 * (s[2].t - ct), cp + 0.5 * (s[2].p - cp));
        if (c.f < (outside ? r.f : s[2].f)) {
          s[2] = c;
        } else {
          for (int v = 1; v < 3; ++v) s[v] = eval(0.5 * (s[0].t + s[v].t), 0.5 * (s[0].p + s[v].p));
        }
      }
      for (const Vertex& v : s) {
        if (-v.f > best) {
          best = -v.f;
          arg = {v.t, v.p};
        }
      }
    }
  }
  return {best, arg.canonical()};
}

/// D = I(rho) - C(rho), clipped at 0 for rounding-level negatives.
inline double discord_optimized(const DensityMatrix& rho, const MeasurementGrid& grid = {}, int refine_iters = 50) {
  const double d = mutual_information(rho) - classical_correlation_optimized(rho, grid, refine_iters).value;
  if (d < -1e-6) {
    throw Error(ErrorKind::NumericalFailure, "optimised classical correlation exceeds mutual information");
  }
  return std::max(d, 0.0);
}

}  // namespace frozendisc
