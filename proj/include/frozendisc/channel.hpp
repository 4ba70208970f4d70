#pragma once

// Colored-noise (random telegraph) dephasing along a single Pauli axis.
// Time is the dimensionless nu = t / (2 tau) throughout.

#include <cmath>
#include <string>
#include <vector>

#include "frozendisc/bell_diagonal.hpp"
#include "frozendisc/density_ops.hpp"

namespace frozendisc {

enum class DampingBranch { Underdamped, Critical, Overdamped };

inline std::string_view to_string(DampingBranch b) {
  switch (b) {
    case DampingBranch::Underdamped: return "underdamped";
    case DampingBranch::Critical: return "critical";
    case DampingBranch::Overdamped: return "overdamped";
  }
  return "?";
}

/// |4 a tau - 1| below this routes to the critical branch.
inline constexpr double kCriticalBranchWidth = 1e-9;

struct ChannelParams {
  double a = 1.0;    // coupling strength [1/s]
  double tau = 5.0;  // memory time [s]
  Axis axis = Axis::Z;

  ChannelParams() = default;
  ChannelParams(double a_, double tau_, Axis axis_) : a(a_), tau(tau_), axis(axis_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Domain, "coupling a must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::Domain, "memory time tau must be positive");
  }

  double coupling_ratio() const { return 4.0 * a * tau; }

  DampingBranch branch() const {
    const double r = coupling_ratio();
    if (std::abs(r - 1.0) < kCriticalBranchWidth) return DampingBranch::Critical;
    return r > 1.0 ? DampingBranch::Underdamped : DampingBranch::Overdamped;
  }

  /// sqrt(|(4 a tau)^2 - 1|): the oscillation frequency in nu when
  /// underdamped, the hyperbolic rate when overdamped.
  double mu() const {
    const double r = coupling_ratio();
    return std::sqrt(std::abs(r * r - 1.0));
  }

  double seconds(double nu) const { return 2.0 * tau * nu; }
  double nu(double seconds) const { return seconds / (2.0 * tau); }
};

inline void require_nonnegative_nu(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorKind::Domain, "dimensionless time must be finite and >= 0, got " + std::to_string(nu));
  }
}

/// Coherence decay factor Lambda(nu) of the single-qubit map.
inline double lambda_decay(const ChannelParams& p, double nu) {
  require_nonnegative_nu(nu);
  const double m = p.mu();
  switch (p.branch()) {
    case DampingBranch::Underdamped:
      return std::exp(-nu) * (std::cos(m * nu) + std::sin(m * nu) / m);
    case DampingBranch::Critical:
      return std::exp(-nu) * (1.0 + nu);
    case DampingBranch::Overdamped: {
      // e^{-nu}[cosh(m nu) + sinh(m nu)/m] written without overflowing cosh
      const double grow = std::exp((m - 1.0) * nu);
      const double fall = std::exp(-(m + 1.0) * nu);
      return 0.5 * (grow + fall) + 0.5 * (grow - fall) / m;
    }
  }
  return 0.0;
}

/// dLambda/dnu.
inline double lambda_decay_rate(const ChannelParams& p, double nu) {
  require_nonnegative_nu(nu);
  const double m = p.mu();
  switch (p.branch()) {
    case DampingBranch::Underdamped:
      return -std::exp(-nu) * std::sin(m * nu) * (m + 1.0 / m);
    case DampingBranch::Critical:
      return -nu * std::exp(-nu);
    case DampingBranch::Overdamped: {
      const double grow = std::exp((m - 1.0) * nu);
      const double fall = std::exp(-(m + 1.0) * nu);
      return 0.5 * (grow - fall) * (m - 1.0 / m);
    }
  }
  return 0.0;
}

struct KrausSet {
  std::vector<ComplexMatrix> operators;

  /// sum_k A_k^dagger A_k
  ComplexMatrix completeness() const {
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto& a : operators) sum += a.adjoint() * a;
    return sum;
  }
};

inline KrausSet kraus_set(const ChannelParams& p, double nu) {
  const double lambda = lambda_decay(p, nu);
  const double flip = std::sqrt(std::max(0.0, (1.0 - lambda) / 2.0));
  const double keep = std::sqrt(std::max(0.0, (1.0 + lambda) / 2.0));
  return KrausSet{{flip * pauli(p.axis), keep * identity2()}};
}

inline DensityMatrix apply_single(const ChannelParams& p, double nu, const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error(ErrorKind::Dimension, "single-qubit channel needs a 2x2 state");
  const KrausSet kraus = kraus_set(p, nu);
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (const auto& a : kraus.operators) out += a.adjoint() * rho.matrix() * a;
  return DensityMatrix(out);
}

/// Independent local channels with identical parameters on both qubits.
inline DensityMatrix apply_two_qubit(const ChannelParams& p, double nu, const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorKind::Dimension, "two-qubit channel needs a 4x4 state");
  const KrausSet kraus = kraus_set(p, nu);
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (const auto& a : kraus.operators) {
    for (const auto& b : kraus.operators) {
      const ComplexMatrix ab = tensor(a, b);
      out += ab * rho.matrix() * ab.adjoint();
    }
  }
  return DensityMatrix(out);
}

/// The noise-axis component is frozen, the two transverse ones scale with
/// Lambda^2.
inline CVector evolve_cvector(const ChannelParams& p, double nu, const CVector& c0) {
  const double lambda = lambda_decay(p, nu);
  const double scale = lambda * lambda;
  std::array<double, 3> c = c0.components();
  for (int i = 0; i < 3; ++i) {
    if (i != index_of(p.axis)) c[i] *= scale;
  }
  return CVector(c[0], c[1], c[2]);
}

}  // namespace frozendisc
