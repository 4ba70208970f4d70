#pragma once

// Bell-diagonal two-qubit states rho = (1 + sum_i c_i sigma_i (x) sigma_i) / 4
// and their closed-form correlation measures.
//
// Bell basis labels follow |Psi+-> = (|00> +- |11>)/sqrt2 and
// |Phi+-> = (|01> +- |10>)/sqrt2.

#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "frozendisc/density_ops.hpp"

namespace frozendisc {

namespace tolerance {
inline constexpr double physicality = 1e-12;
inline constexpr double family_membership = 1e-9;
}  // namespace tolerance

/// Enumerators are listed in the fixed tie-break order used when ranking
/// Bell weights.
enum class BellState { PsiPlus, PhiPlus, PhiMinus, PsiMinus };

inline constexpr std::array<BellState, 4> kBellOrder = {BellState::PsiPlus, BellState::PhiPlus,
                                                        BellState::PhiMinus, BellState::PsiMinus};

inline std::string_view to_string(BellState s) {
  switch (s) {
    case BellState::PsiPlus: return "psi_plus";
    case BellState::PhiPlus: return "phi_plus";
    case BellState::PhiMinus: return "phi_minus";
    case BellState::PsiMinus: return "psi_minus";
  }
  return "?";
}

inline ComplexVector bell_vector(BellState s) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(4);
  switch (s) {
    case BellState::PsiPlus: v(0) = r; v(3) = r; break;
    case BellState::PsiMinus: v(0) = r; v(3) = -r; break;
    case BellState::PhiPlus: v(1) = r; v(2) = r; break;
    case BellState::PhiMinus: v(1) = r; v(2) = -r; break;
  }
  return v;
}

inline ComplexMatrix bell_projector(BellState s) {
  const ComplexVector v = bell_vector(s);
  return v * v.adjoint();
}

struct BellSpectrum {
  double psi_plus = 0.25;
  double psi_minus = 0.25;
  double phi_plus = 0.25;
  double phi_minus = 0.25;

  double weight(BellState s) const {
    switch (s) {
      case BellState::PsiPlus: return psi_plus;
      case BellState::PsiMinus: return psi_minus;
      case BellState::PhiPlus: return phi_plus;
      case BellState::PhiMinus: return phi_minus;
    }
    return 0.0;
  }

  std::array<double, 4> values() const { return {psi_plus, psi_minus, phi_plus, phi_minus}; }
  double max() const { return std::max({psi_plus, psi_minus, phi_plus, phi_minus}); }
};

namespace detail {

inline BellSpectrum spectrum_of(double c1, double c2, double c3) {
  return {(1.0 + c1 - c2 + c3) / 4.0, (1.0 - c1 + c2 + c3) / 4.0, (1.0 + c1 + c2 - c3) / 4.0,
          (1.0 - c1 - c2 - c3) / 4.0};
}

}  // namespace detail

/// Correlation triple (c1, c2, c3) of a physical Bell-diagonal state.
class CVector {
 public:
  CVector(double c1, double c2, double c3) : c_{c1, c2, c3} {
    for (int i = 0; i < 3; ++i) {
      if (!std::isfinite(c_[i]) || std::abs(c_[i]) > 1.0) {
        throw Error(ErrorKind::Physicality,
                    "c" + std::to_string(i + 1) + " = " + std::to_string(c_[i]) + " outside [-1, 1]");
      }
    }
    const BellSpectrum s = detail::spectrum_of(c1, c2, c3);
    for (BellState b : kBellOrder) {
      if (s.weight(b) < -tolerance::physicality) {
        std::ostringstream msg;
        msg << "lambda_" << to_string(b) << " = " << s.weight(b) << " is negative for c = (" << c1 << ", " << c2
            << ", " << c3 << ")";
        throw Error(ErrorKind::Physicality, msg.str());
      }
    }
  }

  double c1() const { return c_[0]; }
  double c2() const { return c_[1]; }
  double c3() const { return c_[2]; }
  double operator[](Axis axis) const { return c_[index_of(axis)]; }
  const std::array<double, 3>& components() const { return c_; }

  friend bool operator==(const CVector&, const CVector&) = default;

 private:
  std::array<double, 3> c_;
};

inline BellSpectrum to_spectrum(const CVector& c) {
  BellSpectrum s = detail::spectrum_of(c.c1(), c.c2(), c.c3());
  // rounding-level negatives were admitted by CVector; report them as 0
  for (double* w : {&s.psi_plus, &s.psi_minus, &s.phi_plus, &s.phi_minus}) {
    if (*w < 0.0) *w = 0.0;
  }
  return s;
}

inline CVector to_cvector(const BellSpectrum& s) {
  const double sum = s.psi_plus + s.psi_minus + s.phi_plus + s.phi_minus;
  if (std::abs(sum - 1.0) > tolerance::physicality) {
    throw Error(ErrorKind::Physicality, "Bell weights sum to " + std::to_string(sum));
  }
  return CVector(s.psi_plus - s.psi_minus + s.phi_plus - s.phi_minus,
                 -s.psi_plus + s.psi_minus + s.phi_plus - s.phi_minus,
                 s.psi_plus + s.psi_minus - s.phi_plus - s.phi_minus);
}

inline DensityMatrix to_density_matrix(const CVector& c) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    m += c[axis] * tensor(pauli(axis), pauli(axis));
  }
  return DensityMatrix(m / 4.0);
}

struct Chi {
  double value;
  Axis axis;
};

/// max |c_i| and the axis carrying it; ties go to the lowest axis index.
inline Chi chi(const CVector& c) {
  Chi best{std::abs(c.c1()), Axis::X};
  if (std::abs(c.c2()) > best.value) best = {std::abs(c.c2()), Axis::Y};
  if (std::abs(c.c3()) > best.value) best = {std::abs(c.c3()), Axis::Z};
  return best;
}

/// sum_{k=1,2} (1 + (-1)^k x)/2 log2(1 + (-1)^k x), i.e. 1 - H2((1+x)/2).
inline double correlation_term(double x) {
  double sum = 0.0;
  for (double sign : {-1.0, 1.0}) {
    const double arg = 1.0 + sign * x;
    if (arg > 0.0) sum += 0.5 * arg * std::log2(arg);
  }
  return sum;
}

inline double classical_correlation_closed(const CVector& c) { return correlation_term(chi(c).value); }

inline double mutual_information_closed(const CVector& c) {
  const auto w = to_spectrum(c).values();
  return 2.0 - shannon_entropy(w);
}

inline double discord_closed(const CVector& c) {
  const double d = mutual_information_closed(c) - classical_correlation_closed(c);
  return d < 0.0 ? 0.0 : d;
}

inline double concurrence(const CVector& c) { return std::max(0.0, 2.0 * to_spectrum(c).max() - 1.0); }

/// Which of c1 / c2 carries the family parameter k.
enum class FamilyAxis { One = 1, Two = 2 };

/// (k, -c3 k, c3) or (-c3 k, k, c3): states with frozen discord under
/// axis-3 dephasing.
inline CVector frozen_family_state(double k, double c3, FamilyAxis pair) {
  if (std::abs(k) > 1.0) {
    throw Error(ErrorKind::FamilyCondition, "|k| must not exceed 1, got " + std::to_string(k));
  }
  if (!(std::abs(k) > std::abs(c3))) {
    throw Error(ErrorKind::FamilyCondition,
                "family requires |k| > |c3|, got k = " + std::to_string(k) + ", c3 = " + std::to_string(c3));
  }
  return pair == FamilyAxis::One ? CVector(k, -c3 * k, c3) : CVector(-c3 * k, k, c3);
}

struct FamilyMutualInformation {
  double constant_term;  // depends on c3 only
  double decaying_term;  // depends on c_{1(2)}(t)
};

/// Splits I(rho) for a frozen-family state into its constant and its
/// time-dependent part. The two terms sum to mutual_information_closed.
inline FamilyMutualInformation frozen_family_mutual_information(const CVector& c) {
  double k = 0.0;
  if (std::abs(c.c2() + c.c3() * c.c1()) <= tolerance::family_membership) {
    k = c.c1();
  } else if (std::abs(c.c1() + c.c3() * c.c2()) <= tolerance::family_membership) {
    k = c.c2();
  } else {
    std::ostringstream msg;
    msg << "(" << c.c1() << ", " << c.c2() << ", " << c.c3() << ") is not of the form (k, -c3 k, c3)";
    throw Error(ErrorKind::FamilyCondition, msg.str());
  }
  return {correlation_term(c.c3()), correlation_term(k)};
}

}  // namespace frozendisc
