#pragma once

// Small dense quantum-information primitives for one and two qubits.
// All entropies are in bits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "frozendisc/error.hpp"

namespace frozendisc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Pauli direction, numbered 1..3 as x, y, z.
enum class Axis : int { X = 1, Y = 2, Z = 3 };

inline int index_of(Axis axis) { return static_cast<int>(axis) - 1; }

inline Axis axis_from_int(int value) {
  if (value < 1 || value > 3) {
    throw Error(ErrorKind::Domain, "axis must be 1, 2 or 3, got " + std::to_string(value));
  }
  return static_cast<Axis>(value);
}

enum class Subsystem { A, B };

namespace tolerance {
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double eigenvalue_floor = 1e-10;  // clip (-1e-10, 0) to 0
inline constexpr double support_eigenvalue = 1e-12;
inline constexpr double support_leak = 1e-10;
}  // namespace tolerance

inline const ComplexMatrix& identity2() {
  static const ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  return m;
}

inline const ComplexMatrix& sigma_x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
  }();
  return m;
}

inline const ComplexMatrix& sigma_y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return s;
  }();
  return m;
}

inline const ComplexMatrix& sigma_z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return m;
}

inline const ComplexMatrix& pauli(Axis axis) {
  switch (axis) {
    case Axis::X: return sigma_x();
    case Axis::Y: return sigma_y();
    case Axis::Z: break;
  }
  return sigma_z();
}

inline void require_qubit_dim(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw Error(ErrorKind::Dimension, std::string(what) + " must be a 2x2 or 4x4 matrix, got " +
                                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline double max_hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Eigenvalues (ascending) of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  return solver.eigenvalues();
}

inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigensystem(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver did not converge");
  }
  return solver;
}

/// A validated one- or two-qubit density matrix: Hermitian, unit trace and
/// positive semidefinite up to the tolerances above.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_qubit_dim(m_, "density matrix");
    if (!m_.allFinite()) {
      throw Error(ErrorKind::Validity, "density matrix has non-finite entries");
    }
    const double herm = max_hermiticity_defect(m_);
    if (herm > tolerance::hermiticity) {
      throw Error(ErrorKind::Validity, "density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > tolerance::trace) {
      throw Error(ErrorKind::Validity, "density matrix trace is " + std::to_string(tr.real()));
    }
    const double min_eig = hermitian_eigenvalues(m_).minCoeff();
    if (min_eig < -tolerance::eigenvalue_floor) {
      throw Error(ErrorKind::Validity, "density matrix has negative eigenvalue " + std::to_string(min_eig));
    }
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const ComplexVector unit = psi.normalized();
    return DensityMatrix(unit * unit.adjoint());
  }

  static DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

 private:
  ComplexMatrix m_;
};

/// -sum p log2 p with 0 log 0 := 0 and tiny negative rounding clipped.
inline double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline Eigen::VectorXd spectrum(const DensityMatrix& rho) {
  Eigen::VectorXd eig = hermitian_eigenvalues(rho.matrix());
  for (auto& e : eig) {
    if (e < 0.0) e = 0.0;
  }
  return eig;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd eig = spectrum(rho);
  const double s = shannon_entropy(std::span<const double>(eig.data(), static_cast<std::size_t>(eig.size())));
  return std::clamp(s, 0.0, std::log2(static_cast<double>(rho.dim())));
}

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw Error(ErrorKind::Dimension, "tensor expects two 2x2 operands");
  }
  return Eigen::kroneckerProduct(a, b).eval();
}

/// Reduced state of a two-qubit density matrix; `traced` is the subsystem
/// that is summed over. Basis ordering is |ab> -> 2a + b.
inline DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem traced) {
  if (rho.dim() != 4) {
    throw Error(ErrorKind::Dimension, "partial trace needs a 4x4 state, got dim " + std::to_string(rho.dim()));
  }
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        r(i, j) += traced == Subsystem::B ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return DensityMatrix(r);
}

/// Tr rho (log2 rho - log2 sigma). Returns +infinity when the support of rho
/// is not contained in the support of sigma.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::Dimension, "relative entropy operands differ in dimension");
  }
  const auto sys = hermitian_eigensystem(sigma.matrix());
  const Eigen::VectorXd& s = sys.eigenvalues();
  const ComplexMatrix& v = sys.eigenvectors();
  double cross = 0.0;  // Tr rho log2 sigma
  for (int j = 0; j < s.size(); ++j) {
    const double weight = (v.col(j).adjoint() * rho.matrix() * v.col(j))(0, 0).real();
    if (s(j) < tolerance::support_eigenvalue) {
      if (weight >= tolerance::support_leak) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log2(s(j));
  }
  const double value = -von_neumann_entropy(rho) - cross;
  return std::max(value, 0.0);
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::Dimension, "trace distance operands differ in dimension");
  }
  const Eigen::VectorXd eig = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return std::min(0.5 * eig.cwiseAbs().sum(), 1.0);
}

/// I(A:B) = S(A) + S(B) - S(AB).
inline double mutual_information(const DensityMatrix& rho) {
  return von_neumann_entropy(partial_trace(rho, Subsystem::B)) +
         von_neumann_entropy(partial_trace(rho, Subsystem::A)) - von_neumann_entropy(rho);
}

}  // namespace frozendisc
