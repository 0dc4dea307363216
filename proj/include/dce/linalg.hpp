#pragma once

// Dense Hermitian eigensolver (cyclic Jacobi), closed-system propagation
// through a cached eigendecomposition, and fixed-step propagators built by
// scaling and squaring.

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "dce/fock.hpp"

namespace dce {

struct EigenDecomposition {
  FockSpace space;
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // column j is the eigenvector of values(j)

  Index dim() const { return values.size(); }

  StateVector eigenvector(Index j) const { return {space, vectors.col(j)}; }

  /// max |V diag(values) V^H - M|
  double reconstruction_error(const Matrix& m) const {
    return max_abs(vectors * values.cast<complex>().asDiagonal() * vectors.adjoint() - m);
  }

  double orthonormality_error() const {
    return max_abs(vectors.adjoint() * vectors - Matrix::Identity(dim(), dim()));
  }
};

namespace detail {

// One cyclic-Jacobi rotation zeroing a(p, q). The unitary J combines the
// phase diag(1, e^{-i arg a_pq}) with the real rotation of the now-real
// 2x2 block; A <- J^H A J and V <- V J.
inline void jacobi_rotate(Matrix& a, Matrix& v, Index p, Index q) {
  const complex apq = a(p, q);
  const double mag = std::abs(apq);
  const complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const complex sp = s * std::conj(phase);
  const complex cp = c * std::conj(phase);
  const Index n = a.rows();

  for (Index k = 0; k < n; ++k) {
    const complex akp = a(k, p);
    const complex akq = a(k, q);
    a(k, p) = c * akp - sp * akq;
    a(k, q) = s * akp + cp * akq;
  }
  for (Index k = 0; k < n; ++k) {
    const complex apk = a(p, k);
    const complex aqk = a(q, k);
    a(p, k) = c * apk - std::conj(sp) * aqk;
    a(q, k) = s * apk + std::conj(cp) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * mag;
  a(q, q) = aqq + t * mag;

  for (Index k = 0; k < n; ++k) {
    const complex vkp = v(k, p);
    const complex vkq = v(k, q);
    v(k, p) = c * vkp - sp * vkq;
    v(k, q) = s * vkp + cp * vkq;
  }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
inline EigenDecomposition hermitian_eig(const OperatorMatrix& m) {
  if (!m.is_hermitian()) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian (max |M - M^H| = " << m.hermiticity_defect()
       << ", max |M| = " << max_abs(m.matrix()) << ")";
    throw numerical_error(os.str());
  }
  const Index n = m.dim();
  Matrix a = 0.5 * (m.matrix() + m.matrix().adjoint());
  Matrix v = Matrix::Identity(n, n);

  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = a.norm();
  const double floor = std::numeric_limits<double>::min() / eps;
  constexpr int kMaxSweeps = 60;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= floor) continue;
        // Negligible relative to the diagonal and to the matrix scale.
        const double diag = std::sqrt(std::abs(a(p, p).real() * a(q, q).real()));
        if (mag <= 1e-3 * eps * diag || mag <= 1e-3 * eps * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        detail::jacobi_rotate(a, v, p, q);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) {
    throw numerical_error("hermitian_eig: Jacobi iteration did not converge in " +
                          std::to_string(kMaxSweeps) + " sweeps");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out{m.space(), Eigen::VectorXd(n), Matrix(n, n)};
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    out.values(j) = a(src, src).real();
    out.vectors.col(j) = v.col(src);
  }
  return out;
}

/// exp(-i H t) for a fixed Hermitian H, cached as an eigendecomposition so
/// that any t costs one O(dim^2) application.
class ClosedPropagator {
 public:
  explicit ClosedPropagator(const OperatorMatrix& h) : eig_(hermitian_eig(h)) {}
  explicit ClosedPropagator(EigenDecomposition eig) : eig_(std::move(eig)) {}

  const EigenDecomposition& eigen() const { return eig_; }
  const FockSpace& space() const { return eig_.space; }

  /// Eigenbasis coefficients V^H psi.
  Vector coefficients(const StateVector& psi) const {
    require_same_space(eig_.space, psi.space(), "ClosedPropagator");
    return eig_.vectors.adjoint() * psi.amplitudes();
  }

  StateVector evolve_coefficients(const Vector& coeffs, double t) const {
    Vector phased(coeffs.size());
    for (Index j = 0; j < coeffs.size(); ++j)
      phased(j) = coeffs(j) * std::polar(1.0, -eig_.values(j) * t);
    return {eig_.space, eig_.vectors * phased};
  }

  StateVector evolve(const StateVector& psi0, double t) const {
    if (t == 0.0) return psi0;
    return evolve_coefficients(coefficients(psi0), t);
  }

 private:
  EigenDecomposition eig_;
};

inline StateVector evolve_closed(const OperatorMatrix& h, const StateVector& psi0, double t) {
  if (!psi0.is_normalized()) throw std::invalid_argument("evolve_closed: initial state not normalized");
  return ClosedPropagator(h).evolve(psi0, t);
}

inline double norm1(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
}

/// exp(A) by scaling and squaring with a Taylor kernel on ||A/2^s||_1 <= 1/2.
inline Matrix expm(const Matrix& a) {
  const Index n = a.rows();
  const double nrm = norm1(a);
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const Matrix b = a / std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = 1; k <= 40; ++k) {
    term = (term * b) / static_cast<double>(k);
    result += term;
    if (norm1(term) <= 0.1 * eps * norm1(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// ||H - diag(H)||_1: the coherent coupling a single step must resolve.
inline double coupling_norm(const Matrix& h) {
  Matrix off = h;
  off.diagonal().setZero();
  return norm1(off);
}

inline constexpr double kStepCouplingLimit = 0.1;

/// U = exp(-i H dt) for a possibly non-Hermitian H. The diagonal part of H is
/// exponentiated exactly by scaling and squaring; the guard bounds the
/// off-diagonal mixing per step.
inline OperatorMatrix fixed_step_propagator(const OperatorMatrix& h, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("fixed_step_propagator: dt must be > 0");
  const double coupling = coupling_norm(h.matrix());
  if (coupling * dt > kStepCouplingLimit) {
    std::ostringstream os;
    os << "fixed_step_propagator: step too large (||H_offdiag||_1 * dt = " << coupling * dt
       << " > " << kStepCouplingLimit << "); use dt <= " << kStepCouplingLimit / coupling;
    throw numerical_error(os.str());
  }
  return {h.space(), expm(complex(0.0, -dt) * h.matrix())};
}

}  // namespace dce
