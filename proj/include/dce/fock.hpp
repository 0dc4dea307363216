#pragma once

// Truncated two-mode (cavity x mechanics) Fock space with dense operators
// and kets. Basis ordering is photon-major: index(n, k) = n * n_mech + k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dce {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown when a numerical precondition or guard fails.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A basis label |n, k> = |n>_cavity (x) |k>_mechanics.
struct FockState {
  int photons = 0;
  int phonons = 0;

  friend bool operator==(const FockState&, const FockState&) = default;
};

inline std::string to_string(const FockState& s) {
  return "|" + std::to_string(s.photons) + "," + std::to_string(s.phonons) + ">";
}

class FockSpace {
 public:
  FockSpace(int n_cav, int n_mech) : n_cav_(n_cav), n_mech_(n_mech) {
    if (n_cav < 1 || n_mech < 1) {
      throw std::invalid_argument("FockSpace: cutoffs must be >= 1 (got n_cav=" +
                                  std::to_string(n_cav) + ", n_mech=" + std::to_string(n_mech) +
                                  ")");
    }
  }

  int n_cav() const { return n_cav_; }
  int n_mech() const { return n_mech_; }
  Index dim() const { return Index(n_cav_) * n_mech_; }

  bool contains(const FockState& s) const {
    return s.photons >= 0 && s.photons < n_cav_ && s.phonons >= 0 && s.phonons < n_mech_;
  }

  Index index(const FockState& s) const {
    if (!contains(s)) {
      throw std::out_of_range("FockSpace: state " + to_string(s) + " outside cutoffs (" +
                              std::to_string(n_cav_) + ", " + std::to_string(n_mech_) + ")");
    }
    return Index(s.photons) * n_mech_ + s.phonons;
  }

  FockState state(Index i) const {
    return {static_cast<int>(i / n_mech_), static_cast<int>(i % n_mech_)};
  }

  friend bool operator==(const FockSpace&, const FockSpace&) = default;

 private:
  int n_cav_;
  int n_mech_;
};

inline void require_same_space(const FockSpace& a, const FockSpace& b, const char* where) {
  if (!(a == b)) throw std::invalid_argument(std::string(where) + ": Fock spaces differ");
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Dense complex operator on a FockSpace.
class OperatorMatrix {
 public:
  OperatorMatrix(FockSpace space, Matrix entries) : space_(space), m_(std::move(entries)) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
      throw std::invalid_argument("OperatorMatrix: entries are " + std::to_string(m_.rows()) + "x" +
                                  std::to_string(m_.cols()) + ", space dimension is " +
                                  std::to_string(space_.dim()));
    }
  }

  static OperatorMatrix zero(const FockSpace& s) {
    return {s, Matrix::Zero(s.dim(), s.dim())};
  }
  static OperatorMatrix identity(const FockSpace& s) {
    return {s, Matrix::Identity(s.dim(), s.dim())};
  }

  const FockSpace& space() const { return space_; }
  const Matrix& matrix() const { return m_; }
  Index dim() const { return space_.dim(); }

  /// <bra| M |ket>
  complex element(const FockState& bra, const FockState& ket) const {
    return m_(space_.index(bra), space_.index(ket));
  }

  OperatorMatrix adjoint() const { return {space_, m_.adjoint()}; }

  double hermiticity_defect() const { return max_abs(m_ - m_.adjoint()); }

  bool is_hermitian(double rel_tol = 1e-12) const {
    const double scale = max_abs(m_);
    return hermiticity_defect() <= rel_tol * (scale > 0 ? scale : 1.0);
  }

  OperatorMatrix& operator+=(const OperatorMatrix& o) {
    require_same_space(space_, o.space_, "operator+");
    m_ += o.m_;
    return *this;
  }
  OperatorMatrix& operator-=(const OperatorMatrix& o) {
    require_same_space(space_, o.space_, "operator-");
    m_ -= o.m_;
    return *this;
  }
  OperatorMatrix& operator*=(complex s) {
    m_ *= s;
    return *this;
  }

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator*(complex s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(OperatorMatrix a, complex s) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    require_same_space(a.space_, b.space_, "operator*");
    return {a.space_, a.m_ * b.m_};
  }

 private:
  FockSpace space_;
  Matrix m_;
};

inline OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

/// Ket on a FockSpace. Not necessarily normalized.
class StateVector {
 public:
  StateVector(FockSpace space, Vector amplitudes) : space_(space), v_(std::move(amplitudes)) {
    if (v_.size() != space_.dim()) {
      throw std::invalid_argument("StateVector: " + std::to_string(v_.size()) +
                                  " amplitudes for a space of dimension " +
                                  std::to_string(space_.dim()));
    }
  }

  static StateVector basis(const FockSpace& s, const FockState& label) {
    Vector v = Vector::Zero(s.dim());
    v(s.index(label)) = 1.0;
    return {s, std::move(v)};
  }

  const FockSpace& space() const { return space_; }
  const Vector& amplitudes() const { return v_; }
  Vector& amplitudes() { return v_; }

  double norm_squared() const { return v_.squaredNorm(); }
  bool is_normalized(double tol = 1e-10) const { return std::abs(norm_squared() - 1.0) <= tol; }

  StateVector normalized() const {
    const double n = v_.norm();
    if (!(n > 0)) throw numerical_error("StateVector: cannot normalize a zero vector");
    return {space_, v_ / n};
  }

  /// <this|other>
  complex inner(const StateVector& other) const {
    require_same_space(space_, other.space_, "inner");
    return v_.dot(other.v_);
  }

  double probability(const FockState& label) const { return std::norm(v_(space_.index(label))); }

  friend StateVector operator*(const OperatorMatrix& op, const StateVector& s) {
    require_same_space(op.space(), s.space_, "apply");
    return {s.space_, op.matrix() * s.v_};
  }

 private:
  FockSpace space_;
  Vector v_;
};

/// Single-mode ladder a|n> = sqrt(n)|n-1> truncated to `levels` states.
inline Matrix single_mode_annihilation(int levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// a (x) I_mech
inline OperatorMatrix annihilation_cavity(const FockSpace& s) {
  return {s, kron(single_mode_annihilation(s.n_cav()), Matrix::Identity(s.n_mech(), s.n_mech()))};
}

/// I_cav (x) b
inline OperatorMatrix annihilation_mech(const FockSpace& s) {
  return {s, kron(Matrix::Identity(s.n_cav(), s.n_cav()), single_mode_annihilation(s.n_mech()))};
}

inline OperatorMatrix number_cavity(const FockSpace& s) {
  Matrix m = Matrix::Zero(s.dim(), s.dim());
  for (Index i = 0; i < s.dim(); ++i) m(i, i) = s.state(i).photons;
  return {s, std::move(m)};
}

inline OperatorMatrix number_mech(const FockSpace& s) {
  Matrix m = Matrix::Zero(s.dim(), s.dim());
  for (Index i = 0; i < s.dim(); ++i) m(i, i) = s.state(i).phonons;
  return {s, std::move(m)};
}

/// Occupation numbers per basis index, for cheap diagonal expectations.
inline Eigen::VectorXd photon_numbers(const FockSpace& s) {
  Eigen::VectorXd n(s.dim());
  for (Index i = 0; i < s.dim(); ++i) n(i) = s.state(i).photons;
  return n;
}

inline Eigen::VectorXd phonon_numbers(const FockSpace& s) {
  Eigen::VectorXd n(s.dim());
  for (Index i = 0; i < s.dim(); ++i) n(i) = s.state(i).phonons;
  return n;
}

/// <n> of the normalized state for a number-diagonal observable.
inline double diagonal_expectation(const Vector& psi, const Eigen::VectorXd& diag) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0)) throw numerical_error("expectation of a zero vector");
  return psi.cwiseAbs2().dot(diag) / norm2;
}

inline double photon_expectation(const StateVector& s) {
  return diagonal_expectation(s.amplitudes(), photon_numbers(s.space()));
}

inline double phonon_expectation(const StateVector& s) {
  return diagonal_expectation(s.amplitudes(), phonon_numbers(s.space()));
}

/// Occupation of the highest retained photon and phonon levels.
struct Leakage {
  double top_photon = 0.0;
  double top_phonon = 0.0;

  double worst() const { return std::max(top_photon, top_phonon); }
  void absorb(const Leakage& o) {
    top_photon = std::max(top_photon, o.top_photon);
    top_phonon = std::max(top_phonon, o.top_phonon);
  }
};

inline constexpr double kLeakageWarnThreshold = 1e-6;

inline Leakage leakage(const FockSpace& s, const Vector& psi) {
  const double norm2 = psi.squaredNorm();
  Leakage out;
  if (!(norm2 > 0)) return out;
  for (Index i = 0; i < s.dim(); ++i) {
    const FockState st = s.state(i);
    const double p = std::norm(psi(i)) / norm2;
    if (st.photons == s.n_cav() - 1) out.top_photon += p;
    if (st.phonons == s.n_mech() - 1) out.top_phonon += p;
  }
  return out;
}

inline Leakage leakage(const StateVector& s) { return leakage(s.space(), s.amplitudes()); }

/// The most probable basis label, e.g. "|1,0>".
inline std::string dominant_label(const StateVector& s) {
  Index best = 0;
  s.amplitudes().cwiseAbs2().maxCoeff(&best);
  return to_string(s.space().state(best));
}

}  // namespace dce
