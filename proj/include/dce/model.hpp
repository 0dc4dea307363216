#pragma once

// Hamiltonians of the optomechanical cavity: the exact two-mode Hamiltonian,
// the third-order effective Hamiltonian, their non-Hermitian (no-jump)
// counterparts, and the closed-form resonance helpers. All frequencies and
// rates are in units of the mechanical frequency (omega_m = 1).

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "dce/fock.hpp"

namespace dce {

/// Above this g/omega_m the effective Hamiltonian is not trusted.
inline constexpr double kWeakCouplingLimit = 0.01;

struct ModelParams {
  static constexpr double omega_m = 1.0;

  double omega_c = 1.5;
  double g = 1e-3;
  double gamma_a = 0.0;
  double gamma_b = 0.0;

  double detuning() const { return omega_c - omega_m; }
  bool weak_coupling() const { return g <= kWeakCouplingLimit * omega_m; }

  /// g = 0 is accepted: it is the uncoupled (free dissipation) control.
  void validate() const {
    std::ostringstream os;
    if (!(omega_c > 0)) os << "omega_c must be > 0 (got " << omega_c << "); ";
    if (!(g >= 0)) os << "g must be >= 0 (got " << g << "); ";
    if (!(gamma_a >= 0)) os << "gamma_a must be >= 0 (got " << gamma_a << "); ";
    if (!(gamma_b >= 0)) os << "gamma_b must be >= 0 (got " << gamma_b << "); ";
    if (!os.str().empty()) throw std::invalid_argument("ModelParams: " + os.str());
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline void require_weak_coupling(const ModelParams& p, const char* where) {
  if (!p.weak_coupling()) {
    std::ostringstream os;
    os << where << ": effective model requires g/omega_m <= " << kWeakCouplingLimit << " (got g = "
       << p.g << ")";
    throw std::domain_error(os.str());
  }
}

/// Omega_eff / omega_m = 18 sqrt(3) (g / omega_m)^3
inline double effective_rabi(const ModelParams& p) {
  require_weak_coupling(p, "effective_rabi");
  const double x = p.g / ModelParams::omega_m;
  return 18.0 * std::numbers::sqrt3 * x * x * x * ModelParams::omega_m;
}

/// omega_c / omega_m = 3/2 + 21 g^2 / (2 omega_m^2)
inline double resonant_omega_c(double g) {
  const double x = g / ModelParams::omega_m;
  return (1.5 + 10.5 * x * x) * ModelParams::omega_m;
}

inline double resonant_omega_c(const ModelParams& p) {
  require_weak_coupling(p, "resonant_omega_c");
  return resonant_omega_c(p.g);
}

/// Effective Hamiltonian restricted to {|0,3>, |2,0>} (in that order).
inline Eigen::Matrix2d two_level_matrix(const ModelParams& p) {
  require_weak_coupling(p, "two_level_matrix");
  const double wm = ModelParams::omega_m;
  const double g2 = p.g * p.g / wm;
  const double coupling = effective_rabi(p);
  Eigen::Matrix2d m;
  m << 3.0 * wm - 6.0 * g2, coupling, coupling, 2.0 * p.omega_c - 27.0 * g2;
  return m;
}

/// H_s = omega_c a^dag a + omega_m b^dag b + g (a^dag + a)^2 (b^dag + b)
inline OperatorMatrix build_exact(const ModelParams& p, const FockSpace& space) {
  p.validate();
  const OperatorMatrix a = annihilation_cavity(space);
  const OperatorMatrix b = annihilation_mech(space);
  const OperatorMatrix x = a + a.adjoint();
  const OperatorMatrix y = b + b.adjoint();
  OperatorMatrix h = p.omega_c * number_cavity(space) + ModelParams::omega_m * number_mech(space) +
                     p.g * (x * x * y);
  if (!h.is_hermitian()) throw numerical_error("build_exact: result is not Hermitian");
  return h;
}

/// Second- plus third-order effective Hamiltonian.
inline OperatorMatrix build_effective(const ModelParams& p, const FockSpace& space) {
  p.validate();
  require_weak_coupling(p, "build_effective");
  const double wm = ModelParams::omega_m;
  const OperatorMatrix a = annihilation_cavity(space);
  const OperatorMatrix b = annihilation_mech(space);
  const OperatorMatrix ad = a.adjoint();
  const OperatorMatrix bd = b.adjoint();
  const OperatorMatrix na = number_cavity(space);
  const OperatorMatrix nb = number_mech(space);
  const OperatorMatrix id = OperatorMatrix::identity(space);

  const OperatorMatrix second =
      (p.g * p.g / (4.0 * wm)) *
      (ad * ad * a * a - 2.0 * ((2.0 * na + id) * (3.0 * nb + 4.0 * na + 3.0 * id)));
  const OperatorMatrix third =
      (9.0 * p.g * p.g * p.g / (wm * wm)) * (ad * ad * b * b * b + a * a * bd * bd * bd);

  OperatorMatrix h = p.omega_c * na + wm * nb + second + third;
  if (!h.is_hermitian()) throw numerical_error("build_effective: result is not Hermitian");
  return h;
}

/// -(i/2)(gamma_a a^dag a + gamma_b b^dag b)
inline OperatorMatrix decay_term(const ModelParams& p, const FockSpace& space) {
  return complex(0.0, -0.5) * (p.gamma_a * number_cavity(space) + p.gamma_b * number_mech(space));
}

/// H - i(gamma_a a^dag a + gamma_b b^dag b)/2 with H the exact or effective
/// Hamiltonian.
inline OperatorMatrix build_nonhermitian(const ModelParams& p, const FockSpace& space,
                                         bool use_effective) {
  const OperatorMatrix h = use_effective ? build_effective(p, space) : build_exact(p, space);
  return h + decay_term(p, space);
}

/// The interaction-picture terms h1 = g a^dag^2 b, h2 = g a^dag^2 b^dag,
/// h3 = g (2 a^dag a + 1) b^dag; the coupling of H_s is sum_k (h_k + h_k^dag)
/// away from the photon cutoff.
inline std::array<OperatorMatrix, 3> interaction_terms(const ModelParams& p, const FockSpace& space) {
  const OperatorMatrix a = annihilation_cavity(space);
  const OperatorMatrix b = annihilation_mech(space);
  const OperatorMatrix ad = a.adjoint();
  const OperatorMatrix bd = b.adjoint();
  const OperatorMatrix id = OperatorMatrix::identity(space);
  return {p.g * (ad * ad * b), p.g * (ad * ad * bd),
          p.g * ((2.0 * number_cavity(space) + id) * bd)};
}

/// Which Hamiltonian a propagation engine runs.
///  - exact: H_s in the laboratory frame.
///  - effective_rotating: H_eff - (omega_m/2)(3 a^dag a + 2 b^dag b). The
///    removed generator commutes with H_eff and with both number operators,
///    so populations and jump statistics are frame independent while the
///    remaining Hamiltonian only carries the slow scales (2nd-order shifts,
///    Omega_eff, detuning from 2 omega_c = 3 omega_m).
enum class Frame { exact, effective_rotating };

inline const char* to_string(Frame f) {
  return f == Frame::exact ? "exact" : "effective-rotating";
}

inline Frame frame_from_string(const std::string& s) {
  if (s == "exact") return Frame::exact;
  if (s == "effective-rotating" || s == "effective_rotating" || s == "rotating") {
    return Frame::effective_rotating;
  }
  throw std::invalid_argument("unknown frame '" + s + "' (expected exact | effective-rotating)");
}

inline OperatorMatrix rotating_frame_generator(const FockSpace& space) {
  return (0.5 * ModelParams::omega_m) * (3.0 * number_cavity(space) + 2.0 * number_mech(space));
}

/// Hermitian generator of the chosen frame.
inline OperatorMatrix frame_hamiltonian(const ModelParams& p, const FockSpace& space, Frame frame) {
  if (frame == Frame::exact) return build_exact(p, space);
  return build_effective(p, space) - rotating_frame_generator(space);
}

/// No-jump generator of the chosen frame.
inline OperatorMatrix frame_nonhermitian(const ModelParams& p, const FockSpace& space, Frame frame) {
  return frame_hamiltonian(p, space, frame) + decay_term(p, space);
}

}  // namespace dce
