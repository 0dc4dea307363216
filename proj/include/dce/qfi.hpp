#pragma once

// Quantum Fisher information of the closed-evolution state
// phi(omega_c) = exp(-i H_s(omega_c) t_f) psi0 with respect to omega_c.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dce/linalg.hpp"
#include "dce/model.hpp"
#include "dce/parallel.hpp"
#include "dce/spectra.hpp"

namespace dce {

inline constexpr double kDefaultQfiDelta = 1e-12;
inline constexpr double kRichardsonTolerance = 0.05;

/// 4 (<d|d> - |<phi|d>|^2) for normalized phi.
inline double qfi_from_states(const Vector& phi, const Vector& dphi) {
  return 4.0 * (dphi.squaredNorm() - std::norm(phi.dot(dphi)));
}

namespace detail {

inline StateVector evolved_at(const ModelParams& p, double omega_c, const FockSpace& space,
                              const StateVector& psi0, double t_f) {
  ModelParams q = p;
  q.omega_c = omega_c;
  return evolve_closed(build_exact(q, space), psi0, t_f);
}

// Central difference over the representable step (omega_c + delta) - (omega_c - delta).
inline double qfi_central(const ModelParams& p, const FockSpace& space, const StateVector& psi0, double t_f,
                          double delta) {
  const double up = p.omega_c + delta;
  const double down = p.omega_c - delta;
  const Vector plus = evolved_at(p, up, space, psi0, t_f).amplitudes();
  const Vector minus = evolved_at(p, down, space, psi0, t_f).amplitudes();
  const Vector centre = evolved_at(p, p.omega_c, space, psi0, t_f).amplitudes();
  return qfi_from_states(centre, (plus - minus) / (up - down));
}

}  // namespace detail

struct QfiPoint {
  double omega_c = 0.0;
  double value = 0.0;       // with step delta
  double value_half = 0.0;  // with step delta / 2
  double delta = 0.0;
};

/// Finite-difference QFI with a Richardson consistency check: the values at
/// delta and delta/2 must agree to 5% (plus an absolute floor of 1e-5 of the
/// 4 t_f^2 scale, below which both are noise).
inline QfiPoint qfi_at(const ModelParams& p, const FockSpace& space, const StateVector& psi0, double t_f,
                       double delta = kDefaultQfiDelta) {
  if (!psi0.is_normalized()) throw std::invalid_argument("qfi_at: initial state not normalized");
  if (!(delta > 0)) throw std::invalid_argument("qfi_at: delta must be > 0");
  if (!(t_f >= 0)) throw std::invalid_argument("qfi_at: t_f must be >= 0");
  QfiPoint q{p.omega_c, detail::qfi_central(p, space, psi0, t_f, delta),
             detail::qfi_central(p, space, psi0, t_f, 0.5 * delta), delta};
  const double floor = 1e-5 * 4.0 * t_f * t_f;
  const double diff = std::abs(q.value - q.value_half);
  if (diff > kRichardsonTolerance * std::max(std::abs(q.value), std::abs(q.value_half)) + floor) {
    std::ostringstream os;
    os << "qfi_at: step delta ill-conditioned at omega_c = " << p.omega_c << " (F(delta) = " << q.value
       << ", F(delta/2) = " << q.value_half << ", delta = " << delta << ")";
    throw numerical_error(os.str());
  }
  return q;
}

/// Exact derivative d phi / d omega_c = -i int_0^t e^{-iH(t-s)} a^dag a e^{-iHs} psi0 ds,
/// summed in closed form over eigenpairs of H_s.
inline double qfi_exact(const ModelParams& p, const FockSpace& space, const StateVector& psi0, double t_f) {
  if (!psi0.is_normalized()) throw std::invalid_argument("qfi_exact: initial state not normalized");
  const ClosedPropagator prop(build_exact(p, space));
  const EigenDecomposition& eig = prop.eigen();
  const Vector c = prop.coefficients(psi0);
  const Matrix n = eig.vectors.adjoint() * number_cavity(space).matrix() * eig.vectors;
  const Index dim = space.dim();
  Vector d = Vector::Zero(dim);  // eigenbasis coefficients of d phi
  for (Index j = 0; j < dim; ++j) {
    complex sum = 0.0;
    for (Index k = 0; k < dim; ++k) {
      const double x = eig.values(k) - eig.values(j);
      const double half = 0.5 * x * t_f;
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      sum += n(j, k) * c(k) * std::polar(t_f * sinc, -half);
    }
    d(j) = complex(0.0, -1.0) * std::polar(1.0, -eig.values(j) * t_f) * sum;
  }
  Vector phi(dim);
  for (Index j = 0; j < dim; ++j) phi(j) = c(j) * std::polar(1.0, -eig.values(j) * t_f);
  return qfi_from_states(phi, d);
}

struct QfiScan {
  ModelParams params;
  double t_f = 0.0;
  double delta = 0.0;
  std::vector<QfiPoint> points;
  std::size_t peak_index = 0;
  double peak_omega_c = 0.0;  // parabola-refined argmax
  double peak_value = 0.0;

  double max_value() const {
    double m = 0.0;
    for (const auto& q : points) m = std::max(m, q.value);
    return m;
  }
};

inline QfiScan qfi_scan(const ModelParams& p_base, const FockSpace& space, const StateVector& psi0,
                        double omega_lo, double omega_hi, int n_samples, double t_f,
                        double delta = kDefaultQfiDelta, int workers = 1) {
  if (n_samples < 3) throw std::invalid_argument("qfi_scan: n_samples must be >= 3");
  if (!(omega_lo < omega_hi)) throw std::invalid_argument("qfi_scan: empty omega_c range");
  const std::vector<double> omegas = detail::linspace(omega_lo, omega_hi, n_samples);
  QfiScan s{p_base, t_f, delta, std::vector<QfiPoint>(omegas.size()), 0, 0.0, 0.0};
  parallel_for(omegas.size(), workers, [&](std::size_t i) {
    ModelParams p = p_base;
    p.omega_c = omegas[i];
    s.points[i] = qfi_at(p, space, psi0, t_f, delta);
  });
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].value > s.points[s.peak_index].value) s.peak_index = i;
  const std::size_t k = s.peak_index;
  s.peak_omega_c = s.points[k].omega_c;
  s.peak_value = s.points[k].value;
  if (k > 0 && k + 1 < s.points.size()) {
    const double h = s.points[k + 1].omega_c - s.points[k].omega_c;
    const auto [x, y] = parabola_vertex(s.points[k].omega_c, h, -s.points[k - 1].value, -s.points[k].value,
                                        -s.points[k + 1].value);
    s.peak_omega_c = x;
    s.peak_value = -y;
  }
  return s;
}

}  // namespace dce
