#pragma once

// Closed-system experiments (fidelity between exact and effective evolution,
// two-level predictions) and a dense Lindblad integrator used as the
// ensemble-average oracle for the trajectory engine.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dce/linalg.hpp"
#include "dce/model.hpp"

namespace dce {

struct FidelityTrace {
  ModelParams params;
  std::vector<double> times;
  std::vector<double> fidelity;
  Leakage leakage;

  double min_fidelity() const { return *std::min_element(fidelity.begin(), fidelity.end()); }
};

/// F(t_j) = |<phi(t_j)|psi(t_j)>|^2 with phi evolved under `h_ref` and psi
/// under `h_approx`; both exactly, through cached eigendecompositions.
inline FidelityTrace fidelity_trace(const OperatorMatrix& h_ref, const OperatorMatrix& h_approx,
                                    const StateVector& psi0, const std::vector<double>& times) {
  if (!psi0.is_normalized()) throw std::invalid_argument("fidelity_trace: initial state not normalized");
  const ClosedPropagator ref(h_ref);
  const ClosedPropagator approx(h_approx);
  const Vector c_ref = ref.coefficients(psi0);
  const Vector c_approx = approx.coefficients(psi0);

  FidelityTrace out;
  out.times = times;
  out.fidelity.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      out.fidelity.push_back(1.0);
      out.leakage.absorb(leakage(psi0));
      continue;
    }
    const StateVector phi = ref.evolve_coefficients(c_ref, t);
    const StateVector psi = approx.evolve_coefficients(c_approx, t);
    out.fidelity.push_back(std::norm(phi.inner(psi)));
    out.leakage.absorb(leakage(phi));
    out.leakage.absorb(leakage(psi));
  }
  return out;
}

inline FidelityTrace fidelity_trace(const ModelParams& p, const FockSpace& space,
                                    const StateVector& psi0, double t_final, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("fidelity_trace: n_samples must be >= 2");
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) times[static_cast<std::size_t>(i)] = t_final * i / (n_samples - 1);
  FidelityTrace out = fidelity_trace(build_exact(p, space), build_effective(p, space), psi0, times);
  out.params = p;
  return out;
}

struct TwoLevelExpectations {
  double photons = 0.0;
  double phonons = 0.0;
};

/// Normalized no-jump populations of the resonant two-level model started in
/// |0,3>: <a^dag a> = 2 sin^2(Omega_eff t), <b^dag b> = 3 cos^2(Omega_eff t).
inline TwoLevelExpectations two_level_expectations(const ModelParams& p, double t) {
  const double phase = effective_rabi(p) * t;
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  return {2.0 * s * s, 3.0 * c * c};
}

class DensityMatrix {
 public:
  DensityMatrix(FockSpace space, Matrix rho) : space_(space), rho_(std::move(rho)) {
    if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
      throw std::invalid_argument("DensityMatrix: dimension does not match space");
    }
    if (max_abs(rho_ - rho_.adjoint()) > 1e-10) throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(trace() - 1.0) > 1e-8) throw std::invalid_argument("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) throw std::invalid_argument("DensityMatrix: not positive");
  }

  static DensityMatrix pure(const StateVector& psi) {
    const StateVector n = psi.normalized();
    return {n.space(), n.amplitudes() * n.amplitudes().adjoint()};
  }

  const FockSpace& space() const { return space_; }
  const Matrix& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }

 private:
  FockSpace space_;
  Matrix rho_;
};

struct JumpChannelSpec {
  OperatorMatrix op;
  double rate;
};

struct LindbladTrace {
  std::vector<double> times;
  std::vector<double> photons;
  std::vector<double> phonons;
  std::vector<double> trace;
  Matrix final_rho;
  double max_trace_drift = 0.0;
};

inline constexpr double kLindbladTraceTolerance = 1e-7;

/// Fixed-step RK4 for d rho/dt = -i[H, rho] + sum_m gamma_m D[C_m] rho,
/// written as -i(K rho - rho K^dag) + sum_m gamma_m C_m rho C_m^dag with
/// K = H - (i/2) sum_m gamma_m C_m^dag C_m. Records every `record_every`
/// steps. Trace drift or purity growth (the signature of an unstable step)
/// raises an error that suggests a larger step count.
inline LindbladTrace lindblad_evolve(const OperatorMatrix& h, const std::vector<JumpChannelSpec>& channels,
                                     const DensityMatrix& rho0, double t_final, int n_steps,
                                     int record_every = 1) {
  if (n_steps < 1) throw std::invalid_argument("lindblad_evolve: n_steps must be >= 1");
  if (record_every < 1) throw std::invalid_argument("lindblad_evolve: record_every must be >= 1");
  const FockSpace& space = rho0.space();
  require_same_space(space, h.space(), "lindblad_evolve");

  Matrix k = h.matrix();
  for (const auto& c : channels) k += complex(0.0, -0.5 * c.rate) * (c.op.adjoint() * c.op).matrix();
  const Matrix kd = k.adjoint();

  auto rhs = [&](const Matrix& rho) {
    Matrix out = complex(0.0, -1.0) * (k * rho - rho * kd);
    for (const auto& c : channels) out.noalias() += c.rate * (c.op.matrix() * rho * c.op.matrix().adjoint());
    return out;
  };

  const Eigen::VectorXd na = photon_numbers(space);
  const Eigen::VectorXd nb = phonon_numbers(space);
  LindbladTrace out;
  auto record = [&](double t, const Matrix& rho) {
    const Eigen::VectorXd diag = rho.diagonal().real();
    const double tr = diag.sum();
    out.times.push_back(t);
    out.photons.push_back(diag.dot(na) / tr);
    out.phonons.push_back(diag.dot(nb) / tr);
    out.trace.push_back(tr);
  };

  const double dt = t_final / n_steps;
  Matrix rho = rho0.matrix();
  record(0.0, rho);
  for (int step = 1; step <= n_steps; ++step) {
    const Matrix k1 = rhs(rho);
    const Matrix k2 = rhs(rho + 0.5 * dt * k1);
    const Matrix k3 = rhs(rho + 0.5 * dt * k2);
    const Matrix k4 = rhs(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double tr = rho.trace().real();
    const double purity = rho.squaredNorm();
    out.max_trace_drift = std::max(out.max_trace_drift, std::abs(tr - 1.0));
    if (!std::isfinite(purity) || out.max_trace_drift > kLindbladTraceTolerance || purity > 1.0 + 1e-6) {
      std::ostringstream os;
      os << "lindblad_evolve: integration unstable at step " << step << " (trace drift "
         << out.max_trace_drift << ", purity " << purity << "); try n_steps >= " << 4 * n_steps;
      throw numerical_error(os.str());
    }
    if (step % record_every == 0 || step == n_steps) record(step * dt, rho);
  }
  out.final_rho = rho;
  return out;
}

/// Model wrapper: photon and phonon loss with the Hamiltonian of `frame`.
/// Used on the effective-rotating frame or on uncoupled (g = 0) problems;
/// the exact frame at Casimir-Rabi time scales needs ~1e10 steps.
inline LindbladTrace lindblad_evolve(const ModelParams& p, const FockSpace& space,
                                     const DensityMatrix& rho0, double t_final, int n_steps,
                                     Frame frame = Frame::exact, int record_every = 1) {
  const std::vector<JumpChannelSpec> channels{{annihilation_cavity(space), p.gamma_a},
                                              {annihilation_mech(space), p.gamma_b}};
  return lindblad_evolve(frame_hamiltonian(p, space, frame), channels, rho0, t_final, n_steps,
                         record_every);
}

}  // namespace dce
