#pragma once

// Monte Carlo wave-function (quantum jump) engine.
//
// Production unraveling is the waiting-time form: draw r1, propagate the
// unnormalized state with a cached exp(-i K dt) until |psi|^2 drops below r1,
// locate the crossing by bisection on exp(-i K dt / 2^j), pick the channel m
// with probability gamma_m <C_m^dag C_m> / sum, apply C_m, renormalize and
// redraw. The per-step form (jump with probability dp = dt sum_m gamma_m
// <C_m^dag C_m> in each step) is kept for cross-validation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dce/linalg.hpp"
#include "dce/model.hpp"
#include "dce/parallel.hpp"
#include "dce/random.hpp"

namespace dce {

enum class Channel { cavity, mechanical };

inline const char* to_string(Channel c) { return c == Channel::cavity ? "cavity" : "mechanical"; }

inline Channel channel_from_string(const std::string& s) {
  if (s == "cavity") return Channel::cavity;
  if (s == "mechanical") return Channel::mechanical;
  throw std::invalid_argument("unknown jump channel '" + s + "'");
}

enum class Unraveling { waiting_time, per_step };

inline const char* to_string(Unraveling u) {
  return u == Unraveling::waiting_time ? "waiting-time" : "per-step";
}

inline Unraveling unraveling_from_string(const std::string& s) {
  if (s == "waiting-time" || s == "waiting_time") return Unraveling::waiting_time;
  if (s == "per-step" || s == "per_step") return Unraveling::per_step;
  throw std::invalid_argument("unknown unraveling '" + s + "' (expected waiting-time | per-step)");
}

struct JumpEvent {
  double time = 0.0;
  Channel channel = Channel::cavity;
  double photons_before = 0.0;  // <a^dag a> of the normalized pre-jump state
  double phonons_before = 0.0;  // <b^dag b> of the normalized pre-jump state
};

struct ExpectationSample {
  double time = 0.0;
  double photons = 0.0;
  double phonons = 0.0;
};

struct TrajectoryRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  ModelParams params;
  Frame frame = Frame::effective_rotating;
  Unraveling unraveling = Unraveling::waiting_time;
  std::string rng = kRngAlgorithm;
  double dt = 0.0;
  double t_final = 0.0;
  std::vector<ExpectationSample> samples;
  std::vector<JumpEvent> jumps;
  std::string final_state;
  Leakage leakage;

  std::size_t count(Channel c) const {
    std::size_t n = 0;
    for (const auto& j : jumps) n += j.channel == c;
    return n;
  }

  std::vector<double> jump_times(Channel c) const {
    std::vector<double> t;
    for (const auto& j : jumps)
      if (j.channel == c) t.push_back(j.time);
    return t;
  }
};

/// Largest admissible per-step jump probability.
inline constexpr double kMaxStepJumpProbability = 0.1;

/// Rotating-frame default: 2000 steps per Casimir-Rabi period 2 pi / Omega_eff.
inline double default_rotating_dt(const ModelParams& p) {
  return 2.0 * std::numbers::pi / effective_rabi(p) / 2000.0;
}

struct McwfOptions {
  double dt = 0.0;
  int sample_every = 1;
  Unraveling unraveling = Unraveling::waiting_time;
  int bisection_levels = 20;  // jump time resolved to dt / 2^20 < 1e-6 dt
};

class McwfEngine {
 public:
  McwfEngine(const ModelParams& p, const FockSpace& space, Frame frame, McwfOptions options)
      : params_(p), space_(space), frame_(frame), options_(options) {
    p.validate();
    if (!(options_.dt > 0)) throw std::invalid_argument("McwfEngine: dt must be > 0");
    if (options_.sample_every < 1) throw std::invalid_argument("McwfEngine: sample_every must be >= 1");
    if (options_.bisection_levels < 1 || options_.bisection_levels > 40) {
      throw std::invalid_argument("McwfEngine: bisection_levels must be in [1, 40]");
    }
    const OperatorMatrix k = frame_nonhermitian(p, space, frame);
    ladder_.reserve(static_cast<std::size_t>(options_.bisection_levels) + 1);
    for (int j = 0; j <= options_.bisection_levels; ++j) {
      ladder_.push_back(fixed_step_propagator(k, std::ldexp(options_.dt, -j)).matrix());
    }
    a_ = annihilation_cavity(space).matrix();
    b_ = annihilation_mech(space).matrix();
    na_ = photon_numbers(space);
    nb_ = phonon_numbers(space);
  }

  const ModelParams& params() const { return params_; }
  const FockSpace& space() const { return space_; }
  Frame frame() const { return frame_; }
  const McwfOptions& options() const { return options_; }
  const Matrix& step_propagator() const { return ladder_.front(); }

  std::int64_t steps_for(double t_final) const {
    return static_cast<std::int64_t>(std::ceil(t_final / options_.dt - 1e-9));
  }

  TrajectoryRecord run(const StateVector& psi0, double t_final, std::uint64_t seed,
                       std::uint64_t index = 0) const {
    require_same_space(space_, psi0.space(), "McwfEngine::run");
    if (!psi0.is_normalized()) throw std::invalid_argument("McwfEngine::run: initial state not normalized");
    if (!(t_final > 0)) throw std::invalid_argument("McwfEngine::run: t_final must be > 0");

    Run r{*this, psi0.amplitudes(), RandomStream(seed), {}};
    r.record.index = index;
    r.record.seed = seed;
    r.record.params = params_;
    r.record.frame = frame_;
    r.record.unraveling = options_.unraveling;
    r.record.dt = options_.dt;
    r.record.t_final = t_final;
    if (options_.unraveling == Unraveling::waiting_time) {
      r.waiting_time(steps_for(t_final));
    } else {
      r.per_step(steps_for(t_final));
    }
    r.record.final_state = dominant_label(StateVector(space_, r.psi));
    return std::move(r.record);
  }

  /// Normalized expectations of the conditional no-jump evolution on the
  /// step grid (t = 0, dt, ..., n_steps dt).
  std::vector<ExpectationSample> no_jump_expectations(const StateVector& psi0, std::int64_t n_steps) const {
    Vector psi = psi0.amplitudes();
    std::vector<ExpectationSample> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (std::int64_t s = 0;; ++s) {
      out.push_back({static_cast<double>(s) * options_.dt, diagonal_expectation(psi, na_),
                     diagonal_expectation(psi, nb_)});
      if (s == n_steps) break;
      psi = ladder_.front() * psi;
      psi /= psi.norm();
    }
    return out;
  }

  /// sum_m gamma_m <C_m^dag C_m> of the normalized state.
  double jump_rate(const Vector& psi) const {
    return params_.gamma_a * diagonal_expectation(psi, na_) +
           params_.gamma_b * diagonal_expectation(psi, nb_);
  }

 private:
  struct Run {
    const McwfEngine& engine;
    Vector psi;
    RandomStream rng;
    TrajectoryRecord record;
    double r1 = 0.0;

    void sample(double t) {
      record.samples.push_back(
          {t, diagonal_expectation(psi, engine.na_), diagonal_expectation(psi, engine.nb_)});
      record.leakage.absorb(leakage(engine.space_, psi));
    }

    void check_step(double t) const {
      const double dp = engine.options_.dt * engine.jump_rate(psi);
      if (dp > kMaxStepJumpProbability) {
        std::ostringstream os;
        os << "mcwf: dt too large (jump probability per step " << dp << " > "
           << kMaxStepJumpProbability << " at t = " << t << ")";
        throw numerical_error(os.str());
      }
    }

    // The state is stationary and cannot jump: nothing changes until t_final.
    bool frozen() const {
      if (engine.jump_rate(psi) != 0.0) return false;
      const Vector next = engine.ladder_.front() * psi;
      const complex overlap = psi.dot(next) / psi.squaredNorm();
      return (next - overlap * psi).norm() <= 1e-13 * psi.norm();
    }

    void jump(double t) {
      const double wa = engine.params_.gamma_a * diagonal_expectation(psi, engine.na_);
      const double wb = engine.params_.gamma_b * diagonal_expectation(psi, engine.nb_);
      const double total = wa + wb;
      if (!(total > 0)) throw numerical_error("mcwf: norm decayed in a state with zero jump rate");
      const double r2 = rng.uniform();
      const Channel ch = r2 * total < wa ? Channel::cavity : Channel::mechanical;
      if (!record.jumps.empty() && t <= record.jumps.back().time) {
        t = std::nextafter(record.jumps.back().time, INFINITY);
      }
      record.jumps.push_back({t, ch, diagonal_expectation(psi, engine.na_),
                              diagonal_expectation(psi, engine.nb_)});
      psi = (ch == Channel::cavity ? engine.a_ : engine.b_) * psi;
      psi /= psi.norm();
      r1 = rng.uniform();
    }

    // Advances psi by dt / 2^level starting at t0, splitting the interval
    // whenever |psi|^2 would cross r1 inside it.
    void advance(int level, double t0) {
      const int deepest = engine.options_.bisection_levels;
      for (;;) {
        Vector trial = engine.ladder_[static_cast<std::size_t>(level)] * psi;
        const double before = psi.squaredNorm();
        const double after = trial.squaredNorm();
        if (after > before * (1.0 + 1e-10)) {
          std::ostringstream os;
          os << "mcwf: norm increased under no-jump propagation (" << before << " -> " << after
             << "); propagator defect";
          throw numerical_error(os.str());
        }
        if (after >= r1) {
          psi = std::move(trial);
          return;
        }
        if (level == deepest) {
          jump(t0);
          continue;
        }
        const double half = std::ldexp(engine.options_.dt, -(level + 1));
        advance(level + 1, t0);
        advance(level + 1, t0 + half);
        return;
      }
    }

    void waiting_time(std::int64_t n_steps) {
      const double dt = engine.options_.dt;
      const int every = engine.options_.sample_every;
      r1 = rng.uniform();
      sample(0.0);
      for (std::int64_t step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * dt;
        check_step(t0);
        if (frozen()) {
          for (std::int64_t s = step; s <= n_steps; ++s)
            if (s % every == 0) sample(static_cast<double>(s) * dt);
          return;
        }
        advance(0, t0);
        if (step % every == 0) sample(static_cast<double>(step) * dt);
      }
    }

    void per_step(std::int64_t n_steps) {
      const double dt = engine.options_.dt;
      const int every = engine.options_.sample_every;
      sample(0.0);
      for (std::int64_t step = 1; step <= n_steps; ++step) {
        const double t0 = static_cast<double>(step - 1) * dt;
        check_step(t0);
        if (frozen()) {
          for (std::int64_t s = step; s <= n_steps; ++s)
            if (s % every == 0) sample(static_cast<double>(s) * dt);
          return;
        }
        const double dp = dt * engine.jump_rate(psi);
        r1 = rng.uniform();
        if (dp > r1) {
          jump(t0);
        } else {
          psi = engine.ladder_.front() * psi;
          psi /= psi.norm();
        }
        if (step % every == 0) sample(static_cast<double>(step) * dt);
      }
    }
  };

  ModelParams params_;
  FockSpace space_;
  Frame frame_;
  McwfOptions options_;
  std::vector<Matrix> ladder_;  // ladder_[j] = exp(-i K dt / 2^j)
  Matrix a_;
  Matrix b_;
  Eigen::VectorXd na_;
  Eigen::VectorXd nb_;
};

inline TrajectoryRecord run_trajectory(const ModelParams& p, const FockSpace& space, const StateVector& psi0,
                                       double t_final, double dt, std::uint64_t seed,
                                       Frame frame = Frame::effective_rotating) {
  return McwfEngine(p, space, frame, {.dt = dt}).run(psi0, t_final, seed);
}

/// Trajectory i uses stream_seed(master_seed, i); the returned vector is in
/// index order whatever the worker count.
inline std::vector<TrajectoryRecord> run_ensemble(const McwfEngine& engine, const StateVector& psi0,
                                                  double t_final, std::uint64_t master_seed,
                                                  std::size_t n_traj, int workers = 1) {
  if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
  std::vector<TrajectoryRecord> out(n_traj);
  parallel_for(n_traj, workers, [&](std::size_t i) {
    try {
      out[i] = engine.run(psi0, t_final, stream_seed(master_seed, i), i);
    } catch (const std::exception& e) {
      throw numerical_error("trajectory " + std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace dce
