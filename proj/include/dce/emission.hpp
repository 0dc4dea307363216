#pragma once

// Emission classification of trajectory ensembles: first-emission channel,
// photon/phonon bundles, first-emission excitation histograms, dissipation
// rate scans and the uncoupled (g = 0) baselines.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dce/mcwf.hpp"
#include "dce/stats.hpp"

namespace dce {

/// Counts in right-closed bins (k w, (k+1) w]; zero falls into the first bin.
class Histogram {
 public:
  explicit Histogram(double bin_width = 0.5) : width_(bin_width) {
    if (!(bin_width > 0)) throw std::invalid_argument("Histogram: bin width must be > 0");
  }

  std::size_t bin_of(double x) const {
    if (!(x >= 0)) throw std::invalid_argument("Histogram: negative excitation number");
    const double k = std::ceil(x / width_ - 1e-9) - 1.0;
    return k <= 0 ? 0 : static_cast<std::size_t>(k);
  }

  void add(double x) {
    const std::size_t b = bin_of(x);
    if (b >= counts_.size()) counts_.resize(b + 1, 0);
    ++counts_[b];
  }

  double bin_width() const { return width_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  double lower_edge(std::size_t b) const { return static_cast<double>(b) * width_; }
  double upper_edge(std::size_t b) const { return static_cast<double>(b + 1) * width_; }

  /// Count of the bin whose upper edge is `upper` (e.g. 3.0 for (2.5, 3]).
  std::size_t count_up_to(double upper) const {
    const double k = std::round(upper / width_) - 1.0;
    if (k < 0 || std::abs((k + 1.0) * width_ - upper) > 1e-12) {
      throw std::invalid_argument("Histogram: not a bin edge");
    }
    const auto b = static_cast<std::size_t>(k);
    return b < counts_.size() ? counts_[b] : 0;
  }

  std::size_t total() const {
    std::size_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

 private:
  double width_;
  std::vector<std::size_t> counts_;
};

struct TrajectoryClass {
  std::optional<Channel> first;  // channel of the first jump, if any
  bool two_photon = false;
  bool two_phonon = false;
  bool three_phonon = false;
};

namespace detail {

inline bool first_pair_within(const std::vector<double>& t, double lifetime) {
  return t.size() >= 2 && t[1] - t[0] < lifetime;
}

inline bool all_intervals_within(const std::vector<double>& t, double lifetime) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] - t[i - 1] < lifetime)) return false;
  return true;
}

}  // namespace detail

/// Two-photon (two-phonon) bundle: the first two jumps in the channel are
/// separated by less than 1/gamma. Three-phonon bundle: exactly three
/// mechanical jumps, both intervals below 1/gamma_b.
inline TrajectoryClass classify_trajectory(const TrajectoryRecord& r) {
  TrajectoryClass c;
  if (!r.jumps.empty()) c.first = r.jumps.front().channel;
  const auto photon_times = r.jump_times(Channel::cavity);
  const auto phonon_times = r.jump_times(Channel::mechanical);
  if (r.params.gamma_a > 0) c.two_photon = detail::first_pair_within(photon_times, 1.0 / r.params.gamma_a);
  if (r.params.gamma_b > 0) {
    const double lifetime = 1.0 / r.params.gamma_b;
    c.two_phonon = detail::first_pair_within(phonon_times, lifetime);
    c.three_phonon = phonon_times.size() == 3 && detail::all_intervals_within(phonon_times, lifetime);
  }
  return c;
}

struct EmissionCounts {
  std::size_t photon = 0;        // PtBE: first jump is a photon
  std::size_t phonon = 0;        // PnBE: first jump is a phonon
  std::size_t two_photon = 0;    // 2PtBE
  std::size_t two_phonon = 0;    // 2PnBE
  std::size_t three_phonon = 0;  // 3PnBE
  std::size_t unclassified = 0;  // no jump before t_final

  friend bool operator==(const EmissionCounts&, const EmissionCounts&) = default;
};

struct EmissionStats {
  std::size_t n_traj = 0;
  EmissionCounts counts;
  Histogram photon_histogram;  // pre-jump <a^dag a> at the first jump of photon-first trajectories
  Histogram phonon_histogram;  // pre-jump <b^dag b> at the first jump of phonon-first trajectories
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  Leakage leakage;  // worst over the ensemble

  double fraction(std::size_t count) const {
    return n_traj == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n_traj);
  }
  double photon_fraction() const { return fraction(counts.photon); }
  double phonon_fraction() const { return fraction(counts.phonon); }

  /// 2PtBE / PtBE and 2PnBE / PnBE.
  double two_photon_given_photon() const {
    return counts.photon == 0 ? 0.0 : static_cast<double>(counts.two_photon) / counts.photon;
  }
  double two_phonon_given_phonon() const {
    return counts.phonon == 0 ? 0.0 : static_cast<double>(counts.two_phonon) / counts.phonon;
  }
};

inline EmissionStats classify(const std::vector<TrajectoryRecord>& records, double bin_width = 0.5) {
  if (records.empty()) throw std::invalid_argument("classify: empty ensemble");
  const TrajectoryRecord& ref = records.front();
  EmissionStats s{records.size(), {}, Histogram(bin_width), Histogram(bin_width), ref.params.gamma_a,
                  ref.params.gamma_b};
  for (const auto& r : records) {
    if (!(r.params == ref.params) || r.frame != ref.frame || r.t_final != ref.t_final) {
      throw std::invalid_argument("classify: ensemble mixes parameters (trajectory " +
                                  std::to_string(r.index) + ")");
    }
    const TrajectoryClass c = classify_trajectory(r);
    if (!c.first) {
      ++s.counts.unclassified;
    } else if (*c.first == Channel::cavity) {
      ++s.counts.photon;
      s.photon_histogram.add(r.jumps.front().photons_before);
    } else {
      ++s.counts.phonon;
      s.phonon_histogram.add(r.jumps.front().phonons_before);
    }
    s.counts.two_photon += c.two_photon;
    s.counts.two_phonon += c.two_phonon;
    s.counts.three_phonon += c.three_phonon;
    s.leakage.absorb(r.leakage);
  }
  return s;
}

/// Production defaults for a dissipative ensemble started in |0,3>:
/// t_final = 5 / min(gamma), dt = (2 pi / Omega_eff) / 2000.
inline double default_t_final(const ModelParams& p) {
  const double slowest = std::min(p.gamma_a, p.gamma_b);
  if (!(slowest > 0)) throw std::invalid_argument("default_t_final: both rates must be > 0");
  return 5.0 / slowest;
}

inline constexpr double kScanGammaA = 1e-9;

struct RateScanEntry {
  double ratio = 0.0;  // gamma_b / gamma_a
  EmissionStats stats;
};

struct RateScanOptions {
  double gamma_a = kScanGammaA;
  std::size_t n_traj = 500;
  std::uint64_t master_seed = 42;
  int workers = 1;
  int sample_every = 1000;
};

/// One ensemble from |0,3> per gamma_b / gamma_a at fixed gamma_a
/// (1e-9 omega_m by default).
inline std::vector<RateScanEntry> rate_scan(const ModelParams& p_base, const FockSpace& space,
                                            const std::vector<double>& ratios, const RateScanOptions& o) {
  for (double r : ratios)
    if (!(r > 0)) throw std::invalid_argument("rate_scan: ratios must be > 0");
  if (!(o.gamma_a > 0)) throw std::invalid_argument("rate_scan: gamma_a must be > 0");
  std::vector<RateScanEntry> out;
  for (double r : ratios) {
    ModelParams p = p_base;
    p.gamma_a = o.gamma_a;
    p.gamma_b = r * o.gamma_a;
    const McwfEngine engine(p, space, Frame::effective_rotating,
                            {.dt = default_rotating_dt(p), .sample_every = o.sample_every});
    const auto records = run_ensemble(engine, StateVector::basis(space, {0, 3}), default_t_final(p),
                                      o.master_seed, o.n_traj, o.workers);
    out.push_back({r, classify(records)});
  }
  return out;
}

/// Homogeneity of 2PtBE / PtBE across a rate scan.
inline stats::ChiSquaredResult bundle_ratio_homogeneity(const std::vector<RateScanEntry>& scan,
                                                        bool photons = true) {
  std::vector<std::size_t> successes;
  std::vector<std::size_t> trials;
  for (const auto& e : scan) {
    successes.push_back(photons ? e.stats.counts.two_photon : e.stats.counts.two_phonon);
    trials.push_back(photons ? e.stats.counts.photon : e.stats.counts.phonon);
  }
  return stats::proportion_homogeneity(successes, trials);
}

struct BaselineOptions {
  std::size_t n_traj = 100000;
  std::uint64_t master_seed = 7;
  int workers = 1;
};

/// Pure-decay (g = 0) ensemble from a Fock state. Every quantum decays
/// independently, so the run lasts until the slowest populated channel has
/// had 12 lifetimes.
inline EmissionStats free_dissipation_baseline(const FockState& initial, double gamma_a, double gamma_b,
                                               const BaselineOptions& o) {
  if (initial.photons > 0 && !(gamma_a > 0)) throw std::invalid_argument("baseline: photons need gamma_a > 0");
  if (initial.phonons > 0 && !(gamma_b > 0)) throw std::invalid_argument("baseline: phonons need gamma_b > 0");
  const int quanta = initial.photons + initial.phonons;
  if (quanta < 1) throw std::invalid_argument("baseline: initial state must contain excitations");
  ModelParams p;
  p.g = 0.0;
  p.omega_c = 1.5 * ModelParams::omega_m;
  p.gamma_a = gamma_a;
  p.gamma_b = gamma_b;
  const FockSpace space(initial.photons + 2, initial.phonons + 2);

  double slowest = INFINITY;
  double fastest = 0.0;
  if (initial.photons > 0) {
    slowest = std::min(slowest, gamma_a);
    fastest = std::max(fastest, gamma_a);
  }
  if (initial.phonons > 0) {
    slowest = std::min(slowest, gamma_b);
    fastest = std::max(fastest, gamma_b);
  }
  const double dt = 0.02 / (fastest * quanta);
  const double t_final = 12.0 / slowest;
  const McwfEngine engine(p, space, Frame::effective_rotating,
                          {.dt = dt, .sample_every = static_cast<int>(std::ceil(t_final / dt))});
  return classify(run_ensemble(engine, StateVector::basis(space, initial), t_final, o.master_seed, o.n_traj,
                               o.workers));
}

/// Closed-form bundle probabilities of the pure-death chain.
/// From |2,0>: P(Exp(gamma_a) < 1/gamma_a) = 1 - e^-1.
/// From |0,2>: same, 1 - e^-1.
/// From |0,3>: three-phonon bundle (1 - e^-2)(1 - e^-1).
inline double death_chain_two_bundle() { return 1.0 - std::exp(-1.0); }
inline double death_chain_three_bundle() { return (1.0 - std::exp(-2.0)) * (1.0 - std::exp(-1.0)); }

}  // namespace dce
