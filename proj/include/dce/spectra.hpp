#pragma once

// Eigenvalue sweeps over omega_c / omega_m around the |0,3> <-> |2,0>
// avoided crossing.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dce/linalg.hpp"
#include "dce/model.hpp"
#include "dce/parallel.hpp"

namespace dce {

/// The two tracked levels at one sample, ordered so that upper >= lower.
struct BranchPair {
  double lower = 0.0;  // E_5
  double upper = 0.0;  // E_6
  std::array<double, 2> overlap_03{};  // |<0,3|phi>|^2 for (lower, upper)
  std::array<double, 2> overlap_20{};  // |<2,0|phi>|^2 for (lower, upper)
  std::array<Index, 2> level{};        // global ascending index of (lower, upper)
  double continuity = 1.0;             // pair-subspace overlap with the previous sample

  double splitting() const { return upper - lower; }
};

struct SpectrumSample {
  double ratio = 0.0;
  BranchPair exact;
  std::optional<BranchPair> effective;
};

struct SpectrumSweep {
  ModelParams params;
  FockSpace space{1, 1};
  std::vector<SpectrumSample> samples;

  std::vector<double> ratios() const {
    std::vector<double> r;
    r.reserve(samples.size());
    for (const auto& s : samples) r.push_back(s.ratio);
    return r;
  }
};

inline constexpr double kMinBranchContinuity = 0.5;

namespace detail {

struct TrackedPair {
  BranchPair pair;
  Matrix vectors;  // two columns, (lower, upper)
};

// Picks the two eigenvectors with the largest weight on `reference` (a set of
// orthonormal columns): either the bare {|0,3>, |2,0>} span or the previous
// sample's pair.
inline TrackedPair select_pair(const EigenDecomposition& eig, const Matrix& reference,
                               const FockSpace& space) {
  const Eigen::MatrixXd weights = (reference.adjoint() * eig.vectors).cwiseAbs2();
  const Eigen::VectorXd score = weights.colwise().sum().transpose();
  Index first = 0;
  score.maxCoeff(&first);
  Index second = first == 0 ? 1 : 0;
  for (Index j = 0; j < score.size(); ++j) {
    if (j != first && score(j) > score(second)) second = j;
  }
  const Index lo = std::min(first, second);
  const Index hi = std::max(first, second);

  TrackedPair out;
  out.vectors.resize(space.dim(), 2);
  out.vectors.col(0) = eig.vectors.col(lo);
  out.vectors.col(1) = eig.vectors.col(hi);
  out.pair.lower = eig.values(lo);
  out.pair.upper = eig.values(hi);
  out.pair.level = {lo, hi};
  const Index i03 = space.index({0, 3});
  const Index i20 = space.index({2, 0});
  for (int c = 0; c < 2; ++c) {
    out.pair.overlap_03[c] = std::norm(out.vectors(i03, c));
    out.pair.overlap_20[c] = std::norm(out.vectors(i20, c));
  }
  out.pair.continuity = 0.5 * (reference.adjoint() * out.vectors).cwiseAbs2().sum();
  return out;
}

inline Matrix bare_pair_span(const FockSpace& space) {
  Matrix r = Matrix::Zero(space.dim(), 2);
  r(space.index({0, 3}), 0) = 1.0;
  r(space.index({2, 0}), 1) = 1.0;
  return r;
}

using HamiltonianBuilder = std::function<OperatorMatrix(const ModelParams&, const FockSpace&)>;

// Tracks the pair across the sweep. The pair at each sample is the one with
// the largest overlap with the previous pair; the first sample is seeded
// from the bare span.
inline std::vector<BranchPair> track(const std::vector<double>& ratios, const ModelParams& base,
                                     const FockSpace& space, const HamiltonianBuilder& build,
                                     int workers) {
  std::vector<EigenDecomposition> eigs(ratios.size(), EigenDecomposition{space, {}, {}});
  parallel_for(ratios.size(), workers, [&](std::size_t i) {
    ModelParams p = base;
    p.omega_c = ratios[i] * ModelParams::omega_m;
    eigs[i] = hermitian_eig(build(p, space));
  });

  std::vector<BranchPair> out;
  out.reserve(ratios.size());
  Matrix reference = bare_pair_span(space);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    TrackedPair tp = select_pair(eigs[i], reference, space);
    if (i == 0) {
      tp.pair.continuity = 1.0;
    } else if (tp.pair.continuity < kMinBranchContinuity) {
      std::ostringstream os;
      os << "spectrum sweep: branch tracking ambiguous between ratio " << ratios[i - 1] << " and "
         << ratios[i] << " (pair overlap " << tp.pair.continuity
         << " < 0.5); sample the window more densely";
      throw numerical_error(os.str());
    }
    reference = tp.vectors;
    out.push_back(tp.pair);
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace detail

/// Diagonalizes the exact (and optionally the effective) Hamiltonian at
/// n_samples ratios in [ratio_lo, ratio_hi].
inline SpectrumSweep sweep(const ModelParams& p_base, const FockSpace& space, double ratio_lo,
                           double ratio_hi, int n_samples, bool include_effective = true,
                           int workers = 1) {
  if (n_samples < 3) throw std::invalid_argument("sweep: n_samples must be >= 3");
  if (!(ratio_lo < ratio_hi)) throw std::invalid_argument("sweep: empty ratio range");
  if (ratio_lo <= 1.4 || ratio_hi >= 1.6) {
    throw std::invalid_argument("sweep: ratio range must lie inside (1.4, 1.6)");
  }
  const std::vector<double> ratios = detail::linspace(ratio_lo, ratio_hi, n_samples);
  const auto exact = detail::track(ratios, p_base, space, build_exact, workers);
  std::vector<BranchPair> effective;
  if (include_effective) effective = detail::track(ratios, p_base, space, build_effective, workers);

  SpectrumSweep out{p_base, space, {}};
  out.samples.reserve(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    SpectrumSample s{ratios[i], exact[i], std::nullopt};
    if (include_effective) s.effective = effective[i];
    out.samples.push_back(s);
  }
  return out;
}

struct MinSplitting {
  double ratio = 0.0;
  double splitting = 0.0;
  std::size_t sample = 0;  // index of the discrete minimum
  double spacing = 0.0;    // sample spacing of the sweep used
};

/// Vertex of the parabola through (x0-h, y0), (x0, y1), (x0+h, y2).
inline std::pair<double, double> parabola_vertex(double x0, double h, double ym, double y0, double yp) {
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature > 0)) return {x0, y0};
  const double shift = 0.5 * h * (ym - yp) / curvature;
  const double value = y0 - 0.125 * (ym - yp) * (ym - yp) / curvature;
  return {x0 + shift, value};
}

/// Discrete minimum of E_6 - E_5 refined by a parabola through its neighbours.
inline MinSplitting min_splitting(const SpectrumSweep& s, bool effective = false) {
  const auto split = [&](std::size_t i) {
    const auto& sample = s.samples[i];
    if (effective) {
      if (!sample.effective) throw std::invalid_argument("min_splitting: sweep has no effective branches");
      return sample.effective->splitting();
    }
    return sample.exact.splitting();
  };
  const std::size_t n = s.samples.size();
  if (n < 3) throw std::invalid_argument("min_splitting: need >= 3 samples");
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (split(i) < split(best)) best = i;
  if (best == 0 || best == n - 1) {
    throw numerical_error("min_splitting: no interior minimum of E6 - E5 in the sweep window");
  }
  const double h = s.samples[best + 1].ratio - s.samples[best].ratio;
  const auto [x, y] =
      parabola_vertex(s.samples[best].ratio, h, split(best - 1), split(best), split(best + 1));
  return {x, y, best, h};
}

/// Repeatedly re-sweeps (exact Hamiltonian only) around the discrete minimum
/// until the three samples bracketing it lie in the parabolic region of the
/// splitting, then refines. The crossing is only ~Omega_eff/omega_m wide in
/// ratio, far narrower than a plotting window.
inline MinSplitting locate_avoided_crossing(const ModelParams& p_base, const FockSpace& space,
                                            double ratio_lo, double ratio_hi, int n_samples = 41,
                                            int max_levels = 16, int workers = 1) {
  double lo = ratio_lo;
  double hi = ratio_hi;
  MinSplitting m;
  for (int level = 0; level < max_levels; ++level) {
    const SpectrumSweep s = sweep(p_base, space, lo, hi, n_samples, false, workers);
    m = min_splitting(s);
    const double y0 = s.samples[m.sample].exact.splitting();
    const double ym = s.samples[m.sample - 1].exact.splitting();
    const double yp = s.samples[m.sample + 1].exact.splitting();
    // sqrt(a^2 x^2 + d^2) is parabolic to 1% once neighbours rise < ~1%.
    if (std::max(ym, yp) - y0 <= 0.01 * y0) return m;
    lo = s.samples[m.sample - 1].ratio - m.spacing;
    hi = s.samples[m.sample + 1].ratio + m.spacing;
  }
  throw numerical_error("locate_avoided_crossing: did not reach the parabolic regime");
}

}  // namespace dce
