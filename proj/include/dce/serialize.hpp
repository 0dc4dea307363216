#pragma once

// JSON layouts.
//  Operator: {"n_cav", "n_mech", "dim", "entries": [[re, im], ...]} row-major.
//  State:    {"n_cav", "n_mech", "dim", "amplitudes": [[re, im], ...]}.
//  Trajectory (one JSON-lines record): index, seed, rng, frame, unraveling,
//  params, dt, t_final, jumps [{t, channel, photons, phonons}],
//  samples [[t, <a^dag a>, <b^dag b>], ...], final_state, leakage.

#include <string>

#include "json.hpp"

#include "dce/emission.hpp"
#include "dce/fock.hpp"
#include "dce/mcwf.hpp"
#include "dce/qfi.hpp"

namespace dce {

using json = nlohmann::json;

namespace detail {

inline json complex_pairs(const complex* data, Index n) {
  json out = json::array();
  for (Index i = 0; i < n; ++i) out.push_back({data[i].real(), data[i].imag()});
  return out;
}

inline FockSpace space_from_json(const json& j) {
  const FockSpace s(j.at("n_cav").get<int>(), j.at("n_mech").get<int>());
  if (j.contains("dim") && j.at("dim").get<Index>() != s.dim()) {
    throw std::invalid_argument("json: dim does not match n_cav * n_mech");
  }
  return s;
}

inline complex complex_from_json(const json& pair) {
  if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("json: expected [re, im] pair");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

}  // namespace detail

inline json to_json(const OperatorMatrix& op) {
  const FockSpace& s = op.space();
  Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = op.matrix();
  return {{"n_cav", s.n_cav()},
          {"n_mech", s.n_mech()},
          {"dim", s.dim()},
          {"entries", detail::complex_pairs(rm.data(), rm.size())}};
}

inline OperatorMatrix operator_from_json(const json& j) {
  const FockSpace s = detail::space_from_json(j);
  const json& e = j.at("entries");
  if (e.size() != static_cast<std::size_t>(s.dim() * s.dim())) {
    throw std::invalid_argument("json: operator entry count does not match dim^2");
  }
  Matrix m(s.dim(), s.dim());
  for (Index r = 0; r < s.dim(); ++r)
    for (Index c = 0; c < s.dim(); ++c)
      m(r, c) = detail::complex_from_json(e[static_cast<std::size_t>(r * s.dim() + c)]);
  return {s, m};
}

inline json to_json(const StateVector& psi) {
  const FockSpace& s = psi.space();
  return {{"n_cav", s.n_cav()},
          {"n_mech", s.n_mech()},
          {"dim", s.dim()},
          {"amplitudes", detail::complex_pairs(psi.amplitudes().data(), s.dim())}};
}

inline StateVector state_from_json(const json& j) {
  const FockSpace s = detail::space_from_json(j);
  const json& a = j.at("amplitudes");
  if (a.size() != static_cast<std::size_t>(s.dim())) {
    throw std::invalid_argument("json: amplitude count does not match dim");
  }
  Vector v(s.dim());
  for (Index i = 0; i < s.dim(); ++i) v(i) = detail::complex_from_json(a[static_cast<std::size_t>(i)]);
  return {s, v};
}

inline json to_json(const ModelParams& p) {
  return {{"omega_m", ModelParams::omega_m},
          {"omega_c", p.omega_c},
          {"g", p.g},
          {"gamma_a", p.gamma_a},
          {"gamma_b", p.gamma_b}};
}

inline json to_json(const Leakage& l) {
  return {{"top_photon_level", l.top_photon},
          {"top_phonon_level", l.top_phonon},
          {"warning", l.worst() > kLeakageWarnThreshold}};
}

inline json to_json(const TrajectoryRecord& r) {
  json jumps = json::array();
  for (const auto& j : r.jumps) {
    jumps.push_back(
        {{"t", j.time}, {"channel", to_string(j.channel)}, {"photons", j.photons_before}, {"phonons", j.phonons_before}});
  }
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back({s.time, s.photons, s.phonons});
  return {{"index", r.index},
          {"seed", r.seed},
          {"rng", r.rng},
          {"frame", to_string(r.frame)},
          {"unraveling", to_string(r.unraveling)},
          {"params", to_json(r.params)},
          {"dt", r.dt},
          {"t_final", r.t_final},
          {"jumps", jumps},
          {"samples", samples},
          {"final_state", r.final_state},
          {"leakage", to_json(r.leakage)}};
}

inline std::string to_jsonl(const std::vector<TrajectoryRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

inline json to_json(const Histogram& h) {
  json bins = json::array();
  for (std::size_t b = 0; b < h.counts().size(); ++b) {
    bins.push_back({{"lower", h.lower_edge(b)}, {"upper", h.upper_edge(b)}, {"count", h.counts()[b]}});
  }
  return {{"bin_width", h.bin_width()}, {"closed", "right"}, {"bins", bins}};
}

inline json to_json(const EmissionStats& s) {
  const auto entry = [&](std::size_t count) {
    const auto ci = stats::wilson_interval(count, s.n_traj);
    return json{{"count", count}, {"fraction", s.fraction(count)}, {"ci95", {ci.lower, ci.upper}}};
  };
  return {{"n_traj", s.n_traj},
          {"gamma_a", s.gamma_a},
          {"gamma_b", s.gamma_b},
          {"PtBE", entry(s.counts.photon)},
          {"PnBE", entry(s.counts.phonon)},
          {"2PtBE", entry(s.counts.two_photon)},
          {"2PnBE", entry(s.counts.two_phonon)},
          {"3PnBE", entry(s.counts.three_phonon)},
          {"unclassified", s.counts.unclassified},
          {"2PtBE_per_PtBE", s.two_photon_given_photon()},
          {"2PnBE_per_PnBE", s.two_phonon_given_phonon()},
          {"photon_first_histogram", to_json(s.photon_histogram)},
          {"phonon_first_histogram", to_json(s.phonon_histogram)}};
}

inline json to_json(const QfiScan& s) {
  return {{"params", to_json(s.params)},
          {"t_f", s.t_f},
          {"delta", s.delta},
          {"n_samples", s.points.size()},
          {"omega_c_lo", s.points.front().omega_c},
          {"omega_c_hi", s.points.back().omega_c},
          {"peak_omega_c", s.peak_omega_c},
          {"peak_value", s.peak_value},
          {"peak_sample", s.peak_index},
          {"edge_values", {s.points.front().value, s.points.back().value}}};
}

}  // namespace dce
