#pragma once

// Experiment dispatch for the command-line driver. Each run writes its data
// files, the resolved configuration and a manifest into one output
// directory and nowhere else.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dce/config.hpp"
#include "dce/dynamics.hpp"
#include "dce/emission.hpp"
#include "dce/mcwf.hpp"
#include "dce/qfi.hpp"
#include "dce/serialize.hpp"
#include "dce/spectra.hpp"

#ifndef DCE_VERSION
#define DCE_VERSION "unknown"
#endif

namespace dce {

namespace fs = std::filesystem;

class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  const fs::path& root() const { return root_; }
  const std::vector<std::string>& files() const { return files_; }

  std::ofstream open(const std::string& name) {
    if (fs::path(name).has_parent_path() || name.empty()) {
      throw std::invalid_argument("output file names must be plain names: '" + name + "'");
    }
    std::ofstream out(root_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (root_ / name).string());
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    files_.push_back(name);
    return out;
  }

  void write(const std::string& name, const std::string& text) { open(name) << text; }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }

 private:
  fs::path root_;
  std::vector<std::string> files_;
};

struct ExperimentResult {
  json summary;
  Leakage leakage;
};

namespace detail {

inline std::string tag(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline BranchPair pair_at(const ModelParams& p, const FockSpace& space, double ratio) {
  ModelParams q = p;
  q.omega_c = ratio * ModelParams::omega_m;
  return select_pair(hermitian_eig(build_exact(q, space)), bare_pair_span(space), space).pair;
}

inline ExperimentResult run_spectrum(const ExperimentConfig& c, OutputDir& out) {
  const FockSpace space = c.space();
  const auto& b = c.spectrum;
  const SpectrumSweep s = sweep(c.model, space, b.ratio_lo, b.ratio_hi, b.n_samples, b.include_effective, c.workers);
  {
    auto csv = out.open("spectrum.csv");
    csv << "ratio,E5_exact,E6_exact,E5_eff,E6_eff,overlap03_E5,overlap20_E5,overlap03_E6,overlap20_E6\n";
    for (const auto& x : s.samples) {
      csv << x.ratio << ',' << x.exact.lower << ',' << x.exact.upper << ',';
      if (x.effective) {
        csv << x.effective->lower << ',' << x.effective->upper;
      } else {
        csv << ',';
      }
      csv << ',' << x.exact.overlap_03[0] << ',' << x.exact.overlap_20[0] << ',' << x.exact.overlap_03[1] << ','
          << x.exact.overlap_20[1] << '\n';
    }
  }
  const MinSplitting grid = min_splitting(s);
  const MinSplitting refined = locate_avoided_crossing(c.model, space, b.ratio_lo, b.ratio_hi, 41, 16, c.workers);
  const BranchPair at = pair_at(c.model, space, refined.ratio);
  const ClosedPropagator prop(build_exact([&] {
    ModelParams q = c.model;
    q.omega_c = refined.ratio;
    return q;
  }(), space));
  Leakage leak;
  for (Index j : at.level) leak.absorb(leakage(prop.eigen().eigenvector(j)));

  json summary{{"kind", "spectrum"},
               {"n_samples", s.samples.size()},
               {"resonant_omega_c_closed_form", resonant_omega_c(c.model.g)},
               {"splitting_closed_form", 2.0 * effective_rabi(c.model)},
               {"grid_minimum", {{"ratio", grid.ratio}, {"splitting", grid.splitting}, {"spacing", grid.spacing}}},
               {"refined_minimum",
                {{"ratio", refined.ratio},
                 {"splitting", refined.splitting},
                 {"spacing", refined.spacing},
                 {"overlap03", {at.overlap_03[0], at.overlap_03[1]}},
                 {"overlap20", {at.overlap_20[0], at.overlap_20[1]}}}}};
  if (b.include_effective) {
    double worst = 0.0;
    for (const auto& x : s.samples) {
      worst = std::max({worst, std::abs(x.exact.lower - x.effective->lower),
                        std::abs(x.exact.upper - x.effective->upper)});
    }
    summary["max_exact_minus_effective"] = worst;
  }
  return {summary, leak};
}

inline ExperimentResult run_fidelity(const ExperimentConfig& c, OutputDir& out) {
  const FockSpace space = c.space();
  const auto& b = c.fidelity;
  std::vector<double> gs = b.g_values.empty() ? std::vector<double>{c.model.g} : b.g_values;
  json per_g = json::array();
  Leakage leak;
  for (double g : gs) {
    ModelParams p = c.model;
    p.g = g;
    if (c.omega_c_resonant) p.omega_c = resonant_omega_c(p);
    const FidelityTrace f = fidelity_trace(p, space, StateVector::basis(space, b.initial), b.t_final, b.n_samples);
    auto csv = out.open("fidelity_g" + tag(g) + ".csv");
    csv << "t,F\n";
    for (std::size_t i = 0; i < f.times.size(); ++i) csv << f.times[i] << ',' << f.fidelity[i] << '\n';
    per_g.push_back({{"g", g}, {"omega_c", p.omega_c}, {"min_fidelity", f.min_fidelity()}});
    leak.absorb(f.leakage);
  }
  return {{{"kind", "fidelity"}, {"t_final", b.t_final}, {"n_samples", b.n_samples}, {"traces", per_g}}, leak};
}

// Conditional no-jump populations against the ideal two-level formula over
// two Rabi periods 2 pi / Omega_eff.
inline json no_jump_comparison(const ExperimentConfig& c, const McwfEngine& engine, OutputDir& out) {
  const double omega = effective_rabi(c.model);
  const auto steps = engine.steps_for(2.0 * 2.0 * std::numbers::pi / omega);
  const auto samples = engine.no_jump_expectations(StateVector::basis(c.space(), {0, 3}), steps);
  auto csv = out.open("nojump.csv");
  csv << "t,photons,phonons,photons_two_level,phonons_two_level\n";
  double dev_a = 0.0;
  double dev_b = 0.0;
  for (const auto& s : samples) {
    const TwoLevelExpectations ideal = two_level_expectations(c.model, s.time);
    dev_a = std::max(dev_a, std::abs(s.photons - ideal.photons));
    dev_b = std::max(dev_b, std::abs(s.phonons - ideal.phonons));
    csv << s.time << ',' << s.photons << ',' << s.phonons << ',' << ideal.photons << ',' << ideal.phonons << '\n';
  }
  return {{"horizon", samples.back().time}, {"max_dev_photons", dev_a}, {"max_dev_phonons", dev_b}};
}

inline ExperimentResult run_trajectory(const ExperimentConfig& c, OutputDir& out) {
  const FockSpace space = c.space();
  const auto& b = c.trajectory;
  const McwfEngine engine(c.model, space, b.frame,
                          {.dt = *b.dt, .sample_every = b.sample_every, .unraveling = b.unraveling});
  const auto records = run_ensemble(engine, StateVector::basis(space, b.initial), *b.t_final, c.master_seed,
                                    b.n_traj, c.workers);
  out.write("trajectories.jsonl", to_jsonl(records));
  for (std::size_t i = 0; i < std::min(b.export_traces, records.size()); ++i) {
    auto csv = out.open("trace_" + std::to_string(i) + ".csv");
    csv << "t,photons,phonons\n";
    for (const auto& s : records[i].samples) csv << s.time << ',' << s.photons << ',' << s.phonons << '\n';
  }
  Leakage leak;
  for (const auto& r : records) leak.absorb(r.leakage);
  json summary{{"kind", "trajectory"},
               {"n_traj", records.size()},
               {"dt", *b.dt},
               {"t_final", *b.t_final},
               {"frame", to_string(b.frame)},
               {"unraveling", to_string(b.unraveling)}};
  if (c.model.gamma_a > 0 || c.model.gamma_b > 0) summary["emission"] = to_json(classify(records));
  if (b.frame == Frame::effective_rotating && c.model.g > 0 && b.initial == FockState{0, 3} &&
      c.model.omega_c == resonant_omega_c(c.model)) {
    summary["no_jump_vs_two_level"] = no_jump_comparison(c, engine, out);
  }
  return {summary, leak};
}

inline void write_histograms(OutputDir& out, const std::string& name, const EmissionStats& s) {
  auto csv = out.open(name);
  csv << "channel,bin_lower,bin_upper,count\n";
  for (const auto& [label, h] : {std::pair<const char*, const Histogram*>{"photon", &s.photon_histogram},
                                 std::pair<const char*, const Histogram*>{"phonon", &s.phonon_histogram}}) {
    for (std::size_t k = 0; k < h->counts().size(); ++k)
      csv << label << ',' << h->lower_edge(k) << ',' << h->upper_edge(k) << ',' << h->counts()[k] << '\n';
  }
}

inline ExperimentResult run_emission(const ExperimentConfig& c, OutputDir& out) {
  const FockSpace space = c.space();
  const auto& b = c.emission;
  const auto scan = rate_scan(c.model, space, b.ratios,
                              {.gamma_a = b.gamma_a, .n_traj = b.n_traj, .master_seed = c.master_seed,
                               .workers = c.workers});
  Leakage leak;
  json entries = json::array();
  {
    auto csv = out.open("rate_scan.csv");
    csv << "ratio,gamma_a,gamma_b,n_traj,PtBE,PnBE,2PtBE,2PnBE,3PnBE,unclassified\n";
    for (const auto& e : scan) {
      const auto& k = e.stats.counts;
      csv << e.ratio << ',' << e.stats.gamma_a << ',' << e.stats.gamma_b << ',' << e.stats.n_traj << ',' << k.photon
          << ',' << k.phonon << ',' << k.two_photon << ',' << k.two_phonon << ',' << k.three_phonon << ','
          << k.unclassified << '\n';
      json j = to_json(e.stats);
      j["ratio"] = e.ratio;
      entries.push_back(j);
      leak.absorb(e.stats.leakage);
    }
  }
  for (const auto& e : scan) write_histograms(out, "histogram_ratio" + tag(e.ratio) + ".csv", e.stats);

  json summary{{"kind", "emission"}, {"rate_scan", entries}};
  if (scan.size() >= 2) {
    const auto chi = bundle_ratio_homogeneity(scan, true);
    summary["two_photon_ratio_homogeneity"] = {{"chi2", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
  }

  if (b.baselines) {
    const RateScanEntry* dce = &scan.front();
    for (const auto& e : scan)
      if (e.ratio == 1.0) dce = &e;
    const double ga = dce->stats.gamma_a;
    const double gb = dce->stats.gamma_b;
    struct Row {
      std::string setting;
      FockState initial;
      EmissionStats stats;
    };
    std::vector<Row> rows{{"dce", {0, 3}, dce->stats}};
    std::uint64_t seed = c.master_seed;
    for (const FockState& f : {FockState{2, 0}, FockState{0, 2}, FockState{0, 3}}) {
      rows.push_back({"free", f,
                      free_dissipation_baseline(f, ga, gb,
                                                {.n_traj = b.n_baseline, .master_seed = ++seed, .workers = c.workers})});
    }
    auto csv = out.open("bundles.csv");
    csv << "setting,initial,n_traj,PtBE,PnBE,2PtBE,2PnBE,3PnBE,p_2PtBE_given_PtBE,p_2PnBE_given_PnBE,"
           "p_3PnBE_given_PnBE\n";
    json list = json::array();
    for (const auto& r : rows) {
      const auto& k = r.stats.counts;
      const double p3 = k.phonon == 0 ? 0.0 : static_cast<double>(k.three_phonon) / k.phonon;
      csv << r.setting << ",\"" << to_string(r.initial) << "\"," << r.stats.n_traj << ',' << k.photon << ','
          << k.phonon << ',' << k.two_photon << ',' << k.two_phonon << ',' << k.three_phonon << ','
          << r.stats.two_photon_given_photon() << ',' << r.stats.two_phonon_given_phonon() << ',' << p3 << '\n';
      json j = to_json(r.stats);
      j["setting"] = r.setting;
      j["initial"] = to_string(r.initial);
      j["p_3PnBE_given_PnBE"] = p3;
      list.push_back(j);
      leak.absorb(r.stats.leakage);
    }
    summary["bundles"] = list;
    summary["death_chain"] = {{"two_bundle", death_chain_two_bundle()},
                              {"three_bundle", death_chain_three_bundle()}};
  }
  return {summary, leak};
}

inline ExperimentResult run_qfi(const ExperimentConfig& c, OutputDir& out) {
  const FockSpace space = c.space();
  const auto& b = c.qfi;
  const StateVector psi0 = StateVector::basis(space, b.initial);
  const QfiScan s = qfi_scan(c.model, space, psi0, b.omega_lo, b.omega_hi, b.n_samples, *b.t_f, b.delta, c.workers);
  {
    auto csv = out.open("qfi.csv");
    csv << "omega_c,F,F_half_step\n";
    for (const auto& q : s.points) csv << q.omega_c << ',' << q.value << ',' << q.value_half << '\n';
  }
  json summary = to_json(s);
  summary["kind"] = "qfi";

  const double centre = resonant_omega_c(c.model.g);
  if (b.edge_offset > 0) {
    ModelParams lo = c.model;
    ModelParams hi = c.model;
    lo.omega_c = centre - b.edge_offset;
    hi.omega_c = centre + b.edge_offset;
    const double f_lo = qfi_at(lo, space, psi0, *b.t_f, b.delta).value;
    const double f_hi = qfi_at(hi, space, psi0, *b.t_f, b.delta).value;
    summary["edge_probe"] = {{"offset", b.edge_offset},
                             {"values", {f_lo, f_hi}},
                             {"peak_to_edge", s.peak_value / std::max(f_lo, f_hi)}};
  }
  ModelParams control = c.model;
  control.g = 0.0;
  control.omega_c = s.peak_omega_c;
  summary["g0_control"] = qfi_at(control, space, psi0, *b.t_f, b.delta).value;

  ModelParams at_peak = c.model;
  at_peak.omega_c = s.peak_omega_c;
  const Leakage leak = leakage(evolve_closed(build_exact(at_peak, space), psi0, *b.t_f));
  return {summary, leak};
}

}  // namespace detail

/// Runs one experiment into `out_dir`; returns its summary (also written as
/// summary.json next to manifest.json and resolved_config.ini).
inline json run_experiment(ExperimentConfig config, const fs::path& out_dir) {
  resolve_defaults(config);
  OutputDir out(out_dir);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult r;
  switch (config.kind) {
    case ExperimentKind::spectrum: r = detail::run_spectrum(config, out); break;
    case ExperimentKind::fidelity: r = detail::run_fidelity(config, out); break;
    case ExperimentKind::trajectory: r = detail::run_trajectory(config, out); break;
    case ExperimentKind::emission: r = detail::run_emission(config, out); break;
    case ExperimentKind::qfi: r = detail::run_qfi(config, out); break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.summary["params"] = to_json(config.model);
  out.write_json("summary.json", r.summary);
  out.write("resolved_config.ini", to_ini(config));

  json manifest{{"version", DCE_VERSION},
                {"kind", to_string(config.kind)},
                {"name", config.name},
                {"resolved_config", to_ini(config)},
                {"rng", kRngAlgorithm},
                {"master_seed", config.master_seed},
                {"workers", config.workers},
                {"wall_time_seconds", wall},
                {"leakage", to_json(r.leakage)},
                {"outputs", out.files()}};
  out.write_json("manifest.json", manifest);
  return r.summary;
}

struct FigureCheck {
  std::string label;
  bool pass = false;
  std::string detail;
};

inline std::vector<int> known_figures() { return {2, 3, 4, 5, 6, 7, 9}; }

inline fs::path figure_config_path(int figure, const fs::path& config_dir) {
  for (int f : known_figures())
    if (f == figure) return config_dir / ("fig" + std::to_string(figure) + ".ini");
  throw std::invalid_argument("unknown figure id " + std::to_string(figure) + " (known: 2 3 4 5 6 7 9)");
}

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(8) << x;
  return os.str();
}

inline const json& ratio_entry(const json& summary, double ratio) {
  for (const auto& e : summary.at("rate_scan"))
    if (e.at("ratio").get<double>() == ratio) return e;
  throw std::invalid_argument("figure check: rate scan lacks ratio " + fmt(ratio));
}

}  // namespace detail

/// Pass/fail of a figure's headline claims evaluated on its summary.
inline std::vector<FigureCheck> figure_checks(int figure, const json& s) {
  using detail::fmt;
  std::vector<FigureCheck> out;
  switch (figure) {
    case 2: {
      const auto& m = s.at("refined_minimum");
      const double ratio = m.at("ratio");
      const double split = m.at("splitting");
      const double expect = s.at("splitting_closed_form");
      const double res = s.at("resonant_omega_c_closed_form");
      out.push_back({"avoided crossing at the resonance formula", std::abs(ratio - res) <= 2e-6,
                     "min at " + fmt(ratio) + ", formula " + fmt(res)});
      out.push_back({"minimum splitting 36 sqrt(3) g^3", std::abs(split / expect - 1.0) <= 0.05,
                     fmt(split) + " vs " + fmt(expect)});
      bool half = true;
      for (const auto& key : {"overlap03", "overlap20"})
        for (double v : m.at(key)) half = half && v >= 0.49 && v <= 0.51;
      out.push_back({"eigenstates are equal |0,3>/|2,0> mixtures", half,
                     "overlap03 " + m.at("overlap03").dump() + ", overlap20 " + m.at("overlap20").dump()});
      break;
    }
    case 3: {
      const auto& traces = s.at("traces");
      double prev = 2.0;
      bool decreasing = true;
      double first = -1.0;
      std::string detail;
      for (const auto& t : traces) {
        const double f = t.at("min_fidelity");
        if (first < 0) first = f;
        decreasing = decreasing && f < prev;
        prev = f;
        detail += "g=" + fmt(t.at("g")) + ": " + fmt(f) + "  ";
      }
      out.push_back({"min fidelity >= 0.99 at the first g", first >= 0.99, detail});
      out.push_back({"min fidelity decreases with g", decreasing, detail});
      break;
    }
    case 4: {
      const auto& c = s.at("no_jump_vs_two_level");
      const double a = c.at("max_dev_photons");
      const double b = c.at("max_dev_phonons");
      out.push_back({"no-jump expectations follow the two-level Rabi formula", std::max(a, b) <= 2e-2,
                     "max |dev| photons " + fmt(a) + ", phonons " + fmt(b)});
      break;
    }
    case 5: {
      const auto& e = detail::ratio_entry(s, 1.0);
      const std::size_t photon = e.at("PtBE").at("count");
      out.push_back({"photon-first count in [200, 255] of 500", photon >= 200 && photon <= 255,
                     std::to_string(photon) + " photon-first, " + std::to_string(e.at("PnBE").at("count").get<std::size_t>()) +
                         " phonon-first"});
      const auto bin = [](const json& h, double upper) -> std::size_t {
        for (const auto& b : h.at("bins"))
          if (std::abs(b.at("upper").get<double>() - upper) < 1e-12) return b.at("count");
        return 0;
      };
      const auto& ph = e.at("phonon_first_histogram");
      const auto& pt = e.at("photon_first_histogram");
      out.push_back({"phonon histogram (2.5,3] > (2,2.5]", bin(ph, 3.0) > bin(ph, 2.5),
                     std::to_string(bin(ph, 3.0)) + " vs " + std::to_string(bin(ph, 2.5))});
      out.push_back({"photon histogram (1.5,2] > (1,1.5]", bin(pt, 2.0) > bin(pt, 1.5),
                     std::to_string(bin(pt, 2.0)) + " vs " + std::to_string(bin(pt, 1.5))});
      break;
    }
    case 6: {
      const auto frac = [&](double r, const char* key) { return detail::ratio_entry(s, r).at(key).at("fraction").get<double>(); };
      out.push_back({"gamma_b = 5 gamma_a: photon fraction < 0.5 x phonon fraction",
                     frac(5.0, "PtBE") < 0.5 * frac(5.0, "PnBE"),
                     fmt(frac(5.0, "PtBE")) + " vs " + fmt(frac(5.0, "PnBE"))});
      const double f5 = frac(5.0, "PtBE");
      const double f1 = frac(1.0, "PtBE");
      const double f02 = frac(0.2, "PtBE");
      out.push_back({"photon fraction rises as gamma_b / gamma_a falls", f5 < f1 && f1 < f02,
                     fmt(f5) + " < " + fmt(f1) + " < " + fmt(f02)});
      const double p = s.at("two_photon_ratio_homogeneity").at("p_value");
      out.push_back({"2PtBE/PtBE homogeneous across rates (chi2 p > 0.01)", p > 0.01, "p = " + fmt(p)});
      break;
    }
    case 7: {
      const auto& rows = s.at("bundles");
      const double two = s.at("death_chain").at("two_bundle");
      const double three = s.at("death_chain").at("three_bundle");
      const auto find = [&](const std::string& setting, const std::string& initial) -> const json& {
        for (const auto& r : rows)
          if (r.at("setting") == setting && r.at("initial") == initial) return r;
        throw std::invalid_argument("figure check: missing bundle row " + setting + " " + initial);
      };
      const auto within = [](double p, double expect, std::size_t n) {
        return std::abs(p - expect) <= 2.0 * stats::binomial_sigma(expect, n);
      };
      const json& f20 = find("free", "|2,0>");
      const json& f02 = find("free", "|0,2>");
      const json& f03 = find("free", "|0,3>");
      const json& dce = find("dce", "|0,3>");
      const double p20 = f20.at("2PtBE_per_PtBE");
      const double p03 = f03.at("p_3PnBE_given_PnBE");
      out.push_back({"free |2,0>: two-photon bundle = 1 - e^-1 (2 sigma)", within(p20, two, f20.at("n_traj")),
                     fmt(p20) + " vs " + fmt(two)});
      out.push_back({"free |0,3>: three-phonon bundle = (1 - e^-2)(1 - e^-1) (2 sigma)",
                     within(p03, three, f03.at("n_traj")), fmt(p03) + " vs " + fmt(three)});
      const auto enhanced = [](const json& with, const char* key, const char* count, const json& base) {
        const double p = with.at(key);
        const double q = base.at(key);
        const std::size_t n = with.at(count).at("count");
        const std::size_t m = base.at(count).at("count");
        const double sigma = std::sqrt(stats::binomial_sigma(p, n) * stats::binomial_sigma(p, n) +
                                       stats::binomial_sigma(q, m) * stats::binomial_sigma(q, m));
        return std::pair{p - q > 2.0 * sigma, fmt(p) + " vs free " + fmt(q) + " (2 sigma = " + fmt(2 * sigma) + ")"};
      };
      const auto [tp, tp_detail] = enhanced(dce, "2PtBE_per_PtBE", "PtBE", f20);
      const auto [tn, tn_detail] = enhanced(dce, "2PnBE_per_PnBE", "PnBE", f02);
      out.push_back({"with-DCE two-photon bundle fraction above free |2,0>", tp, tp_detail});
      out.push_back({"with-DCE two-phonon bundle fraction above free |0,2>", tn, tn_detail});
      break;
    }
    case 9: {
      const double peak = s.at("peak_omega_c");
      const double value = s.at("peak_value");
      out.push_back({"QFI peak at 1.5000105 (+- 2e-6)", std::abs(peak - 1.5000105) <= 2e-6, "peak at " + fmt(peak)});
      out.push_back({"QFI peak value in [1e16, 1e18]", value >= 1e16 && value <= 1e18, fmt(value)});
      const double control = s.at("g0_control");
      out.push_back({"g = 0 control QFI <= 1e-6 x peak", std::abs(control) <= 1e-6 * value, fmt(control)});
      if (s.contains("edge_probe")) {
        const double r = s.at("edge_probe").at("peak_to_edge");
        out.push_back({"peak-to-edge ratio >= 1e3 over a 1e-4 window", r >= 1e3, fmt(r)});
      }
      break;
    }
    default:
      throw std::invalid_argument("unknown figure id " + std::to_string(figure));
  }
  return out;
}

inline std::string format_checks(int figure, const std::vector<FigureCheck>& checks) {
  std::ostringstream os;
  os << "figure " << figure << "\n";
  for (const auto& c : checks) os << (c.pass ? "[PASS] " : "[FAIL] ") << c.label << ": " << c.detail << "\n";
  return os.str();
}

/// Runs the shipped configuration of a figure and writes check.txt.
inline std::vector<FigureCheck> reproduce_figure(int figure, const fs::path& config_dir, const fs::path& out_dir,
                                                 std::optional<int> workers = std::nullopt,
                                                 std::optional<std::uint64_t> seed = std::nullopt) {
  ExperimentConfig c = load_config(figure_config_path(figure, config_dir).string());
  if (workers) c.workers = *workers;
  if (seed) c.master_seed = *seed;
  const json summary = run_experiment(c, out_dir);
  auto checks = figure_checks(figure, summary);
  std::ofstream(out_dir / "check.txt") << format_checks(figure, checks);
  return checks;
}

}  // namespace dce
