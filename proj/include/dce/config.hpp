#pragma once

// Experiment configuration: INI files with [experiment], [model], [space]
// and one block per experiment kind. Every frequency, rate and time is in
// units of omega_m (times in 1/omega_m). Unknown keys and sections are
// rejected with their field path; `model.g` is required.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dce/mcwf.hpp"
#include "dce/model.hpp"

namespace dce {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { spectrum, fidelity, trajectory, emission, qfi };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::fidelity: return "fidelity";
    case ExperimentKind::trajectory: return "trajectory";
    case ExperimentKind::emission: return "emission";
    case ExperimentKind::qfi: return "qfi";
  }
  return "?";
}

struct SpectrumBlock {
  double ratio_lo = 1.4995;
  double ratio_hi = 1.5005;
  int n_samples = 201;
  bool include_effective = true;
};

struct FidelityBlock {
  std::vector<double> g_values;  // empty: model.g only
  FockState initial{0, 3};
  double t_final = 1.0077e8;
  int n_samples = 2001;
};

struct TrajectoryBlock {
  FockState initial{0, 3};
  std::size_t n_traj = 500;
  std::optional<double> t_final;  // default 5 / min(gamma)
  std::optional<double> dt;        // default (2 pi / Omega_eff) / 2000
  int sample_every = 100;
  Frame frame = Frame::effective_rotating;
  Unraveling unraveling = Unraveling::waiting_time;
  std::size_t export_traces = 4;
};

struct EmissionBlock {
  std::vector<double> ratios{1.0};  // gamma_b / gamma_a
  double gamma_a = 1e-9;
  std::size_t n_traj = 500;
  bool baselines = false;
  std::size_t n_baseline = 100000;
  double bin_width = 0.5;
};

struct QfiBlock {
  double omega_lo = 1.5000103;
  double omega_hi = 1.5000107;
  int n_samples = 161;
  std::optional<double> t_f;  // default pi / Omega_eff
  double delta = 1e-12;
  FockState initial{0, 3};
  double edge_offset = 5e-5;  // peak-to-edge probe at omega_c_res +- edge_offset
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::spectrum;
  std::string name;
  std::uint64_t master_seed = 42;
  int workers = 1;
  ModelParams model;
  bool omega_c_resonant = true;
  int n_cav = 6;
  int n_mech = 8;
  SpectrumBlock spectrum;
  FidelityBlock fidelity;
  TrajectoryBlock trajectory;
  EmissionBlock emission;
  QfiBlock qfi;

  FockSpace space() const { return {n_cav, n_mech}; }
};

namespace detail {

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

class ConfigReader {
 public:
  explicit ConfigReader(const boost::property_tree::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    const std::string path = section + "." + key;
    seen_.insert(path);
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return boost::algorithm::trim_copy(*v);
  }

  template <typename T, typename Parse>
  void read(const std::string& section, const std::string& key, T& target, Parse parse) {
    if (const auto v = raw(section, key)) {
      try {
        target = parse(*v);
      } catch (const std::exception& e) {
        throw config_error("config: field '" + section + "." + key + "': " + e.what() + " (got '" + *v + "')");
      }
    }
  }

  void reject_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) {
        throw config_error("config: key '" + section + "' must be inside a [section]");
      }
      for (const auto& [key, value] : body) {
        const std::string path = section + "." + key;
        if (!seen_.count(path)) throw config_error("config: unknown field '" + path + "'");
      }
    }
  }

 private:
  const boost::property_tree::ptree& tree_;
  std::set<std::string> seen_;
};

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("expected a number");
  return v;
}

inline long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("expected an integer");
  return v;
}

inline bool parse_bool(const std::string& s) {
  const std::string l = boost::algorithm::to_lower_copy(s);
  if (l == "true" || l == "yes" || l == "1") return true;
  if (l == "false" || l == "no" || l == "0") return false;
  throw std::invalid_argument("expected true or false");
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (auto& p : parts) out.push_back(parse_double(boost::algorithm::trim_copy(p)));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
  return out;
}

inline FockState parse_fock(const std::string& s) {
  std::string t = s;
  boost::algorithm::trim_if(t, boost::algorithm::is_any_of("|<> "));
  std::vector<std::string> parts;
  boost::algorithm::split(parts, t, boost::algorithm::is_any_of(","));
  if (parts.size() != 2) throw std::invalid_argument("expected a Fock label 'n,k'");
  const auto n = parse_integer(boost::algorithm::trim_copy(parts[0]));
  const auto k = parse_integer(boost::algorithm::trim_copy(parts[1]));
  if (n < 0 || k < 0) throw std::invalid_argument("Fock label entries must be >= 0");
  return {static_cast<int>(n), static_cast<int>(k)};
}

inline ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::spectrum, ExperimentKind::fidelity, ExperimentKind::trajectory,
                 ExperimentKind::emission, ExperimentKind::qfi}) {
    if (s == to_string(k)) return k;
  }
  if (s == "trajectories") return ExperimentKind::trajectory;
  if (s == "emission-stats") return ExperimentKind::emission;
  throw std::invalid_argument("expected spectrum | fidelity | trajectory | emission | qfi");
}

template <typename T>
auto positive(T (*parse)(const std::string&)) {
  return [parse](const std::string& s) {
    const T v = parse(s);
    if (!(v > 0)) throw std::invalid_argument("must be > 0");
    return v;
  };
}

inline auto non_negative_double = [](const std::string& s) {
  const double v = parse_double(s);
  if (!(v >= 0)) throw std::invalid_argument("must be >= 0");
  return v;
};

}  // namespace detail

inline ExperimentConfig parse_config(const boost::property_tree::ptree& tree) {
  using namespace detail;
  ConfigReader r(tree);
  ExperimentConfig c;

  const auto kind = r.raw("experiment", "kind");
  if (!kind) throw config_error("config: missing required field 'experiment.kind'");
  r.read("experiment", "kind", c.kind, parse_kind);
  r.read("experiment", "name", c.name, [](const std::string& s) { return s; });
  r.read("experiment", "master_seed", c.master_seed, [](const std::string& s) {
    const long long v = parse_integer(s);
    if (v < 0) throw std::invalid_argument("must be >= 0");
    return static_cast<std::uint64_t>(v);
  });
  r.read("experiment", "workers", c.workers, [](const std::string& s) {
    return static_cast<int>(positive(parse_integer)(s));
  });

  if (!r.raw("model", "g")) throw config_error("config: missing required field 'model.g'");
  r.read("model", "g", c.model.g, non_negative_double);
  r.read("model", "gamma_a", c.model.gamma_a, non_negative_double);
  r.read("model", "gamma_b", c.model.gamma_b, non_negative_double);
  if (const auto w = r.raw("model", "omega_c"); w && *w != "resonant") {
    c.omega_c_resonant = false;
    r.read("model", "omega_c", c.model.omega_c, positive(parse_double));
  }
  if (const auto w = r.raw("model", "omega_m"); w && parse_double(*w) != 1.0) {
    throw config_error("config: field 'model.omega_m': frequencies are in units of omega_m, which must be 1");
  }
  if (c.omega_c_resonant) {
    try {
      c.model.omega_c = resonant_omega_c(c.model);
    } catch (const std::exception& e) {
      throw config_error(std::string("config: field 'model.omega_c' = resonant: ") + e.what());
    }
  }

  const auto cutoff = [](const std::string& s) { return static_cast<int>(positive(parse_integer)(s)); };
  r.read("space", "n_cav", c.n_cav, cutoff);
  r.read("space", "n_mech", c.n_mech, cutoff);

  auto& sp = c.spectrum;
  r.read("spectrum", "ratio_lo", sp.ratio_lo, parse_double);
  r.read("spectrum", "ratio_hi", sp.ratio_hi, parse_double);
  r.read("spectrum", "n_samples", sp.n_samples, cutoff);
  r.read("spectrum", "include_effective", sp.include_effective, parse_bool);

  auto& fi = c.fidelity;
  r.read("fidelity", "g_values", fi.g_values, parse_list);
  r.read("fidelity", "initial", fi.initial, parse_fock);
  r.read("fidelity", "t_final", fi.t_final, positive(parse_double));
  r.read("fidelity", "n_samples", fi.n_samples, cutoff);

  auto& tr = c.trajectory;
  const auto count = [](const std::string& s) { return static_cast<std::size_t>(positive(parse_integer)(s)); };
  r.read("trajectory", "initial", tr.initial, parse_fock);
  r.read("trajectory", "n_traj", tr.n_traj, count);
  r.read("trajectory", "t_final", tr.t_final,
         [](const std::string& s) -> std::optional<double> {
           if (s == "auto") return std::nullopt;
           return positive(parse_double)(s);
         });
  r.read("trajectory", "dt", tr.dt, [](const std::string& s) -> std::optional<double> {
    if (s == "auto") return std::nullopt;
    return positive(parse_double)(s);
  });
  r.read("trajectory", "sample_every", tr.sample_every, cutoff);
  r.read("trajectory", "frame", tr.frame, frame_from_string);
  r.read("trajectory", "unraveling", tr.unraveling, unraveling_from_string);
  r.read("trajectory", "export_traces", tr.export_traces, [](const std::string& s) {
    const long long v = parse_integer(s);
    if (v < 0) throw std::invalid_argument("must be >= 0");
    return static_cast<std::size_t>(v);
  });

  auto& em = c.emission;
  r.read("emission", "ratios", em.ratios, [](const std::string& s) {
    auto v = parse_list(s);
    for (double x : v)
      if (!(x > 0)) throw std::invalid_argument("ratios must be > 0");
    return v;
  });
  r.read("emission", "gamma_a", em.gamma_a, positive(parse_double));
  r.read("emission", "n_traj", em.n_traj, count);
  r.read("emission", "baselines", em.baselines, parse_bool);
  r.read("emission", "n_baseline", em.n_baseline, count);
  r.read("emission", "bin_width", em.bin_width, positive(parse_double));

  auto& q = c.qfi;
  r.read("qfi", "omega_lo", q.omega_lo, positive(parse_double));
  r.read("qfi", "omega_hi", q.omega_hi, positive(parse_double));
  r.read("qfi", "n_samples", q.n_samples, cutoff);
  r.read("qfi", "t_f", q.t_f, [](const std::string& s) -> std::optional<double> {
    if (s == "auto") return std::nullopt;
    return positive(parse_double)(s);
  });
  r.read("qfi", "delta", q.delta, positive(parse_double));
  r.read("qfi", "initial", q.initial, parse_fock);
  r.read("qfi", "edge_offset", q.edge_offset, non_negative_double);

  r.reject_unknown();

  try {
    c.model.validate();
    (void)c.space();
  } catch (const std::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  const FockSpace s = c.space();
  for (const auto& [field, st] : {std::pair{"fidelity.initial", fi.initial},
                                  std::pair{"trajectory.initial", tr.initial}, std::pair{"qfi.initial", q.initial}}) {
    if (!s.contains(st)) {
      throw config_error(std::string("config: field '") + field + "': state " + to_string(st) +
                         " outside the truncated space");
    }
  }
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw config_error("config: cannot read '" + path + "': " + e.what());
  }
  return parse_config(tree);
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return parse_config(tree);
}

/// Replaces `auto` entries by the values a run will use.
inline void resolve_defaults(ExperimentConfig& c) {
  if (c.kind == ExperimentKind::trajectory) {
    auto& t = c.trajectory;
    if (!t.t_final) {
      const double slowest = std::min(c.model.gamma_a, c.model.gamma_b);
      if (!(slowest > 0)) {
        throw config_error("config: field 'trajectory.t_final' is required when a decay rate is 0");
      }
      t.t_final = 5.0 / slowest;
    }
    if (!t.dt) {
      if (t.frame == Frame::exact) throw config_error("config: field 'trajectory.dt' is required for the exact frame");
      if (!(c.model.g > 0)) throw config_error("config: field 'trajectory.dt' is required when g = 0");
      t.dt = default_rotating_dt(c.model);
    }
  }
  if (c.kind == ExperimentKind::qfi && !c.qfi.t_f) {
    if (!(c.model.g > 0)) throw config_error("config: field 'qfi.t_f' is required when g = 0");
    c.qfi.t_f = std::numbers::pi / effective_rabi(c.model);
  }
}

/// The fully resolved configuration (defaults filled in, `auto` values and
/// `omega_c = resonant` replaced by numbers) as INI text. Feeding it back to
/// parse_config reproduces the run.
inline std::string to_ini(const ExperimentConfig& c) {
  using detail::format_double;
  const auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s;
  };
  const auto fock = [](const FockState& f) { return std::to_string(f.photons) + "," + std::to_string(f.phonons); };

  std::ostringstream os;
  os << "; resolved configuration; all quantities in units of omega_m\n";
  os << "[experiment]\nkind = " << to_string(c.kind) << "\n";
  if (!c.name.empty()) os << "name = " << c.name << "\n";
  os << "master_seed = " << c.master_seed << "\nworkers = " << c.workers << "\n\n";
  os << "[model]\ng = " << format_double(c.model.g) << "\nomega_c = " << format_double(c.model.omega_c)
     << "\ngamma_a = " << format_double(c.model.gamma_a) << "\ngamma_b = " << format_double(c.model.gamma_b)
     << "\n\n";
  os << "[space]\nn_cav = " << c.n_cav << "\nn_mech = " << c.n_mech << "\n";

  switch (c.kind) {
    case ExperimentKind::spectrum:
      os << "\n[spectrum]\nratio_lo = " << format_double(c.spectrum.ratio_lo)
         << "\nratio_hi = " << format_double(c.spectrum.ratio_hi) << "\nn_samples = " << c.spectrum.n_samples
         << "\ninclude_effective = " << (c.spectrum.include_effective ? "true" : "false") << "\n";
      break;
    case ExperimentKind::fidelity:
      os << "\n[fidelity]\n";
      if (!c.fidelity.g_values.empty()) os << "g_values = " << list(c.fidelity.g_values) << "\n";
      os << "initial = " << fock(c.fidelity.initial) << "\nt_final = " << format_double(c.fidelity.t_final)
         << "\nn_samples = " << c.fidelity.n_samples << "\n";
      break;
    case ExperimentKind::trajectory: {
      const auto& t = c.trajectory;
      os << "\n[trajectory]\ninitial = " << fock(t.initial) << "\nn_traj = " << t.n_traj;
      if (t.t_final) os << "\nt_final = " << format_double(*t.t_final);
      if (t.dt) os << "\ndt = " << format_double(*t.dt);
      os << "\nsample_every = " << t.sample_every << "\nframe = " << to_string(t.frame)
         << "\nunraveling = " << to_string(t.unraveling) << "\nexport_traces = " << t.export_traces << "\n";
      break;
    }
    case ExperimentKind::emission: {
      const auto& e = c.emission;
      os << "\n[emission]\nratios = " << list(e.ratios) << "\ngamma_a = " << format_double(e.gamma_a)
         << "\nn_traj = " << e.n_traj << "\nbaselines = " << (e.baselines ? "true" : "false")
         << "\nn_baseline = " << e.n_baseline << "\nbin_width = " << format_double(e.bin_width) << "\n";
      break;
    }
    case ExperimentKind::qfi: {
      const auto& q = c.qfi;
      os << "\n[qfi]\nomega_lo = " << format_double(q.omega_lo) << "\nomega_hi = " << format_double(q.omega_hi)
         << "\nn_samples = " << q.n_samples;
      if (q.t_f) os << "\nt_f = " << format_double(*q.t_f);
      os << "\ndelta = " << format_double(q.delta) << "\ninitial = " << fock(q.initial)
         << "\nedge_offset = " << format_double(q.edge_offset) << "\n";
      break;
    }
  }
  return os.str();
}

}  // namespace dce
