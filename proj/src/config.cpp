// Copyright 2026 The fumes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fumes/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fumes {

namespace pt = boost::property_tree;

namespace {

std::string join(const std::vector<std::string>& errors) {
  std::string msg = "invalid experiment config:";
  for (const auto& e : errors) msg += "\n  - " + e;
  return msg;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"kind", "seed", "method", "r_max", "trajectories", "hamiltonians", "output", "format", "workers"}},
      {"system", {"type", "d", "N", "L", "J", "U"}},
      {"target", {"type", "fock", "z"}},
      {"measurement", {"granularity"}},
      {"protocol",
       {"grid_points", "t_max_factor", "t_max", "refine_iters", "max_rounds", "rel_tol", "wait_policy",
        "bang_bang_sweeps"}},
  };
  return keys;
}

template <class T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

template <class E>
std::optional<E> parse_enum(const std::string& text, const std::map<std::string, E>& names) {
  const auto it = names.find(text);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

template <class E>
std::string enum_name(E value, const std::map<std::string, E>& names) {
  for (const auto& [k, v] : names) {
    if (v == value) return k;
  }
  return "?";
}

const std::map<std::string, ExperimentKind> kKinds = {
    {"fumes", ExperimentKind::fumes},           {"mum", ExperimentKind::mum},
    {"medo", ExperimentKind::medo},             {"bangbang", ExperimentKind::bangbang},
    {"macroscopicity", ExperimentKind::macroscopicity}, {"table1", ExperimentKind::table1},
    {"reachability", ExperimentKind::reachability},
};
const std::map<std::string, SystemKind> kSystems = {{"gue", SystemKind::gue},
                                                    {"bose-hubbard", SystemKind::bose_hubbard}};
const std::map<std::string, TargetKind> kTargets = {
    {"fock", TargetKind::fock}, {"z", TargetKind::z_value}, {"random", TargetKind::random}};
const std::map<std::string, Granularity> kGranularities = {{"binary", Granularity::binary},
                                                           {"subspace", Granularity::subspace},
                                                           {"granular", Granularity::granular},
                                                           {"parity", Granularity::parity}};
const std::map<std::string, Method> kMethods = {{"exact", Method::exact}, {"montecarlo", Method::monte_carlo}};
const std::map<std::string, OutputFormat> kFormats = {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
const std::map<std::string, WaitPolicy> kPolicies = {{"optimized", WaitPolicy::optimized},
                                                     {"uniform_random", WaitPolicy::uniform_random}};

class Reader {
 public:
  Reader(const pt::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  template <class T>
  void number(const std::string& section, const std::string& key, T& out) {
    const auto text = raw(section, key);
    if (!text) return;
    if (const auto v = parse_number<T>(*text)) {
      out = *v;
    } else {
      errors_.push_back(section + "." + key + ": '" + *text + "' is not a valid number");
    }
  }

  template <class E>
  void choice(const std::string& section, const std::string& key, const std::map<std::string, E>& names, E& out) {
    const auto text = raw(section, key);
    if (!text) return;
    if (const auto v = parse_enum(*text, names)) {
      out = *v;
    } else {
      std::string allowed;
      for (const auto& [k, _] : names) allowed += (allowed.empty() ? "" : ", ") + k;
      errors_.push_back(section + "." + key + ": '" + *text + "' is not one of {" + allowed + "}");
    }
  }

 private:
  const pt::ptree& tree_;
  std::vector<std::string>& errors_;
};

std::optional<Occupation> parse_occupation(const std::string& text) {
  Occupation n;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) return std::nullopt;
    const auto v = parse_number<int>(item.substr(first, last - first + 1));
    if (!v || *v < 0) return std::nullopt;
    n.push_back(*v);
  }
  if (n.empty()) return std::nullopt;
  return n;
}

std::optional<HalfInteger> parse_half_integer(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    const auto v = parse_number<long>(text);
    if (!v) return std::nullopt;
    return HalfInteger::from_int(*v);
  }
  if (text.substr(slash + 1) != "2") return std::nullopt;
  const auto v = parse_number<long>(text.substr(0, slash));
  if (!v) return std::nullopt;
  return HalfInteger::from_twice(*v);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// macroscopicity and table1 ignore the target section.
bool uses_target(ExperimentKind k) { return k != ExperimentKind::macroscopicity && k != ExperimentKind::table1; }

void check_combinations(const ExperimentConfig& c, std::vector<std::string>& errors) {
  const bool bh = c.system == SystemKind::bose_hubbard;
  if (c.system == SystemKind::gue && c.gue_dim < 2) errors.push_back("system.d: GUE dimension must be >= 2");
  if (bh) {
    if (c.bose_hubbard.L < 1) errors.push_back("system.L: must be >= 1");
    if (c.bose_hubbard.N < 0) errors.push_back("system.N: must be >= 0");
    if (c.bose_hubbard.J < 0.0 || c.bose_hubbard.U < 0.0 || (c.bose_hubbard.J == 0.0 && c.bose_hubbard.U == 0.0)) {
      errors.push_back("system.J/U: need J >= 0, U >= 0, not both zero");
    }
  }
  if (c.granularity == Granularity::parity && !bh) errors.push_back("measurement.granularity: parity requires a bose-hubbard system");
  if (c.granularity == Granularity::subspace && !bh) errors.push_back("measurement.granularity: subspace requires a bose-hubbard system");
  if (c.granularity == Granularity::subspace && c.target != TargetKind::fock) {
    errors.push_back("measurement.granularity: subspace requires a fock target");
  }
  if ((c.granularity == Granularity::parity) != (c.target == TargetKind::z_value)) {
    errors.push_back("target.type: z targets go with parity granularity and only with it");
  }
  if (c.target == TargetKind::fock && uses_target(c.kind)) {
    if (!bh) {
      errors.push_back("target.type: fock targets require a bose-hubbard system");
    } else {
      int sum = 0;
      for (int v : c.fock_target) sum += v;
      if (static_cast<int>(c.fock_target.size()) != c.bose_hubbard.L || sum != c.bose_hubbard.N) {
        errors.push_back("target.fock: tuple " + to_string(c.fock_target) + " does not have L = " +
                         std::to_string(c.bose_hubbard.L) + " sites and N = " + std::to_string(c.bose_hubbard.N) +
                         " bosons");
      }
    }
  }
  if (c.target == TargetKind::random && bh) errors.push_back("target.type: random targets are for gue systems");
  const bool needs_bh = c.kind == ExperimentKind::bangbang || c.kind == ExperimentKind::macroscopicity ||
                        c.kind == ExperimentKind::table1;
  if (needs_bh && !bh) errors.push_back("experiment.kind: " + to_string(c.kind) + " requires a bose-hubbard system");
  if (c.kind == ExperimentKind::bangbang && c.target != TargetKind::fock) {
    errors.push_back("experiment.kind: bangbang requires a fock target");
  }
  if (c.kind == ExperimentKind::fumes && c.method == Method::exact) {
    if (c.granularity == Granularity::subspace || c.granularity == Granularity::parity) {
      errors.push_back("experiment.method: exact curves need granular or binary measurements; use montecarlo");
    }
    if (c.granularity == Granularity::binary && c.protocol.wait_policy == WaitPolicy::uniform_random) {
      errors.push_back("experiment.method: exact binary curves need the optimized wait policy");
    }
  }
  if (c.r_max < 1) errors.push_back("experiment.r_max: must be >= 1");
  if (c.trajectories < 1) errors.push_back("experiment.trajectories: must be >= 1");
  if (c.hamiltonians < 1) errors.push_back("experiment.hamiltonians: must be >= 1");
  if (c.workers < 1) errors.push_back("experiment.workers: must be >= 1");
  try {
    c.protocol.validate();
  } catch (const ValidationError& e) {
    errors.push_back(std::string("protocol: ") + e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : ValidationError(join(errors)), errors_(std::move(errors)) {}

std::string to_string(ExperimentKind k) { return enum_name(k, kKinds); }
std::string to_string(Granularity g) { return enum_name(g, kGranularities); }
std::string to_string(OutputFormat f) { return enum_name(f, kFormats); }

OutputFormat parse_output_format(const std::string& s) {
  const auto f = parse_enum(s, kFormats);
  if (!f) throw ValidationError("unknown output format '" + s + "' (expected csv or json)");
  return *f;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError({std::string("malformed INI: ") + e.what()});
  }

  std::vector<std::string> errors;
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      errors.push_back("unknown section [" + section + "]");
      continue;
    }
    for (const auto& [key, _] : body) {
      if (!it->second.count(key)) errors.push_back("unknown key " + section + "." + key);
    }
  }

  ExperimentConfig c;
  Reader r(tree, errors);
  if (!r.raw("experiment", "kind")) errors.push_back("experiment.kind is required");
  r.choice("experiment", "kind", kKinds, c.kind);
  if (!r.raw("experiment", "seed")) errors.push_back("experiment.seed is required (no wall-clock seeding)");
  r.number("experiment", "seed", c.seed);
  r.choice("experiment", "method", kMethods, c.method);
  r.number("experiment", "r_max", c.r_max);
  r.number("experiment", "trajectories", c.trajectories);
  r.number("experiment", "hamiltonians", c.hamiltonians);
  if (const auto out = r.raw("experiment", "output")) c.output = *out;
  r.choice("experiment", "format", kFormats, c.format);
  r.number("experiment", "workers", c.workers);

  if (!r.raw("system", "type")) errors.push_back("system.type is required");
  r.choice("system", "type", kSystems, c.system);
  r.number("system", "d", c.gue_dim);
  r.number("system", "N", c.bose_hubbard.N);
  r.number("system", "L", c.bose_hubbard.L);
  r.number("system", "J", c.bose_hubbard.J);
  r.number("system", "U", c.bose_hubbard.U);

  c.target = c.system == SystemKind::gue ? TargetKind::random : TargetKind::fock;
  r.choice("target", "type", kTargets, c.target);
  if (const auto f = r.raw("target", "fock")) {
    if (const auto n = parse_occupation(*f)) {
      c.fock_target = *n;
    } else {
      errors.push_back("target.fock: '" + *f + "' is not a comma-separated list of occupations");
    }
  } else if (c.target == TargetKind::fock && uses_target(c.kind)) {
    errors.push_back("target.fock is required for fock targets");
  }
  if (const auto z = r.raw("target", "z")) {
    if (const auto v = parse_half_integer(*z)) {
      c.z_target = *v;
    } else {
      errors.push_back("target.z: '" + *z + "' is not an integer or half-integer (k/2)");
    }
  } else if (c.target == TargetKind::z_value) {
    errors.push_back("target.z is required for z targets");
  }

  r.choice("measurement", "granularity", kGranularities, c.granularity);

  r.number("protocol", "grid_points", c.protocol.grid_points);
  r.number("protocol", "t_max_factor", c.protocol.t_max_factor);
  r.number("protocol", "t_max", c.protocol.t_max);
  r.number("protocol", "refine_iters", c.protocol.refine_iters);
  r.number("protocol", "max_rounds", c.protocol.max_rounds);
  r.number("protocol", "rel_tol", c.protocol.rel_tol);
  r.choice("protocol", "wait_policy", kPolicies, c.protocol.wait_policy);
  r.number("protocol", "bang_bang_sweeps", c.protocol.bang_bang_sweeps);
  c.protocol.workers = c.workers;

  if (errors.empty()) check_combinations(c, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c, bool include_runtime) {
  std::ostringstream o;
  o << "[experiment]\n";
  o << "kind = " << to_string(c.kind) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "method = " << enum_name(c.method, kMethods) << "\n";
  o << "r_max = " << c.r_max << "\n";
  o << "trajectories = " << c.trajectories << "\n";
  o << "hamiltonians = " << c.hamiltonians << "\n";
  if (include_runtime) {
    if (!c.output.empty()) o << "output = " << c.output << "\n";
    o << "format = " << to_string(c.format) << "\n";
    o << "workers = " << c.workers << "\n";
  }
  o << "\n[system]\n";
  o << "type = " << enum_name(c.system, kSystems) << "\n";
  if (c.system == SystemKind::gue) {
    o << "d = " << c.gue_dim << "\n";
  } else {
    o << "N = " << c.bose_hubbard.N << "\n";
    o << "L = " << c.bose_hubbard.L << "\n";
    o << "J = " << format_double(c.bose_hubbard.J) << "\n";
    o << "U = " << format_double(c.bose_hubbard.U) << "\n";
  }
  o << "\n[target]\n";
  o << "type = " << enum_name(c.target, kTargets) << "\n";
  if (!c.fock_target.empty()) {
    o << "fock = ";
    for (std::size_t i = 0; i < c.fock_target.size(); ++i) o << (i ? "," : "") << c.fock_target[i];
    o << "\n";
  }
  if (c.target == TargetKind::z_value) o << "z = " << c.z_target.str() << "\n";
  o << "\n[measurement]\n";
  o << "granularity = " << to_string(c.granularity) << "\n";
  o << "\n[protocol]\n";
  o << "grid_points = " << c.protocol.grid_points << "\n";
  o << "t_max_factor = " << format_double(c.protocol.t_max_factor) << "\n";
  o << "t_max = " << format_double(c.protocol.t_max) << "\n";
  o << "refine_iters = " << c.protocol.refine_iters << "\n";
  o << "max_rounds = " << c.protocol.max_rounds << "\n";
  o << "rel_tol = " << format_double(c.protocol.rel_tol) << "\n";
  o << "wait_policy = " << enum_name(c.protocol.wait_policy, kPolicies) << "\n";
  o << "bang_bang_sweeps = " << c.protocol.bang_bang_sweeps << "\n";
  return o.str();
}

}  // namespace fumes
