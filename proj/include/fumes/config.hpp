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


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fumes/errors.hpp"
#include "fumes/hamiltonians.hpp"
#include "fumes/measurement.hpp"
#include "fumes/protocols.hpp"

namespace fumes {

enum class ExperimentKind { fumes, mum, medo, bangbang, macroscopicity, table1, reachability };
enum class SystemKind { gue, bose_hubbard };
enum class TargetKind { fock, z_value, random };
enum class Granularity { binary, subspace, granular, parity };
enum class Method { exact, monte_carlo };
enum class OutputFormat { csv, json };

/// Every problem found while parsing, not just the first.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// An experiment as read from an INI file:
///
///   [experiment]  kind, seed, method, r_max, trajectories, hamiltonians,
///                 output, format, workers
///   [system]      type = gue | bose-hubbard, d, N, L, J, U
///   [target]      type = fock | z | random, fock = 0,2,0,2, z = 3 or 3/2
///   [measurement] granularity = binary | subspace | granular | parity
///   [protocol]    grid_points, t_max_factor, t_max, refine_iters,
///                 max_rounds, rel_tol, wait_policy, bang_bang_sweeps
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::fumes;
  SystemKind system = SystemKind::gue;
  Index gue_dim = 12;
  BoseHubbardParams bose_hubbard{1.0, 1.0, 6, 6};
  TargetKind target = TargetKind::random;
  Occupation fock_target;
  HalfInteger z_target;
  Granularity granularity = Granularity::granular;
  Method method = Method::exact;
  ProtocolConfig protocol;
  int r_max = 100;
  std::size_t trajectories = 1000;
  std::size_t hamiltonians = 200;
  std::uint64_t seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::csv;
  int workers = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// INI text that parse_config maps back to an equal config. With
/// `include_runtime` false, output path, format and worker count are left
/// out; that form is what result metadata echoes.
std::string serialize_config(const ExperimentConfig& cfg, bool include_runtime = true);

std::string to_string(ExperimentKind k);
std::string to_string(Granularity g);
std::string to_string(OutputFormat f);
OutputFormat parse_output_format(const std::string& s);

}  // namespace fumes
