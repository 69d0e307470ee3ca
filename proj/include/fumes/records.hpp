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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fumes/core.hpp"

namespace fumes {

struct TrajectoryStep {
  double wait_time = 0.0;  ///< 0 for protocols without free evolution (MUM)
  Index outcome_index = 0;
  double success_probability = 0.0;  ///< Born probability of the target at this measurement
};

enum class TrajectoryStatus { success, not_reached, stuck };

struct TrajectoryRecord {
  std::vector<TrajectoryStep> steps;
  std::optional<int> success_round;  ///< 1-based measurement count
  TrajectoryStatus status = TrajectoryStatus::not_reached;
  std::uint64_t seed = 0;
};

/// Cumulative success probability p(r), r = 1..r_max, stored at p[r - 1].
struct SuccessCurve {
  std::vector<double> p;
  std::vector<double> stderr_p;  ///< zero for exact curves
  std::size_t n_trajectories = 0;
  std::map<std::string, std::string> metadata;

  int r_max() const { return static_cast<int>(p.size()); }
  double at(int r) const { return p.at(static_cast<std::size_t>(r - 1)); }
  double stderr_at(int r) const { return stderr_p.at(static_cast<std::size_t>(r - 1)); }
  /// Smallest r with p(r) >= level.
  std::optional<int> first_round_reaching(double level) const;
};

}  // namespace fumes
