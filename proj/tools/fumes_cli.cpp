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


// Command-line driver: run a config file, reproduce a figure, or check
// reachability. Exit codes: 0 success, 1 other failure, 2 validation error,
// 3 capacity error.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fumes/errors.hpp"
#include "fumes/harness.hpp"

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trajectories;
  std::string out;
  std::optional<std::string> format;
  std::optional<int> workers;
  bool full_scale = false;
  bool timing = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--trajectories", f.trajectories, "Trajectories, samples or Hamiltonians per ensemble");
  app->add_option("--out", f.out, "Output path (data file; metadata goes to <path>.meta.json)");
  app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--full-scale", f.full_scale, "100000 Hamiltonians or 10000 trajectories per ensemble (slow)");
  app->add_flag("--timing", f.timing, "Record wall time in the metadata (breaks byte-identical reruns)");
}

void write(fumes::ResultTable table, const std::string& out, fumes::OutputFormat format, double seconds, bool timing) {
  if (timing) table.metadata["wall_time_s"] = seconds;
  if (out.empty()) {
    std::cout << (format == fumes::OutputFormat::csv ? fumes::to_csv(table) : fumes::to_json(table));
    return;
  }
  fumes::emit(table, format, out);
  std::cerr << "wrote " << out << " and " << out << ".meta.json\n";
}

fumes::ExperimentConfig load_with_overrides(const std::string& path, const CommonFlags& f) {
  fumes::ExperimentConfig cfg = fumes::load_config(path);
  if (f.seed) cfg.seed = *f.seed;
  if (f.trajectories) {
    cfg.trajectories = *f.trajectories;
    cfg.hamiltonians = *f.trajectories;
  }
  if (!f.out.empty()) cfg.output = f.out;
  if (f.format) cfg.format = fumes::parse_output_format(*f.format);
  if (f.workers) {
    cfg.workers = *f.workers;
    cfg.protocol.workers = *f.workers;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-driven state engineering experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "INI config path")->required()->check(CLI::ExistingFile);
  add_common(run, run_flags);

  CommonFlags check_flags;
  std::string check_path;
  auto* check = app.add_subcommand("check", "Reachability report for the system and scheme of a config file");
  check->add_option("config", check_path, "INI config path")->required()->check(CLI::ExistingFile);
  add_common(check, check_flags);

  struct Repro {
    const char* name;
    fumes::Figure fig;
    CLI::App* cmd = nullptr;
    CommonFlags flags;
  };
  Repro repros[] = {{"reproduce-fig2a", fumes::Figure::fig2a},
                    {"reproduce-fig2b", fumes::Figure::fig2b},
                    {"reproduce-fig3e", fumes::Figure::fig3e},
                    {"reproduce-fig4", fumes::Figure::fig4},
                    {"reproduce-table1", fumes::Figure::table1}};
  for (auto& r : repros) {
    r.cmd = app.add_subcommand(r.name, std::string("Regenerate the data behind ") + (r.name + 10));
    add_common(r.cmd, r.flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors count as invalid input; --help exits 0
    return app.exit(e) == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    if (*run || *check) {
      const CommonFlags& f = *run ? run_flags : check_flags;
      fumes::ExperimentConfig cfg = load_with_overrides(*run ? config_path : check_path, f);
      if (*check) cfg.kind = fumes::ExperimentKind::reachability;
      const fumes::ResultTable table = fumes::run_experiment(cfg);
      write(table, cfg.output, cfg.format, elapsed(), f.timing);
      return 0;
    }
    for (auto& r : repros) {
      if (!*r.cmd) continue;
      fumes::ReproduceOptions opt;
      if (r.flags.seed) opt.seed = *r.flags.seed;
      opt.trajectories = r.flags.trajectories;
      opt.workers = r.flags.workers.value_or(1);
      opt.full_scale = r.flags.full_scale;
      const auto format = fumes::parse_output_format(r.flags.format.value_or("csv"));
      write(fumes::reproduce(r.fig, opt), r.flags.out, format, elapsed(), r.flags.timing);
      return 0;
    }
  } catch (const fumes::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fumes::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
