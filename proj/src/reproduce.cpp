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


#include <cmath>
#include <numbers>

#include "fumes/errors.hpp"
#include "fumes/harness.hpp"

namespace fumes {

namespace {

using Json = nlohmann::ordered_json;

const Occupation kFockTarget{0, 2, 0, 2, 0, 2};

std::size_t pick(const ReproduceOptions& opt, std::size_t desk, std::size_t full) {
  if (opt.trajectories) return *opt.trajectories;
  return opt.full_scale ? full : desk;
}

std::uint64_t series_seed(const ReproduceOptions& opt, std::uint64_t index) {
  return derive_seed(opt.seed, index, streams::kSeries);
}

ExperimentConfig gue_config(ExperimentKind kind, Index d, std::size_t hamiltonians, std::uint64_t seed,
                            const ReproduceOptions& opt) {
  ExperimentConfig c;
  c.kind = kind;
  c.system = SystemKind::gue;
  c.gue_dim = d;
  c.target = TargetKind::random;
  c.granularity = Granularity::granular;
  c.method = Method::exact;
  c.hamiltonians = hamiltonians;
  c.r_max = 100;
  c.seed = seed;
  c.workers = opt.workers;
  c.protocol.workers = opt.workers;
  return c;
}

/// N = L = 6 with J = 1 and U = 1 / ratio, waiting times searched on (0, 4/J].
ExperimentConfig bose_hubbard_config(ExperimentKind kind, double j_over_u, std::uint64_t seed,
                                     const ReproduceOptions& opt) {
  ExperimentConfig c;
  c.kind = kind;
  c.system = SystemKind::bose_hubbard;
  c.bose_hubbard = BoseHubbardParams{1.0, 1.0 / j_over_u, 6, 6};
  c.target = TargetKind::fock;
  c.fock_target = kFockTarget;
  c.granularity = Granularity::granular;
  c.method = Method::exact;
  c.protocol.t_max = 4.0;
  c.protocol.grid_points = 1024;
  c.seed = seed;
  c.workers = opt.workers;
  c.protocol.workers = opt.workers;
  return c;
}

void append_curve(ResultTable& out, const std::string& series, const ResultTable& t, const std::string& p_column) {
  std::size_t r_col = 0;
  std::size_t p_col = 0;
  std::size_t se_col = t.columns.size();
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == "r") r_col = i;
    if (t.columns[i] == p_column) p_col = i;
    if (t.columns[i] == "stderr") se_col = i;
  }
  for (const auto& row : t.rows) {
    const Cell se = se_col < row.size() ? row[se_col] : Cell(0.0);
    out.add_row({series, row[r_col], 1.0 - std::get<double>(row[p_col]), se});
  }
}

ResultTable curve_long_table() {
  ResultTable t;
  t.columns = {"series", "r", "one_minus_p", "stderr"};
  return t;
}

Json header(const char* figure, const ReproduceOptions& opt) {
  Json j;
  j["version"] = kVersion;
  j["figure"] = figure;
  j["seed"] = opt.seed;
  j["scale"] = opt.full_scale ? "full" : "desk";
  j["series"] = Json::object();
  return j;
}

ResultTable fig2a(const ReproduceOptions& opt) {
  ResultTable out = curve_long_table();
  Json meta = header("fig2a", opt);
  const std::size_t n12 = pick(opt, 200, 100000);
  const std::size_t n195 = pick(opt, 50, 100000);
  struct Series {
    const char* name;
    ExperimentKind kind;
    Index d;
    std::size_t n;
  };
  const Series list[] = {{"fumes_d12", ExperimentKind::fumes, 12, n12},
                         {"mum_d12", ExperimentKind::mum, 12, n12},
                         {"fumes_d195", ExperimentKind::fumes, 195, n195},
                         {"mum_d195", ExperimentKind::mum, 195, n195},
                         {"medo_d12", ExperimentKind::medo, 12, n12}};
  std::uint64_t k = 0;
  for (const auto& s : list) {
    const ResultTable t = run_experiment(gue_config(s.kind, s.d, s.n, series_seed(opt, k++), opt));
    append_curve(out, s.name, t, "p");
    meta["series"][s.name] = t.metadata;
  }
  out.metadata = std::move(meta);
  return out;
}

ResultTable fig2b(const ReproduceOptions& opt) {
  ResultTable out;
  out.columns = {"series", "d", "d_eff_over_d", "stderr", "hamiltonians"};
  Json meta = header("fig2b", opt);
  const std::size_t n = pick(opt, 200, 100000);
  const Index dims[] = {2, 4, 8, 12, 24, 50, 100};
  std::uint64_t k = 0;
  for (Index d : dims) {
    const ExperimentConfig c = gue_config(ExperimentKind::fumes, d, n, series_seed(opt, k++), opt);
    const GueEnsemble ens =
        run_gue_ensemble(d, n, Granularity::granular, c.protocol, Method::exact, c.r_max, 1, c.seed, opt.workers);
    double s = 0.0;
    for (double v : ens.d_eff_over_d) s += v;
    const double mean = s / static_cast<double>(ens.d_eff_over_d.size());
    double ss = 0.0;
    for (double v : ens.d_eff_over_d) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / static_cast<double>(ens.d_eff_over_d.size() - 1) /
                                static_cast<double>(ens.d_eff_over_d.size()));
    out.add_row({std::string("fumes"), static_cast<std::int64_t>(d), mean, se,
                 static_cast<std::int64_t>(ens.d_eff_over_d.size())});

    SuccessCurve mum;
    for (int r = 1; r <= c.r_max; ++r) {
      mum.p.push_back(mum_success_probability(r, static_cast<double>(d)));
      mum.stderr_p.push_back(0.0);
    }
    out.add_row({std::string("mum"), static_cast<std::int64_t>(d), *mean_effective_dimension(mum) / static_cast<double>(d),
                 0.0, std::int64_t{0}});
  }

  ExperimentConfig c = gue_config(ExperimentKind::fumes, 12, n, series_seed(opt, k++), opt);
  c.protocol.wait_policy = WaitPolicy::uniform_random;
  const GueEnsemble ens =
      run_gue_ensemble(12, n, Granularity::granular, c.protocol, Method::exact, c.r_max, 1, c.seed, opt.workers);
  const auto fit = mean_effective_dimension(ens.mean_curve);
  out.add_row({std::string("fumes_random_times"), std::int64_t{12}, fit ? *fit / 12.0 : std::nan(""), 0.0,
               static_cast<std::int64_t>(ens.accepted)});
  meta["d_eff_window"] = "r in [2, 20]";
  meta["fumes_rows"] = "mean over Hamiltonians of the per-Hamiltonian window average";
  meta["random_times_row"] = "window average of the ensemble-mean curve";
  out.metadata = std::move(meta);
  return out;
}

ResultTable fig3e(const ReproduceOptions& opt) {
  ResultTable out = curve_long_table();
  Json meta = header("fig3e", opt);
  std::uint64_t k = 0;

  ExperimentConfig c = bose_hubbard_config(ExperimentKind::fumes, 1.5, series_seed(opt, k++), opt);
  c.r_max = 1000;
  for (const auto& [name, g] : {std::pair{"granular", Granularity::granular}, std::pair{"binary", Granularity::binary}}) {
    c.granularity = g;
    const ResultTable t = run_experiment(c);
    append_curve(out, name, t, "p");
    meta["series"][name] = t.metadata;
  }

  c.granularity = Granularity::subspace;
  c.method = Method::monte_carlo;
  c.trajectories = pick(opt, 200, 10000);
  c.seed = series_seed(opt, k++);
  {
    const ResultTable t = run_experiment(c);
    append_curve(out, "subspace", t, "p");
    meta["series"]["subspace"] = t.metadata;
  }

  ExperimentConfig g = gue_config(ExperimentKind::fumes, 462, 1, series_seed(opt, k++), opt);
  g.r_max = 1000;
  {
    const ResultTable t = run_experiment(g);
    append_curve(out, "gue_d462", t, "p");
    meta["series"]["gue_d462"] = t.metadata;
  }

  ExperimentConfig b = bose_hubbard_config(ExperimentKind::bangbang, 1.5, series_seed(opt, k++), opt);
  b.r_max = static_cast<int>(pick(opt, 300, 1000));
  b.protocol.t_max = 2.0 * std::numbers::pi;
  {
    const ResultTable t = run_experiment(b);
    for (const auto& row : t.rows) out.add_row({std::string("bangbang"), row[0], row[2], 0.0});
    meta["series"]["bangbang"] = t.metadata;
  }
  out.metadata = std::move(meta);
  return out;
}

ResultTable fig4(const ReproduceOptions& opt) {
  ResultTable out = curve_long_table();
  Json meta = header("fig4", opt);
  std::uint64_t k = 0;
  for (const auto& [name, ratio] : {std::pair{"J/U=0.25", 0.25}, std::pair{"J/U=0.5", 0.5}, std::pair{"J/U=1.5", 1.5}}) {
    ExperimentConfig c = bose_hubbard_config(ExperimentKind::fumes, ratio, series_seed(opt, k++), opt);
    c.target = TargetKind::z_value;
    c.fock_target.clear();
    c.z_target = HalfInteger::from_int(3);
    c.granularity = Granularity::parity;
    c.method = Method::monte_carlo;
    c.protocol.grid_points = 512;
    c.r_max = 50;
    c.trajectories = pick(opt, 200, 10000);
    const ResultTable t = run_experiment(c);
    append_curve(out, name, t, "p");
    meta["series"][name] = t.metadata;
  }
  out.metadata = std::move(meta);
  return out;
}

ResultTable table1(const ReproduceOptions& opt) {
  ExperimentConfig c = bose_hubbard_config(ExperimentKind::table1, 1.5, series_seed(opt, 0), opt);
  c.trajectories = pick(opt, 10000, 100000);
  ResultTable t = run_experiment(c);
  t.metadata["figure"] = "table1";
  return t;
}

}  // namespace

ResultTable reproduce(Figure fig, const ReproduceOptions& opt) {
  if (opt.workers < 1) throw ValidationError("reproduce: workers must be >= 1");
  switch (fig) {
    case Figure::fig2a:
      return fig2a(opt);
    case Figure::fig2b:
      return fig2b(opt);
    case Figure::fig3e:
      return fig3e(opt);
    case Figure::fig4:
      return fig4(opt);
    case Figure::table1:
      return table1(opt);
  }
  throw ValidationError("unknown figure");
}

}  // namespace fumes
