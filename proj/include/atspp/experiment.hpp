// Copyright 2026 The Authors.
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

// Experiment harness: `key = value` configs, CSV rows, and the gap-family
// table.

#ifndef ATSPP_EXPERIMENT_HPP_
#define ATSPP_EXPERIMENT_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "atspp/exact.hpp"
#include "atspp/instance.hpp"
#include "atspp/patch.hpp"

namespace atspp {

struct ExperimentConfig {
  std::string family = "random";  // "gap" or "random"
  std::vector<int> sizes;         // r for gap, n for random
  std::vector<std::uint64_t> seeds{1};
  RandomModel model = RandomModel::kClosure;
  double tau = 0.25;
  int tries = 64;
  int exact_max_n = 16;
  int workers = 1;
  bool timing = false;  // wall_ms is left empty unless enabled
};

namespace internal {

inline std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// "2..5", "2,4,7", "1..3,9"; "1..0" is empty.
inline std::vector<long> ParseIntList(std::string_view text) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string item = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(ParseInt(item, "integer"));
    } else {
      const long lo = ParseInt(Trim(std::string_view(item).substr(0, dots)), "range start");
      const long hi = ParseInt(Trim(std::string_view(item).substr(dots + 2)), "range end");
      for (long v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  return out;
}

}  // namespace internal

inline ExperimentConfig ParseExperimentConfig(std::string_view text) {
  ExperimentConfig cfg;
  std::optional<std::vector<long>> r_list, n_list;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = internal::Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = internal::Trim(std::string_view(line).substr(0, eq));
    const std::string value = internal::Trim(std::string_view(line).substr(eq + 1));
    auto number = [&](const char* what) { return internal::ParseInt(value, what); };
    if (key == "family") {
      if (value != "gap" && value != "random") throw InputError("config: family must be gap or random");
      cfg.family = value;
    } else if (key == "r") {
      r_list = internal::ParseIntList(value);
    } else if (key == "n") {
      n_list = internal::ParseIntList(value);
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (long s : internal::ParseIntList(value)) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (key == "model") {
      cfg.model = ParseModel(value);
    } else if (key == "tau") {
      cfg.tau = internal::ParseDouble(value);
    } else if (key == "tries") {
      cfg.tries = static_cast<int>(number("tries"));
    } else if (key == "exact_max_n") {
      cfg.exact_max_n = static_cast<int>(number("exact_max_n"));
    } else if (key == "workers") {
      cfg.workers = std::max(1, static_cast<int>(number("workers")));
    } else if (key == "timing") {
      if (value != "on" && value != "off") throw InputError("config: timing must be on or off");
      cfg.timing = value == "on";
    } else {
      throw InputError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  const auto& sizes = cfg.family == "gap" ? r_list : n_list;
  if (!sizes) {
    throw InputError(std::string("config: family ") + cfg.family + " needs '" +
                     (cfg.family == "gap" ? "r" : "n") + " = ...'");
  }
  for (long v : *sizes) cfg.sizes.push_back(static_cast<int>(v));
  return cfg;
}

struct ExperimentRow {
  std::string instance;
  int n = 0;
  std::uint64_t seed = 0;
  double lp_value = 0;
  std::optional<double> opt;
  double path_cost = 0;
  double ratio_path_lp = 0;
  std::optional<double> ratio_opt_lp;
  double alpha_obs = 0;
  int tries = 0;
  std::optional<double> wall_ms;
};

inline constexpr std::string_view kCsvHeader =
    "instance,n,seed,lp_value,opt,path_cost,ratio_path_lp,ratio_opt_lp,alpha_obs,tries,wall_ms";

inline std::string CsvLine(const ExperimentRow& row) {
  auto num = [](double v) { return internal::FormatDouble(v); };
  auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  std::ostringstream out;
  out << row.instance << ',' << row.n << ',' << row.seed << ',' << num(row.lp_value) << ','
      << opt(row.opt) << ',' << num(row.path_cost) << ',' << num(row.ratio_path_lp) << ','
      << opt(row.ratio_opt_lp) << ',' << num(row.alpha_obs) << ',' << row.tries << ','
      << opt(row.wall_ms);
  return out.str();
}

struct ExperimentJob {
  std::string id;
  DirectedMetric inst;
  std::uint64_t seed;
};

inline std::vector<ExperimentJob> ExperimentJobs(const ExperimentConfig& cfg) {
  std::vector<ExperimentJob> jobs;
  for (int size : cfg.sizes) {
    for (std::uint64_t seed : cfg.seeds) {
      if (cfg.family == "gap") {
        jobs.push_back({"F_" + std::to_string(size), MakeGapInstance(size).metric, seed});
      } else {
        jobs.push_back({"random-" + std::string(ModelName(cfg.model)) + "-n" + std::to_string(size),
                        RandomInstance(size, seed, cfg.model), seed});
      }
    }
  }
  return jobs;
}

// Runs the pipeline on one job and re-validates the result before it is
// written.
inline ExperimentRow RunExperimentJob(const ExperimentJob& job, const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RoundOptions opts;
  opts.tau = cfg.tau;
  opts.seed = job.seed;
  opts.max_tries = cfg.tries;
  const RoundReport rep = Round(job.inst, opts);
  ExperimentRow row;
  row.instance = job.id;
  row.n = job.inst.n();
  row.seed = job.seed;
  row.lp_value = rep.result.lp_value;
  row.path_cost = rep.result.cost;
  row.ratio_path_lp = rep.result.ratio;
  row.alpha_obs = rep.draw.thinness.alpha_obs;
  row.tries = rep.draw.tries;
  if (job.inst.n() <= cfg.exact_max_n) {
    row.opt = HeldKarp(job.inst).cost;
    row.ratio_opt_lp = row.lp_value > 0 ? *row.opt / row.lp_value : 1.0;
  }
  if (!IsHamiltonianPath(rep.result.path, job.inst) ||
      std::abs(PathCost(rep.result.path, job.inst) - row.path_cost) > 1e-9 * std::max(1.0, row.path_cost)) {
    throw ValidationError(job.id + ": invalid path");
  }
  if (row.ratio_path_lp < 1 - 1e-6) throw ValidationError(job.id + ": path below LP value");
  if (row.ratio_opt_lp && *row.ratio_opt_lp < 1 - 1e-6) throw ValidationError(job.id + ": optimum below LP value");
  if (row.opt && row.path_cost < *row.opt - 1e-6) throw ValidationError(job.id + ": path below optimum");
  if (cfg.timing) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

// Rows ordered by (instance, seed) as listed in the config, regardless of
// which worker finishes first.
inline std::vector<ExperimentRow> RunExperiment(const ExperimentConfig& cfg) {
  const auto jobs = ExperimentJobs(cfg);
  std::vector<ExperimentRow> rows(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        rows[i] = RunExperimentJob(jobs[i], cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(cfg.workers, std::max<std::size_t>(1, jobs.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

inline std::string ExperimentCsv(const std::vector<ExperimentRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : rows) out += CsvLine(row) + '\n';
  return out;
}

struct GapDemoRow {
  int r = 0;
  int n = 0;
  double lp_value = 0;
  double point_cost = 0;  // cost of the half-integral point
  std::optional<double> opt;
  std::optional<double> ratio;  // opt / lp_value
  double lower_bound = 0;       // (2r - 1) / (r + 1)
};

inline constexpr int kGapDemoExactMaxR = 7;

inline std::vector<GapDemoRow> GapDemo(const std::vector<int>& rs) {
  std::vector<GapDemoRow> out;
  for (int r : rs) {
    if (r < 2) throw InputError("gap demo needs r >= 2");
    const GapInstance g = MakeGapInstance(r);
    GapDemoRow row;
    row.r = r;
    row.n = g.metric.n();
    row.lp_value = SolveSubtourLp(g.metric).value;
    row.point_cost = g.metric.CostOf(g.point);
    row.lower_bound = (2.0 * r - 1) / (r + 1);
    if (r <= kGapDemoExactMaxR) {
      row.opt = HeldKarp(g.metric).cost;
      row.ratio = *row.opt / row.lp_value;
    }
    out.push_back(row);
  }
  return out;
}

inline std::string FormatGapDemo(const std::vector<GapDemoRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(4) << "r" << std::setw(5) << "n" << std::setw(12) << "lp_value"
      << std::setw(12) << "point_cost" << std::setw(8) << "opt" << std::setw(12) << "opt/lp"
      << "(2r-1)/(r+1)\n";
  bool omitted = false;
  for (const auto& row : rows) {
    out << std::setw(4) << row.r << std::setw(5) << row.n << std::setw(12)
        << internal::FormatDouble(row.lp_value) << std::setw(12)
        << internal::FormatDouble(row.point_cost) << std::setw(8)
        << (row.opt ? internal::FormatDouble(*row.opt) : "-") << std::setw(12)
        << (row.ratio ? internal::FormatDouble(*row.ratio) : "-")
        << internal::FormatDouble(row.lower_bound) << '\n';
    omitted = omitted || !row.opt;
  }
  if (omitted) {
    out << "# exact optimum omitted for r > " << kGapDemoExactMaxR << " (n > 16)\n";
  }
  return out.str();
}

}  // namespace atspp

#endif  // ATSPP_EXPERIMENT_HPP_
