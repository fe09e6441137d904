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

// atspp: command-line front end.
//
// An <instance> argument is a file in the text format, or one of the
// generated families:
//   gap:R                     the gap instance F_R
//   random:N:SEED[:MODEL]     RandomInstance(N, SEED, MODEL), MODEL closure
//                             (default) or euclidean
//
// Exit codes: 0 success, 1 bad input or usage, 2 a validation check failed,
// 3 an infeasibility was reported.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "CLI11.hpp"
#include "atspp/exact.hpp"
#include "atspp/experiment.hpp"
#include "atspp/lp.hpp"
#include "atspp/narrowcuts.hpp"
#include "atspp/patch.hpp"
#include "atspp/report.hpp"
#include "atspp/retree.hpp"
#include "atspp/sampler.hpp"

namespace {

using atspp::internal::FormatDouble;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw atspp::InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> SplitColon(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ':');) out.push_back(part);
  return out;
}

atspp::DirectedMetric LoadInstance(const std::string& spec, bool complete) {
  const auto parts = SplitColon(spec);
  if (parts.size() == 2 && parts[0] == "gap") {
    return atspp::MakeGapInstance(
               static_cast<int>(atspp::internal::ParseInt(parts[1], "gap index")))
        .metric;
  }
  if ((parts.size() == 3 || parts.size() == 4) && parts[0] == "random") {
    const auto model = parts.size() == 4 ? atspp::ParseModel(parts[3]) : atspp::RandomModel::kClosure;
    return atspp::RandomInstance(static_cast<int>(atspp::internal::ParseInt(parts[1], "size")),
                                 static_cast<std::uint64_t>(atspp::internal::ParseInt(parts[2], "seed")),
                                 model);
  }
  atspp::ParseOptions opts;
  opts.complete = complete;
  return atspp::ParseInstance(ReadFile(spec), opts);
}

void PrintChain(const atspp::NarrowCutChain& chain, const atspp::DirectedMetric& inst) {
  std::cout << "chain k=" << chain.k() << " tau=" << FormatDouble(chain.tau) << "\n";
  for (int i = 0; i < chain.k(); ++i) {
    std::cout << "U" << i + 1 << " " << atspp::FormatCut(chain.cuts[i], &inst) << "\n";
  }
  std::cout << "layer size vertices\n";
  for (std::size_t i = 0; i < chain.layers.size(); ++i) {
    std::cout << "L" << i + 1 << " " << chain.layers[i].size() << " "
              << atspp::FormatCut(chain.layers[i], &inst) << "\n";
  }
}

void PrintArcWeights(const atspp::ArcWeights& w, const atspp::DirectedMetric& inst) {
  for (const auto& [a, v] : w.Nonzeros()) {
    std::cout << inst.name(a.tail) << " " << inst.name(a.head) << " " << FormatDouble(v) << "\n";
  }
}

struct Pipeline {
  atspp::LpSolution<double> lp;
  atspp::NarrowCutChain chain;
  atspp::ReroutedVector rerouted;
  atspp::TreeCombination comb;
};

Pipeline Prepare(const atspp::DirectedMetric& inst, double tau, bool trees) {
  Pipeline p;
  p.lp = atspp::SolveSubtourLp(inst);
  p.chain = atspp::FindNarrowCuts(p.lp.x, inst.s(), inst.t(), tau);
  if (trees) {
    p.rerouted = atspp::BuildZ(p.lp.x, p.chain);
    p.comb = atspp::DecomposeTrees(p.rerouted, &inst);
  }
  return p;
}

int RunLp(const atspp::DirectedMetric& inst, double tol, bool rational) {
  atspp::LpOptions opts;
  opts.tol = tol;
  if (rational) {
    using Q = boost::multiprecision::cpp_rational;
    const auto sol = atspp::SolveSubtourLp<Q>(inst, opts);
    std::cout << "value " << sol.value << "\n";
    std::cout << "iterations " << sol.iterations << " cuts " << sol.active_cuts.size() << "\n";
    for (const auto& [a, v] : sol.x.Nonzeros()) {
      std::cout << inst.name(a.tail) << " " << inst.name(a.head) << " " << v << "\n";
    }
    return 0;
  }
  const auto sol = atspp::SolveSubtourLp(inst, opts);
  std::cout << "value " << FormatDouble(sol.value) << "\n";
  std::cout << "iterations " << sol.iterations << " cuts " << sol.active_cuts.size() << "\n";
  PrintArcWeights(sol.x, inst);
  return 0;
}

int RunCuts(const atspp::DirectedMetric& inst, double tau) {
  const auto lp = atspp::SolveSubtourLp(inst);
  atspp::NarrowCutStats stats;
  const auto chain = atspp::FindNarrowCuts(lp.x, inst.s(), inst.t(), tau, atspp::kDefaultLpTolerance, &stats);
  PrintChain(chain, inst);
  for (int i = 0; i + 1 < static_cast<int>(chain.layers.size()); ++i) {
    std::cout << "mass L" << i + 1 << "->L" << i + 2 << " "
              << FormatDouble(lp.x.Between(chain.layers[i], chain.layers[i + 1])) << "\n";
  }
  if (inst.n() <= 20) {
    const auto rep = atspp::VerifyStructure(lp.x, chain);
    std::cout << "structure " << (rep.ok() ? "ok" : "FAILED") << "\n";
    for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
    if (!rep.ok()) return 2;
  }
  return 0;
}

int RunReroute(const atspp::DirectedMetric& inst, double tau) {
  const Pipeline p = Prepare(inst, tau, true);
  const auto rep = atspp::VerifyZ(p.rerouted, p.lp.x, &p.comb);
  std::cout << "z nonzeros\n";
  PrintArcWeights(p.rerouted.z, inst);
  std::cout << "terms " << p.comb.terms.size() << "\n";
  std::cout << "weight_residual " << FormatDouble(rep.weight_residual) << "\n";
  std::cout << "max_boundary_marginal_residual " << FormatDouble(rep.max_boundary_marginal_residual) << "\n";
  std::cout << "max_marginal_excess " << FormatDouble(rep.max_marginal_excess) << "\n";
  std::cout << "max_cap_excess " << FormatDouble(rep.max_cap_excess) << "\n";
  std::cout << "z " << (rep.ok() ? "ok" : "FAILED") << "\n";
  for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
  return rep.ok() ? 0 : 2;
}

int RunSample(const atspp::DirectedMetric& inst, double tau, std::uint64_t seed, int samples) {
  const Pipeline p = Prepare(inst, tau, true);
  const auto cfg = atspp::SampleConfig::Make(inst.n(), tau, seed);
  const double lp_value = p.lp.value;
  std::cout << "alpha " << FormatDouble(cfg.alpha) << " beta " << FormatDouble(cfg.beta) << " lp "
            << FormatDouble(lp_value) << "\n";
  std::cout << "sample seed cost alpha_obs narrow_ok good\n";
  bool all_ok = true;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t s = atspp::DeriveSeed(seed, static_cast<std::uint64_t>(i));
    const auto arcs = atspp::SampleTree(p.comb, cfg.WithSeed(s));
    atspp::ThinnessOptions topts;
    topts.mode = inst.n() <= 16 ? atspp::ThinnessMode::kExhaustive : atspp::ThinnessMode::kNarrowPlusSampled;
    topts.chain = &p.chain;
    topts.seed = s;
    const auto thin = atspp::Thinness(arcs, p.lp.x, topts);
    bool narrow_ok = true;
    for (atspp::Cut c : p.chain.cuts) {
      const auto [fwd, bwd] = atspp::CrossingCounts(arcs, c);
      narrow_ok = narrow_ok && fwd == 1 && bwd == 0;
    }
    all_ok = all_ok && narrow_ok;
    const double cost = inst.CostOf(arcs);
    const bool good = cost <= cfg.beta * lp_value * (1 + 1e-12) + 1e-12 && thin.alpha_obs <= cfg.alpha;
    std::cout << i << " " << s << " " << FormatDouble(cost) << " " << FormatDouble(thin.alpha_obs) << " "
              << (narrow_ok ? "yes" : "NO") << " " << (good ? "yes" : "no") << "\n";
  }
  return all_ok ? 0 : 2;
}

int RunRound(const atspp::DirectedMetric& inst, const atspp::RoundOptions& opts, bool json) {
  const auto rep = atspp::Round(inst, opts);
  if (json) {
    std::cout << atspp::RoundReportJson(inst, opts, rep).dump(2) << "\n";
    return 0;
  }
  const auto& w = rep.result;
  std::cout << "path";
  for (int v : w.path) std::cout << " " << inst.name(v);
  std::cout << "\n";
  std::cout << "cost " << FormatDouble(w.cost) << "\n";
  std::cout << "lp_value " << FormatDouble(w.lp_value) << "\n";
  std::cout << "ratio " << FormatDouble(w.ratio) << "\n";
  std::cout << "tree_cost " << FormatDouble(w.tree_cost) << "\n";
  std::cout << "circulation_cost " << FormatDouble(w.circulation_cost) << "\n";
  std::cout << "bound " << FormatDouble(rep.bound) << "\n";
  std::cout << "alpha_obs " << FormatDouble(rep.draw.thinness.alpha_obs) << " tries " << rep.draw.tries << "\n";
  return 0;
}

int RunExact(const atspp::DirectedMetric& inst) {
  const auto res = atspp::HeldKarp(inst);
  std::cout << "cost " << FormatDouble(res.cost) << "\n";
  std::cout << "path";
  for (int v : res.path) std::cout << " " << inst.name(v);
  std::cout << "\n";
  return 0;
}

int RunExperiment(const std::string& path) {
  const auto cfg = atspp::ParseExperimentConfig(ReadFile(path));
  const auto rows = atspp::RunExperiment(cfg);
  std::cout << atspp::ExperimentCsv(rows);
  double max_path = 0, max_opt = 0;
  for (const auto& row : rows) {
    max_path = std::max(max_path, row.ratio_path_lp);
    if (row.ratio_opt_lp) max_opt = std::max(max_opt, *row.ratio_opt_lp);
  }
  std::cerr << "rows " << rows.size() << " max_ratio_path_lp " << FormatDouble(max_path)
            << " max_ratio_opt_lp " << FormatDouble(max_opt) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP rounding for the asymmetric TSP path problem"};
  app.require_subcommand(1);
  std::string instance;
  bool complete = false;
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("instance", instance, "instance file, gap:R or random:N:SEED[:MODEL]")->required();
    cmd->add_flag("--complete", complete, "read '-' as a missing arc and take the metric completion");
  };
  double tol = atspp::kDefaultLpTolerance;
  double tau = 0.25;
  std::uint64_t seed = 1;
  int samples = 10;
  int tries = 64;
  bool rational = false, json = false;
  std::vector<int> rs{2, 3, 4, 5, 6, 7};
  std::string config;

  auto* lp = app.add_subcommand("lp", "solve the subtour LP");
  add_instance(lp);
  lp->add_option("--tol", tol, "separation tolerance in (0, 1e-4]")->capture_default_str();
  lp->add_flag("--rational", rational, "exact rational arithmetic");

  auto* cuts = app.add_subcommand("cuts", "narrow cut chain of the LP optimum");
  add_instance(cuts);
  cuts->add_option("--tau", tau, "narrowness threshold in (0, 1/4]")->capture_default_str();

  auto* reroute = app.add_subcommand("reroute", "rerouted vector and tree decomposition");
  add_instance(reroute);
  reroute->add_option("--tau", tau, "narrowness threshold in (0, 1/4]")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "draw spanning trees by swap rounding");
  add_instance(sample);
  sample->add_option("--seed", seed, "base seed; sample i uses a seed derived from it")->required();
  sample->add_option("--samples", samples, "number of trees")->capture_default_str();
  sample->add_option("--tau", tau, "narrowness threshold in (0, 1/4]")->capture_default_str();

  auto* round = app.add_subcommand("round", "full rounding pipeline");
  add_instance(round);
  round->add_option("--tau", tau, "narrowness threshold in (0, 1/4]")->capture_default_str();
  round->add_option("--seed", seed, "sampler seed")->capture_default_str();
  round->add_option("--tries", tries, "sample budget before giving up")->capture_default_str();
  round->add_flag("--json", json, "print the full report as JSON");

  auto* exact = app.add_subcommand("exact", "optimal path by Held-Karp");
  add_instance(exact);

  auto* gap = app.add_subcommand("gap-demo", "LP value vs optimum on the gap family");
  gap->add_option("r", rs, "values of r")->expected(0, -1);

  auto* experiment = app.add_subcommand("experiment", "run a key = value experiment config");
  experiment->add_option("config", config)->required();

  auto* generate = app.add_subcommand("generate", "print an instance in the text format");
  add_instance(generate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every usage error exits 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gap) {
      std::cout << atspp::FormatGapDemo(atspp::GapDemo(rs));
      return 0;
    }
    if (*experiment) return RunExperiment(config);
    const auto inst = LoadInstance(instance, complete);
    if (*lp) return RunLp(inst, tol, rational);
    if (*cuts) return RunCuts(inst, tau);
    if (*reroute) return RunReroute(inst, tau);
    if (*sample) return RunSample(inst, tau, seed, samples);
    if (*exact) return RunExact(inst);
    if (*generate) {
      std::cout << atspp::FormatInstance(inst);
      return 0;
    }
    atspp::RoundOptions opts;
    opts.tau = tau;
    opts.seed = seed;
    opts.max_tries = tries;
    return RunRound(inst, opts, json);
  } catch (const atspp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const atspp::ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 2;
  } catch (const atspp::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const atspp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
