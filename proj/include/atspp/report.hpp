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

// JSON serialization of pipeline results. Reports carry "schema": 1; field
// order is fixed so identical runs give byte-identical output.

#ifndef ATSPP_REPORT_HPP_
#define ATSPP_REPORT_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "atspp/patch.hpp"

namespace atspp {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

inline Json CutJson(Cut c) { return Json(c.Vertices()); }

inline Json CutListJson(const std::vector<Cut>& cuts) {
  Json out = Json::array();
  for (Cut c : cuts) out.push_back(CutJson(c));
  return out;
}

inline Json ArcWeightsJson(const ArcWeights& w) {
  Json out = Json::array();
  for (const auto& [a, v] : w.Nonzeros()) out.push_back(Json::array({a.tail, a.head, v}));
  return out;
}

inline Json ArcSetJson(const ArcSet& arcs) {
  Json out = Json::array();
  for (Arc a : arcs) out.push_back(Json::array({a.tail, a.head}));
  return out;
}

inline Json ChainJson(const NarrowCutChain& chain, const NarrowCutStats* stats = nullptr) {
  Json j;
  j["tau"] = chain.tau;
  j["k"] = chain.k();
  j["cuts"] = CutListJson(chain.cuts);
  j["layers"] = CutListJson(chain.layers);
  if (stats) {
    j["calls"] = stats->calls;
    j["splits"] = stats->splits;
    j["flow_calls"] = stats->flow_calls;
  }
  return j;
}

inline Json StructureJson(const StructureReport& rep) {
  Json j;
  j["ok"] = rep.ok();
  j["failures"] = rep.failures;
  j["boundary_mass"] = rep.boundary_mass;
  j["min_boundary_slack"] = rep.min_boundary_slack;
  Json parts = Json::array();
  for (const auto& p : rep.partitions) {
    Json e;
    e["layer"] = p.layer + 1;
    e["size"] = p.size;
    e["mode"] = ModeName(p.mode);
    e["partitions"] = p.partitions;
    if (p.mode != PartitionCheck::Mode::kTrivial) e["min_slack"] = p.min_slack;
    parts.push_back(std::move(e));
  }
  j["partitions"] = std::move(parts);
  return j;
}

inline Json ZReportJson(const ZReport& rep) {
  Json j;
  j["ok"] = rep.ok();
  j["terms"] = rep.terms;
  j["max_cap_excess"] = rep.max_cap_excess;
  j["max_forward_residual"] = rep.max_forward_residual;
  j["max_backward_mass"] = rep.max_backward_mass;
  j["max_boundary_marginal_residual"] = rep.max_boundary_marginal_residual;
  j["max_marginal_excess"] = rep.max_marginal_excess;
  j["weight_residual"] = rep.weight_residual;
  j["failures"] = rep.failures;
  return j;
}

inline Json HoffmanJson(const HoffmanReport& rep) {
  Json j;
  j["ok"] = rep.ok();
  j["cuts_checked"] = rep.cuts_checked;
  Json cases = Json::array();
  for (int c = 0; c < 4; ++c) {
    Json e;
    e["case"] = CutCaseName(static_cast<CutCase>(c));
    e["cuts"] = rep.cases[c].cuts;
    if (rep.cases[c].cuts > 0) e["min_slack"] = rep.cases[c].min_slack;
    cases.push_back(std::move(e));
  }
  j["cases"] = std::move(cases);
  if (rep.witness) j["witness"] = CutJson(*rep.witness);
  return j;
}

inline Json WalkJson(const WalkResult& w, double bound) {
  Json j;
  j["path"] = w.path;
  j["cost"] = w.cost;
  j["walk"] = w.walk;
  j["walk_cost"] = w.walk_cost;
  j["circulation_cost"] = w.circulation_cost;
  j["tree_cost"] = w.tree_cost;
  j["lp_value"] = w.lp_value;
  j["ratio"] = w.ratio;
  j["bound"] = bound;
  return j;
}

inline Json RoundReportJson(const DirectedMetric& inst, const RoundOptions& opts,
                            const RoundReport& rep) {
  Json j;
  j["schema"] = kReportSchema;
  j["instance"] = {{"n", inst.n()}, {"s", inst.s()}, {"t", inst.t()}};
  j["tau"] = opts.tau;
  j["seed"] = opts.seed;
  j["lp"] = {{"value", rep.lp.value},
             {"iterations", rep.lp.iterations},
             {"active_cuts", CutListJson(rep.lp.active_cuts)},
             {"x", ArcWeightsJson(rep.lp.x)}};
  j["chain"] = ChainJson(rep.chain, &rep.cut_stats);
  if (rep.structure) j["structure"] = StructureJson(*rep.structure);
  j["z"] = {{"nonzeros", ArcWeightsJson(rep.rerouted.z)}, {"report", ZReportJson(rep.z_report)}};
  Json sample;
  sample["alpha"] = rep.config.alpha;
  sample["beta"] = rep.config.beta;
  sample["tries"] = rep.draw.tries;
  sample["arcs"] = ArcSetJson(rep.draw.arcs);
  sample["tree_cost"] = rep.draw.cost;
  sample["alpha_obs"] = rep.draw.thinness.alpha_obs;
  sample["alpha_witness"] = CutJson(rep.draw.thinness.witness);
  sample["cuts_inspected"] = rep.draw.thinness.cuts_inspected;
  j["sample"] = std::move(sample);
  if (rep.hoffman) j["hoffman"] = HoffmanJson(*rep.hoffman);
  Json circ = Json::array();
  for (const auto& [a, m] : rep.multigraph.multiplicity.Nonzeros()) {
    circ.push_back(Json::array({a.tail, a.head, m}));
  }
  j["circulation"] = {{"cost", rep.multigraph.circulation_cost}, {"arcs", std::move(circ)}};
  j["result"] = WalkJson(rep.result, rep.bound);
  return j;
}

}  // namespace atspp

#endif  // ATSPP_REPORT_HPP_
