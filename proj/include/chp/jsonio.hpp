#pragma once

#include <json.hpp>

#include "chp/pcp.hpp"
#include "chp/pomset.hpp"
#include "chp/testing.hpp"

namespace chp {

// {size, labels[], order[[i,j]...]} in canonical form
inline nlohmann::json pomset_json(const Pomset& p) {
  nlohmann::json j;
  j["size"] = p.size();
  auto labels = nlohmann::json::array();
  for (const auto& a : p.labels()) labels.push_back(a.name());
  j["labels"] = std::move(labels);
  auto order = nlohmann::json::array();
  for (auto [i, k] : p.order_pairs()) order.push_back(nlohmann::json::array({i, k}));
  j["order"] = std::move(order);
  return j;
}

inline const char* quant_name(Quant q) { return q == Quant::forall ? "forall" : "exists"; }
inline const char* mode_name(TestMode m) { return m == TestMode::may ? "may" : "must"; }

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j;
  if (v.holds == Tri::unknown)
    j["holds"] = "unknown";
  else
    j["holds"] = v.holds == Tri::yes;
  j["mode"] = mode_name(v.mode);
  auto quants = nlohmann::json::array();
  for (auto q : v.quantifiers) quants.push_back(quant_name(q));
  j["quantifiers"] = std::move(quants);
  j["bounded"] = v.bounded;
  j["bound_used"] = v.bound_used ? nlohmann::json(*v.bound_used) : nlohmann::json(nullptr);
  if (v.witness) {
    nlohmann::json w;
    auto runs = nlohmann::json::array();
    for (std::size_t i = 0; i < v.witness->run_indices.size(); ++i) {
      nlohmann::json r;
      r["index"] = v.witness->run_indices[i];
      if (i < v.witness->run_pomsets.size()) r["pomset"] = pomset_json(v.witness->run_pomsets[i]);
      runs.push_back(std::move(r));
    }
    w["runs"] = std::move(runs);
    auto path = nlohmann::json::array();
    for (const auto& s : v.witness->path)
      path.push_back(nlohmann::json{{"id", s.id}, {"label", s.label.name()}});
    w["path"] = std::move(path);
    w["marking"] = v.witness->marking;
    if (!v.witness->marking_image.empty()) w["marking_image"] = v.witness->marking_image;
    w["enters_cycle"] = v.witness->enters_cycle;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline nlohmann::json pcp_json(const PcpCheck& c) {
  nlohmann::json j = verdict_json(c.verdict);
  if (c.decoded) {
    j["decoded"] = {{"indices", c.decoded->indices}, {"word", c.decoded->word}};
  } else {
    j["decoded"] = nullptr;
  }
  return j;
}

}  // namespace chp
