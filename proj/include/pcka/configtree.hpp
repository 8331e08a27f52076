#pragma once

#include <map>
#include <vector>

#include "pcka/pbes.hpp"

namespace pcka {

using ConfigDist = std::map<Config, Rat>;

struct PrefixStep {
  EventDist source;  // the distribution that fired
  ConfigDist target;
};

namespace detail {

// Steps x |= Delta: some distribution with support disjoint from x whose
// one-event extensions are all configurations again.
inline std::vector<std::pair<const EventDist*, std::vector<std::pair<int, Rat>>>>
prefix_steps_model(const Pbes& p, const BesModel& m, Mask x) {
  std::vector<std::pair<const EventDist*, std::vector<std::pair<int, Rat>>>> out;
  for (const auto& d : p.pi) {
    bool ok = true;
    std::vector<std::pair<int, Rat>> t;
    for (const auto& [e, w] : d.p) {
      int i = m.index.at(e);
      if (x & BesModel::bit(i)) { ok = false; break; }
      auto it = m.config_index.find(x | BesModel::bit(i));
      if (it == m.config_index.end()) { ok = false; break; }
      t.emplace_back(it->second, w);
    }
    if (ok) out.emplace_back(&d, std::move(t));
  }
  return out;
}

}  // namespace detail

inline std::vector<PrefixStep> prefix_successors(const Pbes& p, const Config& x) {
  BesModel m(p.bes);
  Mask xm = m.to_mask(x.events);
  if (!m.is_config(xm)) throw std::invalid_argument("not a configuration: " + x.str());
  std::vector<PrefixStep> out;
  for (const auto& [d, t] : detail::prefix_steps_model(p, m, xm)) {
    PrefixStep s;
    s.source = *d;
    for (const auto& [ci, w] : t) s.target.emplace(m.to_config(m.configs[ci]), w);
    out.push_back(std::move(s));
  }
  return out;
}

// Configuration tree: all configurations with their prefix steps. A step
// with singleton support is a plain edge; larger supports become
// probabilistic hyper-edges.
struct ConfigTree {
  struct Branch {
    Rat prob;
    int to;
  };
  struct Edge {
    int from;
    std::vector<Branch> branches;  // sorted by target index
  };

  std::vector<Config> nodes;  // canonical order, nodes[0] is empty
  std::vector<Edge> edges;    // sorted by (from, branches)
};

inline ConfigTree configuration_tree(const Pbes& p) {
  BesModel m(p.bes);
  ConfigTree t;
  for (Mask x : m.configs) t.nodes.push_back(m.to_config(x));
  std::set<std::pair<int, std::vector<std::pair<int, std::string>>>> dedup;
  for (std::size_t ci = 0; ci < m.configs.size(); ++ci) {
    for (const auto& [d, targets] : detail::prefix_steps_model(p, m, m.configs[ci])) {
      std::vector<std::pair<int, std::string>> key;
      for (const auto& [to, w] : targets) key.emplace_back(to, rat_to_string(w));
      std::sort(key.begin(), key.end());
      if (!dedup.insert({static_cast<int>(ci), key}).second) continue;
      ConfigTree::Edge e;
      e.from = static_cast<int>(ci);
      std::vector<std::pair<int, Rat>> ts = targets;
      std::sort(ts.begin(), ts.end());
      for (const auto& [to, w] : ts) e.branches.push_back({w, to});
      t.edges.push_back(std::move(e));
    }
  }
  return t;
}

}  // namespace pcka
