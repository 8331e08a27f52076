#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pcka/bes.hpp"

namespace pcka {

// Immediate conflicts: conflicting pairs that some configuration can
// resolve either way. Found by scanning all configurations.
inline std::set<ConflictPair> immediate_conflicts_model(const BesModel& m) {
  std::set<ConflictPair> out;
  for (const auto& [a, b] : m.bes.conflicts) {
    int i = m.index.at(a), j = m.index.at(b);
    for (Mask x : m.configs) {
      if (x & (BesModel::bit(i) | BesModel::bit(j))) continue;
      if (m.enabled(x, i) && m.enabled(x, j)) {
        out.insert(make_conflict(a, b));
        break;
      }
    }
  }
  return out;
}

inline std::set<ConflictPair> immediate_conflicts(const Bes& b) {
  return immediate_conflicts_model(BesModel(b));
}

namespace detail {

// Partial clusters are cliques of immediate conflict among events with
// identical incoming bundle families; grouping by family first keeps
// the clique search local.
struct ClusterContext {
  std::vector<EventId> ids;
  std::map<EventId, int> index;
  std::vector<std::set<std::set<EventId>>> family;  // incoming bundle sets
  std::vector<std::vector<char>> imm;

  explicit ClusterContext(const BesModel& m) {
    ids = m.ids;
    index = m.index;
    int n = m.n;
    family.resize(n);
    for (const auto& bu : m.bes.bundles) family[index.at(bu.target)].insert(bu.set);
    imm.assign(n, std::vector<char>(n, 0));
    for (const auto& [a, b] : immediate_conflicts_model(m)) {
      imm[index.at(a)][index.at(b)] = 1;
      imm[index.at(b)][index.at(a)] = 1;
    }
  }

  bool compatible(int a, int b) const { return imm[a][b] && family[a] == family[b]; }

  // all maximal cliques (within e's family group) containing e
  std::vector<std::set<int>> maximal_partial_clusters_of(int e) const {
    std::vector<int> cands;
    for (int i = 0; i < static_cast<int>(ids.size()); ++i)
      if (i != e && compatible(e, i)) cands.push_back(i);
    std::vector<std::set<int>> out;
    std::set<int> cur{e};
    grow(cur, cands, 0, out);
    return out;
  }

 private:
  void grow(std::set<int>& cur, const std::vector<int>& cands, std::size_t i,
            std::vector<std::set<int>>& out) const {
    bool extended = false;
    for (std::size_t j = i; j < cands.size(); ++j) {
      int c = cands[j];
      bool ok = true;
      for (int x : cur)
        if (!compatible(x, c)) ok = false;
      if (!ok) continue;
      extended = true;
      cur.insert(c);
      grow(cur, cands, j + 1, out);
      cur.erase(c);
    }
    if (!extended) {
      // maximal w.r.t. the whole candidate list, not just the tail
      for (std::size_t j = 0; j < i; ++j) {
        int c = cands[j];
        if (cur.count(c)) continue;
        bool ok = true;
        for (int x : cur)
          if (!compatible(x, c)) ok = false;
        if (ok) return;  // extendable to the left: not maximal
      }
      out.push_back(cur);
    }
  }
};

inline std::set<int> cluster_of_ctx(const ClusterContext& ctx, int e) {
  auto maximal = ctx.maximal_partial_clusters_of(e);
  std::set<int> inter = maximal.front();
  for (const auto& k : maximal) {
    std::set<int> next;
    std::set_intersection(inter.begin(), inter.end(), k.begin(), k.end(),
                          std::inserter(next, next.begin()));
    inter = std::move(next);
  }
  return inter;
}

inline std::vector<std::set<EventId>> cluster_intersections(const BesModel& m,
                                                            const ClusterContext& ctx) {
  std::vector<std::set<EventId>> ce(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j : cluster_of_ctx(ctx, i)) ce[i].insert(m.ids[j]);
  return ce;
}

}  // namespace detail

// <e>: the intersection of all clusters containing e.
inline std::set<EventId> cluster_of_model(const BesModel& m, const EventId& e) {
  auto it = m.index.find(e);
  if (it == m.index.end()) throw std::invalid_argument("unknown event: " + e.str());
  detail::ClusterContext ctx(m);
  std::set<EventId> out;
  for (int i : detail::cluster_of_ctx(ctx, it->second)) out.insert(m.ids[i]);
  return out;
}

inline std::set<EventId> cluster_of(const Bes& b, const EventId& e) {
  return cluster_of_model(BesModel(b), e);
}

// All clusters (maximal partial clusters), deduplicated, canonical order.
inline std::vector<std::set<EventId>> all_clusters(const Bes& b) {
  BesModel m(b);
  detail::ClusterContext ctx(m);
  std::set<std::set<EventId>> seen;
  for (int e = 0; e < m.n; ++e)
    for (const auto& k : ctx.maximal_partial_clusters_of(e)) {
      std::set<EventId> c;
      for (int i : k) c.insert(m.ids[i]);
      seen.insert(std::move(c));
    }
  return {seen.begin(), seen.end()};
}

struct ConfusionWitness {
  enum class Kind { conflict_outside_cluster, unstable_cluster };
  Kind kind;
  // conflict_outside_cluster: (e, e2) immediately conflict but e not in <e2>
  // unstable_cluster: x enables e yet not e2 from <e>
  EventId e, e2;
  std::vector<EventId> x;
};

struct ConfusionResult {
  bool confusion_free = true;
  std::optional<ConfusionWitness> witness;
};

// Exact confusion-freeness by full enumeration. Scans in canonical
// order, so the reported witness is deterministic.
inline ConfusionResult confusion_free_exact(const Bes& b) {
  BesModel m(b);
  detail::ClusterContext ctx(m);
  const auto& imm_mat = ctx.imm;
  std::set<ConflictPair> imm;
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      if (imm_mat[i][j]) imm.insert(make_conflict(m.ids[i], m.ids[j]));
  auto ce = detail::cluster_intersections(m, ctx);
  for (const auto& [a, c] : imm) {
    if (!ce[m.index.at(c)].count(a))
      return {false, ConfusionWitness{ConfusionWitness::Kind::conflict_outside_cluster, a, c, {}}};
    if (!ce[m.index.at(a)].count(c))
      return {false, ConfusionWitness{ConfusionWitness::Kind::conflict_outside_cluster, c, a, {}}};
  }
  for (int e = 0; e < m.n; ++e) {
    Mask cluster_mask = 0;
    for (const auto& id : ce[e]) cluster_mask |= BesModel::bit(m.index.at(id));
    for (Mask x : m.configs) {
      if (x & cluster_mask) continue;
      if (!m.enabled(x, e)) continue;
      for (const auto& id : ce[e]) {
        int e2 = m.index.at(id);
        if (!m.enabled(x, e2))
          return {false, ConfusionWitness{ConfusionWitness::Kind::unstable_cluster, m.ids[e],
                                          m.ids[e2], m.to_ids(x)}};
      }
    }
  }
  return {};
}

// Static sufficient condition: immediate conflicts stay inside <e>, and
// conflicts of <e> with events outside it are uniform across <e>.
inline bool confusion_free_static(const Bes& b) {
  BesModel m(b);
  detail::ClusterContext ctx(m);
  auto ce = detail::cluster_intersections(m, ctx);
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      if (ctx.imm[i][j] && (!ce[j].count(m.ids[i]) || !ce[i].count(m.ids[j]))) return false;
  for (int e = 0; e < m.n; ++e)
    for (int e2 = 0; e2 < m.n; ++e2) {
      if (e == e2) continue;
      bool touches = false;
      for (const auto& id : ce[e])
        if (id != m.ids[e2] && m.bes.in_conflict(id, m.ids[e2])) touches = true;
      if (!touches) continue;
      for (const auto& id : ce[e])
        if (id != m.ids[e2] && !m.bes.in_conflict(id, m.ids[e2])) return false;
    }
  return true;
}

}  // namespace pcka
