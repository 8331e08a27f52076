#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcka/bes.hpp"

namespace pcka {

// Labelled partial order over a configuration. `below` holds the strict
// pairs; the order itself is its reflexive closure.
struct Lposet {
  std::vector<EventId> carrier;  // sorted
  std::set<std::pair<EventId, EventId>> below;
  std::map<EventId, std::string> labels;  // partial

  bool leq(const EventId& a, const EventId& b) const {
    return a == b || below.count({a, b}) != 0;
  }

  bool has(const EventId& e) const {
    return std::binary_search(carrier.begin(), carrier.end(), e);
  }

  // Restriction to the labelled events (the hat operation).
  Lposet labelled_restriction() const {
    Lposet r;
    for (const auto& e : carrier)
      if (labels.count(e)) r.carrier.push_back(e);
    for (const auto& p : below)
      if (labels.count(p.first) && labels.count(p.second)) r.below.insert(p);
    r.labels = labels;
    return r;
  }
};

inline void validate_lposet(const Lposet& u) {
  for (const auto& [a, b] : u.below) {
    if (!u.has(a) || !u.has(b)) throw std::invalid_argument("order pair outside carrier");
    if (a == b) throw std::invalid_argument("strict order pair is reflexive");
    if (u.below.count({b, a})) throw std::invalid_argument("order not antisymmetric");
  }
  for (const auto& [a, b] : u.below)
    for (const auto& c : u.carrier)
      if (u.below.count({b, c}) && !u.below.count({a, c}))
        throw std::invalid_argument("order not transitive");
  for (const auto& [e, l] : u.labels)
    if (!u.has(e)) throw std::invalid_argument("label outside carrier");
}

inline Lposet make_lposet(std::vector<EventId> carrier,
                          std::set<std::pair<EventId, EventId>> below,
                          std::map<EventId, std::string> labels) {
  std::sort(carrier.begin(), carrier.end());
  Lposet u{std::move(carrier), std::move(below), std::move(labels)};
  validate_lposet(u);
  return u;
}

namespace detail {

// Enumerates every linearisation of x and intersects their total orders.
// before[i][j] survives iff i precedes j in all of them.
inline void linearisations_rec(const BesModel& m, Mask x, Mask placed,
                               std::vector<int>& seq, std::vector<std::vector<char>>& before) {
  if (placed == x) {
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        before[seq[i]][seq[j]] = 0;  // seq[j] came first, so seq[i] not before it
    return;
  }
  for (int e = 0; e < m.n; ++e) {
    if (!(x & BesModel::bit(e)) || (placed & BesModel::bit(e))) continue;
    if (!m.enabled(placed, e)) continue;
    seq.push_back(e);
    linearisations_rec(m, x, placed | BesModel::bit(e), seq, before);
    seq.pop_back();
  }
}

}  // namespace detail

inline Lposet lposet_of(const BesModel& m, Mask x) {
  if (!m.is_config(x)) throw std::invalid_argument("not a configuration");
  std::vector<std::vector<char>> before(m.n, std::vector<char>(m.n, 1));
  std::vector<int> seq;
  detail::linearisations_rec(m, x, 0, seq, before);
  Lposet u;
  u.carrier = m.to_ids(x);
  for (int i = 0; i < m.n; ++i) {
    if (!(x & BesModel::bit(i))) continue;
    if (!m.label[i].empty()) u.labels.emplace(m.ids[i], m.label[i]);
    for (int j = 0; j < m.n; ++j)
      if (i != j && (x & BesModel::bit(j)) && before[i][j]) u.below.insert({m.ids[i], m.ids[j]});
  }
  return u;
}

inline Lposet lposet_of(const Bes& b, const Config& x) {
  BesModel m(b);
  return lposet_of(m, m.to_mask(x.events));
}

namespace detail {

inline bool match_rec(const std::vector<EventId>& vs, std::size_t i,
                      const std::map<EventId, std::vector<EventId>>& candidates,
                      std::map<EventId, EventId>& f, std::set<EventId>& used,
                      const Lposet& u, const Lposet& v) {
  if (i == vs.size()) return true;
  const EventId& e = vs[i];
  for (const auto& target : candidates.at(e)) {
    if (used.count(target)) continue;
    bool ok = true;
    // monotonicity against already-assigned events
    for (std::size_t j = 0; j < i && ok; ++j) {
      const EventId& d = vs[j];
      if (v.below.count({d, e}) && !u.below.count({f.at(d), target})) ok = false;
      if (v.below.count({e, d}) && !u.below.count({target, f.at(d)})) ok = false;
    }
    if (!ok) continue;
    f.emplace(e, target);
    used.insert(target);
    if (match_rec(vs, i + 1, candidates, f, used, u, v)) return true;
    used.erase(target);
    f.erase(e);
  }
  return false;
}

}  // namespace detail

// Subsumption u <=_s v: u implements v. Looks for a label-preserving
// bijection f from the labelled events of v to those of u such that
// e <=_v e' implies f(e) <=_u f(e'). The search backtracks over label
// classes, so only same-label images are ever tried.
inline bool subsumes(const Lposet& u_full, const Lposet& v_full) {
  Lposet u = u_full.labelled_restriction();
  Lposet v = v_full.labelled_restriction();
  if (u.carrier.size() != v.carrier.size()) return false;
  std::map<EventId, std::vector<EventId>> candidates;
  std::map<std::string, int> balance;
  for (const auto& e : v.carrier) {
    auto& c = candidates[e];
    for (const auto& d : u.carrier)
      if (u.labels.at(d) == v.labels.at(e)) c.push_back(d);
    ++balance[v.labels.at(e)];
  }
  for (const auto& d : u.carrier)
    if (--balance[u.labels.at(d)] < 0) return false;
  for (const auto& [l, c] : balance)
    if (c != 0) return false;
  // order v's events by ascending candidate count to fail fast
  std::vector<EventId> vs = v.carrier;
  std::stable_sort(vs.begin(), vs.end(), [&](const EventId& a, const EventId& b) {
    return candidates.at(a).size() < candidates.at(b).size();
  });
  std::map<EventId, EventId> f;
  std::set<EventId> used;
  return detail::match_rec(vs, 0, candidates, f, used, u, v);
}

// Lposet prefix, the three clauses verbatim: carrier inclusion, label
// agreement on the smaller carrier, and downward closure of the larger
// order into the smaller one.
inline bool lposet_prefix(const Lposet& u, const Lposet& v) {
  for (const auto& e : u.carrier)
    if (!v.has(e)) return false;
  for (const auto& e : u.carrier) {
    auto iu = u.labels.find(e), iv = v.labels.find(e);
    bool lu = iu != u.labels.end(), lv = iv != v.labels.end();
    if (lu != lv || (lu && iu->second != iv->second)) return false;
  }
  for (const auto& [e, e2] : v.below) {
    if (!u.has(e2)) continue;
    if (!u.has(e) || !u.below.count({e, e2})) return false;
  }
  return true;
}

}  // namespace pcka
