#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "pcka/bes.hpp"

namespace pcka {

// Prime event structure: strict causality `below`, hereditary conflict.
struct Pes {
  std::set<EventId> events;
  std::set<std::pair<EventId, EventId>> below;  // strict causality pairs
  std::set<ConflictPair> conflicts;
  std::map<EventId, std::string> labels;

  bool lt(const EventId& a, const EventId& b) const { return below.count({a, b}) != 0; }
  bool in_conflict(const EventId& a, const EventId& b) const {
    return conflicts.count(make_conflict(a, b)) != 0;
  }
};

inline void validate_pes(const Pes& p) {
  auto known = [&](const EventId& e) { return p.events.count(e) != 0; };
  for (const auto& [a, b] : p.below) {
    if (!known(a) || !known(b)) throw std::invalid_argument("causality over unknown event");
    if (a == b) throw std::invalid_argument("reflexive strict causality");
    if (p.below.count({b, a})) throw std::invalid_argument("causality not antisymmetric");
  }
  for (const auto& [a, b] : p.below)
    for (const auto& c : p.events)
      if (p.lt(b, c) && !p.lt(a, c)) throw std::invalid_argument("causality not transitive");
  for (const auto& [a, b] : p.conflicts) {
    if (!known(a) || !known(b)) throw std::invalid_argument("conflict over unknown event");
    if (a == b) throw std::invalid_argument("reflexive conflict");
  }
  // conflict heredity: a#b and b <= c implies a#c
  for (const auto& [a, b] : p.conflicts)
    for (const auto& c : p.events) {
      if (p.lt(b, c) && !p.in_conflict(a, c))
        throw std::invalid_argument("conflict not hereditary at " + a.str() + "#" + c.str());
      if (p.lt(a, c) && !p.in_conflict(b, c))
        throw std::invalid_argument("conflict not hereditary at " + b.str() + "#" + c.str());
    }
  for (const auto& [e, l] : p.labels)
    if (!known(e)) throw std::invalid_argument("label on unknown event");
}

inline std::set<EventId> immediate_causes(const Pes& p, const EventId& e) {
  std::set<EventId> out;
  for (const auto& c : p.events) {
    if (!p.lt(c, e)) continue;
    bool covered = false;
    for (const auto& d : p.events)
      if (p.lt(c, d) && p.lt(d, e)) covered = true;
    if (!covered) out.insert(c);
  }
  return out;
}

// The standard embedding: events, labels and conflicts carry over, and
// each immediate cause becomes a singleton bundle. Configurations of the
// result are exactly the down-closed conflict-free sets of the PES.
inline Bes pes_to_bes(const Pes& p) {
  validate_pes(p);
  Bes b;
  b.events = p.events;
  b.conflicts = p.conflicts;
  b.labels = p.labels;
  for (const auto& e : p.events)
    for (const auto& c : immediate_causes(p, e)) b.bundles.insert(Bundle{{c}, e});
  validate_bes(b);
  return b;
}

// Immediate conflict in the PES sense: e#e' with [e] u [e') and
// [e) u [e'] both configurations.
inline std::set<ConflictPair> pes_immediate_conflicts(const Pes& p) {
  auto down = [&](const EventId& e, bool strict) {
    std::set<EventId> s;
    for (const auto& c : p.events)
      if (p.lt(c, e)) s.insert(c);
    if (!strict) s.insert(e);
    return s;
  };
  auto conflict_free = [&](const std::set<EventId>& s) {
    for (auto i = s.begin(); i != s.end(); ++i)
      for (auto j = std::next(i); j != s.end(); ++j)
        if (p.in_conflict(*i, *j)) return false;
    return true;
  };
  std::set<ConflictPair> out;
  for (const auto& [a, b] : p.conflicts) {
    std::set<EventId> u = down(a, false), v = down(b, true);
    u.insert(v.begin(), v.end());
    std::set<EventId> u2 = down(a, true), v2 = down(b, false);
    u2.insert(v2.begin(), v2.end());
    if (conflict_free(u) && conflict_free(u2)) out.insert(make_conflict(a, b));
  }
  return out;
}

// Varacca cells: maximal sets of pairwise immediately-conflicting events
// with identical strict causes.
inline std::vector<std::set<EventId>> pes_cells(const Pes& p) {
  auto imm = pes_immediate_conflicts(p);
  auto strict_down = [&](const EventId& e) {
    std::set<EventId> s;
    for (const auto& c : p.events)
      if (p.lt(c, e)) s.insert(c);
    return s;
  };
  auto compatible = [&](const EventId& a, const EventId& b) {
    return imm.count(make_conflict(a, b)) && strict_down(a) == strict_down(b);
  };
  std::set<std::set<EventId>> seen;
  for (const auto& e : p.events) {
    // grow greedily in every order; event counts are tiny
    std::vector<EventId> cands;
    for (const auto& d : p.events)
      if (d != e && compatible(e, d)) cands.push_back(d);
    std::vector<std::set<EventId>> stack{{e}};
    while (!stack.empty()) {
      std::set<EventId> cur = stack.back();
      stack.pop_back();
      bool extended = false;
      for (const auto& c : cands) {
        if (cur.count(c)) continue;
        bool ok = true;
        for (const auto& x : cur)
          if (!compatible(x, c)) ok = false;
        if (ok) {
          auto next = cur;
          next.insert(c);
          stack.push_back(std::move(next));
          extended = true;
        }
      }
      if (!extended) seen.insert(cur);
    }
  }
  return {seen.begin(), seen.end()};
}

// Confusion freeness of a PES: immediate conflict transitive, and
// immediately conflicting events share their strict causes.
inline bool pes_confusion_free(const Pes& p) {
  auto imm = pes_immediate_conflicts(p);
  auto has = [&](const EventId& a, const EventId& b) {
    return imm.count(make_conflict(a, b)) != 0;
  };
  auto strict_down = [&](const EventId& e) {
    std::set<EventId> s;
    for (const auto& c : p.events)
      if (p.lt(c, e)) s.insert(c);
    return s;
  };
  for (const auto& [a, b] : imm)
    if (strict_down(a) != strict_down(b)) return false;
  for (const auto& a : p.events)
    for (const auto& b : p.events)
      for (const auto& c : p.events)
        if (a != b && b != c && a != c && has(a, b) && has(b, c) && !has(a, c)) return false;
  return true;
}

}  // namespace pcka
