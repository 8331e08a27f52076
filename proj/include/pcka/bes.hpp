#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcka/event.hpp"

namespace pcka {

// A bundle X |-> e: exactly one event of the pairwise-conflicting set X
// must have occurred before e is enabled.
struct Bundle {
  std::set<EventId> set;
  EventId target;

  friend auto operator<=>(const Bundle&, const Bundle&) = default;
};

using ConflictPair = std::pair<EventId, EventId>;

inline ConflictPair make_conflict(EventId a, EventId b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

// Bundle event structure. Conflicts are stored as canonical (min,max)
// pairs; the relation is symmetric by construction.
struct Bes {
  std::set<EventId> events;
  std::set<ConflictPair> conflicts;
  std::set<Bundle> bundles;
  std::map<EventId, std::string> labels;  // partial
  std::set<EventId> finals;

  bool in_conflict(const EventId& a, const EventId& b) const {
    return conflicts.count(make_conflict(a, b)) != 0;
  }
};

// Structural well-formedness: irreflexive conflicts over known events,
// bundle sets pairwise conflicting, finals pairwise conflicting, and no
// final event inside a bundle set (so a final event never enables
// anything). All constructions in this library preserve these.
inline void validate_bes(const Bes& b) {
  auto known = [&](const EventId& e) { return b.events.count(e) != 0; };
  for (const auto& [x, y] : b.conflicts) {
    if (!known(x) || !known(y)) throw std::invalid_argument("conflict over unknown event");
    if (x == y) throw std::invalid_argument("reflexive conflict on " + x.str());
  }
  for (const auto& [e, l] : b.labels) {
    if (!known(e)) throw std::invalid_argument("label on unknown event");
    if (l.empty()) throw std::invalid_argument("empty label on " + e.str());
  }
  for (const auto& e : b.finals)
    if (!known(e)) throw std::invalid_argument("unknown final event");
  for (auto i = b.finals.begin(); i != b.finals.end(); ++i)
    for (auto j = std::next(i); j != b.finals.end(); ++j)
      if (!b.in_conflict(*i, *j))
        throw std::invalid_argument("final events " + i->str() + ", " + j->str() + " not in conflict");
  for (const auto& bu : b.bundles) {
    if (!known(bu.target)) throw std::invalid_argument("bundle targets unknown event");
    for (const auto& e : bu.set) {
      if (!known(e)) throw std::invalid_argument("bundle set over unknown event");
      if (b.finals.count(e))
        throw std::invalid_argument("final event " + e.str() + " occurs in a bundle set");
    }
    for (auto i = bu.set.begin(); i != bu.set.end(); ++i)
      for (auto j = std::next(i); j != bu.set.end(); ++j)
        if (!b.in_conflict(*i, *j))
          throw std::invalid_argument("bundle set not pairwise conflicting: " + i->str() + ", " + j->str());
  }
}

inline Bes make_bes(std::set<EventId> events, std::set<ConflictPair> conflicts,
                    std::set<Bundle> bundles, std::map<EventId, std::string> labels,
                    std::set<EventId> finals) {
  Bes b{std::move(events), {}, std::move(bundles), std::move(labels), std::move(finals)};
  for (auto& [x, y] : conflicts) b.conflicts.insert(make_conflict(x, y));
  validate_bes(b);
  return b;
}

// A configuration with one witnessing linearisation. Ordering and
// equality look at the event set only.
struct Config {
  std::vector<EventId> events;   // sorted
  std::vector<EventId> witness;  // an event trace with this event set

  friend bool operator==(const Config& a, const Config& b) { return a.events == b.events; }
  friend bool operator<(const Config& a, const Config& b) {
    if (a.events.size() != b.events.size()) return a.events.size() < b.events.size();
    return a.events < b.events;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (i) s += ",";
      s += events[i].str();
    }
    return s + "}";
  }
};

using Mask = std::uint64_t;

// Index-compiled view of a finite BES plus its full configuration set.
// Configuration enumeration works breadth-first over event traces; every
// reachable event set keeps the trace that discovered it.
struct BesModel {
  static constexpr int max_events = 64;

  Bes bes;
  std::vector<EventId> ids;  // index -> id in sorted order
  std::map<EventId, int> index;
  int n = 0;
  std::vector<std::string> label;  // "" when unlabelled
  std::vector<Mask> cfl;
  std::vector<std::vector<Mask>> inb;  // incoming bundle sets per event
  Mask finals_mask = 0;
  Mask labelled_mask = 0;

  std::vector<Mask> configs;  // canonical order: size, then sorted event sequence
  std::map<Mask, int> config_index;
  std::map<Mask, std::pair<Mask, int>> discovered_from;  // mask -> (parent mask, event)

  explicit BesModel(Bes b) : bes(std::move(b)) {
    validate_bes(bes);
    if (bes.events.size() > static_cast<std::size_t>(max_events))
      throw std::runtime_error("BES too large: " + std::to_string(bes.events.size()) +
                               " events (limit " + std::to_string(max_events) + ")");
    ids.assign(bes.events.begin(), bes.events.end());
    n = static_cast<int>(ids.size());
    for (int i = 0; i < n; ++i) index.emplace(ids[i], i);
    label.assign(n, "");
    for (const auto& [e, l] : bes.labels) label[index.at(e)] = l;
    cfl.assign(n, 0);
    for (const auto& [x, y] : bes.conflicts) {
      cfl[index.at(x)] |= bit(index.at(y));
      cfl[index.at(y)] |= bit(index.at(x));
    }
    inb.assign(n, {});
    for (const auto& bu : bes.bundles) {
      Mask m = 0;
      for (const auto& e : bu.set) m |= bit(index.at(e));
      inb[index.at(bu.target)].push_back(m);
    }
    for (const auto& e : bes.finals) finals_mask |= bit(index.at(e));
    for (int i = 0; i < n; ++i)
      if (!label[i].empty()) labelled_mask |= bit(i);
    enumerate();
  }

  static Mask bit(int i) { return Mask{1} << i; }

  bool enabled(Mask x, int e) const {
    if (x & bit(e)) return false;
    if (cfl[e] & x) return false;
    for (Mask m : inb[e])
      if (!(m & x)) return false;
    return true;
  }

  Mask enabled_set(Mask x) const {
    Mask r = 0;
    for (int e = 0; e < n; ++e)
      if (enabled(x, e)) r |= bit(e);
    return r;
  }

  bool is_config(Mask x) const { return config_index.count(x) != 0; }

  std::vector<EventId> to_ids(Mask m) const {
    std::vector<EventId> r;
    for (int i = 0; i < n; ++i)
      if (m & bit(i)) r.push_back(ids[i]);
    return r;
  }

  Mask to_mask(const std::vector<EventId>& es) const {
    Mask m = 0;
    for (const auto& e : es) {
      auto it = index.find(e);
      if (it == index.end()) throw std::invalid_argument("unknown event: " + e.str());
      m |= bit(it->second);
    }
    return m;
  }

  Config to_config(Mask m) const {
    Config c;
    c.events = to_ids(m);
    std::vector<int> rev;
    Mask cur = m;
    while (cur) {
      auto [parent, via] = discovered_from.at(cur);
      rev.push_back(via);
      cur = parent;
    }
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) c.witness.push_back(ids[*it]);
    return c;
  }

  int config_of(const Config& c) const {
    Mask m = to_mask(c.events);
    auto it = config_index.find(m);
    if (it == config_index.end())
      throw std::invalid_argument("not a configuration: " + c.str());
    return it->second;
  }

 private:
  void enumerate() {
    std::set<Mask> seen{0};
    std::vector<Mask> frontier{0};
    while (!frontier.empty()) {
      std::vector<Mask> next;
      for (Mask x : frontier) {
        for (int e = 0; e < n; ++e) {
          if (!enabled(x, e)) continue;
          Mask nx = x | bit(e);
          if (seen.insert(nx).second) {
            discovered_from.emplace(nx, std::make_pair(x, e));
            next.push_back(nx);
          }
        }
      }
      frontier = std::move(next);
    }
    configs.assign(seen.begin(), seen.end());
    std::sort(configs.begin(), configs.end(), [&](Mask a, Mask b) {
      int pa = std::popcount(a), pb = std::popcount(b);
      if (pa != pb) return pa < pb;
      return to_ids(a) < to_ids(b);
    });
    for (std::size_t i = 0; i < configs.size(); ++i)
      config_index.emplace(configs[i], static_cast<int>(i));
  }
};

// Event-trace check, clause for clause: every bundle pointing at the
// next event intersects the strict prefix, and the event is neither
// repeated nor in conflict with the prefix.
inline bool is_event_trace(const Bes& b, const std::vector<EventId>& s) {
  BesModel m(b);
  Mask prefix = 0;
  for (const auto& id : s) {
    auto it = m.index.find(id);
    if (it == m.index.end()) throw std::invalid_argument("unknown event: " + id.str());
    if (!m.enabled(prefix, it->second)) return false;
    prefix |= BesModel::bit(it->second);
  }
  return true;
}

inline std::vector<Config> configurations(const Bes& b) {
  BesModel m(b);
  std::vector<Config> r;
  r.reserve(m.configs.size());
  for (Mask x : m.configs) r.push_back(m.to_config(x));
  return r;
}

// All event traces. Exponential; intended for small property-test
// instances only.
inline void all_traces_rec(const BesModel& m, Mask x, std::vector<EventId>& cur,
                           std::vector<std::vector<EventId>>& out) {
  out.push_back(cur);
  for (int e = 0; e < m.n; ++e) {
    if (!m.enabled(x, e)) continue;
    cur.push_back(m.ids[e]);
    all_traces_rec(m, x | BesModel::bit(e), cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<EventId>> all_traces(const Bes& b) {
  BesModel m(b);
  std::vector<std::vector<EventId>> out;
  std::vector<EventId> cur;
  all_traces_rec(m, 0, cur, out);
  return out;
}

// The sub-BES order, all six clauses.
inline bool sub_bes_leq(const Bes& e, const Bes& f) {
  if (!std::includes(f.events.begin(), f.events.end(), e.events.begin(), e.events.end()))
    return false;
  // conflict restriction: #_E = #_F on E x E
  for (const auto& c : e.conflicts)
    if (!f.conflicts.count(c)) return false;
  for (const auto& c : f.conflicts)
    if (e.events.count(c.first) && e.events.count(c.second) && !e.conflicts.count(c)) return false;
  // bundle inclusion and restriction
  for (const auto& bu : e.bundles)
    if (!f.bundles.count(bu)) return false;
  for (const auto& bu : f.bundles) {
    if (!e.events.count(bu.target)) continue;
    for (const auto& x : bu.set)
      if (!e.events.count(x)) return false;
    if (!e.bundles.count(bu)) return false;
  }
  // label restriction
  for (const auto& [ev, l] : e.labels) {
    auto it = f.labels.find(ev);
    if (it == f.labels.end() || it->second != l) return false;
  }
  for (const auto& [ev, l] : f.labels)
    if (e.events.count(ev) && (!e.labels.count(ev) || e.labels.at(ev) != l)) return false;
  // final restriction
  for (const auto& ev : e.finals)
    if (!f.finals.count(ev)) return false;
  for (const auto& ev : f.finals)
    if (e.events.count(ev) && !e.finals.count(ev)) return false;
  return true;
}

}  // namespace pcka
