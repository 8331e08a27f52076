#pragma once

#include <random>
#include <string>
#include <vector>

#include "pcka/algebra.hpp"
#include "pcka/bes.hpp"
#include "pcka/pes.hpp"
#include "pcka/term.hpp"

namespace testutil {

using namespace pcka;

inline EventId ev(const std::string& s) { return EventId::named(s); }

// Five events, bundles {e1,e2}|->e4 and {e3}|->e5, conflicts
// e1#e2, e2#e3, e4#e5. The classic confused structure: e1 and e3 are
// concurrent, and firing e2 resolves e4#e5 from the outside.
inline Bes confused_bes() {
  std::set<EventId> events{ev("e1"), ev("e2"), ev("e3"), ev("e4"), ev("e5")};
  std::set<ConflictPair> cfl{make_conflict(ev("e1"), ev("e2")), make_conflict(ev("e2"), ev("e3")),
                             make_conflict(ev("e4"), ev("e5"))};
  std::set<Bundle> bundles{Bundle{{ev("e1"), ev("e2")}, ev("e4")}, Bundle{{ev("e3")}, ev("e5")}};
  std::map<EventId, std::string> labels;
  for (const auto& e : events) labels.emplace(e, e.str());
  return make_bes(events, cfl, bundles, labels, {});
}

// Bundles {e1}|->e3, {e2}|->e4, {e2}|->e5; conflicts e1#e2, e3#e4,
// e4#e5, e3#e5. Confusion free, with clusters {e1,e2}, {e3}, {e4,e5}.
inline Bes cluster_bes() {
  std::set<EventId> events{ev("e1"), ev("e2"), ev("e3"), ev("e4"), ev("e5")};
  std::set<ConflictPair> cfl{make_conflict(ev("e1"), ev("e2")), make_conflict(ev("e3"), ev("e4")),
                             make_conflict(ev("e4"), ev("e5")), make_conflict(ev("e3"), ev("e5"))};
  std::set<Bundle> bundles{Bundle{{ev("e1")}, ev("e3")}, Bundle{{ev("e2")}, ev("e4")},
                           Bundle{{ev("e2")}, ev("e5")}};
  std::map<EventId, std::string> labels;
  for (const auto& e : events) labels.emplace(e, e.str());
  return make_bes(events, cfl, bundles, labels, {});
}

struct TermGenOpts {
  bool allow_pchoice = true;
  bool allow_star = true;
  bool allow_zero = true;
  std::vector<std::string> atoms{"a", "b", "c"};
};

inline TermPtr random_regular_term(std::mt19937_64& rng, int size, const TermGenOpts& o = {}) {
  auto leaf = [&]() -> TermPtr {
    unsigned r = rng() % 8;
    if (r == 0 && o.allow_zero) return t_zero();
    if (r == 1) return t_one();
    return t_action(o.atoms[rng() % o.atoms.size()]);
  };
  if (size <= 1) return leaf();
  unsigned r = rng() % 10;
  if (r < 2) return leaf();
  int ls = 1 + static_cast<int>(rng() % static_cast<unsigned>(size - 1));
  TermPtr l = random_regular_term(rng, ls, o);
  TermPtr rt = random_regular_term(rng, size - ls, o);
  std::vector<int> ops{0, 1, 2};
  if (o.allow_star) ops.push_back(3);
  if (o.allow_pchoice) ops.push_back(4);
  switch (ops[rng() % ops.size()]) {
    case 0: return t_plus(l, rt);
    case 1: return t_seq(l, rt);
    case 2: return t_par(l, rt);
    case 3: return t_star(l, rt);
    default: {
      Rat alphas[] = {Rat(1, 2), Rat(1, 5), Rat(2, 3)};
      return t_pchoice(l, alphas[rng() % 3], rt);
    }
  }
}

// Arbitrary well-formed BES: random conflict graph, bundle sets drawn
// as conflict cliques, finals as a conflict clique avoiding bundle sets.
inline Bes random_bes(std::mt19937_64& rng, int max_events = 7) {
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_events));
  std::vector<EventId> es;
  for (int i = 0; i < n; ++i) es.push_back(ev("x" + std::to_string(i)));
  Bes b;
  b.events.insert(es.begin(), es.end());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 3 == 0) b.conflicts.insert(make_conflict(es[i], es[j]));
  auto random_clique = [&]() {
    std::set<EventId> c;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (int i : order) {
      bool ok = true;
      for (const auto& e : c)
        if (!b.in_conflict(es[i], e)) ok = false;
      if (ok && (c.empty() || rng() % 2)) c.insert(es[i]);
      if (c.size() >= 3) break;
    }
    return c;
  };
  int nb = static_cast<int>(rng() % static_cast<unsigned>(n + 1));
  for (int k = 0; k < nb; ++k) {
    Bundle bu;
    bu.set = random_clique();
    bu.target = es[rng() % n];
    if (bu.set.count(bu.target) || bu.set.empty()) continue;
    b.bundles.insert(bu);
  }
  const char* sigma[] = {"a", "b", "c"};
  for (int i = 0; i < n; ++i)
    if (rng() % 4 != 0) b.labels.emplace(es[i], sigma[rng() % 3]);
  if (rng() % 2) {
    std::set<EventId> fin = random_clique();
    for (const auto& bu : b.bundles)
      for (const auto& e : bu.set) fin.erase(e);
    b.finals = fin;
  }
  validate_bes(b);
  return b;
}

inline Pes random_pes(std::mt19937_64& rng, int max_events = 6) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_events));
    std::vector<EventId> es;
    for (int i = 0; i < n; ++i) es.push_back(ev("p" + std::to_string(i)));
    Pes p;
    p.events.insert(es.begin(), es.end());
    // random strict order: edges i -> j only for i < j, then closed
    std::vector<std::vector<char>> lt(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) lt[i][j] = 1;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (lt[i][k] && lt[k][j]) lt[i][j] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lt[i][j]) p.below.insert({es[i], es[j]});
    // seed conflicts on incomparable pairs, then close hereditarily
    std::vector<std::vector<char>> cf(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!lt[i][j] && !lt[j][i] && rng() % 4 == 0) cf[i][j] = cf[j][i] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (cf[i][j])
            for (int k = 0; k < n; ++k)
              if (lt[j][k] && !cf[i][k]) cf[i][k] = cf[k][i] = 1, changed = true;
    }
    bool reflexive = false;
    for (int i = 0; i < n; ++i)
      if (cf[i][i]) reflexive = true;
    if (reflexive) continue;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (cf[i][j]) p.conflicts.insert(make_conflict(es[i], es[j]));
    const char* sigma[] = {"a", "b", "c"};
    for (int i = 0; i < n; ++i)
      if (rng() % 4 != 0) p.labels.emplace(es[i], sigma[rng() % 3]);
    validate_pes(p);
    return p;
  }
  throw std::runtime_error("random_pes: no valid instance found");
}

// Down-closed conflict-free subsets: the PES configuration oracle.
inline std::set<std::set<EventId>> pes_configs_oracle(const Pes& p) {
  std::vector<EventId> es(p.events.begin(), p.events.end());
  int n = static_cast<int>(es.size());
  std::set<std::set<EventId>> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    std::set<EventId> s;
    for (int i = 0; i < n; ++i)
      if (m & (1u << i)) s.insert(es[i]);
    bool ok = true;
    for (const auto& e : s)
      for (const auto& d : p.events)
        if (p.lt(d, e) && !s.count(d)) ok = false;
    for (auto i = s.begin(); i != s.end() && ok; ++i)
      for (auto j = std::next(i); j != s.end() && ok; ++j)
        if (p.in_conflict(*i, *j)) ok = false;
    if (ok) out.insert(std::move(s));
  }
  return out;
}

}  // namespace testutil
