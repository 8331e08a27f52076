#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcka/algebra.hpp"
#include "pcka/cluster.hpp"
#include "pcka/rational.hpp"
#include "pcka/term.hpp"

namespace pcka {

// A probability distribution over events, exact and normalised.
struct EventDist {
  std::map<EventId, Rat> p;

  friend auto operator<=>(const EventDist&, const EventDist&) = default;

  static EventDist make(std::map<EventId, Rat> m) {
    if (m.empty()) throw std::invalid_argument("distribution with empty support");
    Rat sum = 0;
    for (const auto& [e, r] : m) {
      if (!(r > 0 && r <= 1))
        throw std::invalid_argument("probability out of range at " + e.str());
      sum += r;
    }
    if (sum != 1) throw std::invalid_argument("probabilities sum to " + rat_to_string(sum));
    return EventDist{std::move(m)};
  }

  static EventDist point(const EventId& e) { return EventDist{{{e, Rat(1)}}}; }

  std::set<EventId> support() const {
    std::set<EventId> s;
    for (const auto& [e, r] : p) s.insert(e);
    return s;
  }
};

// Mix two distributions with weights (1-alpha, alpha).
inline EventDist mix(const EventDist& a, const Rat& alpha, const EventDist& b) {
  std::map<EventId, Rat> m;
  for (const auto& [e, r] : a.p) m[e] += (1 - alpha) * r;
  for (const auto& [e, r] : b.p) m[e] += alpha * r;
  return EventDist::make(std::move(m));
}

// Probabilistic BES: a BES together with a set of distributions, each
// meant to be supported inside a single cluster. Deep validation is
// explicit via validate_pbes.
struct Pbes {
  Bes bes;
  std::vector<EventDist> pi;  // sorted, duplicate-free

  void normalise() {
    std::sort(pi.begin(), pi.end());
    pi.erase(std::unique(pi.begin(), pi.end()), pi.end());
  }
};

inline Pbes pbes_zero() { return {bes_zero(), {}}; }

inline Pbes pbes_one() {
  Bes b = bes_one();
  return {b, {EventDist::point(*b.events.begin())}};
}

inline Pbes pbes_action(const std::string& a) {
  Bes b = bes_action(a);
  return {b, {EventDist::point(*b.events.begin())}};
}

namespace detail {

template <typename F>
inline std::vector<EventDist> map_dists(const std::vector<EventDist>& pi, F&& f) {
  std::vector<EventDist> out;
  out.reserve(pi.size());
  for (const auto& d : pi) {
    std::map<EventId, Rat> m;
    for (const auto& [e, r] : d.p) m.emplace(f(e), r);
    out.push_back(EventDist{std::move(m)});
  }
  return out;
}

}  // namespace detail

inline Pbes retag(const Pbes& p, Tag::Kind side) {
  auto f = [&](const EventId& e) { return e.prefixed(Tag::side(side)); };
  Pbes r{retag(p.bes, side), detail::map_dists(p.pi, f)};
  r.normalise();
  return r;
}

inline Pbes with_copy(const Pbes& p, int i) {
  auto f = [&](const EventId& e) { return e.suffixed(Tag::copy(i)); };
  Pbes r{with_copy(p.bes, i), detail::map_dists(p.pi, f)};
  r.normalise();
  return r;
}

// Nondeterministic choice and sequencing just pool the distributions;
// parallel composition adds point distributions for its two delimiters.
inline Pbes compose_pbes(BinOp op, const Pbes& p, const Pbes& q) {
  Pbes r;
  r.bes = compose(op, p.bes, q.bes);
  r.pi = p.pi;
  r.pi.insert(r.pi.end(), q.pi.begin(), q.pi.end());
  if (op == BinOp::par) {
    r.pi.push_back(EventDist::point(EventId{{Tag::side(Tag::Kind::start)}}));
    r.pi.push_back(EventDist::point(EventId{{Tag::side(Tag::Kind::finish)}}));
  }
  r.normalise();
  return r;
}

// Probabilistic choice: the underlying structure is the sum, and every
// initially-supported distribution of the left mixes with every
// initially-supported one of the right, weighted (1-alpha, alpha).
// Distributions below the first step carry over unchanged.
inline Pbes pchoice(const Pbes& p, const Rat& alpha, const Pbes& q) {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("probabilistic choice weight must lie strictly between 0 and 1");
  Pbes r;
  r.bes = compose(BinOp::plus, p.bes, q.bes);
  std::set<EventId> init = init_events(r.bes);
  auto initial = [&](const EventDist& d) {
    for (const auto& [e, w] : d.p)
      if (!init.count(e)) return false;
    return true;
  };
  for (const auto& dp : p.pi)
    if (initial(dp))
      for (const auto& dq : q.pi)
        if (initial(dq)) r.pi.push_back(mix(dp, alpha, dq));
  for (const auto& d : p.pi)
    if (!initial(d)) r.pi.push_back(d);
  for (const auto& d : q.pi)
    if (!initial(d)) r.pi.push_back(d);
  r.normalise();
  return r;
}

// Truncated Kleene star over pBES, mirroring the plain construction so
// that the underlying BES coincides with kleene_truncate.
inline Pbes kleene_truncate_pbes(const Pbes& e, const Pbes& f, int k) {
  if (k < 0) throw std::invalid_argument("negative star depth");
  Pbes r = with_copy(f, k);
  for (int i = k - 1; i >= 0; --i)
    r = compose_pbes(BinOp::plus, with_copy(f, i), compose_pbes(BinOp::seq, with_copy(e, i), r));
  return r;
}

// The sub-pBES order: sub-BES on structure, and the smaller side keeps
// exactly the distributions supported inside it.
inline bool sub_pbes_leq(const Pbes& p, const Pbes& q) {
  if (!sub_bes_leq(p.bes, q.bes)) return false;
  std::vector<EventDist> restricted;
  for (const auto& d : q.pi) {
    bool inside = true;
    for (const auto& [e, w] : d.p)
      if (!p.bes.events.count(e)) inside = false;
    if (inside) restricted.push_back(d);
  }
  std::sort(restricted.begin(), restricted.end());
  return restricted == p.pi;
}

inline Pbes elaborate_pbes(const TermPtr& t, std::optional<int> depth = std::nullopt) {
  if (term_has_star(t) && !depth)
    throw std::invalid_argument("term contains a Kleene star: an explicit depth is required");
  switch (t->kind) {
    case Term::Kind::zero: return pbes_zero();
    case Term::Kind::one: return pbes_one();
    case Term::Kind::action: return pbes_action(t->name);
    case Term::Kind::plus:
    case Term::Kind::seq:
    case Term::Kind::par: {
      BinOp op = t->kind == Term::Kind::plus ? BinOp::plus
               : t->kind == Term::Kind::seq ? BinOp::seq
                                            : BinOp::par;
      return compose_pbes(op, retag(elaborate_pbes(t->left, depth), Tag::Kind::left),
                          retag(elaborate_pbes(t->right, depth), Tag::Kind::right));
    }
    case Term::Kind::pchoice:
      return pchoice(retag(elaborate_pbes(t->left, depth), Tag::Kind::left), t->alpha,
                     retag(elaborate_pbes(t->right, depth), Tag::Kind::right));
    case Term::Kind::star:
      return kleene_truncate_pbes(retag(elaborate_pbes(t->left, depth), Tag::Kind::left),
                                  retag(elaborate_pbes(t->right, depth), Tag::Kind::right),
                                  *depth);
  }
  throw std::logic_error("unreachable");
}

struct PbesReport {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string v) {
    ok = false;
    violations.push_back(std::move(v));
  }
};

// Full validation: structural BES invariants, exact confusion freeness,
// cluster-supported distributions, and support coverage of every event.
inline PbesReport validate_pbes(const Pbes& p) {
  PbesReport rep;
  try {
    validate_bes(p.bes);
  } catch (const std::exception& ex) {
    rep.fail(std::string("structure: ") + ex.what());
    return rep;
  }
  auto conf = confusion_free_exact(p.bes);
  if (!conf.confusion_free) {
    std::string v = "not confusion free: ";
    const auto& w = *conf.witness;
    if (w.kind == ConfusionWitness::Kind::conflict_outside_cluster)
      v += w.e.str() + " immediately conflicts " + w.e2.str() + " outside its cluster";
    else
      v += "cluster of " + w.e.str() + " not uniformly enabled";
    rep.fail(std::move(v));
  }
  BesModel m(p.bes);
  detail::ClusterContext cctx(m);
  auto ce = detail::cluster_intersections(m, cctx);
  std::set<EventId> covered;
  for (const auto& d : p.pi) {
    Rat sum = 0;
    for (const auto& [e, w] : d.p) {
      sum += w;
      covered.insert(e);
      if (!p.bes.events.count(e)) rep.fail("distribution over unknown event " + e.str());
      if (!(w > 0 && w <= 1)) rep.fail("probability out of range at " + e.str());
    }
    if (sum != 1) rep.fail("distribution sums to " + rat_to_string(sum));
    // supported inside <e> for some event e
    bool inside_some = false;
    for (int i = 0; i < m.n && !inside_some; ++i) {
      bool inside = true;
      for (const auto& [e, w] : d.p)
        if (!ce[i].count(e)) inside = false;
      inside_some = inside;
    }
    if (!inside_some) {
      std::string v = "distribution not supported inside one cluster:";
      for (const auto& [e, w] : d.p) v += " " + e.str();
      rep.fail(std::move(v));
    }
  }
  for (const auto& e : p.bes.events)
    if (!covered.count(e)) rep.fail("event " + e.str() + " not in the support of any distribution");
  return rep;
}

}  // namespace pcka
