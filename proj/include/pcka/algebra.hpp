#pragma once

#include <optional>
#include <stdexcept>

#include "pcka/bes.hpp"
#include "pcka/term.hpp"

namespace pcka {

enum class BinOp { plus, seq, par };

inline Bes bes_zero() { return {}; }

inline Bes bes_one() {
  Bes b;
  EventId e = EventId::named("1");
  b.events.insert(e);
  b.finals.insert(e);
  return b;
}

inline Bes bes_action(const std::string& a) {
  Bes b;
  EventId e = EventId::named(a);
  b.events.insert(e);
  b.labels.emplace(e, a);
  b.finals.insert(e);
  return b;
}

namespace detail {

template <typename F>
inline Bes map_events(const Bes& b, F&& f) {
  Bes r;
  for (const auto& e : b.events) r.events.insert(f(e));
  for (const auto& [x, y] : b.conflicts) r.conflicts.insert(make_conflict(f(x), f(y)));
  for (const auto& bu : b.bundles) {
    Bundle nb;
    nb.target = f(bu.target);
    for (const auto& e : bu.set) nb.set.insert(f(e));
    r.bundles.insert(std::move(nb));
  }
  for (const auto& [e, l] : b.labels) r.labels.emplace(f(e), l);
  for (const auto& e : b.finals) r.finals.insert(f(e));
  return r;
}

}  // namespace detail

inline Bes retag(const Bes& b, Tag::Kind side) {
  return detail::map_events(b, [&](const EventId& e) { return e.prefixed(Tag::side(side)); });
}

inline Bes with_copy(const Bes& b, int i) {
  return detail::map_events(b, [&](const EventId& e) { return e.suffixed(Tag::copy(i)); });
}

// Initial events: no incoming bundle at all. Note that an event pointed
// by an empty bundle is not initial (and can in fact never occur).
inline std::set<EventId> init_events(const Bes& b) {
  std::set<EventId> r = b.events;
  for (const auto& bu : b.bundles) r.erase(bu.target);
  return r;
}

namespace detail {

inline void require_disjoint(const Bes& e, const Bes& f) {
  for (const auto& ev : e.events)
    if (f.events.count(ev))
      throw std::invalid_argument("operand event sets not disjoint: " + ev.str());
}

inline Bes union_parts(const Bes& e, const Bes& f) {
  Bes r;
  r.events.insert(e.events.begin(), e.events.end());
  r.events.insert(f.events.begin(), f.events.end());
  r.conflicts.insert(e.conflicts.begin(), e.conflicts.end());
  r.conflicts.insert(f.conflicts.begin(), f.conflicts.end());
  r.bundles.insert(e.bundles.begin(), e.bundles.end());
  r.bundles.insert(f.bundles.begin(), f.bundles.end());
  r.labels.insert(e.labels.begin(), e.labels.end());
  r.labels.insert(f.labels.begin(), f.labels.end());
  return r;
}

}  // namespace detail

// The three binary constructions. Operands must have disjoint event
// sets; elaboration guarantees this by retagging.
inline Bes compose(BinOp op, const Bes& e, const Bes& f) {
  detail::require_disjoint(e, f);
  Bes r = detail::union_parts(e, f);
  switch (op) {
    case BinOp::plus: {
      for (const auto& a : init_events(e))
        for (const auto& b : init_events(f)) r.conflicts.insert(make_conflict(a, b));
      for (const auto& a : e.finals)
        for (const auto& b : f.finals) r.conflicts.insert(make_conflict(a, b));
      r.finals.insert(e.finals.begin(), e.finals.end());
      r.finals.insert(f.finals.begin(), f.finals.end());
      break;
    }
    case BinOp::seq: {
      for (const auto& b : init_events(f)) r.bundles.insert(Bundle{e.finals, b});
      r.finals = f.finals;
      break;
    }
    case BinOp::par: {
      EventId start{{Tag::side(Tag::Kind::start)}};
      EventId finish{{Tag::side(Tag::Kind::finish)}};
      if (r.events.count(start) || r.events.count(finish))
        throw std::invalid_argument("parallel delimiter identity already taken");
      r.events.insert(start);
      r.events.insert(finish);
      for (const auto& b : init_events(e)) r.bundles.insert(Bundle{{start}, b});
      for (const auto& b : init_events(f)) r.bundles.insert(Bundle{{start}, b});
      r.bundles.insert(Bundle{e.finals, finish});
      r.bundles.insert(Bundle{f.finals, finish});
      r.finals = {finish};
      break;
    }
  }
  validate_bes(r);
  return r;
}

// Truncated binary Kleene star E*F at depth k, laid out so that the
// depth-(k-1) truncation is literally a sub-BES of the depth-k one:
// copy i of F and E carry copy tag i, and no operand retagging happens
// inside the recursion.
inline Bes kleene_truncate(const Bes& e, const Bes& f, int k) {
  if (k < 0) throw std::invalid_argument("negative star depth");
  detail::require_disjoint(e, f);
  Bes r = with_copy(f, k);
  for (int i = k - 1; i >= 0; --i)
    r = compose(BinOp::plus, with_copy(f, i), compose(BinOp::seq, with_copy(e, i), r));
  return r;
}

// Plain (probability-free) elaboration. The star depth must be given
// explicitly whenever the term contains a star.
inline Bes elaborate_plain(const TermPtr& t, std::optional<int> depth = std::nullopt) {
  if (term_has_star(t) && !depth)
    throw std::invalid_argument("term contains a Kleene star: an explicit depth is required");
  switch (t->kind) {
    case Term::Kind::zero: return bes_zero();
    case Term::Kind::one: return bes_one();
    case Term::Kind::action: return bes_action(t->name);
    case Term::Kind::pchoice:
      throw std::invalid_argument(
          "probabilistic choice has no plain elaboration; use the probabilistic pipeline");
    case Term::Kind::plus:
    case Term::Kind::seq:
    case Term::Kind::par: {
      BinOp op = t->kind == Term::Kind::plus ? BinOp::plus
               : t->kind == Term::Kind::seq ? BinOp::seq
                                            : BinOp::par;
      return compose(op, retag(elaborate_plain(t->left, depth), Tag::Kind::left),
                     retag(elaborate_plain(t->right, depth), Tag::Kind::right));
    }
    case Term::Kind::star:
      return kleene_truncate(retag(elaborate_plain(t->left, depth), Tag::Kind::left),
                             retag(elaborate_plain(t->right, depth), Tag::Kind::right), *depth);
  }
  throw std::logic_error("unreachable");
}

}  // namespace pcka
