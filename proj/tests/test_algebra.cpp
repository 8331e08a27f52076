#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "pcka/algebra.hpp"
#include "pcka/pomset.hpp"

using namespace pcka;
using testutil::ev;

namespace {

EventId L(const EventId& e) { return e.prefixed(Tag::side(Tag::Kind::left)); }
EventId R(const EventId& e) { return e.prefixed(Tag::side(Tag::Kind::right)); }

bool maximal(const BesModel& m, Mask x) { return m.enabled_set(x) == 0; }

}  // namespace

TEST_CASE("atoms") {
  REQUIRE(bes_zero().events.empty());
  Bes one = bes_one();
  REQUIRE(one.events.size() == 1);
  REQUIRE(one.labels.empty());
  REQUIRE(one.finals == one.events);
  Bes a = bes_action("a");
  REQUIRE(a.events.size() == 1);
  REQUIRE(a.labels.begin()->second == "a");
  REQUIRE(a.finals == a.events);
}

TEST_CASE("parallel composition delimits both operands") {
  Bes p = compose(BinOp::par, retag(bes_action("a"), Tag::Kind::left),
                  retag(bes_action("b"), Tag::Kind::right));
  REQUIRE(p.events.size() == 4);
  EventId s{{Tag::side(Tag::Kind::start)}};
  EventId t{{Tag::side(Tag::Kind::finish)}};
  EventId a = L(ev("a")), b = R(ev("b"));
  REQUIRE(p.finals == std::set<EventId>{t});
  REQUIRE(p.bundles.count(Bundle{{s}, a}));
  REQUIRE(p.bundles.count(Bundle{{s}, b}));
  REQUIRE(p.bundles.count(Bundle{{a}, t}));
  REQUIRE(p.bundles.count(Bundle{{b}, t}));
  REQUIRE(p.bundles.size() == 4);
  REQUIRE(p.conflicts.empty());
}

TEST_CASE("sequential composition bundles exits to initials") {
  Bes s = compose(BinOp::seq, retag(bes_action("a"), Tag::Kind::left),
                  retag(bes_action("b"), Tag::Kind::right));
  EventId a = L(ev("a")), b = R(ev("b"));
  REQUIRE(s.bundles == std::set<Bundle>{Bundle{{a}, b}});
  REQUIRE(s.finals == std::set<EventId>{b});
}

TEST_CASE("nondeterministic choice conflicts initials and finals") {
  Bes p = compose(BinOp::plus, retag(bes_action("a"), Tag::Kind::left),
                  retag(bes_action("b"), Tag::Kind::right));
  EventId a = L(ev("a")), b = R(ev("b"));
  REQUIRE(p.conflicts == std::set<ConflictPair>{make_conflict(a, b)});
  REQUIRE(p.finals == std::set<EventId>{a, b});
}

TEST_CASE("sequencing after deadlock blocks the continuation") {
  Bes s = compose(BinOp::seq, retag(bes_zero(), Tag::Kind::left),
                  retag(bes_action("a"), Tag::Kind::right));
  REQUIRE(s.events.size() == 1);
  auto cs = configurations(s);
  REQUIRE(cs.size() == 1);  // only the empty configuration
  REQUIRE(cs[0].events.empty());
}

TEST_CASE("composition requires disjoint operands") {
  Bes a = bes_action("a");
  REQUIRE_THROWS_AS(compose(BinOp::plus, a, a), std::invalid_argument);
}

TEST_CASE("star truncations match the expected series") {
  Bes a = bes_action("a"), b = bes_action("b");
  auto f = [&](int i) { return ev("b").suffixed(Tag::copy(i)); };
  auto e = [&](int i) { return ev("a").suffixed(Tag::copy(i)); };

  Bes k0 = kleene_truncate(a, b, 0);
  REQUIRE(k0.events == std::set<EventId>{f(0)});
  REQUIRE(k0.labels.at(f(0)) == "b");
  REQUIRE(k0.finals == std::set<EventId>{f(0)});

  Bes k1 = kleene_truncate(a, b, 1);
  REQUIRE(k1.events == std::set<EventId>{f(0), e(0), f(1)});
  REQUIRE(k1.bundles == std::set<Bundle>{Bundle{{e(0)}, f(1)}});
  REQUIRE(k1.conflicts ==
          std::set<ConflictPair>{make_conflict(f(0), e(0)), make_conflict(f(0), f(1))});

  Bes k2 = kleene_truncate(a, b, 2);
  REQUIRE(k2.events == std::set<EventId>{f(0), e(0), f(1), e(1), f(2)});
  REQUIRE(k2.bundles == std::set<Bundle>{Bundle{{e(0)}, f(1)}, Bundle{{e(0)}, e(1)},
                                         Bundle{{e(1)}, f(2)}});
  // immediate structure f0#e0, f1#e1 plus the derived final-final pairs
  REQUIRE(k2.conflicts == std::set<ConflictPair>{
                              make_conflict(f(0), e(0)), make_conflict(f(1), e(1)),
                              make_conflict(f(0), f(1)), make_conflict(f(0), f(2)),
                              make_conflict(f(1), f(2))});
  for (int i = 0; i < 2; ++i) {
    Bes lo = kleene_truncate(a, b, i), hi = kleene_truncate(a, b, i + 1);
    REQUIRE(sub_bes_leq(lo, hi));
  }
}

TEST_CASE("elaboration folds the constructions") {
  REQUIRE(configurations(elaborate_plain(parse_term("a ; b + b ; a"))).size() == 5);
  REQUIRE(elaborate_plain(parse_term("1")).events.size() == 1);
  Bes k2 = elaborate_plain(parse_term("a*b"), 2);
  REQUIRE(k2.events.size() == 5);
  REQUIRE_THROWS_AS(elaborate_plain(parse_term("a*b")), std::invalid_argument);
  REQUIRE_THROWS_AS(elaborate_plain(parse_term("a [1/2] b")), std::invalid_argument);
}

TEST_CASE("exits of every construction are pairwise conflicting") {
  std::mt19937_64 rng(31);
  testutil::TermGenOpts opts;
  opts.allow_pchoice = false;
  for (int i = 0; i < 60; ++i) {
    TermPtr t = testutil::random_regular_term(rng, 1 + static_cast<int>(rng() % 6), opts);
    Bes b = elaborate_plain(t, 2);
    for (auto i1 = b.finals.begin(); i1 != b.finals.end(); ++i1)
      for (auto i2 = std::next(i1); i2 != b.finals.end(); ++i2)
        REQUIRE(b.in_conflict(*i1, *i2));
  }
}

TEST_CASE("star truncations form a chain with growing languages") {
  for (const char* src : {"a*b", "(a ; b)*c", "(a + b)*(c ; a)"}) {
    TermPtr t = parse_term(src);
    for (int k = 0; k < 3; ++k) {
      Bes lo = elaborate_plain(t, k), hi = elaborate_plain(t, k + 1);
      REQUIRE(sub_bes_leq(lo, hi));
      auto llo = pomset_language(lo), lhi = pomset_language(hi);
      REQUIRE(std::includes(lhi.begin(), lhi.end(), llo.begin(), llo.end()));
    }
  }
}

TEST_CASE("configurations containing a final event are maximal") {
  std::mt19937_64 rng(32);
  testutil::TermGenOpts opts;
  opts.allow_pchoice = false;
  for (int i = 0; i < 60; ++i) {
    TermPtr t = testutil::random_regular_term(rng, 1 + static_cast<int>(rng() % 6), opts);
    BesModel m(elaborate_plain(t, 2));
    for (Mask x : m.configs)
      if (x & m.finals_mask) REQUIRE(maximal(m, x));
  }
}

TEST_CASE("a sequential configuration touching the tail maximises the head") {
  std::mt19937_64 rng(33);
  testutil::TermGenOpts opts;
  opts.allow_pchoice = false;
  for (int i = 0; i < 40; ++i) {
    TermPtr tl = testutil::random_regular_term(rng, 1 + static_cast<int>(rng() % 3), opts);
    TermPtr tr = testutil::random_regular_term(rng, 1 + static_cast<int>(rng() % 3), opts);
    Bes e = retag(elaborate_plain(tl, 1), Tag::Kind::left);
    Bes f = retag(elaborate_plain(tr, 1), Tag::Kind::right);
    Bes sq = compose(BinOp::seq, e, f);
    BesModel msq(sq);
    BesModel me(e);
    for (Mask x : msq.configs) {
      std::vector<EventId> in_f, in_e;
      for (const auto& id : msq.to_ids(x))
        (f.events.count(id) ? in_f : in_e).push_back(id);
      if (in_f.empty()) continue;
      REQUIRE(maximal(me, me.to_mask(in_e)));
    }
  }
}

TEST_CASE("quantale laws hold under pomset language semantics") {
  auto lang_eq = [](const Bes& x, const Bes& y) {
    return pomset_language(x) == pomset_language(y);
  };
  auto E = [&](const char* s) { return elaborate_plain(parse_term(s), 1); };

  REQUIRE(lang_eq(E("a + a"), E("a")));
  REQUIRE(lang_eq(E("a + b"), E("b + a")));
  REQUIRE(lang_eq(E("a + (b + c)"), E("(a + b) + c")));
  REQUIRE(lang_eq(E("a + 0"), E("a")));
  REQUIRE(lang_eq(E("a ; (b ; c)"), E("(a ; b) ; c")));
  REQUIRE(lang_eq(E("a ; 1"), E("a")));
  REQUIRE(lang_eq(E("1 ; a"), E("a")));
  REQUIRE(lang_eq(E("0 ; a"), E("0")));
  REQUIRE(lang_eq(E("a || b"), E("b || a")));
  REQUIRE(lang_eq(E("a || (b || c)"), E("(a || b) || c")));
  REQUIRE(lang_eq(E("1 || a"), E("a")));
  REQUIRE(lang_eq(E("(a + b) ; c"), E("a ; c + b ; c")));
  REQUIRE(lang_eq(E("a ; b + a ; c"), E("a ; (b + c)")));
  REQUIRE(lang_eq(E("a || b + a || c"), E("a || (b + c)")));
  // interchange is an inclusion
  REQUIRE(language_leq(E("(a || b) ; (c || a)"), E("(a ; c) || (b ; a)")));
  REQUIRE_FALSE(language_leq(E("(a ; c) || (b ; a)"), E("(a || b) ; (c || a)")));
}
