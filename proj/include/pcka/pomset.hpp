#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pcka/lposet.hpp"

namespace pcka {

// A pomset as a canonical representative: vertices 0..n-1 sorted by
// label, strict order pairs minimised lexicographically over all
// label-preserving renumberings. Two lposets are isomorphic iff their
// canonical pomsets compare equal.
struct Pomset {
  std::vector<std::string> labels;
  std::set<std::pair<int, int>> order;

  friend auto operator<=>(const Pomset&, const Pomset&) = default;
};

namespace detail {

inline void canonical_rec(const std::vector<std::vector<int>>& classes, std::size_t ci,
                          std::vector<int>& perm, const std::vector<std::vector<char>>& adj,
                          std::set<std::pair<int, int>>& best, bool& have) {
  if (ci == classes.size()) {
    // perm maps original vertex -> canonical position
    std::set<std::pair<int, int>> cand;
    int n = static_cast<int>(perm.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (adj[i][j]) cand.insert({perm[i], perm[j]});
    if (!have || cand < best) {
      best = std::move(cand);
      have = true;
    }
    return;
  }
  std::vector<int> cls = classes[ci];
  std::sort(cls.begin(), cls.end());
  std::vector<int> slots = cls;  // canonical positions reserved for this class
  do {
    for (std::size_t k = 0; k < cls.size(); ++k) perm[cls[k]] = slots[k];
    canonical_rec(classes, ci + 1, perm, adj, best, have);
  } while (std::next_permutation(cls.begin(), cls.end()));
}

}  // namespace detail

// Canonical form of the labelled part of an lposet.
inline Pomset canonical_pomset(const Lposet& u_full) {
  Lposet u = u_full.labelled_restriction();
  int n = static_cast<int>(u.carrier.size());
  // sort vertices by label; positions of equal labels form one class
  std::vector<int> by_label(n);
  std::iota(by_label.begin(), by_label.end(), 0);
  std::stable_sort(by_label.begin(), by_label.end(), [&](int a, int b) {
    return u.labels.at(u.carrier[a]) < u.labels.at(u.carrier[b]);
  });
  std::vector<int> pos(n);  // original index -> canonical slot before class permutation
  for (int k = 0; k < n; ++k) pos[by_label[k]] = k;

  Pomset p;
  p.labels.resize(n);
  for (int i = 0; i < n; ++i) p.labels[pos[i]] = u.labels.at(u.carrier[i]);

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : u.below) {
    int i = static_cast<int>(std::lower_bound(u.carrier.begin(), u.carrier.end(), a) - u.carrier.begin());
    int j = static_cast<int>(std::lower_bound(u.carrier.begin(), u.carrier.end(), b) - u.carrier.begin());
    adj[pos[i]][pos[j]] = 1;
  }
  std::vector<std::vector<int>> classes;
  for (int k = 0; k < n;) {
    int m = k;
    while (m < n && p.labels[m] == p.labels[k]) ++m;
    std::vector<int> cls;
    for (int t = k; t < m; ++t) cls.push_back(t);
    classes.push_back(std::move(cls));
    k = m;
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  bool have = false;
  std::set<std::pair<int, int>> best;
  detail::canonical_rec(classes, 0, perm, adj, best, have);
  p.order = std::move(best);
  return p;
}

namespace detail {

using OrderMat = std::vector<std::uint32_t>;  // row i: bits j with i < j strictly

inline bool om_get(const OrderMat& m, int i, int j) { return (m[i] >> j) & 1u; }

inline void om_close(OrderMat& m, int n) {
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (om_get(m, i, k)) m[i] |= m[k];
}

// All partial orders on n vertices containing `base`, found by adding
// one pair at a time and closing transitively. Antisymmetry prunes.
inline void order_extensions_rec(const OrderMat& cur, int n, std::set<OrderMat>& seen) {
  if (!seen.insert(cur).second) return;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || om_get(cur, i, j) || om_get(cur, j, i)) continue;
      OrderMat next = cur;
      next[i] |= (1u << j);
      om_close(next, n);
      bool anti = true;
      for (int a = 0; a < n && anti; ++a)
        if (next[a] & (1u << a)) anti = false;
      for (int a = 0; a < n && anti; ++a)
        for (int b = 0; b < n && anti; ++b)
          if (a != b && om_get(next, a, b) && om_get(next, b, a)) anti = false;
      if (anti) order_extensions_rec(next, n, seen);
    }
}

}  // namespace detail

// The pomset language: every order-augmentation of the labelled part of
// every configuration lposet, canonicalised. Restricted to structures
// without probabilistic content by the callers.
inline std::set<Pomset> pomset_language(const Bes& b) {
  BesModel m(b);
  std::set<Pomset> out;
  for (Mask x : m.configs) {
    Lposet u = lposet_of(m, x).labelled_restriction();
    int n = static_cast<int>(u.carrier.size());
    if (n > 30) throw std::runtime_error("pomset language carrier too large");
    detail::OrderMat base(n, 0);
    for (const auto& [a, e2] : u.below) {
      int i = static_cast<int>(std::lower_bound(u.carrier.begin(), u.carrier.end(), a) - u.carrier.begin());
      int j = static_cast<int>(std::lower_bound(u.carrier.begin(), u.carrier.end(), e2) - u.carrier.begin());
      base[i] |= (1u << j);
    }
    std::set<detail::OrderMat> exts;
    detail::order_extensions_rec(base, n, exts);
    for (const auto& om : exts) {
      Lposet v;
      v.carrier = u.carrier;
      v.labels = u.labels;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (detail::om_get(om, i, j)) v.below.insert({u.carrier[i], u.carrier[j]});
      out.insert(canonical_pomset(v));
    }
  }
  return out;
}

// The natural order on the pomset-language quantale: set inclusion.
inline bool language_leq(const Bes& e, const Bes& f) {
  auto le = pomset_language(e);
  auto lf = pomset_language(f);
  return std::includes(lf.begin(), lf.end(), le.begin(), le.end());
}

}  // namespace pcka
