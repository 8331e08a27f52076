#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcka/configtree.hpp"
#include "pcka/linear.hpp"
#include "pcka/lposet.hpp"
#include "pcka/pbes.hpp"

namespace pcka {

namespace detail {

// Sparse distribution over configuration indices of one side, sorted by
// index with strictly positive weights.
using SpDist = std::vector<std::pair<int, Rat>>;

inline SpDist sp_point(int i) { return {{i, Rat(1)}}; }

inline SpDist sp_normalise(std::map<int, Rat> acc) {
  SpDist d;
  for (auto& [i, w] : acc)
    if (w != 0) d.emplace_back(i, std::move(w));
  return d;
}

inline bool sp_is_point(const SpDist& d) { return d.size() == 1; }

// One side of a simulation problem with everything precomputed: steps,
// configuration lposets, final flags, and the pure-scheduler reachable
// distribution sets PR(x).
struct SimSide {
  Pbes p;
  BesModel m;
  std::vector<std::vector<SpDist>> steps;  // per config, deduplicated
  std::vector<char> is_final;
  std::vector<Lposet> lposets;
  std::vector<std::vector<SpDist>> pure;  // PR per config

  static constexpr std::size_t pure_limit = 50000;

  explicit SimSide(Pbes pb) : p(std::move(pb)), m(p.bes) {
    const std::size_t nc = m.configs.size();
    steps.resize(nc);
    is_final.resize(nc);
    lposets.reserve(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
      Mask x = m.configs[ci];
      is_final[ci] = (x & m.finals_mask) != 0;
      lposets.push_back(lposet_of(m, x));
      std::set<SpDist> dedup;
      for (const auto& [d, targets] : prefix_steps_model(p, m, x)) {
        SpDist sd(targets);
        std::sort(sd.begin(), sd.end());
        dedup.insert(std::move(sd));
      }
      steps[ci].assign(dedup.begin(), dedup.end());
    }
    compute_pure();
  }

  Config config_at(int ci) const { return m.to_config(m.configs[ci]); }

 private:
  // PR(x) = {delta_x} plus, for each step and each per-branch choice of
  // an already-computed PR element, the weighted combination. Configs
  // strictly grow along steps, so filling from the largest down works.
  void compute_pure() {
    const std::size_t nc = m.configs.size();
    pure.resize(nc);
    for (std::size_t r = nc; r-- > 0;) {
      std::set<SpDist> acc{sp_point(static_cast<int>(r))};
      for (const auto& step : steps[r]) {
        std::vector<std::vector<const SpDist*>> options;
        for (const auto& [child, w] : step) {
          options.emplace_back();
          for (const auto& d : pure[child]) options.back().push_back(&d);
        }
        std::vector<std::size_t> choice(options.size(), 0);
        while (true) {
          std::map<int, Rat> mixed;
          for (std::size_t b = 0; b < step.size(); ++b)
            for (const auto& [i, w] : *options[b][choice[b]]) mixed[i] += step[b].second * w;
          acc.insert(sp_normalise(std::move(mixed)));
          if (acc.size() > pure_limit)
            throw std::runtime_error("pure-scheduler distribution set too large");
          std::size_t b = 0;
          while (b < choice.size() && ++choice[b] == options[b].size()) choice[b++] = 0;
          if (b == choice.size()) break;
        }
      }
      pure[r].assign(acc.begin(), acc.end());
    }
  }
};

// Joint feasibility of clause 3 for one pair (x, theta) and one step
// delta (over left configs):
//   theta evolves per-branch inside conv(PR(y)), and the result matches
//   sum over delta's support of mixtures of that support's images.
// Variables: one weight per (y in supp(theta), element of PR(y)) and per
// (x' in supp(delta), element of images(x')).
inline bool obligation_feasible(const SimSide& q, const SpDist& theta, const SpDist& delta,
                                const std::vector<const std::vector<SpDist>*>& images) {
  for (const auto& imgs : images)
    if (imgs->empty()) return false;

  // fast path: single point evolving against single point images
  if (sp_is_point(theta) && delta.size() == 1) {
    bool all_points = true;
    const auto& pr = q.pure[theta.front().first];
    for (const auto& d : pr)
      if (!sp_is_point(d)) all_points = false;
    for (const auto& d : *images.front())
      if (!sp_is_point(d)) all_points = false;
    if (all_points) {
      std::set<int> reach;
      for (const auto& d : pr) reach.insert(d.front().first);
      for (const auto& d : *images.front())
        if (reach.count(d.front().first)) return true;
      return false;
    }
  }

  std::vector<const SpDist*> cols;      // all columns
  std::vector<Rat> col_sign;            // +1 for PR side, -1 for image side
  std::vector<int> group;               // equality group per column
  std::vector<Rat> group_rhs;
  for (const auto& [y, w] : theta) {
    int g = static_cast<int>(group_rhs.size());
    group_rhs.push_back(w);
    for (const auto& d : q.pure[y]) {
      cols.push_back(&d);
      col_sign.push_back(Rat(1));
      group.push_back(g);
    }
  }
  for (std::size_t k = 0; k < delta.size(); ++k) {
    int g = static_cast<int>(group_rhs.size());
    group_rhs.push_back(delta[k].second);
    for (const auto& d : *images[k]) {
      cols.push_back(&d);
      col_sign.push_back(Rat(-1));
      group.push_back(g);
    }
  }
  std::set<int> touched;
  for (const auto* d : cols)
    for (const auto& [i, w] : *d) touched.insert(i);
  std::vector<int> zs(touched.begin(), touched.end());
  std::map<int, std::size_t> zrow;
  for (std::size_t r = 0; r < zs.size(); ++r) zrow.emplace(zs[r], r);

  const std::size_t rows = group_rhs.size() + zs.size();
  std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols.size(), Rat(0)));
  std::vector<Rat> b(rows, Rat(0));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    a[group[j]][j] = 1;
    for (const auto& [i, w] : *cols[j]) a[group_rhs.size() + zrow.at(i)][j] = col_sign[j] * w;
  }
  for (std::size_t g = 0; g < group_rhs.size(); ++g) b[g] = group_rhs[g];
  return lp_feasible(std::move(a), std::move(b));
}

}  // namespace detail

// The set PR(x): distributions reachable from delta_x when every branch
// follows its own pure scheduler and may stop at any point.
inline std::vector<ConfigDist> pure_reachable(const Pbes& p, const Config& x) {
  detail::SimSide side(p);
  int ci = side.m.config_of(x);
  std::vector<ConfigDist> out;
  for (const auto& d : side.pure[ci]) {
    ConfigDist cd;
    for (const auto& [i, w] : d) cd.emplace(side.config_at(i), w);
    out.push_back(std::move(cd));
  }
  return out;
}

// Lifting feasibility: theta decomposes as sum_x delta(x) * Psi_x with
// every Psi_x a convex mixture of images(x). Exact linear feasibility.
inline bool lifting_feasible(const std::map<Config, std::vector<ConfigDist>>& images,
                             const ConfigDist& delta, const ConfigDist& theta) {
  // index all configurations appearing anywhere on the target side
  std::map<Config, int> cindex;
  auto idx = [&](const Config& c) {
    return cindex.emplace(c, static_cast<int>(cindex.size())).first->second;
  };
  std::vector<const std::vector<ConfigDist>*> imgs;
  for (const auto& [x, w] : delta) {
    auto it = images.find(x);
    if (it == images.end() || it->second.empty()) return false;
    imgs.push_back(&it->second);
  }
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::size_t vars = 0;
  for (const auto* v : imgs) vars += v->size();
  // mixture weights per decomposition point sum to delta(x)
  std::size_t off = 0, k = 0;
  for (const auto& [x, w] : delta) {
    std::vector<Rat> row(vars, Rat(0));
    for (std::size_t j = 0; j < imgs[k]->size(); ++j) row[off + j] = 1;
    a.push_back(std::move(row));
    b.push_back(w);
    off += imgs[k]->size();
    ++k;
  }
  for (const auto& [z, w] : theta) idx(z);
  for (const auto* v : imgs)
    for (const auto& d : *v)
      for (const auto& [z, w] : d) idx(z);
  std::vector<std::vector<Rat>> balance(cindex.size(), std::vector<Rat>(vars, Rat(0)));
  std::vector<Rat> rhs(cindex.size(), Rat(0));
  off = 0;
  for (const auto* v : imgs) {
    for (std::size_t j = 0; j < v->size(); ++j) {
      for (const auto& [z, w] : (*v)[j]) balance[idx(z)][off + j] = w;
    }
    off += v->size();
  }
  for (const auto& [z, w] : theta) rhs[idx(z)] = w;
  for (std::size_t r = 0; r < balance.size(); ++r) {
    a.push_back(std::move(balance[r]));
    b.push_back(rhs[r]);
  }
  return lp_feasible(std::move(a), std::move(b));
}

// A simulation witness: configurations of the left structure paired with
// distributions over configurations of the right one.
struct SimWitness {
  std::vector<std::pair<Config, ConfigDist>> pairs;
};

struct WitnessCheck {
  bool ok = true;
  std::string diagnostic;
};

// Checks the four simulation clauses against the witness itself; the
// check is independent of how the witness was produced.
inline WitnessCheck verify_witness(const Pbes& p, const Pbes& q, const SimWitness& s) {
  detail::SimSide P(p), Q(q);
  std::vector<std::vector<detail::SpDist>> images(P.m.configs.size());
  std::vector<std::vector<const detail::SpDist*>> image_ptrs(P.m.configs.size());
  for (const auto& [xc, theta] : s.pairs) {
    int x = P.m.config_of(xc);  // throws on malformed configurations
    std::map<int, Rat> acc;
    Rat sum = 0;
    for (const auto& [yc, w] : theta) {
      if (!(w > 0 && w <= 1)) return {false, "witness weight out of range at " + yc.str()};
      acc[Q.m.config_of(yc)] += w;
      sum += w;
    }
    if (sum != 1) return {false, "witness distribution for " + xc.str() + " sums to " + rat_to_string(sum)};
    images[x].push_back(detail::sp_normalise(std::move(acc)));
  }
  for (std::size_t x = 0; x < images.size(); ++x)
    for (const auto& d : images[x]) image_ptrs[x].push_back(&d);

  // clause 1
  bool root = false;
  for (const auto& d : images[0])
    if (detail::sp_is_point(d) && d.front().first == 0) root = true;
  if (!root) return {false, "witness does not relate the empty configurations"};

  // clause 2: subsumption into every support configuration
  for (std::size_t x = 0; x < images.size(); ++x)
    for (const auto& theta : images[x])
      for (const auto& [y, w] : theta)
        if (!subsumes(P.lposets[x], Q.lposets[y]))
          return {false, P.config_at(static_cast<int>(x)).str() + " does not implement " +
                             Q.config_at(y).str()};
  // clause 4: final events are preserved
  for (std::size_t x = 0; x < images.size(); ++x) {
    if (!P.is_final[x]) continue;
    for (const auto& theta : images[x])
      for (const auto& [y, w] : theta)
        if (!Q.is_final[y])
          return {false, "final " + P.config_at(static_cast<int>(x)).str() +
                             " maps onto non-final " + Q.config_at(y).str()};
  }
  // clause 3: every step has a lifted match after evolution
  for (std::size_t x = 0; x < images.size(); ++x) {
    for (const auto& theta : images[x]) {
      for (const auto& delta : P.steps[x]) {
        std::vector<const std::vector<detail::SpDist>*> step_images;
        for (const auto& [xi, w] : delta)
          step_images.push_back(&images[xi]);
        if (!detail::obligation_feasible(Q, theta, delta, step_images)) {
          std::string msg = "unmatched step from " + P.config_at(static_cast<int>(x)).str() + " into {";
          bool first = true;
          for (const auto& [xi, w] : delta) {
            if (!first) msg += ", ";
            first = false;
            msg += P.config_at(xi).str() + ": " + rat_to_string(w);
          }
          return {false, msg + "}"};
        }
      }
    }
  }
  return {};
}

struct SimDiagnostic {
  std::string message;
  std::vector<Config> unmatched;          // left configurations no pair can serve
  std::optional<Config> failed_config;    // source of the first failing obligation
};

struct Verdict {
  bool holds = false;
  SimWitness witness;      // verified when holds
  SimDiagnostic diagnostic;
};

struct FindOptions {
  bool reverse_scan = false;  // scan order of the refinement; result must not change
};

// Greatest-fixpoint search for a simulation within the universe of
// pure-scheduler vertex distributions. Sound (any Holds verdict ships a
// witness that re-verifies); a NotFound verdict is relative to this
// search space.
inline Verdict find_simulation(const Pbes& p, const Pbes& q, const FindOptions& opt = {}) {
  detail::SimSide P(p), Q(q);
  const std::size_t np = P.m.configs.size();

  // candidate universe: all pure-reachable vertices anywhere on the right
  std::set<detail::SpDist> universe;
  for (const auto& prs : Q.pure) universe.insert(prs.begin(), prs.end());

  // subsumption cache
  std::vector<std::vector<char>> subs_ok(np, std::vector<char>(Q.m.configs.size()));
  for (std::size_t x = 0; x < np; ++x)
    for (std::size_t y = 0; y < Q.m.configs.size(); ++y)
      subs_ok[x][y] = subsumes(P.lposets[x], Q.lposets[y]);

  std::vector<std::vector<detail::SpDist>> cand(np);
  for (std::size_t x = 0; x < np; ++x)
    for (const auto& theta : universe) {
      bool ok = true;
      for (const auto& [y, w] : theta) {
        if (!subs_ok[x][y]) ok = false;
        if (P.is_final[x] && !Q.is_final[y]) ok = false;
      }
      if (ok) cand[x].push_back(theta);
    }

  // refine: drop pairs whose clause-3 obligation fails against the
  // current candidate set, until stable
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t xi = 0; xi < np; ++xi) {
      std::size_t x = opt.reverse_scan ? np - 1 - xi : xi;
      if (P.steps[x].empty()) continue;
      std::vector<detail::SpDist> kept;
      for (const auto& theta : cand[x]) {
        bool ok = true;
        for (const auto& delta : P.steps[x]) {
          std::vector<const std::vector<detail::SpDist>*> images;
          for (const auto& [xc, w] : delta) images.push_back(&cand[xc]);
          if (!detail::obligation_feasible(Q, theta, delta, images)) {
            ok = false;
            break;
          }
        }
        if (ok) kept.push_back(theta);
        else changed = true;
      }
      cand[x] = std::move(kept);
    }
  }

  Verdict v;
  bool root = false;
  for (const auto& d : cand[0])
    if (detail::sp_is_point(d) && d.front().first == 0) root = true;
  if (root) {
    v.holds = true;
    for (std::size_t x = 0; x < np; ++x)
      for (const auto& theta : cand[x]) {
        ConfigDist cd;
        for (const auto& [y, w] : theta) cd.emplace(Q.config_at(y), w);
        v.witness.pairs.emplace_back(P.config_at(static_cast<int>(x)), std::move(cd));
      }
    auto check = verify_witness(p, q, v.witness);
    if (!check.ok) throw std::logic_error("internal: witness failed re-verification: " + check.diagnostic);
    return v;
  }

  // diagnostics: configurations nothing can serve, and the first step of
  // the root whose obligation became unsatisfiable
  for (std::size_t x = 0; x < np; ++x)
    if (cand[x].empty()) v.diagnostic.unmatched.push_back(P.config_at(static_cast<int>(x)));
  if (!v.diagnostic.unmatched.empty()) v.diagnostic.failed_config = v.diagnostic.unmatched.front();
  std::string msg = "no simulation within the pure-scheduler search space";
  if (!v.diagnostic.unmatched.empty()) {
    msg += "; no candidate distribution serves:";
    for (const auto& c : v.diagnostic.unmatched) msg += " " + c.str();
  } else {
    detail::SpDist root_theta = detail::sp_point(0);
    for (const auto& delta : P.steps[0]) {
      std::vector<const std::vector<detail::SpDist>*> images;
      for (const auto& [xc, w] : delta) images.push_back(&cand[xc]);
      if (!detail::obligation_feasible(Q, root_theta, delta, images)) {
        v.diagnostic.failed_config = P.config_at(0);
        msg += "; the empty configuration cannot match one of its steps";
        break;
      }
    }
  }
  v.diagnostic.message = std::move(msg);
  return v;
}

enum class RelMode { refines, equivalent };

struct RelationResult {
  bool holds = false;
  Verdict forward;
  std::optional<Verdict> backward;
};

inline RelationResult check_relation(const Pbes& p, const Pbes& q, RelMode mode) {
  RelationResult r;
  r.forward = find_simulation(p, q);
  if (mode == RelMode::refines) {
    r.holds = r.forward.holds;
    return r;
  }
  r.backward = find_simulation(q, p);
  r.holds = r.forward.holds && r.backward->holds;
  return r;
}

}  // namespace pcka
