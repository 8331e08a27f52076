#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <set>
#include <random>

#include "pcka/linear.hpp"

using namespace pcka;

namespace {

// Independent feasibility oracle: Fourier-Motzkin elimination on the
// inequality system { A x = b, x >= 0 }.
struct Ineq {  // sum coef * x >= rhs
  std::vector<Rat> coef;
  Rat rhs;
};

// Normalise so the first nonzero coefficient is +-1; used to prune the
// doubly-exponential growth of elimination.
inline void fm_normalise(Ineq& q) {
  for (const auto& c : q.coef) {
    if (c == 0) continue;
    Rat s = c > 0 ? c : Rat(-c);
    for (auto& v : q.coef) v /= s;
    q.rhs /= s;
    return;
  }
}

bool fm_feasible(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b) {
  std::size_t cols = a.empty() ? 0 : a.front().size();
  std::vector<Ineq> sys;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sys.push_back({a[i], b[i]});
    Ineq neg{a[i], b[i]};
    for (auto& c : neg.coef) c = -c;
    neg.rhs = -neg.rhs;
    sys.push_back(std::move(neg));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    Ineq nn{std::vector<Rat>(cols, Rat(0)), Rat(0)};
    nn.coef[j] = 1;
    sys.push_back(std::move(nn));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<Ineq> lower, upper, rest;
    for (const auto& q : sys) {
      if (q.coef[j] > 0) lower.push_back(q);        // gives a lower bound on x_j
      else if (q.coef[j] < 0) upper.push_back(q);   // gives an upper bound
      else rest.push_back(q);
    }
    std::set<std::pair<std::vector<Rat>, Rat>> dedup;
    for (const auto& q : rest) dedup.insert({q.coef, q.rhs});
    for (const auto& lo : lower)
      for (const auto& up : upper) {
        Ineq combined{std::vector<Rat>(cols, Rat(0)), Rat(0)};
        Rat cl = lo.coef[j], cu = -up.coef[j];
        for (std::size_t k = 0; k < cols; ++k)
          combined.coef[k] = lo.coef[k] * cu + up.coef[k] * cl;
        combined.rhs = lo.rhs * cu + up.rhs * cl;
        combined.coef[j] = 0;
        fm_normalise(combined);
        dedup.insert({combined.coef, combined.rhs});
      }
    sys.clear();
    for (const auto& [c, r] : dedup) sys.push_back({c, r});
  }
  for (const auto& q : sys)
    if (q.rhs > 0) return false;  // 0 >= positive
  return true;
}

}  // namespace

TEST_CASE("hand-picked systems") {
  // x0 + x1 = 1, x0 - x1 = 0  ->  x = (1/2, 1/2)
  REQUIRE(lp_feasible({{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}}, {Rat(1), Rat(0)}));
  // x0 + x1 = 1, x0 + x1 = 2 is contradictory
  REQUIRE_FALSE(lp_feasible({{Rat(1), Rat(1)}, {Rat(1), Rat(1)}}, {Rat(1), Rat(2)}));
  // x0 = -1 has no nonnegative solution
  REQUIRE_FALSE(lp_feasible({{Rat(1)}}, {Rat(-1)}));
  // negative rhs with a sign flip available
  REQUIRE(lp_feasible({{Rat(-2)}}, {Rat(-1)}));
  // empty system
  REQUIRE(lp_feasible({}, {}));
  // zero row with nonzero rhs
  REQUIRE_FALSE(lp_feasible({{Rat(0), Rat(0)}}, {Rat(1)}));
}

TEST_CASE("simplex agrees with Fourier-Motzkin on random small systems") {
  std::mt19937_64 rng(51);
  int feasible = 0, infeasible = 0;
  for (int it = 0; it < 300; ++it) {
    std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 4;
    std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols));
    std::vector<Rat> b(rows);
    auto small = [&]() { return Rat(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3)); };
    for (auto& row : a)
      for (auto& v : row) v = small();
    for (auto& v : b) v = small();
    bool got = lp_feasible(a, b);
    bool want = fm_feasible(a, b);
    (want ? feasible : infeasible)++;
    REQUIRE(got == want);
  }
  REQUIRE(feasible > 40);
  REQUIRE(infeasible > 40);
}

TEST_CASE("constructively feasible mixtures stay feasible") {
  // theta = sum_x delta(x) * (grid mixture of images(x)) must be accepted.
  std::mt19937_64 rng(52);
  for (int it = 0; it < 200; ++it) {
    std::size_t nx = 1 + rng() % 3;       // decomposition points
    std::size_t ny = 2 + rng() % 4;       // target universe
    auto grid = [&]() { return Rat(1 + static_cast<int>(rng() % 5), 6); };
    // delta over nx points
    std::vector<Rat> delta(nx, Rat(0));
    Rat left(1);
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      Rat w = left * Rat(1, 1 + static_cast<int>(rng() % 3));
      delta[i] = w;
      left -= w;
    }
    delta[nx - 1] = left;
    // per point: a few image distributions over ny targets
    std::vector<std::vector<std::vector<Rat>>> images(nx);
    for (auto& imgs : images) {
      std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<Rat> d(ny, Rat(0));
        Rat rest(1);
        for (std::size_t y = 0; y + 1 < ny; ++y) {
          Rat w = rest * grid() / 2;
          d[y] = w;
          rest -= w;
        }
        d[ny - 1] = rest;
        imgs.push_back(std::move(d));
      }
    }
    // theta from known grid mixture weights
    std::vector<Rat> theta(ny, Rat(0));
    for (std::size_t i = 0; i < nx; ++i) {
      std::vector<Rat> lam(images[i].size(), Rat(0));
      Rat rest(1);
      for (std::size_t j = 0; j + 1 < lam.size(); ++j) {
        Rat w = rest * Rat(1, 2 + static_cast<int>(rng() % 2));
        lam[j] = w;
        rest -= w;
      }
      lam.back() = rest;
      for (std::size_t j = 0; j < lam.size(); ++j)
        for (std::size_t y = 0; y < ny; ++y) theta[y] += delta[i] * lam[j] * images[i][j][y];
    }
    // encode: variables lambda_{i,j}; sum_j lambda_{i,j} = delta_i;
    // sum_{i,j} lambda_{i,j} images[i][j][y] = theta[y]
    std::size_t vars = 0;
    for (const auto& imgs : images) vars += imgs.size();
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> b;
    std::size_t off = 0;
    for (std::size_t i = 0; i < nx; ++i) {
      std::vector<Rat> row(vars, Rat(0));
      for (std::size_t j = 0; j < images[i].size(); ++j) row[off + j] = 1;
      a.push_back(std::move(row));
      b.push_back(delta[i]);
      off += images[i].size();
    }
    for (std::size_t y = 0; y < ny; ++y) {
      std::vector<Rat> row(vars, Rat(0));
      std::size_t o = 0;
      for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < images[i].size(); ++j) row[o++] = images[i][j][y];
      a.push_back(std::move(row));
      b.push_back(theta[y]);
    }
    REQUIRE(lp_feasible(a, b));
    // perturbing theta off the affine hull must be rejected
    b.back() += Rat(1, 97);
    REQUIRE_FALSE(lp_feasible(a, b));
  }
}
