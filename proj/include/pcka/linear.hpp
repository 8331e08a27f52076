#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pcka/rational.hpp"

namespace pcka {

// Exact feasibility of  A x = b, x >= 0  by a phase-1 simplex over
// rationals. Bland's rule guarantees termination; there are no
// tolerances anywhere. Dimensions here stay in the low hundreds.
inline bool lp_feasible(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t rows = a.size();
  if (rows == 0) return true;
  const std::size_t cols = a.front().size();
  for (const auto& row : a)
    if (row.size() != cols) throw std::invalid_argument("ragged constraint matrix");
  if (b.size() != rows) throw std::invalid_argument("rhs size mismatch");

  for (std::size_t i = 0; i < rows; ++i)
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
    }

  // tableau over structural columns + one artificial per row
  const std::size_t total = cols + rows;
  std::vector<std::vector<Rat>> t(rows, std::vector<Rat>(total + 1, Rat(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = a[i][j];
    t[i][cols + i] = 1;
    t[i][total] = b[i];
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

  // objective: minimise the sum of artificials; z holds reduced costs
  std::vector<Rat> z(total + 1, Rat(0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j <= total; ++j) z[j] += t[i][j];
  for (std::size_t i = 0; i < rows; ++i) z[cols + i] = 0;

  while (true) {
    std::size_t enter = total;
    for (std::size_t j = 0; j < total; ++j)
      if (z[j] > 0) { enter = j; break; }  // Bland: smallest index
    if (enter == total) break;

    std::size_t leave = rows;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      if (leave == rows) { leave = i; continue; }
      Rat cur = t[i][total] / t[i][enter];
      Rat best = t[leave][total] / t[leave][enter];
      if (cur < best || (cur == best && basis[i] < basis[leave])) leave = i;
    }
    if (leave == rows) break;  // unbounded cannot happen in phase 1, but stay safe

    Rat piv = t[leave][enter];
    for (std::size_t j = 0; j <= total; ++j) t[leave][j] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[leave][j];
    }
    Rat zf = z[enter];
    if (zf != 0)
      for (std::size_t j = 0; j <= total; ++j) z[j] -= zf * t[leave][j];
    basis[leave] = enter;
  }
  return z[total] == 0;
}

}  // namespace pcka
