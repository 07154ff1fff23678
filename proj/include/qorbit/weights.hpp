#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace qorbit {

/// Weights of sl(n) in epsilon coordinates (length n, defined modulo a common
/// shift) and in fundamental-weight coordinates (length n-1).

inline std::vector<int> fundamental_from_eps(const std::vector<int>& eps) {
  std::vector<int> c(eps.size() - 1);
  for (std::size_t i = 0; i + 1 < eps.size(); ++i) c[i] = eps[i] - eps[i + 1];
  return c;
}

inline std::vector<int> eps_from_fundamental(const std::vector<int>& c) {
  // Representative with last coordinate 0.
  std::vector<int> eps(c.size() + 1, 0);
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) eps[i] = eps[i + 1] + c[i];
  return eps;
}

inline bool is_dominant(const std::vector<int>& fund) {
  for (int c : fund)
    if (c < 0) return false;
  return true;
}

/// Coordinates of a weight difference in the simple-root basis. Defined for
/// differences lying in the root lattice (sum of eps coordinates zero).
inline std::vector<Rat> root_coords(const std::vector<int>& eps) {
  const int n = static_cast<int>(eps.size());
  long long total = std::accumulate(eps.begin(), eps.end(), 0LL);
  if (total != 0) throw WeightMismatch("weight difference is not in the root lattice");
  // eps = sum k_i alpha_i with k_i = eps_1 + ... + eps_i.
  std::vector<Rat> k(n - 1);
  long long acc = 0;
  for (int i = 0; i + 1 < n; ++i) {
    acc += eps[i];
    k[i] = Rat(acc);
  }
  return k;
}

/// Total order refining the dominance order: w1 above w2 when w1 - w2 has
/// positive height, with ties broken lexicographically on the root
/// coordinates.
inline bool weight_above(const std::vector<int>& eps1, const std::vector<int>& eps2) {
  std::vector<int> d(eps1.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = eps1[i] - eps2[i];
  std::vector<Rat> k = root_coords(d);
  Rat height(0);
  for (const Rat& x : k) height += x;
  if (height != 0) return height > 0;
  for (const Rat& x : k) {
    if (x != 0) return x > 0;
  }
  return false;  // equal
}

/// Weyl dimension formula for sl(n), highest weight in fundamental
/// coordinates.
inline Int weyl_dim(int n, const std::vector<int>& fund) {
  if (static_cast<int>(fund.size()) != n - 1)
    throw WeightMismatch("fundamental weight has wrong length");
  if (!is_dominant(fund)) throw NonDominant("weyl_dim needs a dominant weight");
  std::vector<int> l = eps_from_fundamental(fund);
  Rat dim(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dim *= Rat(l[i] - l[j] + j - i, j - i);
  if (rat_den(dim) != 1) throw QOrbitError("weyl_dim: non-integral result");
  return rat_num(dim);
}

inline std::string weight_str(const std::vector<int>& fund) {
  std::string s = "(";
  for (std::size_t i = 0; i < fund.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(fund[i]);
  }
  s += ")";
  return s;
}

}  // namespace qorbit
