#pragma once

#include "linalg.hpp"
#include "repcore.hpp"
#include "verify.hpp"
#include "weights.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qorbit::adjoint {

/// Ordered basis of g_q: first the g(i,j), i != j, in lexicographic (i, j)
/// order, then t(1), ..., t(n-1). All indices 1-based.
struct AdjBasis {
  int n;
  explicit AdjBasis(int n_) : n(n_) {
    if (n < 2) throw ConfigError("need n >= 2");
  }

  int dim() const { return n * n - 1; }
  int g_count() const { return n * (n - 1); }

  int g(int i, int j) const {
    if (i == j || i < 1 || j < 1 || i > n || j > n) throw QOrbitError("bad g index");
    return (i - 1) * (n - 1) + (j - 1) - (j > i ? 1 : 0);
  }

  int t(int k) const {
    if (k < 1 || k > n - 1) throw QOrbitError("bad t index");
    return g_count() + k - 1;
  }

  bool is_g(int idx) const { return idx < g_count(); }

  std::pair<int, int> g_pair(int idx) const {
    int i = idx / (n - 1) + 1;
    int r = idx % (n - 1) + 1;
    return {i, r + (r >= i ? 1 : 0)};
  }

  int t_of(int idx) const { return idx - g_count() + 1; }

  std::string label(int idx) const {
    if (is_g(idx)) {
      auto [i, j] = g_pair(idx);
      return "g(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    return "t(" + std::to_string(t_of(idx)) + ")";
  }

  std::vector<int> eps(int idx) const {
    std::vector<int> w(n, 0);
    if (is_g(idx)) {
      auto [i, j] = g_pair(idx);
      w[i - 1] = 1;
      w[j - 1] = -1;
    }
    return w;
  }
};

/// The q-deformed adjoint module: matrix coefficients of the Chevalley
/// action on g_q. The only deviation from the classical adjoint action is
/// the coefficient [2] in place of 2 on ad e_i(t_i) and ad f_i(t_i).
inline Rep adjoint_action(int n, ScalarContext ctx = ScalarContext::symbolic()) {
  AdjBasis B(n);
  const int d = B.dim();
  Rep R;
  R.n = n;
  R.dim = d;
  R.ctx = ctx;
  const QScalar one(1L), two = ctx.integer(2);

  for (int i = 1; i <= n - 1; ++i) {
    std::vector<SparseOperator::Entry> ee, fe;
    std::vector<AffineInt> h(d);

    for (int a = 1; a <= n; ++a) {
      if (a == i || a == i + 1) continue;
      ee.push_back({B.g(a, i + 1), B.g(a, i), -one});
      ee.push_back({B.g(i, a), B.g(i + 1, a), one});
      fe.push_back({B.g(a, i), B.g(a, i + 1), -one});
      fe.push_back({B.g(i + 1, a), B.g(i, a), one});
    }
    ee.push_back({B.t(i), B.g(i + 1, i), one});
    ee.push_back({B.g(i, i + 1), B.t(i), -two});
    fe.push_back({B.t(i), B.g(i, i + 1), -one});
    fe.push_back({B.g(i + 1, i), B.t(i), two});
    for (int k : {i - 1, i + 1}) {
      if (k < 1 || k > n - 1 || k == i) continue;
      ee.push_back({B.g(i, i + 1), B.t(k), one});
      fe.push_back({B.g(i + 1, i), B.t(k), -one});
    }

    for (int s = 0; s < d; ++s) {
      const std::vector<int> w = B.eps(s);
      h[s] = {0, w[i - 1] - w[i]};
    }

    R.e.push_back(SparseOperator::from_entries(d, d, std::move(ee)));
    R.f.push_back(SparseOperator::from_entries(d, d, std::move(fe)));
    std::vector<QScalar> dq(d), dqi(d);
    for (int s = 0; s < d; ++s) {
      dq[s] = ctx.power(h[s]);
      dqi[s] = ctx.power(-h[s]);
    }
    R.qh.push_back(SparseOperator::diagonal(std::move(dq)));
    R.qhinv.push_back(SparseOperator::diagonal(std::move(dqi)));
    R.h.push_back(std::move(h));
  }

  for (int s = 0; s < d; ++s) {
    R.labels.push_back(B.label(s));
    R.eps.push_back(B.eps(s));
  }
  return R;
}

inline Rep tensor_square_action(int n, ScalarContext ctx = ScalarContext::symbolic()) {
  Rep ad = adjoint_action(n, ctx);
  return coproduct_action(ad, ad);
}

/// Basis of { v : weight(v) = fund, e_i v = 0 for all i }, each vector
/// scaled so its first nonzero coordinate is 1.
inline std::vector<SVec> find_highest_weight_vectors(const Rep& R,
                                                     const std::vector<int>& fund) {
  std::vector<int> states;
  for (int s = 0; s < R.dim; ++s)
    if (R.hweight(s) == fund) states.push_back(s);
  if (states.empty()) throw EmptyWeightSpace("no states of the requested weight");

  std::vector<int> pos(R.dim, -1);
  for (std::size_t k = 0; k < states.size(); ++k) pos[states[k]] = static_cast<int>(k);

  DenseMatrix M;
  for (const SparseOperator& ei : R.e) {
    std::map<int, int> row_of;
    for (const auto& en : ei.entries()) {
      if (pos[en.c] < 0) continue;
      auto it = row_of.find(en.r);
      if (it == row_of.end()) {
        it = row_of.emplace(en.r, static_cast<int>(M.size())).first;
        M.emplace_back(states.size());
      }
      M[it->second][pos[en.c]] = en.v;
    }
  }

  std::vector<SVec> out;
  for (const auto& k : kernel_basis(std::move(M), static_cast<int>(states.size()))) {
    SVec v;
    for (std::size_t c = 0; c < states.size(); ++c)
      if (!k[c].is_zero()) v.push_back({states[c], k[c]});
    out.push_back(std::move(v));
  }
  return out;
}

struct Component {
  std::vector<int> fund;
  int multiplicity = 0;
  Int dim = 0;
};

struct Decomposition {
  std::vector<Component> components;
  Int dim_sum = 0;
  bool dims_match = false;
};

/// Isotypic decomposition by highest-weight-vector count, dominant weights
/// scanned from the top of the height order downward. The Weyl-dimension
/// audit certifies completeness.
inline Decomposition decompose(const Rep& R) {
  std::vector<std::vector<int>> dominants;
  for (int s = 0; s < R.dim; ++s) {
    std::vector<int> w = R.hweight(s);
    if (is_dominant(w) && std::find(dominants.begin(), dominants.end(), w) == dominants.end())
      dominants.push_back(w);
  }
  std::sort(dominants.begin(), dominants.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a == b) return false;
              try {
                return weight_above(eps_from_fundamental(a), eps_from_fundamental(b));
              } catch (const WeightMismatch&) {
                return a > b;
              }
            });

  Decomposition dec;
  for (const auto& w : dominants) {
    int mult = static_cast<int>(find_highest_weight_vectors(R, w).size());
    if (mult == 0) continue;
    Int d = weyl_dim(R.n, w);
    dec.dim_sum += d * mult;
    dec.components.push_back({w, mult, d});
  }
  dec.dims_match = dec.dim_sum == R.dim;
  return dec;
}

struct LabeledVector {
  std::string name;
  std::vector<int> fund;  // stated highest weight
  SVec vec;               // element of g_q (x) g_q
};

/// The explicit highest weight vectors of g_q^(x)2. For n = 3 the
/// omega_2 + omega_{n-2} vector is absent; for n = 2 only s(2w1+2w1), s1,
/// s2, s0 survive and s2 = -q s1.
inline std::vector<LabeledVector> tensor_square_hwvs(
    int n, ScalarContext ctx = ScalarContext::symbolic()) {
  AdjBasis B(n);
  const int d = B.dim();
  auto pair_idx = [d](int x, int y) { return x * d + y; };
  auto qp = [&ctx](int k) { return ctx.power({0, k}); };
  auto qi = [&ctx](int k) { return ctx.integer(k); };
  const QScalar one(1L);
  const QScalar invn = qi(n).inverse();

  auto fund_of = [n](std::initializer_list<std::pair<int, int>> parts) {
    std::vector<int> f(n - 1, 0);
    for (auto [idx, mult] : parts) f[idx - 1] += mult;
    return f;
  };

  std::vector<LabeledVector> out;
  auto push = [&](std::string name, std::vector<int> fund, SVec v) {
    out.push_back({std::move(name), std::move(fund), svec_normalize(std::move(v))});
  };

  push("s_2w1_2wn1", fund_of({{1, 2}, {n - 1, 2}}),
       {{pair_idx(B.g(1, n), B.g(1, n)), one}});

  if (n >= 3) {
    push("s_2w1_wn2", fund_of({{1, 2}, {n - 2, 1}}),
         {{pair_idx(B.g(1, n), B.g(1, n - 1)), one},
          {pair_idx(B.g(1, n - 1), B.g(1, n)), -qp(-1)}});
    push("s_w2_2wn1", fund_of({{2, 1}, {n - 1, 2}}),
         {{pair_idx(B.g(1, n), B.g(2, n)), one},
          {pair_idx(B.g(2, n), B.g(1, n)), -qp(-1)}});
  }
  if (n >= 4) {
    push("s_w2_wn2", fund_of({{2, 1}, {n - 2, 1}}),
         {{pair_idx(B.g(1, n), B.g(2, n - 1)), qp(1)},
          {pair_idx(B.g(2, n - 1), B.g(1, n)), qp(-1)},
          {pair_idx(B.g(1, n - 1), B.g(2, n)), -one},
          {pair_idx(B.g(2, n), B.g(1, n - 1)), -one}});
  }

  {
    SVec v;
    for (int a = 2; a <= n - 1; ++a)
      v.push_back({pair_idx(B.g(1, a), B.g(a, n)), qp(a - 2)});
    for (int k = 1; k <= n - 1; ++k) {
      v.push_back({pair_idx(B.t(k), B.g(1, n)), qp(-2) * qi(n - k) * invn});
      v.push_back({pair_idx(B.g(1, n), B.t(k)), -qp(n - 2) * qi(k) * invn});
    }
    push("s1", fund_of({{1, 1}, {n - 1, 1}}), std::move(v));
  }
  {
    SVec v;
    for (int a = 2; a <= n - 1; ++a)
      v.push_back({pair_idx(B.g(a, n), B.g(1, a)), qp(2 - a)});
    for (int k = 1; k <= n - 1; ++k) {
      v.push_back({pair_idx(B.t(k), B.g(1, n)), -qp(1 - n) * qi(k) * invn});
      v.push_back({pair_idx(B.g(1, n), B.t(k)), qp(1) * qi(n - k) * invn});
    }
    push("s2", fund_of({{1, 1}, {n - 1, 1}}), std::move(v));
  }
  {
    SVec v;
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 1; j <= n - 1; ++j)
        v.push_back({pair_idx(B.t(i), B.t(j)),
                     qi(std::min(i, j)) * qi(n - std::max(i, j)) * invn});
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        // Both triangles carry q^{1+(j-i)}: the lower-triangular prefactor
        // must be q, not q^{-1}, or the highest-weight property fails for
        // n >= 3 (the two readings coincide at n = 2).
        v.push_back({pair_idx(B.g(i, j), B.g(j, i)), qp(1 + j - i)});
      }
    push("s0", std::vector<int>(n - 1, 0), std::move(v));
  }
  return out;
}

/// Expected isotypic content of g_q^(x)2 for each n.
inline std::vector<Component> expected_tensor_square_components(int n) {
  AdjBasis B(n);
  auto fund = [n](std::initializer_list<std::pair<int, int>> parts) {
    std::vector<int> f(n - 1, 0);
    for (auto [idx, mult] : parts) f[idx - 1] += mult;
    return f;
  };
  std::vector<std::pair<std::vector<int>, int>> raw;
  raw.push_back({fund({{1, 2}, {n - 1, 2}}), 1});
  if (n >= 3) {
    raw.push_back({fund({{1, 2}, {n - 2, 1}}), 1});
    raw.push_back({fund({{2, 1}, {n - 1, 2}}), 1});
  }
  if (n >= 4) raw.push_back({fund({{2, 1}, {n - 2, 1}}), 1});
  raw.push_back({fund({{1, 1}, {n - 1, 1}}), n == 2 ? 1 : 2});
  raw.push_back({std::vector<int>(n - 1, 0), 1});

  std::vector<Component> out;
  for (auto& [w, m] : raw) out.push_back({w, m, weyl_dim(n, w)});
  return out;
}

/// Checks the highest weight vector table end to end: each literal vector is
/// a highest weight vector of the stated weight, the literal vectors span
/// the brute-force kernels, and the isotypic content matches the expected
/// table with a full Weyl-dimension audit.
inline VerificationReport verify_hwv_table(int n, ScalarContext ctx = ScalarContext::symbolic()) {
  VerificationReport rep;
  rep.subject = "tensor square of g_q, n = " + std::to_string(n);
  Rep T = tensor_square_action(n, ctx);
  std::vector<LabeledVector> lits = tensor_square_hwvs(n, ctx);

  for (const auto& lv : lits) {
    bool wok = true;
    for (const auto& [s, c] : lv.vec)
      if (T.hweight(s) != lv.fund) wok = false;
    rep.checks.push_back({"weight(" + lv.name + ") = " + weight_str(lv.fund), wok, {}});
    for (int i = 0; i < n - 1; ++i) {
      SVec img = T.e[i].apply(lv.vec);
      rep.checks.push_back({"De" + std::to_string(i + 1) + " " + lv.name + " = 0", img.empty(),
                            img.empty() ? "" : "nonzero image"});
    }
  }

  std::map<std::vector<int>, std::vector<const LabeledVector*>> by_weight;
  for (const auto& lv : lits) by_weight[lv.fund].push_back(&lv);
  for (const auto& [w, group] : by_weight) {
    std::vector<SVec> brute = find_highest_weight_vectors(T, w);
    SpanReducer bspan;
    for (const auto& v : brute) bspan.add(v);
    SpanReducer lspan;
    int lrank = 0;
    for (const auto* lv : group)
      if (lspan.add(lv->vec)) ++lrank;
    bool contained = true;
    for (const auto* lv : group)
      if (!bspan.contains(lv->vec)) contained = false;
    bool ok = contained && lrank == bspan.rank();
    rep.checks.push_back({"literal vectors span the hwv space at " + weight_str(w), ok,
                          ok ? ""
                             : "brute rank " + std::to_string(bspan.rank()) + ", literal rank " +
                                   std::to_string(lrank)});
  }

  Decomposition dec = decompose(T);
  std::vector<Component> want = expected_tensor_square_components(n);
  auto key = [](const Component& c) { return std::make_pair(c.fund, c.multiplicity); };
  std::vector<std::pair<std::vector<int>, int>> got_k, want_k;
  for (const auto& c : dec.components) got_k.push_back(key(c));
  for (const auto& c : want) want_k.push_back(key(c));
  std::sort(got_k.begin(), got_k.end());
  std::sort(want_k.begin(), want_k.end());
  rep.checks.push_back({"isotypic content matches the expected table", got_k == want_k, {}});
  rep.checks.push_back({"dimension audit: sum mult * dim = " + std::to_string(T.dim),
                        dec.dims_match, {}});
  return rep;
}

}  // namespace qorbit::adjoint

namespace qorbit {
using namespace adjoint;
}
