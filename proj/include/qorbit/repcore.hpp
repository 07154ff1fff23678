#pragma once

#include "errors.hpp"
#include "qscalar.hpp"
#include "sparse_op.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qorbit::repcore {

/// Integer-affine expression a*mu + b in a formal weight parameter mu.
struct AffineInt {
  long a = 0;
  long b = 0;
  friend AffineInt operator+(AffineInt x, AffineInt y) { return {x.a + y.a, x.b + y.b}; }
  friend AffineInt operator-(AffineInt x, AffineInt y) { return {x.a - y.a, x.b - y.b}; }
  friend AffineInt operator-(AffineInt x) { return {-x.a, -x.b}; }
  friend bool operator==(AffineInt x, AffineInt y) { return x.a == y.a && x.b == y.b; }
  friend bool operator!=(AffineInt x, AffineInt y) { return !(x == y); }
};

enum class QMode { Symbolic, Numeric, Classical };

/// How q and the formal weight are bound when building operator entries.
/// Generic weights enter scalars through z = q^mu; when `mu_int` is set all
/// affine weight expressions are folded to integers first.
struct ScalarContext {
  QMode mode = QMode::Symbolic;
  Rat q_value = Rat(0);
  std::optional<long> mu_int;
  std::optional<Rat> z_value;   // numeric binding of z (Numeric mode only)
  std::optional<Rat> mu_value;  // generic weight value (Classical mode only)

  static ScalarContext symbolic() { return {}; }

  static ScalarContext symbolic_weight(long mu) {
    ScalarContext c;
    c.mu_int = mu;
    return c;
  }

  static ScalarContext numeric(const Rat& q, std::optional<Rat> z = std::nullopt,
                               std::optional<long> mu = std::nullopt) {
    if (q == 0 || q == 1 || q == -1)
      throw ConfigError("numeric q must satisfy q != 0 and |q| != 1");
    ScalarContext c;
    c.mode = QMode::Numeric;
    c.q_value = q;
    c.z_value = z;
    c.mu_int = mu;
    return c;
  }

  static ScalarContext classical(std::optional<Rat> mu = std::nullopt,
                                 std::optional<long> mu_i = std::nullopt) {
    ScalarContext c;
    c.mode = QMode::Classical;
    c.mu_value = mu;
    c.mu_int = mu_i;
    return c;
  }

  bool is_classical() const { return mode == QMode::Classical; }

  QScalar q_minus_qinv() const {
    switch (mode) {
      case QMode::Symbolic:
        return QScalar::qpow(1) - QScalar::qpow(-1);
      case QMode::Numeric:
        return QScalar(Rat(q_value - 1 / q_value));
      case QMode::Classical:
        throw ConfigError("q - q^{-1} vanishes in the classical mode");
    }
    throw ConfigError("bad mode");
  }

  /// q^{a*mu + b}.
  QScalar power(AffineInt h) const {
    if (mu_int) h = {0, h.a * *mu_int + h.b};
    switch (mode) {
      case QMode::Symbolic:
        return QScalar::monomial(h.b, h.a, Rat(1));
      case QMode::Numeric: {
        Rat qb = rat_pow(q_value, h.b);
        if (h.a == 0) return QScalar(qb);
        if (z_value) return QScalar(Rat(qb * rat_pow(*z_value, h.a)));
        return QScalar::monomial(0, h.a, qb);
      }
      case QMode::Classical:
        return QScalar(1L);
    }
    throw ConfigError("bad mode");
  }

  /// Balanced bracket [a*mu + b]. In the classical mode this is the plain
  /// value a*mu + b.
  QScalar bracket(AffineInt h) const {
    if (mu_int) h = {0, h.a * *mu_int + h.b};
    switch (mode) {
      case QMode::Symbolic:
        return h.a == 0 ? qint(h.b) : qint_affine(h.a, h.b);
      case QMode::Numeric: {
        QScalar num = power(h) - power(-h);
        return num / q_minus_qinv();
      }
      case QMode::Classical: {
        if (h.a == 0) return QScalar(static_cast<long>(h.b));
        if (!mu_value) throw ConfigError("classical mode needs a weight value");
        return QScalar(Rat(Rat(h.a) * *mu_value + h.b));
      }
    }
    throw ConfigError("bad mode");
  }

  QScalar integer(long m) const { return bracket({0, m}); }
};

/// A U_q(sl(n)) module given by the Chevalley generator matrices. Diagonal
/// h_i eigenvalues are kept exactly as affine expressions in the weight.
struct Rep {
  int n = 0;
  int dim = 0;
  ScalarContext ctx;
  std::vector<SparseOperator> e, f, qh, qhinv;  // index i-1 for generator i
  std::vector<std::vector<AffineInt>> h;        // h[i-1][state]
  std::vector<int> degree;                      // lowering degree per state (truncated only)
  int truncation = -1;                          // band N, or -1 when complete
  std::vector<std::string> labels;
  std::vector<std::vector<int>> eps;  // epsilon weight per state (may be empty)

  bool truncated() const { return truncation >= 0; }

  /// Column mask of states whose images survive `trust` raising factors.
  std::vector<bool> trusted_cols(int trust) const {
    std::vector<bool> keep(dim, true);
    if (!truncated() || trust <= 0) return keep;
    for (int s = 0; s < dim; ++s) keep[s] = degree[s] + trust <= truncation;
    return keep;
  }

  std::vector<int> hweight(int state) const {
    std::vector<int> w(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
      if (h[i][state].a != 0) throw WeightMismatch("state has a formal weight component");
      w[i] = static_cast<int>(h[i][state].b);
    }
    return w;
  }
};

enum class ModuleKind { Finite, Verma };

struct ModuleSpec {
  int n = 2;
  ModuleKind kind = ModuleKind::Finite;
  std::optional<long> mu;  // integer weight mu*omega_1; empty = generic (Verma only)
  int truncation = 6;      // lowering band for Verma
};

struct WeightModule {
  ModuleSpec spec;
  std::vector<std::vector<int>> tails;  // (m_2, ..., m_n) per state
  std::map<std::vector<int>, int> index;
  Rep rep;
};

namespace detail {

inline void enumerate_tails(int len, int bound, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= bound; ++v) {
    cur.push_back(v);
    enumerate_tails(len, bound - v, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

/// Weight module of highest weight mu*omega_1: the finite-dimensional
/// irreducible (integer mu >= 0) or a truncated Verma module with formal
/// highest weight. States are monomials (m_1, ..., m_n) with m_1 determined
/// by the tail; the tail (m_2, ..., m_n) runs lexicographically.
inline WeightModule build_weight_module(const ModuleSpec& spec, ScalarContext ctx) {
  const int n = spec.n;
  if (n < 2) throw ConfigError("need n >= 2");
  WeightModule mod;
  mod.spec = spec;

  long bound = 0;
  if (spec.kind == ModuleKind::Finite) {
    if (!spec.mu || *spec.mu < 0) throw ConfigError("finite module needs integer mu >= 0");
    bound = *spec.mu;
  } else {
    if (spec.truncation < 0) throw ConfigError("truncation band must be >= 0");
    bound = spec.truncation;
    if (ctx.mode == QMode::Classical && !spec.mu && !ctx.mu_value)
      throw ConfigError("classical Verma module needs a weight value");
  }
  ctx.mu_int = spec.mu;

  std::vector<int> cur;
  detail::enumerate_tails(n - 1, static_cast<int>(bound), cur, mod.tails);
  const int dim = static_cast<int>(mod.tails.size());
  for (int s = 0; s < dim; ++s) mod.index[mod.tails[s]] = s;

  Rep& R = mod.rep;
  R.n = n;
  R.dim = dim;
  R.ctx = ctx;
  R.h.assign(n - 1, std::vector<AffineInt>(dim));
  const bool verma = spec.kind == ModuleKind::Verma;
  const bool generic = verma && !spec.mu;
  if (verma) {
    R.truncation = spec.truncation;
    R.degree.resize(dim);
  }

  std::vector<std::vector<SparseOperator::Entry>> ee(n - 1), fe(n - 1);
  for (int s = 0; s < dim; ++s) {
    const std::vector<int>& t = mod.tails[s];
    int mdeg = 0;
    for (int v : t) mdeg += v;
    if (verma) R.degree[s] = mdeg;
    // m_k for k = 1..n: m_1 = mu - mdeg (formal when generic), m_{k} = t[k-2].
    AffineInt m1{1, -mdeg};

    {
      std::string lab = "(";
      lab += generic ? (mdeg ? "mu-" + std::to_string(mdeg) : "mu")
                     : std::to_string(*ctx.mu_int - mdeg);
      for (int v : t) lab += "," + std::to_string(v);
      lab += ")";
      R.labels.push_back(lab);
    }
    if (!generic) {
      std::vector<int> w(n);
      w[0] = static_cast<int>(*ctx.mu_int - mdeg);
      for (int k = 0; k < n - 1; ++k) w[k + 1] = t[k];
      R.eps.push_back(w);
    }

    for (int i = 1; i <= n - 1; ++i) {
      // h_i = m_i - m_{i+1}.
      AffineInt hi = i == 1 ? m1 - AffineInt{0, t[0]} : AffineInt{0, t[i - 2] - t[i - 1]};
      if (ctx.mu_int) hi = {0, hi.a * *ctx.mu_int + hi.b};
      R.h[i - 1][s] = hi;

      // e_i: (m_i, m_{i+1}) -> (m_i + 1, m_{i+1} - 1) with coefficient [m_{i+1}].
      int mi1 = i == 1 ? t[0] : t[i - 1];
      if (mi1 > 0) {
        std::vector<int> tt = t;
        if (i >= 2) tt[i - 2] += 1;
        tt[i - 1] -= 1;
        ee[i - 1].push_back({mod.index.at(tt), s, ctx.integer(mi1)});
      }

      // f_i: (m_i, m_{i+1}) -> (m_i - 1, m_{i+1} + 1) with coefficient [m_i].
      if (i == 1) {
        QScalar c = ctx.bracket(m1);
        bool in_band = mdeg + 1 <= bound;
        if (!c.is_zero() && in_band) {
          std::vector<int> tt = t;
          tt[0] += 1;
          fe[0].push_back({mod.index.at(tt), s, c});
        }
      } else {
        int mi = t[i - 2];
        if (mi > 0) {
          std::vector<int> tt = t;
          tt[i - 2] -= 1;
          tt[i - 1] += 1;
          fe[i - 1].push_back({mod.index.at(tt), s, ctx.integer(mi)});
        }
      }
    }
  }

  for (int i = 0; i < n - 1; ++i) {
    R.e.push_back(SparseOperator::from_entries(dim, dim, std::move(ee[i])));
    R.f.push_back(SparseOperator::from_entries(dim, dim, std::move(fe[i]),
                                               (verma && i == 0) ? 1 : 0));
    std::vector<QScalar> dq(dim), dqi(dim);
    for (int s = 0; s < dim; ++s) {
      dq[s] = ctx.power(R.h[i][s]);
      dqi[s] = ctx.power(-R.h[i][s]);
    }
    R.qh.push_back(SparseOperator::diagonal(std::move(dq)));
    R.qhinv.push_back(SparseOperator::diagonal(std::move(dqi)));
  }
  return mod;
}

/// Tensor product action through the coproduct
///   D(h) = h(x)1 + 1(x)h,  D(e) = e(x)1 + q^{-h}(x)e,  D(f) = 1(x)f + f(x)q^{h}.
/// State (a, b) maps to index a*B.dim + b.
inline Rep coproduct_action(const Rep& A, const Rep& B) {
  if (A.n != B.n) throw ModuleMismatch("tensor factors over different algebras");
  if (A.truncated() || B.truncated())
    throw ModuleMismatch("tensor products are built on complete modules");
  Rep R;
  R.n = A.n;
  R.dim = A.dim * B.dim;
  R.ctx = A.ctx;
  const SparseOperator ia = SparseOperator::identity(A.dim);
  const SparseOperator ib = SparseOperator::identity(B.dim);
  for (int i = 0; i < A.n - 1; ++i) {
    R.e.push_back(A.e[i].kron(ib) + A.qhinv[i].kron(B.e[i]));
    R.f.push_back(ia.kron(B.f[i]) + A.f[i].kron(B.qh[i]));
    R.qh.push_back(A.qh[i].kron(B.qh[i]));
    R.qhinv.push_back(A.qhinv[i].kron(B.qhinv[i]));
    std::vector<AffineInt> hs(R.dim);
    for (int a = 0; a < A.dim; ++a)
      for (int b = 0; b < B.dim; ++b) hs[a * B.dim + b] = A.h[i][a] + B.h[i][b];
    R.h.push_back(std::move(hs));
  }
  const bool lab = !A.labels.empty() && !B.labels.empty();
  const bool we = !A.eps.empty() && !B.eps.empty();
  for (int a = 0; a < A.dim; ++a)
    for (int b = 0; b < B.dim; ++b) {
      if (lab) R.labels.push_back(A.labels[a] + "(x)" + B.labels[b]);
      if (we) {
        std::vector<int> w = A.eps[a];
        for (std::size_t k = 0; k < w.size(); ++k) w[k] += B.eps[b][k];
        R.eps.push_back(std::move(w));
      }
    }
  return R;
}

/// Dual action rho*(u) = rho(s(u))^T with the antipode
///   s(h) = -h,  s(e) = -q^{h} e,  s(f) = -f q^{-h}.
inline Rep dual_action(const Rep& A) {
  if (A.truncated()) throw ModuleMismatch("dual of a truncated module");
  Rep R;
  R.n = A.n;
  R.dim = A.dim;
  R.ctx = A.ctx;
  for (int i = 0; i < A.n - 1; ++i) {
    R.e.push_back((-(A.qh[i] * A.e[i])).transposed());
    R.f.push_back((-(A.f[i] * A.qhinv[i])).transposed());
    R.qh.push_back(A.qhinv[i]);
    R.qhinv.push_back(A.qh[i]);
    std::vector<AffineInt> hs(A.dim);
    for (int s = 0; s < A.dim; ++s) hs[s] = -A.h[i][s];
    R.h.push_back(std::move(hs));
  }
  for (const auto& l : A.labels) R.labels.push_back(l + "*");
  for (const auto& w : A.eps) {
    std::vector<int> neg(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) neg[k] = -w[k];
    R.eps.push_back(std::move(neg));
  }
  return R;
}

}  // namespace qorbit::repcore

namespace qorbit {
using namespace repcore;
}
