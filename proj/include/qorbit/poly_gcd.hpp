#pragma once

#include "laurent.hpp"
#include "rational.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace qorbit::ring {
namespace detail {

// Dense univariate polynomial over Z, coefficient of x^i at index i.
using UPoly = std::vector<Int>;

inline void uni_trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline bool uni_is_zero(const UPoly& p) { return p.empty(); }

inline std::int64_t uni_deg(const UPoly& p) {
  return static_cast<std::int64_t>(p.size()) - 1;
}

inline UPoly uni_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  uni_trim(r);
  return r;
}

inline UPoly uni_scale(const UPoly& a, const Int& c) {
  if (c == 0) return {};
  UPoly r = a;
  for (Int& x : r) x *= c;
  return r;
}

inline UPoly uni_sub(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  if (b.size() > r.size()) r.resize(b.size(), Int(0));
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  uni_trim(r);
  return r;
}

inline Int uni_content(const UPoly& p) {
  Int g(0);
  for (const Int& c : p) {
    g = int_gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

inline UPoly uni_pp(UPoly p) {
  Int g = uni_content(p);
  if (g == 0) return p;
  if (p.back() < 0) g = -g;
  for (Int& c : p) c /= g;
  return p;
}

/// Pseudo-remainder of a by b (b nonzero), up to content.
inline UPoly uni_prem(UPoly a, const UPoly& b) {
  const Int& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    Int la = a.back();
    std::size_t shift = a.size() - b.size();
    a = uni_scale(a, lb);
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= la * b[i];
    uni_trim(a);
  }
  return a;
}

/// Trial exact division; returns false (leaving q unspecified) when d does
/// not divide a over Z.
inline bool uni_try_divexact(const UPoly& a, const UPoly& d, UPoly& q) {
  if (d.empty()) return false;
  if (a.empty()) {
    q.clear();
    return true;
  }
  if (a.size() < d.size()) return false;
  q.assign(a.size() - d.size() + 1, Int(0));
  UPoly r = a;
  while (!r.empty()) {
    if (r.size() < d.size() || r.back() % d.back() != 0) return false;
    std::size_t shift = r.size() - d.size();
    Int c = r.back() / d.back();
    q[shift] = c;
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
    uni_trim(r);
  }
  return true;
}

// Modular arithmetic for the gcd: primes fit in 31 bits so products stay in
// 64-bit range.
inline std::uint64_t umod(const Int& x, std::uint64_t p) {
  Int r = x % Int(p);
  if (r < 0) r += Int(p);
  return r.convert_to<std::uint64_t>();
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t acc = 1;
  while (e) {
    if (e & 1) acc = mulmod(acc, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return acc;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

/// i-th prime below 2^31, generated lazily.
inline std::uint64_t gcd_prime(std::size_t i) {
  static std::vector<std::uint64_t> ps;
  static std::uint64_t cand = (1ull << 31) + 1;
  while (ps.size() <= i) {
    cand -= 2;
    bool prime = true;
    for (std::uint64_t d = 3; d * d <= cand; d += 2)
      if (cand % d == 0) {
        prime = false;
        break;
      }
    if (prime) ps.push_back(cand);
  }
  return ps[i];
}

// Dense polynomial over GF(p), index = degree.
using MPoly = std::vector<std::uint64_t>;

inline MPoly to_mpoly(const UPoly& a, std::uint64_t p) {
  MPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = umod(a[i], p);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

inline MPoly m_rem(MPoly a, const MPoly& b, std::uint64_t p) {
  std::uint64_t il = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    std::uint64_t c = mulmod(a.back(), il, p);
    std::size_t shift = a.size() - b.size();
    if (c != 0)
      for (std::size_t i = 0; i + 1 < b.size(); ++i)
        a[shift + i] = submod(a[shift + i], mulmod(c, b[i], p), p);
    a.pop_back();
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

inline MPoly m_gcd(MPoly a, MPoly b, std::uint64_t p) {
  while (!b.empty()) {
    MPoly r = m_rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    std::uint64_t il = invmod(a.back(), p);
    for (std::uint64_t& c : a) c = mulmod(c, il, p);
  }
  return a;
}

/// Gcd over Z by modular images (Brown): images mod word-size primes are
/// lifted by CRT until the candidate stabilizes and divides both inputs.
/// Result is primitive with positive leading coeff, times the content gcd.
inline UPoly uni_gcd(UPoly a, UPoly b) {
  uni_trim(a);
  uni_trim(b);
  if (a.empty()) return uni_pp(std::move(b));
  if (b.empty()) return uni_pp(std::move(a));
  Int ca = uni_content(a), cb = uni_content(b);
  Int cg = int_gcd(ca, cb);
  a = uni_pp(std::move(a));
  b = uni_pp(std::move(b));
  if (uni_deg(a) == 0 || uni_deg(b) == 0) return UPoly{cg};
  Int gl = int_gcd(a.back(), b.back());

  std::vector<Int> crt;  // combined coefficients, residues in [0, M)
  Int M(0);
  std::int64_t cur_deg = -1;
  UPoly prev;
  for (std::size_t pi = 0;; ++pi) {
    std::uint64_t p = gcd_prime(pi);
    if (umod(a.back(), p) == 0 || umod(b.back(), p) == 0) continue;
    MPoly gp = m_gcd(to_mpoly(a, p), to_mpoly(b, p), p);
    std::int64_t dg = static_cast<std::int64_t>(gp.size()) - 1;
    if (dg == 0) return UPoly{cg};
    std::uint64_t glp = umod(gl, p);
    for (std::uint64_t& c : gp) c = mulmod(c, glp, p);
    if (cur_deg == -1 || dg < cur_deg) {
      cur_deg = dg;
      crt.assign(gp.size(), Int(0));
      for (std::size_t i = 0; i < gp.size(); ++i) crt[i] = Int(gp[i]);
      M = Int(p);
      prev.clear();
    } else if (dg > cur_deg) {
      continue;  // unlucky prime
    } else {
      std::uint64_t minv = invmod(umod(M, p), p);
      for (std::size_t i = 0; i < crt.size(); ++i) {
        std::uint64_t want = i < gp.size() ? gp[i] : 0;
        std::uint64_t t = mulmod(submod(want, umod(crt[i], p), p), minv, p);
        crt[i] += Int(t) * M;
      }
      M *= Int(p);
    }
    UPoly cand(crt.size());
    for (std::size_t i = 0; i < crt.size(); ++i)
      cand[i] = 2 * crt[i] > M ? Int(crt[i] - M) : crt[i];
    uni_trim(cand);
    if (cand.empty()) continue;
    cand = uni_pp(std::move(cand));
    if (cand == prev) {
      UPoly quo;
      if (uni_try_divexact(a, cand, quo) && uni_try_divexact(b, cand, quo))
        return uni_scale(cand, cg);
    }
    prev = std::move(cand);
  }
}

// Dense bivariate polynomial: coefficient of q^i is a Z-polynomial in z.
using BPoly = std::vector<UPoly>;

inline void bi_trim(BPoly& p) {
  while (!p.empty() && p.back().empty()) p.pop_back();
}

inline bool bi_is_zero(const BPoly& p) { return p.empty(); }

inline UPoly bi_content(const BPoly& p) {
  UPoly g;
  for (const UPoly& c : p) {
    g = uni_gcd(g, c);
    if (uni_deg(g) == 0 && !g.empty() && g[0] == 1) break;
  }
  return g;
}

/// Exact univariate division a / d over Z (d must divide a exactly).
inline UPoly uni_divexact(const UPoly& a, const UPoly& d) {
  if (d.empty()) throw DivisionByZero("uni_divexact by zero");
  if (a.empty()) return {};
  UPoly q(a.size() - d.size() + 1, Int(0));
  UPoly r = a;
  while (!r.empty()) {
    if (r.size() < d.size()) throw QOrbitError("uni_divexact: division not exact");
    std::size_t shift = r.size() - d.size();
    Int c = r.back() / d.back();
    q[shift] = c;
    for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
    uni_trim(r);
  }
  return q;
}

inline BPoly bi_pp(BPoly p, UPoly* content_out = nullptr) {
  UPoly g = bi_content(p);
  if (content_out) *content_out = g;
  if (g.empty() || (uni_deg(g) == 0 && g[0] == 1)) return p;
  for (UPoly& c : p)
    if (!c.empty()) c = uni_divexact(c, g);
  return p;
}

inline BPoly bi_prem(BPoly a, const BPoly& b) {
  const UPoly& lb = b.back();
  while (!a.empty() && a.size() >= b.size()) {
    UPoly la = a.back();
    std::size_t shift = a.size() - b.size();
    for (UPoly& c : a) c = uni_mul(c, lb);
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = uni_sub(a[shift + i], uni_mul(la, b[i]));
    bi_trim(a);
  }
  return a;
}

/// Primitive-PRS gcd in (Z[z])[q].
inline BPoly bi_gcd(BPoly a, BPoly b) {
  bi_trim(a);
  bi_trim(b);
  if (a.empty()) return b;
  if (b.empty()) return a;
  UPoly ca, cb;
  a = bi_pp(std::move(a), &ca);
  b = bi_pp(std::move(b), &cb);
  UPoly cg = uni_gcd(ca, cb);
  if (a.size() < b.size()) std::swap(a, b);
  while (true) {
    if (b.empty()) break;
    if (b.size() == 1) {
      // q-degree zero: the q-primitive gcd is trivial.
      a = BPoly{UPoly{Int(1)}};
      break;
    }
    BPoly r = bi_prem(a, b);
    a = std::move(b);
    b = bi_pp(std::move(r));
  }
  a = bi_pp(std::move(a));
  for (UPoly& c : a) c = uni_mul(c, cg);
  return a;
}

}  // namespace detail

/// GCD of ordinary (non-Laurent) bivariate polynomials over Q, returned as a
/// primitive integer-coefficient polynomial with positive deglex-leading
/// coefficient. Constants map to 1. Inputs must have min exponents >= 0.
/// Inputs in one variable take the fast modular route.
inline Laurent poly_gcd(const Laurent& A, const Laurent& B) {
  using namespace detail;
  if (A.is_zero() && B.is_zero()) return Laurent::zero();
  if (!A.is_zero() && (A.min_a() < 0 || A.min_b() < 0))
    throw QOrbitError("poly_gcd expects ordinary polynomials");
  if (!B.is_zero() && (B.min_a() < 0 || B.min_b() < 0))
    throw QOrbitError("poly_gcd expects ordinary polynomials");
  std::vector<Laurent::Term> ts;
  if (!A.uses_x1() && !B.uses_x1()) {
    auto to_up = [](const Laurent& P) {
      UPoly p;
      if (P.is_zero()) return p;
      Int lcm(1);
      for (const auto& t : P.terms()) lcm = int_lcm(lcm, rat_den(t.c));
      p.assign(static_cast<std::size_t>(P.max_a()) + 1, Int(0));
      for (const auto& t : P.terms())
        p[static_cast<std::size_t>(t.a)] = rat_num(t.c) * (lcm / rat_den(t.c));
      uni_trim(p);
      return p;
    };
    UPoly g = uni_gcd(to_up(A), to_up(B));
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0) ts.push_back({static_cast<std::int64_t>(i), 0, Rat(g[i])});
  } else if (!A.uses_x0() && !B.uses_x0()) {
    auto to_up = [](const Laurent& P) {
      UPoly p;
      if (P.is_zero()) return p;
      Int lcm(1);
      for (const auto& t : P.terms()) lcm = int_lcm(lcm, rat_den(t.c));
      p.assign(static_cast<std::size_t>(P.max_b()) + 1, Int(0));
      for (const auto& t : P.terms())
        p[static_cast<std::size_t>(t.b)] = rat_num(t.c) * (lcm / rat_den(t.c));
      uni_trim(p);
      return p;
    };
    UPoly g = uni_gcd(to_up(A), to_up(B));
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] != 0) ts.push_back({0, static_cast<std::int64_t>(i), Rat(g[i])});
  } else {
    auto to_bp = [](const Laurent& P) {
      BPoly p;
      if (P.is_zero()) return p;
      Int lcm(1);
      for (const auto& t : P.terms()) lcm = int_lcm(lcm, rat_den(t.c));
      p.assign(static_cast<std::size_t>(P.max_a()) + 1, UPoly{});
      for (const auto& t : P.terms()) {
        UPoly& c = p[static_cast<std::size_t>(t.a)];
        std::size_t bi = static_cast<std::size_t>(t.b);
        if (c.size() <= bi) c.resize(bi + 1, Int(0));
        c[bi] = rat_num(t.c) * (lcm / rat_den(t.c));
      }
      for (UPoly& c : p) uni_trim(c);
      bi_trim(p);
      return p;
    };
    BPoly g = bi_gcd(to_bp(A), to_bp(B));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g[i].size(); ++j)
        if (g[i][j] != 0)
          ts.push_back(
              {static_cast<std::int64_t>(i), static_cast<std::int64_t>(j), Rat(g[i][j])});
  }
  Laurent out = Laurent::from_terms(std::move(ts));
  if (out.is_zero()) return out;
  // Normalize: primitive integer coefficients, positive deglex lead.
  Int content(0);
  for (const auto& t : out.terms()) content = int_gcd(content, rat_num(t.c));
  Rat scale = Rat(content);
  if (out.terms()[out.deglex_lead_index()].c < 0) scale = -scale;
  return out.scaled(Rat(1) / scale);
}

/// Exact division P / D in the Laurent sense (D must divide P exactly).
inline Laurent laurent_divexact(const Laurent& P, const Laurent& D) {
  if (D.is_zero()) throw DivisionByZero("laurent_divexact by zero");
  if (P.is_zero()) return Laurent::zero();
  if (D.is_single_term()) {
    const auto& d = D.terms()[0];
    return P.shifted(-d.a, -d.b).scaled(Rat(1) / d.c);
  }
  // Shift both to ordinary polynomials, divide by leading terms in deglex
  // order, shift back.
  std::int64_t pa = P.min_a(), pb = P.min_b(), da = D.min_a(), db = D.min_b();
  Laurent p0 = P.shifted(-pa, -pb);
  Laurent d0 = D.shifted(-da, -db);
  auto key = [](const Laurent::Term& t) {
    return std::tuple<std::int64_t, std::int64_t, std::int64_t>(t.a + t.b, t.a, t.b);
  };
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Laurent::Term> rem;
  for (const auto& t : p0.terms()) rem[key(t)] = t;
  const auto& dlead = d0.terms()[d0.deglex_lead_index()];
  std::vector<Laurent::Term> quot;
  while (!rem.empty()) {
    auto it = std::prev(rem.end());
    Laurent::Term lead = it->second;
    std::int64_t qa = lead.a - dlead.a, qb = lead.b - dlead.b;
    if (qa < 0 || qb < 0) throw QOrbitError("laurent_divexact: division not exact");
    Rat qc = lead.c / dlead.c;
    quot.push_back({qa, qb, qc});
    for (const auto& t : d0.terms()) {
      Laurent::Term prod{t.a + qa, t.b + qb, t.c * qc};
      auto k = key(prod);
      auto jt = rem.find(k);
      if (jt == rem.end()) {
        prod.c = -prod.c;
        rem[k] = prod;
      } else {
        jt->second.c -= prod.c;
        if (jt->second.c == 0) rem.erase(jt);
      }
    }
  }
  return Laurent::from_terms(std::move(quot)).shifted(pa - da, pb - db);
}

}  // namespace qorbit::ring

namespace qorbit {
using namespace ring;
}
