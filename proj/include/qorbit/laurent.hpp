#pragma once

#include "errors.hpp"
#include "rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qorbit::ring {

/// Exact Laurent polynomial in two formal variables x0, x1 over Q.
///
/// Terms are kept sorted by exponent pair (a, b) with nonzero coefficients;
/// the zero polynomial has no terms. Variable names are not stored: the same
/// type serves the (q, z) field and the (hbar, mu) classical-limit ring, with
/// display names supplied at I/O time.
class Laurent {
 public:
  struct Term {
    std::int64_t a = 0;  // exponent of x0
    std::int64_t b = 0;  // exponent of x1
    Rat c;
  };

  Laurent() = default;

  static Laurent zero() { return Laurent(); }

  static Laurent constant(const Rat& c) {
    Laurent p;
    if (c != 0) p.ts_.push_back({0, 0, c});
    return p;
  }

  static Laurent one() { return constant(Rat(1)); }

  static Laurent monomial(std::int64_t a, std::int64_t b, const Rat& c) {
    Laurent p;
    if (c != 0) p.ts_.push_back({a, b, c});
    return p;
  }

  /// Builds from an arbitrary term list (sorts, merges, drops zeros).
  static Laurent from_terms(std::vector<Term> v) {
    Laurent p;
    p.ts_ = std::move(v);
    p.normalize();
    return p;
  }

  const std::vector<Term>& terms() const { return ts_; }
  bool is_zero() const { return ts_.empty(); }

  bool is_constant() const {
    return ts_.empty() || (ts_.size() == 1 && ts_[0].a == 0 && ts_[0].b == 0);
  }

  bool is_single_term() const { return ts_.size() == 1; }

  Rat constant_value() const {
    if (ts_.empty()) return Rat(0);
    return ts_[0].c;
  }

  bool uses_x0() const {
    for (const Term& t : ts_)
      if (t.a != 0) return true;
    return false;
  }

  bool uses_x1() const {
    for (const Term& t : ts_)
      if (t.b != 0) return true;
    return false;
  }

  std::int64_t min_a() const { return fold_exp(true, true); }
  std::int64_t max_a() const { return fold_exp(true, false); }
  std::int64_t min_b() const { return fold_exp(false, true); }
  std::int64_t max_b() const { return fold_exp(false, false); }

  Laurent operator-() const {
    Laurent p = *this;
    for (Term& t : p.ts_) t.c = -t.c;
    return p;
  }

  Laurent operator+(const Laurent& o) const { return merged(o, false); }
  Laurent operator-(const Laurent& o) const { return merged(o, true); }

  Laurent operator*(const Laurent& o) const {
    if (is_zero() || o.is_zero()) return zero();
    std::vector<Term> out;
    out.reserve(ts_.size() * o.ts_.size());
    for (const Term& s : ts_)
      for (const Term& t : o.ts_) out.push_back({s.a + t.a, s.b + t.b, s.c * t.c});
    return from_terms(std::move(out));
  }

  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

  Laurent scaled(const Rat& c) const {
    if (c == 0) return zero();
    Laurent p = *this;
    for (Term& t : p.ts_) t.c *= c;
    return p;
  }

  /// Multiplies by the monomial x0^da * x1^db.
  Laurent shifted(std::int64_t da, std::int64_t db) const {
    Laurent p = *this;
    for (Term& t : p.ts_) {
      t.a += da;
      t.b += db;
    }
    return p;
  }

  bool operator==(const Laurent& o) const {
    if (ts_.size() != o.ts_.size()) return false;
    for (std::size_t i = 0; i < ts_.size(); ++i)
      if (ts_[i].a != o.ts_[i].a || ts_[i].b != o.ts_[i].b || ts_[i].c != o.ts_[i].c)
        return false;
    return true;
  }
  bool operator!=(const Laurent& o) const { return !(*this == o); }

  /// Full evaluation; values must be nonzero where negative exponents occur.
  Rat eval(const Rat& v0, const Rat& v1) const {
    Rat acc(0);
    for (const Term& t : ts_) {
      if ((t.a < 0 && v0 == 0) || (t.b < 0 && v1 == 0))
        throw DivisionByZero("evaluation of negative power at zero");
      acc += t.c * rat_pow(v0, t.a) * rat_pow(v1, t.b);
    }
    return acc;
  }

  /// Substitutes x0 -> v, leaving a Laurent polynomial in x1.
  Laurent subst_x0(const Rat& v) const {
    std::vector<Term> out;
    for (const Term& t : ts_) {
      if (t.a < 0 && v == 0) throw DivisionByZero("substitution of zero into negative power");
      out.push_back({0, t.b, t.c * rat_pow(v, t.a)});
    }
    return from_terms(std::move(out));
  }

  /// Substitutes x1 -> v, leaving a Laurent polynomial in x0.
  Laurent subst_x1(const Rat& v) const {
    std::vector<Term> out;
    for (const Term& t : ts_) {
      if (t.b < 0 && v == 0) throw DivisionByZero("substitution of zero into negative power");
      out.push_back({t.a, 0, t.c * rat_pow(v, t.b)});
    }
    return from_terms(std::move(out));
  }

  /// Substitutes x1 -> -x1.
  Laurent subst_x1_negated() const {
    Laurent p = *this;
    for (Term& t : p.ts_)
      if (t.b % 2 != 0) t.c = -t.c;
    return p;
  }

  /// Substitutes x1 -> x0^m (exact; used to bind z = q^mu for integer mu).
  Laurent subst_x1_pow_x0(std::int64_t m) const {
    std::vector<Term> out;
    out.reserve(ts_.size());
    for (const Term& t : ts_) out.push_back({t.a + m * t.b, 0, t.c});
    return from_terms(std::move(out));
  }

  /// All x1 exponents even?
  bool x1_exponents_even() const {
    for (const Term& t : ts_)
      if (t.b % 2 != 0) return false;
    return true;
  }

  /// Substitutes x1^2 -> v exactly; requires all x1 exponents even.
  Laurent subst_x1sq(const Rat& v) const {
    std::vector<Term> out;
    for (const Term& t : ts_) {
      if (t.b % 2 != 0) throw NotZSquareExpressible("odd x1 exponent in x1^2 substitution");
      if (t.b < 0 && v == 0) throw DivisionByZero("substitution of zero into negative power");
      out.push_back({t.a, 0, t.c * rat_pow(v, t.b / 2)});
    }
    return from_terms(std::move(out));
  }

  /// Index of the degree-lexicographically largest term (total degree first,
  /// then x0 exponent, then x1 exponent). Requires a nonzero polynomial.
  std::size_t deglex_lead_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < ts_.size(); ++i)
      if (deglex_less(ts_[best], ts_[i])) best = i;
    return best;
  }

  static bool deglex_less(const Term& s, const Term& t) {
    std::int64_t ds = s.a + s.b, dt = t.a + t.b;
    if (ds != dt) return ds < dt;
    if (s.a != t.a) return s.a < t.a;
    return s.b < t.b;
  }

 private:
  std::vector<Term> ts_;

  std::int64_t fold_exp(bool first, bool min) const {
    if (ts_.empty()) throw QOrbitError("exponent range of zero polynomial");
    std::int64_t r = first ? ts_[0].a : ts_[0].b;
    for (const Term& t : ts_) {
      std::int64_t v = first ? t.a : t.b;
      if (min ? v < r : v > r) r = v;
    }
    return r;
  }

  static bool term_less(const Term& s, const Term& t) {
    if (s.a != t.a) return s.a < t.a;
    return s.b < t.b;
  }

  Laurent merged(const Laurent& o, bool subtract) const {
    std::vector<Term> out;
    out.reserve(ts_.size() + o.ts_.size());
    std::size_t i = 0, j = 0;
    while (i < ts_.size() || j < o.ts_.size()) {
      bool take_left;
      if (i == ts_.size())
        take_left = false;
      else if (j == o.ts_.size())
        take_left = true;
      else if (term_less(ts_[i], o.ts_[j]))
        take_left = true;
      else if (term_less(o.ts_[j], ts_[i]))
        take_left = false;
      else {
        Rat c = subtract ? Rat(ts_[i].c - o.ts_[j].c) : Rat(ts_[i].c + o.ts_[j].c);
        if (c != 0) out.push_back({ts_[i].a, ts_[i].b, c});
        ++i;
        ++j;
        continue;
      }
      if (take_left) {
        out.push_back(ts_[i]);
        ++i;
      } else {
        Term t = o.ts_[j];
        if (subtract) t.c = -t.c;
        out.push_back(t);
        ++j;
      }
    }
    Laurent p;
    p.ts_ = std::move(out);
    return p;
  }

  void normalize() {
    std::sort(ts_.begin(), ts_.end(), term_less);
    std::vector<Term> out;
    out.reserve(ts_.size());
    for (const Term& t : ts_) {
      if (!out.empty() && out.back().a == t.a && out.back().b == t.b)
        out.back().c += t.c;
      else
        out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.c == 0; }),
              out.end());
    ts_ = std::move(out);
  }
};

/// Renders with terms in descending (x0, x1)-exponent order, e.g.
/// "q^2 + 1 + q^-2" or "3/2*q*z^-1 - z".
inline std::string laurent_str(const Laurent& p, const std::array<std::string, 2>& names) {
  if (p.is_zero()) return "0";
  std::vector<Laurent::Term> ts = p.terms();
  std::sort(ts.begin(), ts.end(), [](const Laurent::Term& s, const Laurent::Term& t) {
    if (s.a != t.a) return s.a > t.a;
    return s.b > t.b;
  });
  std::string out;
  bool first = true;
  for (const Laurent::Term& t : ts) {
    Rat c = t.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string mono;
    auto add_var = [&](const std::string& name, std::int64_t e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += name;
      if (e != 1) mono += "^" + std::to_string(e);
    };
    add_var(names[0], t.a);
    add_var(names[1], t.b);
    if (mono.empty()) {
      out += rat_str(c);
    } else {
      if (c != 1) out += rat_str(c) + "*";
      out += mono;
    }
  }
  return out;
}

}  // namespace qorbit::ring

namespace qorbit {
using namespace ring;
}
