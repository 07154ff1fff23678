#pragma once

#include "errors.hpp"
#include "laurent.hpp"
#include "poly_gcd.hpp"
#include "rational.hpp"

#include <array>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qorbit::ring {

/// Exact rational function in two formal variables over Q, kept in canonical
/// reduced form:
///   - denominator is an ordinary polynomial (no negative exponents, not
///     divisible by either variable) with coprime integer coefficients and
///     positive degree-lexicographic leading coefficient; 1 for polynomials;
///   - numerator is a Laurent polynomial coprime to the denominator (its
///     polynomial part is, after clearing the recorded monomial factor);
///   - zero is 0/1.
/// Equality is syntactic on this form. The variables are abstractly x0, x1;
/// by convention x0 = q and x1 = z = q^mu, with display names chosen at I/O.
class QScalar {
 public:
  QScalar() : den_(Laurent::one()) {}
  explicit QScalar(const Rat& c) : num_(Laurent::constant(c)), den_(Laurent::one()) {}
  explicit QScalar(long v) : QScalar(Rat(v)) {}

  QScalar(Laurent num, Laurent den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
  }

  static QScalar from_laurent(Laurent p) { return QScalar(std::move(p), Laurent::one()); }
  static QScalar q() { return from_laurent(Laurent::monomial(1, 0, Rat(1))); }
  static QScalar z() { return from_laurent(Laurent::monomial(0, 1, Rat(1))); }
  static QScalar qpow(std::int64_t a) { return from_laurent(Laurent::monomial(a, 0, Rat(1))); }
  static QScalar zpow(std::int64_t b) { return from_laurent(Laurent::monomial(0, b, Rat(1))); }
  static QScalar monomial(std::int64_t a, std::int64_t b, const Rat& c = Rat(1)) {
    return from_laurent(Laurent::monomial(a, b, c));
  }

  const Laurent& num() const { return num_; }
  const Laurent& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return den_.is_constant() && num_.is_constant() && num_.constant_value() == 1; }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }

  Rat rat_value() const {
    if (!is_rational()) throw QOrbitError("scalar is not a plain rational");
    return num_.constant_value();
  }

  bool uses_q() const { return num_.uses_x0() || den_.uses_x0(); }
  bool uses_z() const { return num_.uses_x1() || den_.uses_x1(); }

  QScalar operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
  }

  QScalar operator+(const QScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return QScalar(num_ + o.num_, den_);
    return QScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }

  QScalar operator-(const QScalar& o) const {
    if (o.is_zero()) return *this;
    if (is_zero()) return -o;
    if (den_ == o.den_) return QScalar(num_ - o.num_, den_);
    return QScalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }

  QScalar operator*(const QScalar& o) const {
    if (is_zero() || o.is_zero()) return QScalar();
    return QScalar(num_ * o.num_, den_ * o.den_);
  }

  QScalar operator/(const QScalar& o) const {
    if (o.is_zero()) throw DivisionByZero("scalar division by zero");
    if (is_zero()) return QScalar();
    return QScalar(num_ * o.den_, den_ * o.num_);
  }

  QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
  QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
  QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
  QScalar& operator/=(const QScalar& o) { return *this = *this / o; }

  bool operator==(const QScalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const QScalar& o) const { return !(*this == o); }

  QScalar inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    return QScalar(den_, num_);
  }

  QScalar pow(std::int64_t e) const {
    if (e == 0) return QScalar(Rat(1));
    QScalar base = e < 0 ? inverse() : *this;
    std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    QScalar acc(Rat(1));
    while (k) {
      if (k & 1) acc *= base;
      base *= base;
      k >>= 1;
    }
    return acc;
  }

  /// Exact evaluation at a rational point. q = 1 evaluates the reduced form
  /// (the classical-limit path); q = -1 is rejected as a root-of-unity
  /// artifact; elsewhere a vanishing reduced denominator signals a pole.
  Rat specialize(const Rat& qval, std::optional<Rat> zval = std::nullopt) const {
    if (qval == 0) throw ConfigError("q binding must be nonzero");
    if (qval == -1)
      throw DenominatorVanishes("q = -1 is a root of unity; q-integer arithmetic degenerates");
    Rat zv(1);
    if (uses_z()) {
      if (!zval) throw MissingBinding("scalar mentions z but no z binding was given");
      if (*zval == 0) throw ConfigError("z binding must be nonzero");
      zv = *zval;
    }
    Rat dv = den_.eval(qval, zv);
    if (dv == 0) throw DenominatorVanishes("denominator vanishes at the evaluation point");
    return num_.eval(qval, zv) / dv;
  }

  /// Partial substitution q -> qval, leaving an exact function of z.
  QScalar subst_q(const Rat& qval) const {
    if (qval == 0) throw ConfigError("q binding must be nonzero");
    Laurent d = den_.subst_x0(qval);
    if (d.is_zero()) throw DenominatorVanishes("denominator vanishes identically at q binding");
    return QScalar(num_.subst_x0(qval), std::move(d));
  }

  /// Partial substitution z -> zval, leaving an exact function of q.
  QScalar subst_z(const Rat& zval) const {
    if (zval == 0) throw ConfigError("z binding must be nonzero");
    Laurent d = den_.subst_x1(zval);
    if (d.is_zero()) throw DenominatorVanishes("denominator vanishes identically at z binding");
    return QScalar(num_.subst_x1(zval), std::move(d));
  }

  /// Exact substitution z -> q^m (binds the weight to an integer).
  QScalar subst_z_qpow(std::int64_t m) const {
    Laurent d = den_.subst_x1_pow_x0(m);
    if (d.is_zero()) throw DenominatorVanishes("denominator vanishes identically at z = q^m");
    return QScalar(num_.subst_x1_pow_x0(m), std::move(d));
  }

  /// Substitution z -> -z (z-parity probe).
  QScalar subst_z_negated() const { return QScalar(num_.subst_x1_negated(), den_.subst_x1_negated()); }

  /// True iff the scalar is a function of z^2 alone (invariant under z -> -z).
  bool z_square_expressible() const { return subst_z_negated() == *this; }

  /// Evaluates a z^2-expressible scalar at q -> qval, z^2 -> zsqval.
  Rat eval_zsq(const Rat& qval, const Rat& zsqval) const {
    if (qval == 0) throw ConfigError("q binding must be nonzero");
    if (qval == -1)
      throw DenominatorVanishes("q = -1 is a root of unity; q-integer arithmetic degenerates");
    QScalar at_q = uses_q() ? subst_q(qval) : *this;
    Laurent n = at_q.num_, d = at_q.den_;
    if (!d.x1_exponents_even() || !n.x1_exponents_even()) {
      n = n.shifted(0, 1);
      d = d.shifted(0, 1);
      if (!d.x1_exponents_even() || (!n.is_zero() && !n.x1_exponents_even()))
        throw NotZSquareExpressible("scalar is not a function of z^2");
    }
    Rat dv = d.subst_x1sq(zsqval).constant_value();
    if (dv == 0) throw DenominatorVanishes("denominator vanishes at the z^2 binding");
    return n.subst_x1sq(zsqval).constant_value() / dv;
  }

 private:
  Laurent num_;
  Laurent den_;

  static Rat content_rat(const Laurent& p) {
    Int l(1);
    for (const auto& t : p.terms()) l = int_lcm(l, rat_den(t.c));
    Int g(0);
    for (const auto& t : p.terms()) g = int_gcd(g, rat_num(t.c) * (l / rat_den(t.c)));
    return Rat(g) / Rat(l);
  }

  void canonicalize() {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    if (num_.is_zero()) {
      den_ = Laurent::one();
      return;
    }
    const std::int64_t na = num_.min_a(), nb = num_.min_b();
    const std::int64_t da = den_.min_a(), db = den_.min_b();
    Laurent n0 = num_.shifted(-na, -nb);
    Laurent d0 = den_.shifted(-da, -db);
    if (!d0.is_constant()) {
      Laurent g = poly_gcd(n0, d0);
      if (!g.is_constant()) {
        n0 = laurent_divexact(n0, g);
        d0 = laurent_divexact(d0, g);
      }
    }
    if (d0.is_constant()) {
      num_ = n0.scaled(Rat(1) / d0.constant_value()).shifted(na - da, nb - db);
      den_ = Laurent::one();
      return;
    }
    Rat scale = content_rat(d0);
    if (d0.terms()[d0.deglex_lead_index()].c < 0) scale = -scale;
    num_ = n0.scaled(Rat(1) / scale).shifted(na - da, nb - db);
    den_ = d0.scaled(Rat(1) / scale);
  }
};

/// q-integer [m]_q = (q^m - q^-m)/(q - q^-1), built directly as the balanced
/// Laurent polynomial q^{m-1} + q^{m-3} + ... + q^{1-m}.
inline QScalar qint(std::int64_t m) {
  if (m == 0) return QScalar();
  std::int64_t n = m < 0 ? -m : m;
  std::vector<Laurent::Term> ts;
  ts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) ts.push_back({n - 1 - 2 * k, 0, Rat(m < 0 ? -1 : 1)});
  return QScalar::from_laurent(Laurent::from_terms(std::move(ts)));
}

/// [a*mu + b]_q = (z^a q^b - z^-a q^-b)/(q - q^-1) with z = q^mu.
inline QScalar qint_affine(std::int64_t a, std::int64_t b) {
  if (a == 0) return qint(b);
  Laurent num = Laurent::monomial(b, a, Rat(1)) - Laurent::monomial(-b, -a, Rat(1));
  Laurent den = Laurent::monomial(1, 0, Rat(1)) - Laurent::monomial(-1, 0, Rat(1));
  return QScalar(std::move(num), std::move(den));
}

/// [mu + k]_q for the generic weight bound to z.
inline QScalar qint_shifted(std::int64_t k) { return qint_affine(1, k); }

inline std::string qscalar_str(const QScalar& s,
                               const std::array<std::string, 2>& names = {"q", "z"}) {
  if (s.den().is_constant()) return laurent_str(s.num(), names);
  return laurent_str(s.num(), names) + " / " + laurent_str(s.den(), names);
}

namespace detail {

inline Laurent parse_laurent_text(const std::string& s, const std::array<std::string, 2>& names) {
  // Terms are separated by '+'/'-' at top level; '-' directly after '^' binds
  // to an exponent instead.
  struct Piece {
    int sign;
    std::string text;
  };
  std::vector<Piece> pieces;
  std::string cur;
  int sign = 1;
  char prev_sig = 0;
  for (char ch : s) {
    if (ch == ' ') continue;
    if ((ch == '+' || ch == '-') && prev_sig != 0 && prev_sig != '^' && prev_sig != '*') {
      if (cur.empty()) throw ParseError("empty term in scalar text");
      pieces.push_back({sign, cur});
      cur.clear();
      sign = ch == '-' ? -1 : 1;
      prev_sig = 0;
      continue;
    }
    if ((ch == '+' || ch == '-') && prev_sig == 0 && cur.empty()) {
      sign = ch == '-' ? -sign : sign;
      continue;
    }
    cur += ch;
    prev_sig = ch;
  }
  if (cur.empty()) throw ParseError("empty term in scalar text");
  pieces.push_back({sign, cur});

  std::vector<Laurent::Term> out;
  for (const Piece& piece : pieces) {
    if (piece.text == "0" && pieces.size() == 1) return Laurent::zero();
    // Split on '*' into factors.
    std::vector<std::string> factors;
    std::string f;
    for (char ch : piece.text) {
      if (ch == '*') {
        if (f.empty()) throw ParseError("empty factor in scalar text");
        factors.push_back(f);
        f.clear();
      } else {
        f += ch;
      }
    }
    if (f.empty()) throw ParseError("empty factor in scalar text");
    factors.push_back(f);
    Rat coeff(piece.sign);
    std::int64_t a = 0, b = 0;
    for (const std::string& fac : factors) {
      if (std::isdigit(static_cast<unsigned char>(fac[0]))) {
        std::size_t slash = fac.find('/');
        try {
          if (slash == std::string::npos) {
            coeff *= Rat(Int(fac));
          } else {
            Int den(fac.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in coefficient");
            coeff *= Rat(Int(fac.substr(0, slash)), den);
          }
        } catch (const std::exception&) {
          throw ParseError("bad rational coefficient '" + fac + "'");
        }
        continue;
      }
      std::size_t caret = fac.find('^');
      std::string var = caret == std::string::npos ? fac : fac.substr(0, caret);
      std::int64_t exp = 1;
      if (caret != std::string::npos) {
        try {
          exp = std::stoll(fac.substr(caret + 1));
        } catch (const std::exception&) {
          throw ParseError("bad exponent in '" + fac + "'");
        }
      }
      if (var == names[0])
        a += exp;
      else if (var == names[1])
        b += exp;
      else
        throw ParseError("unknown variable '" + var + "'");
    }
    out.push_back({a, b, coeff});
  }
  return Laurent::from_terms(std::move(out));
}

}  // namespace detail

/// Parses the canonical "num / den" text form (round-trip stable).
inline QScalar parse_qscalar(const std::string& text,
                             const std::array<std::string, 2>& names = {"q", "z"}) {
  std::size_t sep = text.find(" / ");
  if (sep == std::string::npos) return QScalar::from_laurent(detail::parse_laurent_text(text, names));
  Laurent num = detail::parse_laurent_text(text.substr(0, sep), names);
  Laurent den = detail::parse_laurent_text(text.substr(sep + 3), names);
  return QScalar(std::move(num), std::move(den));
}

}  // namespace qorbit::ring

namespace qorbit {
using namespace ring;
}
