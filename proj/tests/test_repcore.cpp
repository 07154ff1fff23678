#include "qorbit/repcore.hpp"
#include "qorbit/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qorbit;

namespace {

QScalar Q() { return QScalar::q(); }

WeightModule finite(int n, long mu, ScalarContext ctx = ScalarContext::symbolic()) {
  ModuleSpec s;
  s.n = n;
  s.kind = ModuleKind::Finite;
  s.mu = mu;
  return build_weight_module(s, ctx);
}

WeightModule verma(int n, int band, ScalarContext ctx = ScalarContext::symbolic()) {
  ModuleSpec s;
  s.n = n;
  s.kind = ModuleKind::Verma;
  s.truncation = band;
  return build_weight_module(s, ctx);
}

void require_all(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    INFO(c.relation << (c.detail.empty() ? "" : " | " + c.detail));
    CHECK(c.ok);
  }
  REQUIRE(rep.all_ok());
}

long binom(long a, long b) {
  long r = 1;
  for (long k = 1; k <= b; ++k) r = r * (a - b + k) / k;
  return r;
}

}  // namespace

TEST_CASE("basis enumeration") {
  for (int n = 2; n <= 4; ++n)
    for (long mu = 0; mu <= 3; ++mu)
      CHECK(finite(n, mu).rep.dim == binom(mu + n - 1, n - 1));

  WeightModule m = finite(3, 2);
  REQUIRE(m.rep.dim == 6);
  CHECK(m.tails.front() == std::vector<int>{0, 0});
  CHECK(m.tails.back() == std::vector<int>{2, 0});
  CHECK(std::is_sorted(m.tails.begin(), m.tails.end()));
  CHECK(m.rep.labels.front() == "(2,0,0)");
  CHECK(m.rep.eps.front() == std::vector<int>{2, 0, 0});

  WeightModule v = verma(3, 2);
  CHECK(v.rep.dim == 6);
  CHECK(v.rep.truncated());
  CHECK(v.rep.degree == std::vector<int>{0, 1, 2, 1, 2, 2});
  CHECK(v.rep.labels.front() == "(mu,0,0)");
  CHECK(v.rep.eps.empty());
}

TEST_CASE("rank-one matrices match the hand oracle") {
  // sl(2), mu = 2: states (2,0), (1,1), (0,2).
  WeightModule m = finite(2, 2);
  const Rep& R = m.rep;
  CHECK(R.e[0] == SparseOperator::from_entries(
                      3, 3, {{0, 1, QScalar(1L)}, {1, 2, qint(2)}}));
  CHECK(R.f[0] == SparseOperator::from_entries(
                      3, 3, {{1, 0, qint(2)}, {2, 1, QScalar(1L)}}));
  CHECK(R.h[0][0] == AffineInt{0, 2});
  CHECK(R.h[0][1] == AffineInt{0, 0});
  CHECK(R.h[0][2] == AffineInt{0, -2});
  CHECK(R.qh[0] == SparseOperator::diagonal({QScalar::qpow(2), QScalar(1L), QScalar::qpow(-2)}));

  // [e, f] has eigenvalues [2], [0], [-2].
  SparseOperator ef = commutator(R.e[0], R.f[0]);
  CHECK(ef == SparseOperator::diagonal({qint(2), QScalar(0L), qint(-2)}));
}

TEST_CASE("chevalley relations hold on finite modules") {
  for (long mu : {1L, 2L, 3L}) require_all(verify_uq_relations(finite(2, mu).rep));
  require_all(verify_uq_relations(finite(3, 2).rep));
  require_all(verify_uq_relations(finite(4, 1).rep));
}

TEST_CASE("chevalley relations hold on truncated generic modules") {
  require_all(verify_uq_relations(verma(2, 5).rep));
  require_all(verify_uq_relations(verma(3, 4).rep));

  // [e1, f1] on the generic module has eigenvalues [mu - 2k] down the string.
  const Rep& R = verma(2, 4).rep;
  SparseOperator ef = commutator(R.e[0], R.f[0]);
  std::vector<bool> keep = R.trusted_cols(1);
  for (const auto& en : ef.entries()) {
    if (!keep[en.c]) continue;
    REQUIRE(en.r == en.c);
    CHECK(en.v == qint_affine(1, -2 * en.c));
  }
}

TEST_CASE("truncation masks exactly the clipped band") {
  const Rep& R = verma(2, 3).rep;
  SparseOperator ef = commutator(R.e[0], R.f[0]);
  std::vector<QScalar> diag(R.dim);
  for (int s = 0; s < R.dim; ++s) diag[s] = R.ctx.bracket(R.h[0][s]);
  SparseOperator rhs = SparseOperator::diagonal(std::move(diag));
  // The raw commutator is wrong on the boundary column but exact inside the
  // trusted band.
  CHECK(SparseOperator::first_difference(ef, rhs).has_value());
  std::vector<bool> keep = R.trusted_cols(std::max(ef.trust, rhs.trust));
  CHECK(ef.trust == 1);
  CHECK_FALSE(SparseOperator::first_difference(ef, rhs, &keep).has_value());
  CHECK(keep == std::vector<bool>{true, true, true, false});
}

TEST_CASE("numeric context agrees with specialized symbolic entries") {
  WeightModule sym = verma(3, 3);
  WeightModule num = verma(3, 3, ScalarContext::numeric(Rat(2), Rat(5)));
  auto compare = [](const SparseOperator& s, const SparseOperator& n) {
    REQUIRE(s.nnz() == n.nnz());
    for (std::size_t k = 0; k < s.nnz(); ++k) {
      const auto& a = s.entries()[k];
      const auto& b = n.entries()[k];
      CHECK(a.r == b.r);
      CHECK(a.c == b.c);
      CHECK(a.v.specialize(Rat(2), Rat(5)) == b.v.rat_value());
    }
  };
  for (int i = 0; i < 2; ++i) {
    compare(sym.rep.e[i], num.rep.e[i]);
    compare(sym.rep.f[i], num.rep.f[i]);
    compare(sym.rep.qh[i], num.rep.qh[i]);
  }
  require_all(verify_uq_relations(num.rep));
  require_all(verify_uq_relations(verma(2, 4, ScalarContext::numeric(Rat(3, 2))).rep));
}

TEST_CASE("classical mode matches the q = 1 specialization") {
  WeightModule sym = finite(3, 2);
  WeightModule cls = finite(3, 2, ScalarContext::classical());
  for (int i = 0; i < 2; ++i) {
    REQUIRE(sym.rep.e[i].nnz() == cls.rep.e[i].nnz());
    for (std::size_t k = 0; k < sym.rep.e[i].nnz(); ++k)
      CHECK(sym.rep.e[i].entries()[k].v.specialize(Rat(1)) ==
            cls.rep.e[i].entries()[k].v.rat_value());
    CHECK(cls.rep.qh[i] == SparseOperator::identity(6));
  }
  require_all(verify_uq_relations(cls.rep));
  require_all(verify_uq_relations(
      verma(2, 5, ScalarContext::classical(Rat(7, 2))).rep));
}

TEST_CASE("coproduct action") {
  WeightModule m = finite(2, 1);
  Rep t = coproduct_action(m.rep, m.rep);
  REQUIRE(t.dim == 4);

  std::vector<AffineInt> hd = t.h[0];
  CHECK(hd[0] == AffineInt{0, 2});
  CHECK(hd[1] == AffineInt{0, 0});
  CHECK(hd[2] == AffineInt{0, 0});
  CHECK(hd[3] == AffineInt{0, -2});

  CHECK(t.e[0] == SparseOperator::from_entries(4, 4,
                                               {{0, 1, Q().inverse()},
                                                {0, 2, QScalar(1L)},
                                                {1, 3, QScalar(1L)},
                                                {2, 3, Q()}}));
  CHECK(t.f[0] == SparseOperator::from_entries(4, 4,
                                               {{1, 0, QScalar(1L)},
                                                {2, 0, Q()},
                                                {3, 1, Q().inverse()},
                                                {3, 2, QScalar(1L)}}));
  require_all(verify_uq_relations(t));
  require_all(verify_uq_relations(coproduct_action(t, m.rep)));
  CHECK(t.labels[1] == "(1,0)(x)(0,1)");
  CHECK(t.eps[1] == std::vector<int>{1, 1});
}

TEST_CASE("dual action") {
  for (int n : {2, 3}) {
    WeightModule m = finite(n, 2);
    Rep d = dual_action(m.rep);
    require_all(verify_uq_relations(d));
    Rep dd = dual_action(d);
    // The square of the antipode is conjugation: rho**(e) = q^{h} e q^{-h}.
    for (int i = 0; i < n - 1; ++i) {
      CHECK(dd.e[i] == m.rep.qh[i] * m.rep.e[i] * m.rep.qhinv[i]);
      CHECK(dd.f[i] == m.rep.qh[i] * m.rep.f[i] * m.rep.qhinv[i]);
      CHECK(dd.qh[i] == m.rep.qh[i]);
    }
  }
}

TEST_CASE("context guards") {
  CHECK_THROWS_AS(ScalarContext::numeric(Rat(1)), ConfigError);
  CHECK_THROWS_AS(ScalarContext::numeric(Rat(-1)), ConfigError);
  CHECK_THROWS_AS(ScalarContext::numeric(Rat(0)), ConfigError);
  CHECK_THROWS_AS(verma(2, 3, ScalarContext::classical()), ConfigError);

  ModuleSpec bad;
  bad.n = 3;
  bad.kind = ModuleKind::Finite;
  CHECK_THROWS_AS(build_weight_module(bad, ScalarContext::symbolic()), ConfigError);
}
