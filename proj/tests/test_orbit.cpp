#include "qorbit/orbit.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

using namespace qorbit;

namespace {

QScalar qp(int k) { return QScalar::qpow(k); }

void require_all(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    INFO(rep.subject << ": " << c.relation << (c.detail.empty() ? "" : " | " + c.detail));
    CHECK(c.ok);
  }
  REQUIRE(rep.all_ok());
}

OrbitAlgebraConfig formal_cfg(int n, Regime r = Regime::ModGT1, int trunc = 3) {
  OrbitAlgebraConfig cfg;
  cfg.n = n;
  cfg.regime = r;
  cfg.truncation_degree = trunc;
  return cfg;
}

OrbitAlgebraConfig numeric_cfg(int n, const Rat& q, const QScalar& hbar) {
  OrbitAlgebraConfig cfg;
  cfg.n = n;
  cfg.q = q;
  cfg.regime = (q > 1 || q < -1) ? Regime::ModGT1 : Regime::ModLT1;
  cfg.hbar = hbar;
  return cfg;
}

// First-order jet (f(1), f'(1)) of a z-free scalar at q = 1, the exact
// Q[eps]/(eps^2) evaluation at q = 1 + eps.
std::pair<Rat, Rat> jet_at_1(const QScalar& f) {
  auto val = [](const Laurent& p) {
    Rat v(0);
    for (const auto& t : p.terms()) v += t.c;
    return v;
  };
  auto der = [](const Laurent& p) {
    Rat v(0);
    for (const auto& t : p.terms()) v += Rat(t.a) * t.c;
    return v;
  };
  const Rat nv = val(f.num()), dv = val(f.den());
  if (dv == 0) throw std::runtime_error("pole at q = 1");
  return {nv / dv, (der(f.num()) * dv - nv * der(f.den())) / (dv * dv)};
}

Intertwiner weight_psi(const ModuleSpec& spec, ScalarContext ctx, const QScalar& alpha0) {
  ScalarContext actx = ctx;
  actx.mu_int = spec.mu;
  return build_intertwiner(spec, ctx, alpha0 / actx.bracket({1, 0}));
}

}  // namespace

TEST_CASE("hbar parameterization", "[orbit]") {
  SECTION("symbolic value at n = 2, mu = 2") {
    // [4]/[2] = q^2 + q^{-2}, so hbar = q^{-2} in the |q| > 1 regime and q^2
    // in the |q| < 1 regime.
    CHECK(mu_to_hbar(2, 2, Regime::ModGT1) == qp(-2));
    CHECK(mu_to_hbar(2, 2, Regime::ModLT1) == qp(2));
  }

  SECTION("numeric members") {
    CHECK(mu_to_hbar(2, 2, Regime::ModGT1, ScalarContext::numeric(2)) == QScalar(Rat(1, 4)));
    CHECK(mu_to_hbar(2, 2, Regime::ModLT1, ScalarContext::numeric(Rat(1, 2))) ==
          QScalar(Rat(1, 4)));

    const WeightBinding wb = hbar_to_mu(numeric_cfg(2, 2, QScalar(Rat(1, 4))));
    REQUIRE(wb.z2_value);
    CHECK(*wb.z2_value == 16);
    REQUIRE(wb.mu);
    CHECK(*wb.mu == 2);
    REQUIRE(wb.z_value);
    CHECK(*wb.z_value == 4);

    const WeightBinding lt = hbar_to_mu(numeric_cfg(2, Rat(1, 2), QScalar(Rat(1, 4))));
    REQUIRE(lt.z2_value);
    CHECK(*lt.z2_value == Rat(1, 16));
    REQUIRE(lt.mu);
    CHECK(*lt.mu == 2);
  }

  SECTION("round trip over integer weights") {
    for (int n = 2; n <= 5; ++n)
      for (const Rat& q : {Rat(2), Rat(3, 2), Rat(1, 2)})
        for (long mu = 1; mu <= 8; ++mu) {
          const Regime r = q > 1 ? Regime::ModGT1 : Regime::ModLT1;
          const QScalar hb = mu_to_hbar(n, mu, r, ScalarContext::numeric(q));
          const WeightBinding wb = hbar_to_mu(numeric_cfg(n, q, hb));
          INFO("n = " << n << ", q = " << rat_str(q) << ", mu = " << mu);
          REQUIRE(wb.mu);
          CHECK(*wb.mu == mu);
          REQUIRE(wb.z_value);
          CHECK(*wb.z_value == rat_pow(q, mu));
        }
  }

  SECTION("symbolic weight fraction inverts the ratio") {
    for (int n = 2; n <= 4; ++n)
      for (const Regime r : {Regime::ModGT1, Regime::ModLT1}) {
        const ScalarContext c = ScalarContext::symbolic();
        const WeightBinding wb = hbar_to_mu(formal_cfg(n, r));
        const QScalar hval = weight_ratio(c, n) - gamma_factor(c, r, n);
        CHECK(substitute_hbar(wb.z_squared, hval) == QScalar::zpow(2));
      }
  }

  SECTION("poles and regime guards") {
    CHECK_THROWS_AS(hbar_to_mu(numeric_cfg(2, 2, QScalar())), DegenerateDenominator);
    OrbitAlgebraConfig zero = formal_cfg(3);
    zero.hbar = QScalar();
    CHECK_THROWS_AS(hbar_to_mu(zero), DegenerateDenominator);
    CHECK_NOTHROW(hbar_to_mu(numeric_cfg(2, Rat(1, 2), QScalar())));
    CHECK_THROWS_AS(mu_to_hbar(3, 0, Regime::ModGT1), DegenerateDenominator);

    OrbitAlgebraConfig bad = numeric_cfg(2, 2, QScalar(1L));
    bad.regime = Regime::ModLT1;
    CHECK_THROWS_AS(validate_config(bad), RegimeViolation);
    bad = numeric_cfg(2, Rat(1, 3), QScalar(1L));
    bad.regime = Regime::ModGT1;
    CHECK_THROWS_AS(validate_config(bad), RegimeViolation);
    bad = formal_cfg(2);
    bad.alpha0 = QScalar();
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
    bad = formal_cfg(2);
    bad.hbar = hbar_var() + QScalar(1L);
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
  }

  SECTION("pole of the formal hbar = 0 member") {
    // In the |q| > 1 regime the hbar = 0 member is the pole of the weight
    // fraction; in the |q| < 1 regime it gives z^2 = 0, again no weight.
    const WeightBinding lt = hbar_to_mu(numeric_cfg(3, Rat(1, 2), QScalar()));
    REQUIRE(lt.z2_value);
    CHECK(*lt.z2_value == 0);
    CHECK_FALSE(lt.mu);
  }

  SECTION("q = 1 + eps jet recovers the classical identification") {
    // [m] = m + O(eps^2) at q = 1 + eps, so hbar = n/mu -+ n eps + O(eps^2):
    // the classical parameter hbar ~ 1/mu to first order, scaled by n.
    for (int n = 2; n <= 4; ++n)
      for (long mu = 1; mu <= 4; ++mu) {
        const auto gt = jet_at_1(mu_to_hbar(n, mu, Regime::ModGT1));
        CHECK(gt.first == Rat(n, mu));
        CHECK(gt.second == Rat(-n));
        const auto lt = jet_at_1(mu_to_hbar(n, mu, Regime::ModLT1));
        CHECK(lt.first == Rat(n, mu));
        CHECK(lt.second == Rat(n));
      }
  }
}

TEST_CASE("z^2 reduction", "[orbit]") {
  const ScalarContext c = ScalarContext::symbolic();

  SECTION("ratio and product of brackets reduce and evaluate") {
    const QScalar ratio = c.bracket({1, 3}) / c.bracket({1, 0});
    const QScalar red = z_square_reduce(ratio);
    CHECK_FALSE(ratio.z_square_expressible() == false);
    // reduced form evaluated at (q, w) agrees with eval_zsq on the original
    CHECK(red.specialize(3, Rat(5)) == ratio.eval_zsq(3, Rat(5)));
    CHECK(red.specialize(Rat(1, 2), Rat(7, 3)) == ratio.eval_zsq(Rat(1, 2), Rat(7, 3)));

    const QScalar prod = c.bracket({1, 0}) * c.bracket({1, 3});
    CHECK(z_square_reduce(prod).specialize(2, Rat(9)) == prod.eval_zsq(2, Rat(9)));
  }

  SECTION("odd content fails loudly") {
    CHECK_THROWS_AS(z_square_reduce(c.bracket({1, 0})), NotZSquareExpressible);
    CHECK_THROWS_AS(z_square_reduce(QScalar::z() + QScalar(1L)), NotZSquareExpressible);
  }

  SECTION("substitute_hbar composes and guards the denominator") {
    const QScalar f = (hbar_var() + QScalar(1L)) / (hbar_var() - QScalar(1L));
    CHECK(substitute_hbar(f, QScalar(3L)) == QScalar(2L));
    CHECK_THROWS_AS(substitute_hbar(f, QScalar(1L)), DenominatorVanishes);
  }
}

TEST_CASE("hbar-form couplings", "[orbit]") {
  SECTION("literal forms at n = 3") {
    const OrbitAlgebraConfig cfg = formal_cfg(3);
    const HbarCouplings hc = hbar_couplings(cfg);
    const QScalar gph = qp(3) + hbar_var();
    CHECK(hc.c1 == qp(1) * (qint(2) * gph - QScalar(1L)) / qint(3));
    CHECK(hc.c2 == qp(1) * (qint(2) - gph) / qint(3));
    CHECK(hc.casimir == qp(3) * qint(2) * gph / qint(3));
    CHECK(hc.s_minus == (qint(2) + QScalar(1L)) * (gph - QScalar(1L)) / qint(3));
  }

  SECTION("dual-route correspondence with the mu forms") {
    for (int n = 2; n <= 4; ++n) require_all(verify_hbar_couplings(n, Regime::ModGT1));
    for (int n = 2; n <= 3; ++n) require_all(verify_hbar_couplings(n, Regime::ModLT1));
    require_all(verify_hbar_couplings(3, Regime::ModGT1, qp(2)));
  }

  SECTION("n = 2 degeneration carries over") {
    const HbarCouplings hc = hbar_couplings(formal_cfg(2));
    CHECK(hc.c2 == -(qp(1) * hc.c1));
  }
}

TEST_CASE("specialized ideal", "[orbit]") {
  SECTION("closure sizes match the mu-form family") {
    const IdealGenerators g2 = specialized_ideal(formal_cfg(2));
    CHECK(g2.hw_count == 3);
    CHECK(g2.generators.size() == 5);
    const IdealGenerators g3 = specialized_ideal(formal_cfg(3));
    CHECK(g3.hw_count == 5);
    CHECK(g3.generators.size() == 37);
    CHECK(g3.descendants_closed);
  }

  SECTION("coupling relations carry the hbar-form scalars") {
    const OrbitAlgebraConfig cfg = formal_cfg(3);
    const IdealGenerators gens = specialized_ideal(cfg, false);
    const HbarCouplings hc = hbar_couplings(cfg);
    const AdjBasis B(3);
    bool seen1 = false, seen0 = false;
    for (const auto& el : gens.generators) {
      if (el.label == "s1_g1n_relation") {
        seen1 = true;
        REQUIRE(el.linear.size() == 1);
        CHECK(el.linear.front().first == B.g(1, 3));
        CHECK(el.linear.front().second == -hc.c1);
      }
      if (el.label == "s0_unit_relation") {
        seen0 = true;
        CHECK(el.constant == -hc.casimir);
        CHECK(el.linear.empty());
      }
    }
    CHECK(seen1);
    CHECK(seen0);
  }

  SECTION("binding the formal hbar at a rational member") {
    const IdealGenerators formal = specialized_ideal(formal_cfg(2), false);
    const IdealGenerators bound = bind_hbar(formal, qp(-2));
    // hbar = q^{-2} is the mu = 2 member at n = 2; its couplings match the
    // mu-form scalars with alpha = alpha0/[2].
    const ScalarContext c2 = ScalarContext::symbolic_weight(2);
    const CouplingScalars cs = coupling_scalars(2, c2, QScalar(1L) / qint(2));
    for (const auto& el : bound.generators) {
      if (el.label == "s1_g1n_relation") CHECK(el.linear.front().second == -cs.c1);
      if (el.label == "s0_unit_relation") CHECK(el.constant == -cs.casimir);
    }
  }

  SECTION("annihilation on the generic Verma module, n = 3") {
    const ScalarContext c = ScalarContext::symbolic();
    const IdealGenerators formal = specialized_ideal(formal_cfg(3));
    const QScalar hval = weight_ratio(c, 3) - gamma_factor(c, Regime::ModGT1, 3);
    const IdealGenerators bound = bind_hbar(formal, hval);
    const Intertwiner psi =
        weight_psi({3, ModuleKind::Verma, std::nullopt, 4}, c, QScalar(1L));
    require_all(verify_ideal_annihilation(bound, psi));
  }

  SECTION("annihilation on numeric members") {
    for (long mu : {1L, 2L}) {
      const Rat q(2);
      const QScalar hb = mu_to_hbar(3, mu, Regime::ModGT1, ScalarContext::numeric(q));
      const OrbitAlgebraConfig cfg = numeric_cfg(3, q, hb);
      const IdealGenerators gens = specialized_ideal(cfg);
      const WeightBinding wb = hbar_to_mu(cfg);
      REQUIRE(wb.mu);
      REQUIRE(*wb.mu == mu);
      const Intertwiner psi = weight_psi({3, ModuleKind::Finite, mu},
                                         ScalarContext::numeric(q, wb.z_value, wb.mu),
                                         QScalar(1L));
      require_all(verify_ideal_annihilation(gens, psi));
    }
  }
}

TEST_CASE("s_minus defect", "[orbit]") {
  SECTION("symbolic weight, n = 3 and n = 2") {
    require_all(s_minus_defect(formal_cfg(3)));
    require_all(s_minus_defect(formal_cfg(2)));
    require_all(s_minus_defect(formal_cfg(2, Regime::ModLT1)));
  }

  SECTION("numeric member n = 2, q = 2, hbar = 1/4") {
    require_all(s_minus_defect(numeric_cfg(2, 2, QScalar(Rat(1, 4)))));
  }

  SECTION("vanishing locus is exactly gamma + hbar = 1") {
    const ScalarContext c = ScalarContext::numeric(2);
    CHECK(couplings_at(3, c, QScalar(1L), QScalar(1L)).s_minus.is_zero());
    CHECK_FALSE(
        couplings_at(3, c, QScalar(1L), gamma_factor(c, Regime::ModGT1, 3)).s_minus.is_zero());
    // symbolically: the defect over (gph - 1) is the constant slope
    const ScalarContext s = ScalarContext::symbolic();
    const QScalar gph = gamma_factor(s, Regime::ModGT1, 4) + hbar_var();
    const QScalar d = couplings_at(4, s, QScalar(1L), gph).s_minus;
    CHECK(d / (gph - QScalar(1L)) == (qint(3) + QScalar(1L)) / qint(4));
  }

  SECTION("hbar binding without an integer weight is rejected") {
    CHECK_THROWS_AS(s_minus_defect(numeric_cfg(2, 2, QScalar(7L))), WeightMismatch);
  }
}

TEST_CASE("graded dimensions", "[orbit]") {
  SECTION("finite modules match the saturating oracle") {
    const std::vector<std::pair<std::pair<int, long>, std::vector<long>>> table = {
        {{2, 1}, {1, 4, 4}},
        {{2, 2}, {1, 4, 9, 9}},
        {{2, 3}, {1, 4, 9, 16, 16}},
        {{3, 1}, {1, 9, 9}},
        {{3, 2}, {1, 9, 36, 36}},
    };
    for (const auto& [nm, expect] : table) {
      const auto [n, mu] = nm;
      const Intertwiner psi = build_intertwiner({n, ModuleKind::Finite, mu},
                                                ScalarContext::symbolic());
      const GradedDims gd = graded_dimensions(psi, static_cast<int>(expect.size()) - 1);
      INFO("n = " << n << ", mu = " << mu);
      CHECK(gd.dims == expect);
      CHECK(gd.oracle == expect);
      CHECK(gd.flat());
      CHECK(gd.dims.front() == 1);
      for (std::size_t k = 1; k < gd.dims.size(); ++k) CHECK(gd.dims[k - 1] <= gd.dims[k]);
    }
  }

  SECTION("generic Verma matches the free oracle, n = 3") {
    const Intertwiner psi = build_intertwiner({3, ModuleKind::Verma, std::nullopt, 6},
                                              ScalarContext::numeric(2));
    const GradedDims gd = graded_dimensions(psi, 3);
    CHECK(gd.dims == std::vector<long>{1, 9, 36, 100});
    CHECK(gd.flat());
  }

  SECTION("powers of Psi(g(1,n))") {
    const Intertwiner verma = build_intertwiner({3, ModuleKind::Verma, std::nullopt, 6},
                                                ScalarContext::numeric(Rat(3, 2)));
    require_all(verify_g1n_powers(verma, 4));

    // finite saturation: on V_{2 w1} the (mu+1)-st power vanishes
    const Intertwiner fin = build_intertwiner({2, ModuleKind::Finite, 2},
                                              ScalarContext::symbolic());
    const VerificationReport rep = verify_g1n_powers(fin, 3);
    CHECK(rep.checks[0].ok);
    CHECK(rep.checks[1].ok);
    CHECK_FALSE(rep.checks[2].ok);
  }

  SECTION("band overflow is rejected") {
    const Intertwiner psi = build_intertwiner({2, ModuleKind::Verma, std::nullopt, 2},
                                              ScalarContext::symbolic());
    CHECK_THROWS_AS(graded_dimensions(psi, 3), TruncationOverflow);
  }
}

TEST_CASE("classical constants", "[orbit]") {
  SECTION("literal values") {
    const ClassicalConstants c32 = classical_constants(3, QScalar(2L), QScalar(1L));
    CHECK(c32.c0 == QScalar(Rat(8, 3)));
    CHECK(c32.c1 == QScalar(Rat(4, 3)));
    CHECK(c32.c0_h == QScalar(Rat(20, 3)));
    const ClassicalConstants c34 = classical_constants(3, QScalar(4L), QScalar(1L));
    CHECK(c34.c0 == QScalar(Rat(32, 3)));
    CHECK(c34.c1 == QScalar(Rat(8, 3)));
    // n = 2 degeneration: c1 carries the factor n - 2
    CHECK(classical_constants(2, QScalar(5L), QScalar(1L)).c1.is_zero());
  }

  SECTION("hbar -> 0 reduction") {
    for (int n = 2; n <= 5; ++n)
      for (long mu = 1; mu <= 6; ++mu) {
        const ClassicalConstants cc = classical_constants(n, QScalar(mu), hbar_var());
        CHECK(substitute_hbar(cc.c0_h, QScalar()) == cc.c0);
        CHECK(substitute_hbar(cc.c1_h, QScalar()) == cc.c1);
      }
  }

  SECTION("coupling pipeline cross-checks") {
    for (int n = 2; n <= 5; ++n)
      for (long mu = 1; mu <= 4; ++mu) require_all(verify_classical_constants(n, mu));
  }
}

TEST_CASE("classical limit", "[orbit]") {
  SECTION("renormalized entries, n = 2 micro oracle") {
    const ModuleSpec vs{2, ModuleKind::Verma, std::nullopt, 2};
    const Rep r1 = build_weight_module(vs, ScalarContext::classical(Rat(101))).rep;
    const Rep r2 = build_weight_module(vs, ScalarContext::classical(Rat(103))).rep;
    const SparseOperator xe = orbit::detail::renormalize_affine(r1.e[0], r2.e[0], 101, 103);
    const SparseOperator xf = orbit::detail::renormalize_affine(r1.f[0], r2.f[0], 101, 103);
    // e carries [m2] = m2 -> m2 hbar; f carries [mu - m2] -> omega - m2 hbar
    REQUIRE(xe.entries().size() == 2);
    CHECK(xe.entries()[0].v == QScalar::monomial(0, 1));
    CHECK(xf.entries()[0].v == QScalar::monomial(1, 0));
    // [x_e, x_f] acts on the highest state as omega hbar = hbar * h-eigenvalue
    const SparseOperator comm = commutator(xe, xf);
    bool found = false;
    for (const auto& e : comm.entries())
      if (e.r == 0 && e.c == 0) {
        found = true;
        CHECK(e.v == QScalar::monomial(1, 1));
      }
    REQUIRE(found);
  }

  SECTION("structure constants over the full basis") {
    require_all(classical_limit_check(2));
    require_all(classical_limit_check(3));
  }
}
