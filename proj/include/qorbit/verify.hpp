#pragma once

#include "repcore.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace qorbit::repcore {

struct CheckResult {
  std::string relation;
  bool ok = false;
  std::string detail;  // first offending entry when not ok
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckResult> checks;

  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }

  int failed() const {
    int k = 0;
    for (const auto& c : checks)
      if (!c.ok) ++k;
    return k;
  }

  void merge(const VerificationReport& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  }
};

namespace detail {

inline std::string entry_str(const SparseOperator::Entry& e) {
  std::ostringstream os;
  os << "residual at (" << e.r << "," << e.c << "): " << qscalar_str(e.v);
  return os.str();
}

}  // namespace detail

/// Records whether A == B on the columns both operators are trusted on.
inline void check_equal(VerificationReport& rep, const Rep& R, const std::string& relation,
                        const SparseOperator& A, const SparseOperator& B) {
  std::vector<bool> keep = R.trusted_cols(std::max(A.trust, B.trust));
  auto bad = SparseOperator::first_difference(A, B, &keep);
  if (bad)
    rep.checks.push_back({relation, false, detail::entry_str(*bad)});
  else
    rep.checks.push_back({relation, true, {}});
}

inline void check_zero(VerificationReport& rep, const Rep& R, const std::string& relation,
                       const SparseOperator& A) {
  check_equal(rep, R, relation, A, SparseOperator(A.rows(), A.cols()));
}

/// Full check of the Chevalley presentation on a module:
///   diagonal coherence  qh_i = q^{h_i}, qh_i qh_i^{-1} = 1,
///   weight rules        [h_i, e_j] = a_ij e_j, [h_i, f_j] = -a_ij f_j,
///   mixed relation      [e_i, f_j] = delta_ij (q^{h_i} - q^{-h_i})/(q - q^{-1}),
///   Serre relations     x_i^2 x_j - [2] x_i x_j x_i + x_j x_i^2 = 0 (|i-j| = 1),
///   distant commutation [x_i, x_j] = 0 (|i-j| >= 2).
/// On truncated modules every identity is compared on its trusted columns.
inline VerificationReport verify_uq_relations(const Rep& R) {
  VerificationReport rep;
  const int r = R.n - 1;
  auto gen = [](const char* x, int i) { return std::string(x) + std::to_string(i + 1); };

  for (int i = 0; i < r; ++i) {
    std::vector<QScalar> dq(R.dim), dqi(R.dim);
    for (int s = 0; s < R.dim; ++s) {
      dq[s] = R.ctx.power(R.h[i][s]);
      dqi[s] = R.ctx.power(-R.h[i][s]);
    }
    check_equal(rep, R, gen("qh", i) + " = q^{h" + std::to_string(i + 1) + "}", R.qh[i],
                SparseOperator::diagonal(std::move(dq)));
    check_equal(rep, R, gen("qh", i) + " qh" + std::to_string(i + 1) + "^{-1} = 1",
                R.qh[i] * R.qhinv[i], SparseOperator::identity(R.dim));
  }

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      int aij = i == j ? 2 : (std::abs(i - j) == 1 ? -1 : 0);
      bool eok = true, fok = true;
      std::string edetail, fdetail;
      for (const auto& en : R.e[j].entries()) {
        AffineInt d = R.h[i][en.r] - R.h[i][en.c];
        if (d != AffineInt{0, aij}) {
          eok = false;
          edetail = detail::entry_str(en);
          break;
        }
      }
      for (const auto& en : R.f[j].entries()) {
        AffineInt d = R.h[i][en.r] - R.h[i][en.c];
        if (d != AffineInt{0, -aij}) {
          fok = false;
          fdetail = detail::entry_str(en);
          break;
        }
      }
      rep.checks.push_back({"[" + gen("h", i) + ", " + gen("e", j) + "] = " +
                                std::to_string(aij) + " " + gen("e", j),
                            eok, edetail});
      rep.checks.push_back({"[" + gen("h", i) + ", " + gen("f", j) + "] = " +
                                std::to_string(-aij) + " " + gen("f", j),
                            fok, fdetail});
    }

  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      SparseOperator lhs = commutator(R.e[i], R.f[j]);
      std::string rel = "[" + gen("e", i) + ", " + gen("f", j) + "] = ";
      if (i != j) {
        check_zero(rep, R, rel + "0", lhs);
        continue;
      }
      std::vector<QScalar> d(R.dim);
      for (int s = 0; s < R.dim; ++s) d[s] = R.ctx.bracket(R.h[i][s]);
      check_equal(rep, R, rel + "[h" + std::to_string(i + 1) + "]", lhs,
                  SparseOperator::diagonal(std::move(d)));
    }

  QScalar two = R.ctx.integer(2);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      if (std::abs(i - j) == 1) {
        SparseOperator se = R.e[i] * R.e[i] * R.e[j] - (R.e[i] * R.e[j] * R.e[i]).scaled(two) +
                            R.e[j] * R.e[i] * R.e[i];
        SparseOperator sf = R.f[i] * R.f[i] * R.f[j] - (R.f[i] * R.f[j] * R.f[i]).scaled(two) +
                            R.f[j] * R.f[i] * R.f[i];
        std::string ei = gen("e", i), ej = gen("e", j), fi = gen("f", i), fj = gen("f", j);
        check_zero(rep, R,
                   ei + "^2 " + ej + " - [2] " + ei + " " + ej + " " + ei + " + " + ej + " " + ei +
                       "^2 = 0",
                   se);
        check_zero(rep, R,
                   fi + "^2 " + fj + " - [2] " + fi + " " + fj + " " + fi + " + " + fj + " " + fi +
                       "^2 = 0",
                   sf);
      } else if (i < j) {
        check_zero(rep, R, "[" + gen("e", i) + ", " + gen("e", j) + "] = 0",
                   commutator(R.e[i], R.e[j]));
        check_zero(rep, R, "[" + gen("f", i) + ", " + gen("f", j) + "] = 0",
                   commutator(R.f[i], R.f[j]));
      }
    }

  return rep;
}

}  // namespace qorbit::repcore
