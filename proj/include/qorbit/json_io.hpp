#pragma once

#include "qorbit/braidedmod.hpp"
#include "qorbit/braiding.hpp"
#include "qorbit/orbit.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <utility>
#include <vector>

/// JSON export of the library objects. All serializers build
/// nlohmann::ordered_json so the byte stream is a pure function of the
/// object: field order is fixed by construction order, entry lists are
/// already sorted by the owning types, and scalars print through
/// qscalar_str. Schema names are versioned; consumers should dispatch on
/// the "schema" field.
namespace qorbit::json_io {

using Json = nlohmann::ordered_json;
using ScalarNames = std::array<std::string, 2>;

inline Json basis_manifest(int dim, const std::vector<std::string>& labels) {
  Json m;
  m["dim"] = dim;
  if (!labels.empty()) m["basis"] = labels;
  return m;
}

inline Json adjoint_manifest(const AdjBasis& B) {
  std::vector<std::string> labels;
  labels.reserve(B.dim());
  for (int a = 0; a < B.dim(); ++a) labels.push_back(B.label(a));
  return basis_manifest(B.dim(), labels);
}

inline Json module_manifest(const WeightModule& m) {
  Json j = basis_manifest(m.rep.dim, m.rep.labels);
  j["module"] = module_str(m.spec);
  return j;
}

inline Json operator_json(const SparseOperator& op, Json domain, Json codomain,
                          const ScalarNames& names = {"q", "z"}) {
  Json j;
  j["schema"] = "sparse-operator/v1";
  j["domain"] = std::move(domain);
  j["codomain"] = std::move(codomain);
  j["trust"] = op.trust;
  Json es = Json::array();
  for (const auto& e : op.entries()) es.push_back({e.r, e.c, qscalar_str(e.v, names)});
  j["entries"] = std::move(es);
  return j;
}

/// Square operator on a single basis.
inline Json operator_json(const SparseOperator& op, const Json& space,
                          const ScalarNames& names = {"q", "z"}) {
  return operator_json(op, space, space, names);
}

inline Json report_json(const VerificationReport& rep) {
  Json j;
  j["schema"] = "verification-report/v1";
  j["subject"] = rep.subject;
  Json checks = Json::array();
  int failed = 0;
  for (const auto& c : rep.checks) {
    Json e;
    e["id"] = c.relation;
    e["status"] = c.ok ? "pass" : "fail";
    if (!c.detail.empty()) e["witness"] = c.detail;
    checks.push_back(std::move(e));
    failed += c.ok ? 0 : 1;
  }
  j["checks"] = std::move(checks);
  j["passed"] = static_cast<int>(rep.checks.size()) - failed;
  j["failed"] = failed;
  return j;
}

inline Json ideal_json(const IdealGenerators& gens,
                       const ScalarNames& names = {"q", "z"}) {
  const AdjBasis B(gens.n);
  const int d = B.dim();
  Json j;
  j["schema"] = "ideal-generators/v1";
  j["n"] = gens.n;
  j["alpha"] = qscalar_str(gens.alpha, names);
  j["hw_count"] = gens.hw_count;
  j["descendants_closed"] = gens.descendants_closed;
  j["adjoint_basis"] = adjoint_manifest(B);
  Json gl = Json::array();
  for (const auto& el : gens.generators) {
    Json g;
    g["label"] = el.label;
    g["weight"] = el.weight;
    if (!el.constant.is_zero()) g["constant"] = qscalar_str(el.constant, names);
    Json lin = Json::array();
    for (const auto& [i, co] : el.linear) lin.push_back({B.label(i), qscalar_str(co, names)});
    g["linear"] = std::move(lin);
    Json quad = Json::array();
    for (const auto& [i, co] : el.quadratic)
      quad.push_back({B.label(i / d), B.label(i % d), qscalar_str(co, names)});
    g["quadratic"] = std::move(quad);
    gl.push_back(std::move(g));
  }
  j["generators"] = std::move(gl);
  return j;
}

inline Json braiding_json(const BraidingOperator& b) {
  Json j;
  j["schema"] = "braiding/v1";
  j["n"] = b.n;
  const Json tensor = basis_manifest(b.tensor.dim, b.tensor.labels);
  j["operator"] = operator_json(b.S, tensor);
  j["root_order"] = b.root_order;
  j["equations"] = b.equations;
  Json cs = Json::array();
  for (const auto& c : b.coefficients) cs.push_back(qscalar_str(c));
  j["commutant_coefficients"] = std::move(cs);
  j["certificate"] = report_json(b.certificate);
  return j;
}

/// The operator family Psi(g) together with the module's own generator
/// matrices, so proportionality claims can be read off the sparsity
/// patterns directly.
inline Json intertwiner_json(const Intertwiner& psi,
                             const ScalarNames& names = {"q", "z"}) {
  const AdjBasis B(psi.module.spec.n);
  const Json mod = module_manifest(psi.module);
  Json j;
  j["schema"] = "intertwiner/v1";
  j["module"] = mod;
  j["alpha"] = qscalar_str(psi.alpha, names);
  Json ops;
  for (int a = 0; a < B.dim(); ++a)
    ops["Psi(" + B.label(a) + ")"] = operator_json(psi.op(a), mod, names);
  j["operators"] = std::move(ops);
  Json rep;
  for (int i = 0; i + 1 < psi.module.spec.n; ++i) {
    rep["e" + std::to_string(i + 1)] = operator_json(psi.module.rep.e[i], mod, names);
    rep["f" + std::to_string(i + 1)] = operator_json(psi.module.rep.f[i], mod, names);
  }
  j["module_action"] = std::move(rep);
  return j;
}

inline Json decomposition_json(const Decomposition& dec) {
  Json j;
  j["schema"] = "decomposition/v1";
  Json comps = Json::array();
  for (const auto& c : dec.components) {
    Json e;
    e["weight"] = c.fund;
    e["multiplicity"] = c.multiplicity;
    e["dim"] = c.dim.str();
    comps.push_back(std::move(e));
  }
  j["components"] = std::move(comps);
  j["dim_sum"] = dec.dim_sum.str();
  j["dims_match"] = dec.dims_match;
  return j;
}

inline Json graded_dims_json(const GradedDims& gd) {
  Json j;
  j["schema"] = "graded-dims/v1";
  j["dims"] = gd.dims;
  j["oracle"] = gd.oracle;
  j["flat"] = gd.flat();
  return j;
}

}  // namespace qorbit::json_io

namespace qorbit {
using namespace json_io;
}
