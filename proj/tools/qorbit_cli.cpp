#include "qorbit/json_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace qorbit;
using json_io::Json;

namespace {

struct RunConfig {
  int n = 3;
  std::optional<long> mu;
  std::optional<std::string> hbar;  // "p/q" or "sym"
  std::string q = "sym";            // "p/q" or "sym"
  std::optional<std::string> regime;
  std::string alpha0 = "1";
  int truncation = 3;
  std::string suite;
  std::string format = "text";
  std::string out;
  std::string config_path;
};

Rat parse_rat(const std::string& text) {
  try {
    Rat r(text);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + text + "' as a rational p/q");
  }
}

bool q_symbolic(const RunConfig& rc) { return rc.q == "sym"; }
bool q_classical(const RunConfig& rc) { return !q_symbolic(rc) && parse_rat(rc.q) == 1; }

/// Scalar context for module construction: symbolic, classical (q = 1), or
/// numeric at the bound rational.
ScalarContext base_ctx(const RunConfig& rc) {
  if (q_symbolic(rc)) return ScalarContext::symbolic();
  const Rat q = parse_rat(rc.q);
  if (q == 1) return ScalarContext::classical();
  return ScalarContext::numeric(q);
}

Regime pick_regime(const RunConfig& rc) {
  if (rc.regime) {
    if (*rc.regime == "gt1") return Regime::ModGT1;
    if (*rc.regime == "lt1") return Regime::ModLT1;
    throw ConfigError("--regime must be gt1 or lt1");
  }
  if (!q_symbolic(rc) && !q_classical(rc)) {
    const Rat q = parse_rat(rc.q);
    return (q > 1 || q < -1) ? Regime::ModGT1 : Regime::ModLT1;
  }
  return Regime::ModGT1;  // formal q: documented default
}

QScalar parse_hbar(const std::string& text) {
  if (text == "sym") return hbar_var();
  return QScalar(parse_rat(text));
}

OrbitAlgebraConfig orbit_cfg(const RunConfig& rc, bool need_member) {
  OrbitAlgebraConfig cfg;
  cfg.n = rc.n;
  cfg.regime = pick_regime(rc);
  cfg.alpha0 = QScalar(parse_rat(rc.alpha0));
  cfg.truncation_degree = rc.truncation;
  if (!q_symbolic(rc)) {
    const Rat q = parse_rat(rc.q);
    if (q == 1) throw ConfigError("the deformed orbit family needs q != 1; use --q sym or a rational != 1");
    cfg.q = q;
  }
  if (need_member && rc.mu && rc.hbar) throw ConfigError("set exactly one of --mu / --hbar");
  if (rc.hbar)
    cfg.hbar = parse_hbar(*rc.hbar);
  else if (rc.mu)
    cfg.hbar = mu_to_hbar(rc.n, *rc.mu, cfg.regime, q_context(cfg));
  else if (need_member)
    throw ConfigError("set exactly one of --mu / --hbar");
  validate_config(cfg);
  return cfg;
}

/// Intertwiner on V_{mu w1} with the orbit normalization alpha0 / [mu].
Intertwiner member_psi(int n, long mu, const ScalarContext& ctx, const QScalar& alpha0) {
  ScalarContext actx = ctx;
  actx.mu_int = mu;
  return build_intertwiner({n, ModuleKind::Finite, mu}, ctx, alpha0 / actx.bracket({1, 0}));
}

// ---------------------------------------------------------------------------
// report assembly and rendering

struct CliReport {
  std::string command;
  Json config = Json::object();
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<VerificationReport> sections;
  std::vector<Json> attachments;  // extra structured payloads (tables)

  int total() const {
    int k = 0;
    for (const auto& s : sections) k += static_cast<int>(s.checks.size());
    return k;
  }
  int failed() const {
    int k = 0;
    for (const auto& s : sections)
      for (const auto& c : s.checks) k += c.ok ? 0 : 1;
    return k;
  }
};

Json config_echo(const RunConfig& rc, bool with_suite) {
  Json j;
  j["n"] = rc.n;
  if (rc.mu) j["mu"] = *rc.mu;
  if (rc.hbar) j["hbar"] = *rc.hbar;
  j["q"] = rc.q;
  if (rc.regime) j["regime"] = *rc.regime;
  j["alpha0"] = rc.alpha0;
  j["truncation"] = rc.truncation;
  if (with_suite && !rc.suite.empty()) j["suite"] = rc.suite;
  return j;
}

Json to_json(const CliReport& rep, long timing_ms) {
  Json j;
  j["schema"] = "cli-report/v1";
  j["command"] = rep.command;
  j["config"] = rep.config;
  if (!rep.notes.empty()) {
    Json notes;
    for (const auto& [k, v] : rep.notes) notes[k] = v;
    j["notes"] = std::move(notes);
  }
  Json secs = Json::array();
  for (const auto& s : rep.sections) secs.push_back(json_io::report_json(s));
  j["sections"] = std::move(secs);
  if (!rep.attachments.empty()) j["attachments"] = rep.attachments;
  j["summary"] = Json{{"checks", rep.total()}, {"failed", rep.failed()}};
  j["timing_ms"] = timing_ms;
  j["nondeterministic_fields"] = Json::array({"timing_ms"});
  return j;
}

std::string to_text(const CliReport& rep, long timing_ms) {
  std::ostringstream os;
  os << "qorbit " << rep.command << "\n";
  os << "config:";
  for (const auto& [k, v] : rep.config.items())
    os << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
  os << "\n";
  for (const auto& [k, v] : rep.notes) os << k << ": " << v << "\n";
  for (const auto& att : rep.attachments) os << att.dump() << "\n";
  for (const auto& s : rep.sections) {
    os << "-- " << s.subject << "\n";
    for (const auto& c : s.checks) {
      os << (c.ok ? "  [PASS] " : "  [FAIL] ") << c.relation;
      if (!c.detail.empty()) os << "  | " << c.detail;
      os << "\n";
    }
  }
  os << "summary: " << rep.total() << " checks, " << rep.failed() << " failed\n";
  os << "timing_ms: " << timing_ms << " (nondeterministic)\n";
  return os.str();
}

void emit(const std::string& text, const RunConfig& rc) {
  if (rc.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(rc.out, std::ios::binary);
  if (!f) throw IOError("cannot open '" + rc.out + "' for writing");
  f << text;
  if (!f.good()) throw IOError("short write to '" + rc.out + "'");
}

// ---------------------------------------------------------------------------
// suites

void suite_uq(const RunConfig& rc, CliReport& rep) {
  const long mu = rc.mu.value_or(1);
  const ScalarContext ctx = base_ctx(rc);
  const ModuleSpec spec{rc.n, ModuleKind::Finite, mu};
  VerificationReport mod = verify_uq_relations(build_weight_module(spec, ctx).rep);
  mod.subject = "defining relations, " + module_str(spec);
  rep.sections.push_back(std::move(mod));
  VerificationReport adj = verify_uq_relations(adjoint_action(rc.n, ctx));
  adj.subject = "defining relations, deformed adjoint, n = " + std::to_string(rc.n);
  rep.sections.push_back(std::move(adj));
}

void suite_adjoint(const RunConfig& rc, CliReport& rep) {
  rep.sections.push_back(verify_hwv_table(rc.n, base_ctx(rc)));
}

void suite_braiding(const RunConfig& rc, CliReport& rep) {
  const BraidingOperator b = construct_braiding(rc.n, base_ctx(rc));
  rep.notes.push_back({"root_order", b.root_order});
  rep.notes.push_back({"equations", std::to_string(b.equations)});
  rep.sections.push_back(b.certificate);
  rep.sections.push_back(verify_multiplicity_block(b));
  rep.sections.push_back(eigen_analysis(b).report);
  if (rc.n <= 3)
    rep.sections.push_back(verify_qybe(b));
  else
    rep.notes.push_back({"qybe", "skipped for n > 3 (desk-scale budget)"});
}

void suite_intertwiner(const RunConfig& rc, CliReport& rep) {
  const long mu = rc.mu.value_or(1);
  const Intertwiner psi =
      member_psi(rc.n, mu, base_ctx(rc), QScalar(parse_rat(rc.alpha0)));
  rep.sections.push_back(verify_braided_relations(psi));
  rep.sections.push_back(verify_casimir(psi));
  rep.sections.push_back(verify_hwv_images(psi));
  if (psi.module.rep.dim <= 6) {
    const UniquenessResult u = verify_uniqueness(psi);
    VerificationReport s;
    s.subject = "uniqueness solve, " + module_str(psi.module.spec);
    s.checks.push_back({"solution space is one-dimensional (" + std::to_string(u.unknowns) +
                            " unknowns, " + std::to_string(u.equations) + " equations)",
                        u.solution_dim == 1, {}});
    s.checks.push_back({"closed form spans the kernel", u.contains_closed_form, {}});
    rep.sections.push_back(std::move(s));
  } else {
    rep.notes.push_back({"uniqueness", "skipped for dim > 6 (desk-scale budget)"});
  }
}

void suite_orbit(const RunConfig& rc, CliReport& rep) {
  RunConfig base = rc;
  if (!base.mu && !base.hbar) base.mu = 2;
  const OrbitAlgebraConfig cfg = orbit_cfg(base, true);

  VerificationReport bind;
  bind.subject = "hbar parameterization, n = " + std::to_string(rc.n);
  if (cfg.q) {
    const WeightBinding wb = hbar_to_mu(cfg);
    if (base.mu) {
      bind.checks.push_back({"hbar(mu) round trip returns mu = " + std::to_string(*base.mu),
                             wb.mu && *wb.mu == *base.mu, {}});
    } else {
      bind.checks.push_back(
          {"hbar binds to an integer weight", wb.mu.has_value(),
           wb.mu ? "mu = " + std::to_string(*wb.mu) : "z^2 = " + rat_str(*wb.z2_value)});
    }
  } else {
    const ScalarContext c = ScalarContext::symbolic();
    const QScalar hval = weight_ratio(c, rc.n) - gamma_factor(c, cfg.regime, rc.n);
    OrbitAlgebraConfig formal = cfg;
    formal.hbar = hbar_var();
    bind.checks.push_back({"z^2(hbar) o hbar(mu) is the identity",
                           substitute_hbar(hbar_to_mu(formal).z_squared, hval) == QScalar::zpow(2),
                           {}});
  }
  rep.sections.push_back(std::move(bind));

  rep.sections.push_back(verify_hbar_couplings(rc.n, cfg.regime, cfg.alpha0));

  OrbitAlgebraConfig defect = cfg;
  if (!cfg.q) defect.hbar = hbar_var();
  rep.sections.push_back(s_minus_defect(defect));

  const long mu = base.mu ? *base.mu : hbar_to_mu(cfg).mu.value();
  const Intertwiner psi = member_psi(rc.n, mu, base_ctx(base), cfg.alpha0);
  const GradedDims gd = graded_dimensions(psi, rc.truncation);
  rep.attachments.push_back(json_io::graded_dims_json(gd));
  rep.sections.push_back(verify_flatness(psi, rc.truncation));
}

void run_verify(const RunConfig& rc, CliReport& rep) {
  if (rc.suite == "uq")
    suite_uq(rc, rep);
  else if (rc.suite == "adjoint")
    suite_adjoint(rc, rep);
  else if (rc.suite == "braiding")
    suite_braiding(rc, rep);
  else if (rc.suite == "intertwiner")
    suite_intertwiner(rc, rep);
  else if (rc.suite == "orbit")
    suite_orbit(rc, rep);
  else
    throw ConfigError("unknown suite '" + rc.suite +
                      "' (expected uq, adjoint, braiding, intertwiner, orbit)");
}

void run_decompose(const RunConfig& rc, CliReport& rep) {
  const Decomposition dec = decompose(tensor_square_action(rc.n, base_ctx(rc)));
  rep.attachments.push_back(json_io::decomposition_json(dec));
  VerificationReport s;
  s.subject = "tensor square of the deformed adjoint, n = " + std::to_string(rc.n);
  s.checks.push_back({"summands: " + std::to_string(dec.components.size()), true, {}});
  s.checks.push_back({"dimension audit: sum mult * dim = " + dec.dim_sum.str(),
                      dec.dims_match, {}});
  rep.sections.push_back(std::move(s));
}

void run_orbit(const RunConfig& rc, CliReport& rep) {
  if (q_classical(rc)) {
    if (!rc.mu) throw ConfigError("the classical pipeline needs --mu");
    const ClassicalConstants cc = classical_constants(rc.n, QScalar(Rat(*rc.mu)), hbar_var());
    rep.notes.push_back({"c0", qscalar_str(cc.c0, {"mu", "hbar"})});
    rep.notes.push_back({"c1", qscalar_str(cc.c1, {"mu", "hbar"})});
    rep.notes.push_back({"c0_deformed", classical_str(cc.c0_h)});
    rep.notes.push_back({"c1_deformed", classical_str(cc.c1_h)});
    rep.sections.push_back(verify_classical_constants(rc.n, *rc.mu));
    rep.sections.push_back(classical_limit_check(rc.n));
    return;
  }

  const OrbitAlgebraConfig cfg = orbit_cfg(rc, true);
  rep.notes.push_back({"s0_constant", hbar_str(hbar_couplings(cfg).casimir)});

  std::optional<long> mu = rc.mu;
  if (!mu) {
    if (!cfg.q) throw ConfigError("--hbar with symbolic q has no weight module; give --mu or bind --q");
    try {
      const WeightBinding wb = hbar_to_mu(cfg);
      if (!wb.mu) {
        VerificationReport s;
        s.subject = "weight binding";
        s.checks.push_back({"hbar binds to an integer weight", false,
                            "z^2 = " + rat_str(*wb.z2_value) + " is not an even power of q"});
        rep.sections.push_back(std::move(s));
        return;
      }
      mu = *wb.mu;
    } catch (const DegenerateDenominator&) {
      rep.notes.push_back(
          {"singular_member",
           "this hbar is the pole of the weight fraction (hbar = q^n - gamma; hbar = 0 in the "
           "gt1 regime): the algebra member exists but admits no weight-module representation, "
           "so the module checks are skipped"});
      VerificationReport s;
      s.subject = "weight binding";
      s.checks.push_back({"sigma(hbar) pole detected and reported", true, {}});
      rep.sections.push_back(std::move(s));
      rep.sections.push_back(s_minus_defect([&] {
        OrbitAlgebraConfig d = cfg;
        d.hbar = hbar_var();
        d.q.reset();
        return d;
      }()));
      return;
    }
  }

  VerificationReport bind;
  bind.subject = "weight binding";
  if (cfg.q) {
    const WeightBinding wb = hbar_to_mu(cfg);
    bind.checks.push_back({"member carries the integer weight mu = " + std::to_string(*mu),
                           wb.mu && *wb.mu == *mu, {}});
  } else {
    bind.checks.push_back({"member declared at mu = " + std::to_string(*mu) + " (formal q)",
                           true, {}});
  }
  rep.sections.push_back(std::move(bind));

  const Intertwiner psi = member_psi(rc.n, *mu, base_ctx(rc), cfg.alpha0);
  rep.sections.push_back(verify_ideal_annihilation(specialized_ideal(cfg), psi));

  const GradedDims gd = graded_dimensions(psi, rc.truncation);
  rep.attachments.push_back(json_io::graded_dims_json(gd));
  {
    std::ostringstream os;
    for (std::size_t k = 0; k < gd.dims.size(); ++k)
      os << (k ? ", " : "") << gd.dims[k] << "/" << gd.oracle[k];
    rep.notes.push_back({"graded_dims (rank/oracle)", os.str()});
  }
  rep.sections.push_back(verify_flatness(psi, rc.truncation));

  OrbitAlgebraConfig defect = cfg;
  if (!cfg.q) defect.hbar = hbar_var();
  rep.sections.push_back(s_minus_defect(defect));
}

void run_export(const RunConfig& rc) {
  if (rc.format != "json")
    throw ConfigError("export emits JSON; use --format json (default for export)");
  Json doc;
  if (rc.suite == "braiding") {
    doc = json_io::braiding_json(construct_braiding(rc.n, base_ctx(rc)));
  } else if (rc.suite == "intertwiner") {
    const long mu = rc.mu.value_or(1);
    doc = json_io::intertwiner_json(
        member_psi(rc.n, mu, base_ctx(rc), QScalar(parse_rat(rc.alpha0))));
  } else if (rc.suite == "orbit") {
    RunConfig base = rc;
    if (!base.mu && !base.hbar) base.mu = 2;
    doc = json_io::ideal_json(specialized_ideal(orbit_cfg(base, true)), {"q", "hbar"});
  } else if (rc.suite == "adjoint") {
    doc = json_io::decomposition_json(decompose(tensor_square_action(rc.n, base_ctx(rc))));
  } else {
    throw ConfigError("unknown export target '" + rc.suite +
                      "' (expected adjoint, braiding, intertwiner, orbit)");
  }
  emit(doc.dump(2) + "\n", rc);
}

// ---------------------------------------------------------------------------
// config file and argument plumbing

void apply_config_file(RunConfig& rc, const CLI::App& cmd) {
  if (rc.config_path.empty()) return;
  std::ifstream f(rc.config_path);
  if (!f) throw ConfigError("cannot read config file '" + rc.config_path + "'");
  auto fresh = [&cmd](const std::string& flag) {
    const CLI::Option* o = cmd.get_option_no_throw(flag);
    return o != nullptr && o->count() == 0;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(rc.config_path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = strip(t.substr(0, eq)), val = strip(t.substr(eq + 1));
    try {
      if (key == "n") {
        if (fresh("--n")) rc.n = std::stoi(val);
      } else if (key == "mu") {
        if (fresh("--mu")) rc.mu = std::stol(val);
      } else if (key == "hbar") {
        if (fresh("--hbar")) rc.hbar = val;
      } else if (key == "q") {
        if (fresh("--q")) rc.q = val;
      } else if (key == "regime") {
        if (fresh("--regime")) rc.regime = val;
      } else if (key == "alpha0") {
        if (fresh("--alpha0")) rc.alpha0 = val;
      } else if (key == "truncation") {
        if (fresh("--truncation")) rc.truncation = std::stoi(val);
      } else if (key == "suite") {
        if (fresh("--suite")) rc.suite = val;
      } else if (key == "format") {
        if (fresh("--format")) rc.format = val;
      } else if (key == "out") {
        if (fresh("--out")) rc.out = val;
      } else {
        throw ConfigError(rc.config_path + ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError(rc.config_path + ":" + std::to_string(lineno) + ": bad value for " + key);
    } catch (const std::out_of_range&) {
      throw ConfigError(rc.config_path + ":" + std::to_string(lineno) + ": bad value for " + key);
    }
  }
}

void add_common(CLI::App* cmd, RunConfig& rc, bool with_suite) {
  cmd->add_option("--n", rc.n, "rank parameter n of sl(n)")->check(CLI::Range(2, 64));
  cmd->add_option("--mu", rc.mu, "integer highest weight mu (weight mu*omega_1)");
  cmd->add_option("--hbar", rc.hbar, "deformation parameter, rational p/q or sym");
  cmd->add_option("--q", rc.q, "q binding, rational p/q or sym");
  cmd->add_option("--regime", rc.regime, "modulus regime of q")
      ->check(CLI::IsMember({"gt1", "lt1"}));
  cmd->add_option("--alpha0", rc.alpha0, "orbit normalization alpha0, rational p/q");
  cmd->add_option("--truncation", rc.truncation, "degree / band bound")
      ->check(CLI::Range(0, 64));
  if (with_suite) cmd->add_option("--suite", rc.suite, "suite / export target");
  cmd->add_option("--format", rc.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", rc.out, "write the report to this path");
  cmd->add_option("--config", rc.config_path, "key=value config file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checks and exports for q-deformed orbit algebras"};
  app.require_subcommand(1);
  RunConfig rc;

  CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
  CLI::App* c_decompose = app.add_subcommand("decompose", "isotypic decomposition of the adjoint tensor square");
  CLI::App* c_braiding = app.add_subcommand("braiding", "construct and certify the braiding operator");
  CLI::App* c_orbit = app.add_subcommand("orbit", "audit one member of the two-parameter family");
  CLI::App* c_export = app.add_subcommand("export", "write library objects as JSON");
  for (CLI::App* c : {c_verify, c_decompose, c_braiding, c_orbit, c_export})
    add_common(c, rc, c == c_verify || c == c_export);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    CLI::App* active = app.get_subcommands().front();
    apply_config_file(rc, *active);

    if (active == c_export) {
      run_export(rc);
      return 0;
    }

    CliReport rep;
    rep.command = active->get_name();
    rep.config = config_echo(rc, active == c_verify);
    if (active == c_verify)
      run_verify(rc, rep);
    else if (active == c_decompose)
      run_decompose(rc, rep);
    else if (active == c_braiding)
      suite_braiding(rc, rep);
    else
      run_orbit(rc, rep);

    const long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    emit(rc.format == "json" ? to_json(rep, ms).dump(2) + "\n" : to_text(rep, ms), rc);
    return rep.failed() == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  } catch (const QOrbitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
