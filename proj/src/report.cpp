#include "nrgit/report.hpp"

#include <random>
#include <sstream>

#include "nrgit/blowup.hpp"
#include "nrgit/free_algebra.hpp"
#include "nrgit/quotient.hpp"

namespace nrgit {

namespace {

Report polys(const std::vector<Polynomial>& ps) {
  Report out = Report::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

Report poly_matrix(const std::vector<std::vector<Polynomial>>& m) {
  Report out = Report::array();
  for (const auto& row : m) out.push_back(polys(row));
  return out;
}

Report point(const PointEval& x) {
  Report out = Report::array();
  for (const auto& c : x) out.push_back(to_string(c));
  return out;
}

Report lie_elements(const GradedLieAlgebra& lie, const std::vector<LieElement>& xs) {
  Report out = Report::array();
  for (const auto& x : xs) out.push_back(lie.format(x));
  return out;
}

Report ring_json(const PresentedAlgebra& A) {
  Report vars = Report::array();
  const auto& R = *A.ring();
  for (size_t g = 0; g < R.nvars(); ++g) vars.push_back({{"name", R.name(g)}, {"weight", R.weight(g)}});
  return {{"variables", vars}, {"relations", polys(A.relations().groebner_basis())}};
}

Report lie_json(const GradedLieAlgebra& lie) {
  Report levels = Report::array();
  for (size_t i = 0; i < lie.nlevels(); ++i) {
    Report names = Report::array();
    for (size_t j : lie.level_basis(i)) names.push_back(lie.name(j));
    levels.push_back({{"level", i + 1}, {"weight", lie.level_weight(i)}, {"basis", names}});
  }
  Report brackets = Report::array();
  for (size_t a = 0; a < lie.dim(); ++a)
    for (size_t b = a + 1; b < lie.dim(); ++b)
      if (lie.bracket(a, b) != lie.zero())
        brackets.push_back("[" + lie.name(a) + ", " + lie.name(b) + "] = " + lie.format(lie.bracket(a, b)));
  return {{"levels", levels}, {"brackets", brackets}};
}

Report action_json(const DerivationAction& act) {
  Report out = Report::array();
  for (size_t j = 0; j < act.lie().dim(); ++j)
    for (size_t g = 0; g < act.ring()->nvars(); ++g)
      if (!act.image(j, g).is_zero())
        out.push_back(act.lie().name(j) + "." + act.ring()->name(g) + " = " + act.image(j, g).to_string());
  return out;
}

Report cdrs_json(const CdrsReport& c) {
  Report levels = Report::array();
  for (const auto& l : c.levels)
    levels.push_back({{"level", l.level},
                      {"rank", l.target_rank},
                      {"k", l.k},
                      {"fit_k_minus_1_zero", l.lower_zero},
                      {"fit_k_unit", l.unit},
                      {"holds", l.holds()},
                      {"fit_k", polys(l.fit_k)}});
  return {{"holds", c.holds}, {"empty_chart", c.empty_chart}, {"levels", levels}};
}

Report quotient_chain_json(const QuotientChain& chain) {
  Report stages = Report::array();
  for (const auto& st : chain.stages) {
    const auto& lie = st.input.lie();
    Report inclusion = Report::array();
    const auto& IR = *st.invariants.ring();
    for (size_t g = 0; g < IR.nvars(); ++g) inclusion.push_back(IR.name(g) + " = " + st.inclusion[g].to_string());
    Report recon = Report::array();
    const auto& R = *st.input.ring();
    for (size_t g = 0; g < R.nvars(); ++g) recon.push_back(R.name(g) + " = " + st.reconstruction[g].to_string());
    stages.push_back({{"level", st.slices.level},
                      {"degree_bound", st.slices.degree_bound},
                      {"slice_directions", lie_elements(lie, st.slices.uprime)},
                      {"complement", lie_elements(lie, st.slices.complement)},
                      {"slices", polys(st.slices.f)},
                      {"invariants", ring_json(st.invariants)},
                      {"inclusion", inclusion},
                      {"reconstruction", recon}});
  }
  auto v = verify_quotient(chain);
  return {{"stages", stages},
          {"fibre_dimension", chain.fibre_dimension()},
          {"quotient", ring_json(chain.result())},
          {"verification", {{"ok", v.ok}, {"checks", v.checks}, {"failures", v.failures}}}};
}

WuuOptions wuu_options(const ScenarioOptions& o) { return {o.reduced, static_cast<int>(o.sample_count), o.seed}; }

}  // namespace

Report cmd_analyze(const Scenario& s) {
  DerivationAction act = s.action();
  const auto& A = act.algebra();
  Report r;
  r["command"] = "analyze";
  r["ring"] = ring_json(A);
  r["lie"] = lie_json(act.lie());
  r["action"] = action_json(act);
  auto violations = act.validate();
  Report vj = Report::array();
  for (const auto& v : violations) vj.push_back(v.kind + ": " + v.witness);
  r["validation"] = {{"ok", violations.empty()}, {"violations", vj}};

  Report levels = Report::array();
  std::vector<int> k;
  if (!A.is_zero_ring()) {
    for (const auto& lf : level_fittings(act)) {
      auto m = infinitesimal_matrix(act, lf.level);
      Report chain = Report::array();
      for (int kk = 0; kk <= static_cast<int>(lf.rank); ++kk)
        chain.push_back({{"k", kk},
                         {"zero", lf.chain.is_zero(kk)},
                         {"unit", lf.chain.is_unit(kk)},
                         {"generators", polys(lf.chain.generators(kk))}});
      levels.push_back({{"level", lf.level},
                        {"weight", act.lie().level_weight(lf.level - 1)},
                        {"infinitesimal_matrix", poly_matrix(m.entries)},
                        {"relative_rank", lf.rank},
                        {"k", lf.k},
                        {"fitting_chain", chain}});
      k.push_back(lf.k);
    }
  }
  r["levels"] = levels;
  r["k"] = k;

  auto ss = check_ss_eq_s(act);
  r["ss_eq_s"] = {{"holds", ss.holds}, {"fit0", polys(ss.fit0)}, {"certificate", polys(ss.certificate)}};
  auto cdrs = check_cdrs(act);
  r["cdrs"] = cdrs_json(cdrs);

  Report wj;
  if (A.is_zero_ring()) {
    wj = {{"holds", true}, {"empty_chart", true}};
  } else {
    auto w = check_wuu(act, wuu_options(s.options));
    wj["holds"] = w.holds;
    wj["product"] = polys(w.product);
    wj["nonvanishing"] = w.nonvanishing ? Report(w.nonvanishing->to_string()) : Report(nullptr);
    wj["witness"] = w.witness ? point(*w.witness) : Report(nullptr);
    wj["stabiliser_dims"] = w.stabiliser_dims;
  }
  r["wuu"] = wj;
  if (cdrs.holds) r["next"] = "quotient";
  else if (wj["holds"].get<bool>()) r["next"] = "blowup";
  else r["next"] = "none: WUU fails";
  return r;
}

Report cmd_quotient(const Scenario& s) {
  DerivationAction act = s.action();
  auto chain = staged_quotient(act, {s.options.degree_bound, s.options.seed});
  Report r;
  r["command"] = "quotient";
  r["cdrs"] = cdrs_json(check_cdrs(act));
  Report q = quotient_chain_json(chain);
  for (auto& [key, val] : q.items()) r[key] = val;
  r["ok"] = r["verification"]["ok"];
  return r;
}

Report cmd_blowup(const Scenario& s, bool chain_quotient) {
  DerivationAction act = s.action();
  BlowupOptions opt;
  opt.degree_bound = s.options.degree_bound;
  auto res = blow_up(act, opt);
  const auto& cd = res.centre;
  const auto& lie = cd.action.lie();
  Report r;
  r["command"] = "blowup";

  Report order = Report::array();
  for (size_t j : cd.basis_order) order.push_back(act.lie().name(j));
  Report rows = Report::array();
  for (const auto& lv : cd.rows) {
    Report names = Report::array();
    for (size_t j : lv) names.push_back(lie.name(j));
    rows.push_back(names);
  }
  r["centre"] = {{"k", cd.k},
                 {"basis_order", order},
                 {"fitting", poly_matrix(cd.fitting)},
                 {"product", polys(cd.product)},
                 {"rows", rows},
                 {"f", poly_matrix(cd.f)},
                 {"minors", polys(cd.minors)},
                 {"a", cd.a.to_string()},
                 {"ideal", polys(cd.ideal.groebner_basis())},
                 {"degree_bound", cd.degree_bound}};

  Report blevels = Report::array();
  for (size_t i = 1; i <= cd.nlevels(); ++i)
    blevels.push_back({{"level", i},
                       {"weight", cd.w(i)},
                       {"b", polys(res.b.b[i - 1])},
                       {"scaled", polys(res.b.scaled[i - 1])},
                       {"e_scalar", polys(res.b.e_scalar[i - 1])}});
  r["b"] = {{"levels", blevels},
            {"delta_checks", res.b.delta_checks},
            {"fitting_checks", res.b.fitting_checks},
            {"j_checks", res.b.j_checks}};
  r["beta"] = {{"ok", res.beta.ok}, {"checks", res.beta.checks}, {"failures", res.beta.failures}};

  const auto& ch = res.chart;
  Report gens = Report::array();
  const auto& CR = *ch.action.ring();
  for (size_t m = 0; m < ch.generators.size(); ++m)
    gens.push_back({{"variable", CR.name(ch.t_vars[m])},
                    {"numerator", ch.generators[m].g.to_string()},
                    {"origin", ch.generators[m].origin}});
  r["chart"] = {{"a", ch.a.to_string()},
                {"generators", gens},
                {"ring", ring_json(ch.action.algebra())},
                {"action", action_json(ch.action)},
                {"consistency", chart_consistency(ch)}};

  Report certs = Report::array();
  for (const auto& c : res.report.certificates)
    certs.push_back({{"level", c.level}, {"weight", c.weight}, {"matrix", poly_matrix(c.matrix)}, {"ok", c.ok}});
  r["chart_report"] = {{"holds", res.report.holds},
                       {"cdrs", cdrs_json(res.report.cdrs)},
                       {"certificates", certs},
                       {"failures", res.report.failures}};

  r["ok"] = res.beta.ok && res.report.holds && r["chart"]["consistency"].empty();
  if (chain_quotient && res.report.holds) {
    try {
      auto chain = staged_quotient(ch.action, {s.options.degree_bound, s.options.seed});
      Report q = {{"status", "ok"}};
      Report body = quotient_chain_json(chain);
      for (auto& [key, val] : body.items()) q[key] = val;
      r["chart_quotient"] = q;
    } catch (const Refusal& e) {
      r["chart_quotient"] = {{"status", "refused"}, {"message", e.what()}};
    } catch (const BoundExhausted& e) {
      r["chart_quotient"] = {{"status", "bound exhausted"}, {"message", e.what()}, {"bound", e.bound}};
    }
  }
  return r;
}

Report cmd_verify_identities(const IdentityOptions& opt) {
  const int K = opt.pbw_bound;
  Report r;
  r["command"] = "identities";
  r["pbw_bound"] = K;
  r["letters"] = opt.letters;

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> wd(1, 5);
  Report tuples = Report::array();
  size_t checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> letters;
  for (size_t i = 0; i < opt.letters; ++i) letters.push_back("y" + std::to_string(i + 1));
  for (size_t t = 0; t < opt.weight_tuples; ++t) {
    std::vector<int> w(opt.letters);
    for (auto& x : w) x = wd(rng);
    tuples.push_back(w);
    for (const auto& k : multi_indices_up_to(opt.letters, K)) {
      std::vector<int> kv(k.begin(), k.end());
      auto c = check_weighted_bracket_identity(w, kv);
      ++checks;
      if (!c.holds() && failures.size() < 20)
        failures.push_back("weights " + format_multi(PBW(w.begin(), w.end())) + ", k = " + format_multi(k) + ": " +
                           format_free(c.lhs, letters) + " != " + format_free(c.rhs, letters));
    }
  }
  r["weighted_bracket_identity"] = {
      {"ok", failures.empty()}, {"checks", checks}, {"weight_tuples", tuples}, {"failures", failures}};

  checks = 0;
  failures.clear();
  for (int k = 0; k <= K; ++k) {
    auto c = check_commutator_identity(k);
    ++checks;
    if (!c.holds())
      failures.push_back("k = " + std::to_string(k) + ": " + format_free(c.lhs, {"x", "y"}) +
                         " != " + format_free(c.rhs, {"x", "y"}));
  }
  r["commutator_identity"] = {{"ok", failures.empty()}, {"checks", checks}, {"failures", failures}};

  GradedLieAlgebra heis({{2, {"e1"}}, {1, {"e2", "e3"}}});
  LieElement v = heis.zero();
  v[0] = 1;
  heis.set_bracket(1, 2, v);
  std::vector<std::pair<std::string, GradedLieAlgebra>> groups = {
      {"G_a", GradedLieAlgebra({{1, {"e1"}}})},
      {"G_a^2", GradedLieAlgebra({{1, {"e1", "e2"}}})},
      {"Heisenberg", heis}};
  Report cj = Report::array();
  for (const auto& [name, lie] : groups) {
    auto rep = verify_comult_lemmas(comult_coefficients(lie, K));
    cj.push_back({{"group", name}, {"degree", K}, {"ok", rep.ok}, {"checks", rep.checks}, {"failures", rep.failures}});
  }
  r["comultiplication_lemmas"] = cj;
  bool ok = r["weighted_bracket_identity"]["ok"].get<bool>() && r["commutator_identity"]["ok"].get<bool>();
  for (const auto& c : cj) ok = ok && c["ok"].get<bool>();
  r["ok"] = ok;
  return r;
}

namespace {

std::string scalar(const Report& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

bool is_flat(const Report& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (x.is_structured()) return false;
  return true;
}

bool is_short(const Report& v) { return is_flat(v) && !v.empty() && v.dump().size() < 80; }

std::string inline_array(const Report& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar(v[i]);
  return s + "]";
}

void render(std::ostringstream& out, const Report& v, size_t indent) {
  std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [key, val] : v.items()) {
      if (!val.is_structured()) {
        out << pad << key << ": " << scalar(val) << "\n";
      } else if (val.empty()) {
        out << pad << key << ": " << (val.is_array() ? "[]" : "{}") << "\n";
      } else if (is_short(val)) {
        out << pad << key << ": " << inline_array(val) << "\n";
      } else {
        out << pad << key << ":\n";
        render(out, val, indent + 2);
      }
    }
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (is_short(x)) {
        out << pad << "- " << inline_array(x) << "\n";
      } else if (x.is_structured() && !x.empty()) {
        out << pad << "-\n";
        render(out, x, indent + 2);
      } else {
        out << pad << "- " << (x.is_structured() ? (x.is_array() ? "[]" : "{}") : scalar(x)) << "\n";
      }
    }
  } else {
    out << pad << scalar(v) << "\n";
  }
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  render(out, r, 0);
  return out.str();
}

}  // namespace nrgit
