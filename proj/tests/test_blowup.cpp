#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "nrgit/blowup.hpp"
#include "support.hpp"

using namespace nrgit;
using namespace nrgit::testing;

namespace {

DerivationAction translation_action() {
  RingPtr R = GradedRing::make({"x", "y"}, {0, -1});
  return make_action(R, {}, GradedLieAlgebra({{1, {"xi"}}}), {{"xi.y", "1"}});
}

// Fit_0 = <y> lies in the negative-weight part.
DerivationAction negative_fit_action() {
  RingPtr R = GradedRing::make({"x", "y", "z"}, {0, -1, -2});
  return make_action(R, {}, GradedLieAlgebra({{1, {"xi"}}}), {{"xi.z", "y"}});
}

std::vector<std::string> strs(const std::vector<Polynomial>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

PBW pbw(std::initializer_list<int> e) { return PBW(e); }

// Random weight-w element spanned by standard monomials of degree <= d.
Polynomial random_homogeneous(std::mt19937& rng, const PresentedAlgebra& A, int w, int d) {
  std::uniform_int_distribution<int> c(-3, 3);
  Polynomial p(A.ring());
  for (const auto& e : A.standard_monomials(w, d)) p += Polynomial::monomial(A.ring(), e, c(rng));
  return p;
}

void expect_full_suite(const DerivationAction& act) {
  ASSERT_TRUE(act.validate().empty());
  ASSERT_FALSE(check_cdrs(act).holds);
  ASSERT_TRUE(check_wuu(act).holds);
  auto res = blow_up(act);
  EXPECT_GT(res.b.delta_checks, 0u);
  EXPECT_GT(res.b.j_checks, 0u);
  EXPECT_TRUE(res.beta.ok) << (res.beta.failures.empty() ? "" : res.beta.failures[0]);
  EXPECT_GT(res.beta.checks, 0u);
  EXPECT_TRUE(res.report.holds) << (res.report.failures.empty() ? "" : res.report.failures[0]);
  for (const auto& c : res.report.certificates) EXPECT_TRUE(c.ok);
  auto q = staged_quotient(res.chart.action);
  EXPECT_TRUE(verify_quotient(q).ok);
}

}  // namespace

TEST(Wuu, Examples) {
  auto g = check_wuu(gadd_action());
  EXPECT_TRUE(g.holds);
  EXPECT_EQ(strs(g.product), (std::vector<std::string>{"x"}));
  ASSERT_TRUE(g.witness.has_value());
  EXPECT_EQ(*g.witness, (PointEval{1, 0}));

  auto t = check_wuu(three_var_action());
  EXPECT_TRUE(t.holds);
  EXPECT_EQ(strs(t.product), (std::vector<std::string>{"x^2"}));
  ASSERT_TRUE(t.witness.has_value());
  EXPECT_EQ(*t.witness, (PointEval{1, 0, 0}));
  EXPECT_EQ(t.stabiliser_dims, (std::vector<size_t>{0, 0}));

  auto n = check_wuu(negative_fit_action());
  EXPECT_FALSE(n.holds);
  EXPECT_FALSE(n.witness.has_value());

  auto off = check_wuu(gadd_action(), {false});
  EXPECT_TRUE(off.holds);
  EXPECT_FALSE(off.witness.has_value());
}

TEST(Wuu, WitnessRespectsRelations) {
  // x^2 = 1 on the weight-0 part; the grid's first point x = 1 qualifies.
  RingPtr R = GradedRing::make({"x", "y"}, {0, -1});
  auto act = make_action(R, {"x^2 - 1"}, GradedLieAlgebra({{1, {"xi"}}}), {{"xi.y", "x"}});
  ASSERT_TRUE(act.validate().empty());
  auto w = check_wuu(act);
  ASSERT_TRUE(w.witness.has_value());
  EXPECT_EQ(act.algebra().relations().generators()[0].evaluate(*w.witness), 0);
}

TEST(Centre, GaddFixture) {
  auto cd = centre(gadd_action());
  ASSERT_TRUE(cd.needed);
  EXPECT_EQ(cd.k, (std::vector<int>{0}));
  EXPECT_EQ(strs(cd.f[0]), (std::vector<std::string>{"y"}));
  EXPECT_EQ(cd.a.to_string(), "x");
  const auto& R = cd.action.ring();
  EXPECT_TRUE(cd.ideal.same_ideal(Ideal(R, {P("x", R), P("y", R)})));
}

TEST(Centre, ThreeVarFixture) {
  auto cd = centre(three_var_action());
  EXPECT_EQ(cd.k, (std::vector<int>{0, 0}));
  EXPECT_EQ(strs(cd.f[0]), (std::vector<std::string>{"z"}));
  EXPECT_EQ(strs(cd.f[1]), (std::vector<std::string>{"y"}));
  EXPECT_EQ(strs(cd.minors), (std::vector<std::string>{"x", "x"}));
  EXPECT_EQ(cd.a.to_string(), "x^2");
  const auto& R = cd.action.ring();
  EXPECT_TRUE(cd.ideal.same_ideal(Ideal(R, {P("x^2", R), P("y", R), P("z", R)})));
}

TEST(Centre, ShortCircuitsAndRefuses) {
  auto cd = centre(translation_action());
  EXPECT_FALSE(cd.needed);
  EXPECT_TRUE(cd.ideal.is_unit());
  EXPECT_THROW(blow_up(translation_action()), Refusal);
  EXPECT_THROW(centre(negative_fit_action()), Refusal);
  EXPECT_THROW(centre(gadd_action(), {0}), BoundExhausted);
}

TEST(Centre, ReordersRowsSoTheMinorLeads) {
  // Only e2 moves y, so e2 must lead its level.
  RingPtr R = GradedRing::make({"x", "y", "z"}, {0, -1, -1});
  auto act = make_action(R, {}, GradedLieAlgebra({{1, {"e1", "e2"}}}), {{"e1.z", "x"}, {"e2.y", "x"}, {"e2.z", "x"}});
  ASSERT_TRUE(act.validate().empty());
  auto cd = centre(act);
  EXPECT_EQ(cd.k, (std::vector<int>{0}));
  EXPECT_EQ(cd.action.lie().name(0), "e1");
  EXPECT_EQ(strs(cd.f[0]), (std::vector<std::string>{"y", "z"}));
  EXPECT_EQ(cd.a.to_string(), "-x^2");

  auto cd2 = centre(make_action(GradedRing::make({"x", "y"}, {0, -1}), {}, GradedLieAlgebra({{1, {"e1", "e2"}}}),
                                {{"e2.y", "x"}}));
  EXPECT_EQ(cd2.k, (std::vector<int>{1}));
  EXPECT_EQ(cd2.action.lie().name(0), "e2");
  EXPECT_EQ(cd2.basis_order, (std::vector<size_t>{1, 0}));
  EXPECT_EQ(cd2.rows[0], (std::vector<size_t>{0}));
}

TEST(JMembership, Examples) {
  auto act = three_var_action();
  const auto& R = act.ring();
  Ideal I(R, {P("x^2", R), P("y", R), P("z", R)});
  EXPECT_TRUE(j_membership(act, I, P("x*y", R)).member);
  auto no = j_membership(act, I, P("y", R));
  EXPECT_FALSE(no.member);
  EXPECT_EQ(format_pbw(act.lie(), no.witness), "xi2");
  EXPECT_EQ(no.value.to_string(), "x");
  EXPECT_TRUE(j_membership(act, I, P("x^2", R)).member);
  EXPECT_TRUE(j_membership(act, I, P("0", R)).member);
  // Components are tested separately: x^2 + y fails through y.
  EXPECT_FALSE(j_membership(act, I, P("x^2 + y", R)).member);
}

TEST(JMembership, IsAnIdealInsideI) {
  std::mt19937 rng(5);
  for (auto act : {three_var_action(), w3_action(), heisenberg_action()}) {
    auto cd = centre(act);
    auto be = construct_b(cd);
    std::vector<JGenerator> known;
    auto found = search_j_generators(cd.action, cd.ideal, cd.a, known, 3);
    std::vector<Polynomial> members{cd.a};
    for (const auto& g : found) members.push_back(g.g);
    for (const auto& l : be.scaled)
      for (const auto& g : l) members.push_back(g);
    const auto& A = cd.action.algebra();
    for (const auto& g : members) {
      EXPECT_TRUE(cd.ideal.contains(g)) << g;
      EXPECT_TRUE(j_membership(cd.action, cd.ideal, g).member) << g;
    }
    for (int s = 0; s < 10; ++s) {
      std::uniform_int_distribution<size_t> pick(0, members.size() - 1);
      const auto& g = members[pick(rng)];
      const auto& h = members[pick(rng)];
      Polynomial r = random_poly(rng, A.ring(), 2, 3);
      EXPECT_TRUE(j_membership(cd.action, cd.ideal, g + h).member);
      EXPECT_TRUE(j_membership(cd.action, cd.ideal, r * g).member);
    }
    // Invariant elements of I are in J.
    Polynomial inv = A.reduce(cd.a * P("x + 1", A.ring()));
    EXPECT_TRUE(j_membership(cd.action, cd.ideal, inv).member);
  }
}

TEST(EOperator, Examples) {
  auto cd = centre(three_var_action());
  const auto& lie = cd.action.lie();
  EXPECT_EQ(e_operator(cd, 1, 0, lie.basis_vector(1)).to_string(), "y");
  EXPECT_EQ(e_operator(cd, 1, 0, lie.basis_vector(0)), cd.a_level(1));
  EXPECT_EQ(e_operator(cd, 1, 0, Rational(2)).to_string(), "2*z");
  EXPECT_EQ(e_operator(cd, 2, 0, Rational(1)).to_string(), "y");
  // UEA input: xi2^2 . z = x.
  UEAElement sq{{pbw({0, 2}), Rational(1)}};
  EXPECT_EQ(e_operator(cd, 1, 0, sq).to_string(), "x");

  // Repeated row: E_mu(xi_nu) = delta a.
  RingPtr R = GradedRing::make({"x", "y", "z"}, {0, -1, -1});
  auto act = make_action(R, {}, GradedLieAlgebra({{1, {"e1", "e2"}}}), {{"e1.y", "x"}, {"e2.z", "x"}});
  auto c2 = centre(act);
  for (size_t mu = 0; mu < 2; ++mu)
    for (size_t nu = 0; nu < 2; ++nu)
      EXPECT_EQ(e_operator(c2, 1, mu, c2.action.lie().basis_vector(c2.rows[0][nu])),
                mu == nu ? c2.a_level(1) : c2.action.algebra().zero());
}

TEST(DeterminantalSum, FixtureAndRandom) {
  auto cd = centre(three_var_action());
  const auto& R = cd.action.ring();
  EXPECT_TRUE(verify_determinantal_sum(cd, 2, P("y", R), cd.action.lie().basis_vector(1)));
  EXPECT_TRUE(verify_determinantal_sum(cd, 1, P("y^2", R), cd.action.lie().basis_vector(0)));
  EXPECT_TRUE(verify_determinantal_sum(cd, 2, P("0", R), cd.action.lie().basis_vector(1)));

  std::mt19937 rng(17);
  for (auto act : {heisenberg_action(), w3_action(), random_chain_action(rng, 3, 2)}) {
    auto c = centre(act);
    const auto& lie = c.action.lie();
    for (size_t i = 1; i <= c.nlevels(); ++i)
      for (int s = 0; s < 5; ++s) {
        Polynomial h = random_homogeneous(rng, c.action.algebra(), -c.w(i), 3);
        LieElement x = lie.zero();
        std::uniform_int_distribution<int> d(-2, 2);
        for (size_t j : lie.level_basis(i - 1)) x[j] = d(rng);
        EXPECT_TRUE(verify_determinantal_sum(c, i, h, x)) << "level " << i << " h = " << h;
      }
  }
}

TEST(ConstructB, GaddFixture) {
  auto cd = centre(gadd_action());
  auto be = construct_b(cd);
  EXPECT_EQ(strs(be.b[0]), (std::vector<std::string>{"y"}));
  EXPECT_EQ(cd.action.apply(0, be.b[0][0]), cd.a);
}

TEST(ConstructB, ThreeVarFixture) {
  auto cd = centre(three_var_action());
  auto be = construct_b(cd);
  const auto& R = cd.action.ring();
  EXPECT_EQ(be.b[1][0], P("y", R));
  EXPECT_EQ(be.b[0][0], P("2*x*z - y^2", R));
  EXPECT_EQ(cd.action.apply(0, be.b[0][0]), P("2*x^2", R));
  EXPECT_TRUE(cd.action.apply_pbw(pbw({0, 2}), be.b[0][0]).is_zero());
  EXPECT_EQ(be.scaled[1][0], P("x*y", R));
  EXPECT_EQ(be.delta_checks, 2u);
}

TEST(ConstructB, OneWeightMatchesRowReplacement) {
  // Two rows at one weight: b_mu = w * (determinant with f in row mu).
  RingPtr R = GradedRing::make({"x", "y", "z"}, {0, -1, -1});
  auto act = make_action(R, {}, GradedLieAlgebra({{1, {"e1", "e2"}}}), {{"e1.y", "x"}, {"e1.z", "2*x"}, {"e2.z", "x"}});
  ASSERT_TRUE(act.validate().empty());
  auto cd = centre(act);
  auto be = construct_b(cd);
  ASSERT_EQ(be.b[0].size(), 2u);
  for (size_t mu = 0; mu < 2; ++mu) EXPECT_EQ(be.b[0][mu], e_operator(cd, 1, mu, Rational(1)));
  EXPECT_TRUE(beta_check_all(cd, be).ok);
}

TEST(ConstructB, EmptyWhenEveryLevelIsStabilised) {
  auto cd = centre(make_action(GradedRing::make({"x", "y"}, {0, -1}), {}, GradedLieAlgebra({{1, {"xi"}}}), {}));
  EXPECT_FALSE(cd.needed);
  auto be = construct_b(cd);
  EXPECT_TRUE(be.b.empty());
}

TEST(ConstructB, CorruptedInputIsCaught) {
  auto cd = centre(three_var_action());
  cd.minors[1] = cd.minors[1] * Rational(2);
  EXPECT_THROW(construct_b(cd), VerificationFailure);
}

TEST(Beta, Examples) {
  auto cd = centre(three_var_action());
  auto be = construct_b(cd);
  auto sq = beta_check(cd, be, 1, 0, pbw({0, 2}));
  EXPECT_TRUE(sq.ok);
  EXPECT_TRUE(sq.applied.is_zero());
  EXPECT_TRUE(sq.beta.is_zero());
  auto single = beta_check(cd, be, 1, 0, pbw({1, 0}));
  EXPECT_TRUE(single.ok);
  EXPECT_EQ(single.beta.to_string(), "2*x^2");
  EXPECT_THROW(beta_check(cd, be, 1, 0, pbw({0, 1})), std::invalid_argument);

  auto c3 = centre(w3_action());
  auto b3 = construct_b(c3);
  auto cube = beta_check(c3, b3, 1, 0, pbw({0, 3}));
  EXPECT_TRUE(cube.ok);
  EXPECT_TRUE(cube.applied.is_zero());
  EXPECT_TRUE(beta_check_all(c3, b3).ok);
}

TEST(Beta, HeisenbergExhaustive) {
  auto cd = centre(heisenberg_action());
  auto be = construct_b(cd);
  auto rep = beta_check_all(cd, be);
  EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures[0]);
  // Weight 2 monomials: e1, e2^2, e2 e3, e3^2.
  EXPECT_EQ(rep.checks, 4u + 2u * 2u);
}

TEST(Beta, WrongBIsDetected) {
  auto cd = centre(three_var_action());
  auto be = construct_b(cd);
  be.b[0][0] = be.b[0][0] + P("x*z", cd.action.ring());
  EXPECT_FALSE(beta_check_all(cd, be).ok);
}

TEST(Chart, GaddFixture) {
  auto res = blow_up(gadd_action());
  const auto& C = res.chart.action;
  EXPECT_EQ(C.ring()->names(), (std::vector<std::string>{"x", "y", "t1"}));
  EXPECT_TRUE(C.algebra().relations().same_ideal(Ideal(C.ring(), {P("x*t1 - y", C.ring())})));
  EXPECT_EQ(C.image(0, 2).to_string(), "1");
  EXPECT_TRUE(res.report.holds);
  EXPECT_TRUE(res.report.cdrs.levels[0].unit);
  ASSERT_EQ(res.report.certificates.size(), 1u);
  EXPECT_EQ(res.report.certificates[0].matrix[0][0].to_string(), "1");
}

TEST(Chart, ThreeVarFixture) {
  auto res = blow_up(three_var_action());
  const auto& ch = res.chart;
  std::vector<std::string> gens;
  for (const auto& g : ch.generators) gens.push_back(g.g.to_string());
  EXPECT_EQ(gens, (std::vector<std::string>{"-y^2 + 2*x*z", "x*y"}));
  const auto& C = ch.action;
  // xi1 . ((2xz - y^2)/x^2) = 2 and xi2 . (xy/x^2) = 1.
  EXPECT_EQ(C.image(0, ch.t_vars[0]).to_string(), "2");
  EXPECT_EQ(C.image(1, ch.t_vars[1]).to_string(), "1");
  EXPECT_TRUE(res.report.holds);
  EXPECT_TRUE(chart_consistency(ch).empty());

  auto q = staged_quotient(C);
  ASSERT_EQ(q.stages.size(), 2u);
  EXPECT_EQ(q.stages[1].slices.f[0].to_string(), "t2");
  EXPECT_EQ(q.result().ring()->names(), (std::vector<std::string>{"x"}));
  EXPECT_TRUE(verify_quotient(q).ok);
}

TEST(Chart, TrivialBlowupKeepsTheRing) {
  auto act = translation_action();
  auto ch = affine_chart(act, P("x", act.ring()), {});
  EXPECT_EQ(ch.action.ring()->names(), act.ring()->names());
  EXPECT_TRUE(ch.action.algebra().relations().is_zero());
  auto rep = verify_chart_cdrs(ch);
  auto before = check_cdrs(act);
  EXPECT_TRUE(rep.holds);
  ASSERT_EQ(rep.cdrs.levels.size(), before.levels.size());
  EXPECT_EQ(rep.cdrs.levels[0].k, before.levels[0].k);
  EXPECT_EQ(strs(rep.cdrs.levels[0].fit_k), strs(before.levels[0].fit_k));
}

TEST(Chart, RejectsBadInputs) {
  auto cd = centre(three_var_action());
  auto be = construct_b(cd);
  const auto& R = cd.action.ring();
  ChartOptions opt;
  opt.extra = {P("y", R)};
  EXPECT_THROW(build_chart(cd, be, opt), std::invalid_argument);
  cd.a = P("x", R);
  EXPECT_THROW(build_chart(cd, be), Refusal);
  EXPECT_THROW(affine_chart(three_var_action(), P("y", R), {}), std::invalid_argument);
}

TEST(Chart, ExtraGeneratorsAndSearch) {
  auto cd = centre(three_var_action());
  auto be = construct_b(cd);
  const auto& R = cd.action.ring();
  ChartOptions opt;
  opt.extra = {P("x*z", R)};
  opt.j_degree = 0;
  auto ch = build_chart(cd, be, opt);
  ASSERT_EQ(ch.generators.size(), 3u);
  EXPECT_EQ(ch.generators[2].origin, "extra");
  EXPECT_TRUE(verify_chart_cdrs(ch).holds);
}

TEST(Blowup, FullSuiteOnFixtures) {
  for (auto act : {gadd_action(), three_var_action(), w3_action(), heisenberg_action()}) expect_full_suite(act);
}

TEST(Blowup, RandomTwoLevelScenarios) {
  std::mt19937 rng(2024);
  for (int s = 0; s < 3; ++s) {
    expect_full_suite(random_chain_action(rng, 2 + static_cast<size_t>(s % 2), 2));
    expect_full_suite(random_chain_action(rng, 3, 3));
    expect_full_suite(random_heisenberg_action(rng));
  }
}
