#include <doctest.h>

#include "coarse/separation.hpp"
#include "support/oracles.hpp"

using namespace coarse;

namespace {

// Separation pipelines need every window step to admit a new retained witness
// point, which the doubling ladder 16..256 cannot do past k=5; these sizes can.
Ladder long_halfline() { return make_ladder({SpaceKind::Halfline}, {16, 40, 96, 224, 512}); }
Ladder spec_halfline() { return make_ladder({SpaceKind::Halfline}, {16, 32, 64, 128, 256}); }
Ladder long_line() { return make_ladder({SpaceKind::Line}, {20, 60, 130, 260, 520}); }

FamilyRule dsl_rule(const std::string& text) {
  FamilyRule r;
  r.kind = CatalogKind::Dsl;
  r.text = text;
  r.params.expr = parse_cross_expr(text);
  return r;
}

FamilyRule lambda_rule(Dist lambda) {
  FamilyRule r;
  r.kind = CatalogKind::Lambda;
  r.params.lambda = lambda;
  return r;
}

MetricFamily b_line(const Ladder& ladder) { return make_family(ladder, lambda_rule(1)); }
MetricFamily c_wedge(const Ladder& ladder) {
  return make_family(ladder, dsl_rule("abs(x0-y0)+min(x0,y0)+1"));
}
MetricFamily c_wedge_line(const Ladder& ladder) {
  return make_family(ladder, dsl_rule("max(abs(x0),abs(y0))+1"));
}

}  // namespace

TEST_CASE("witness extraction on the halfline: unbounded diagonal pairs") {
  const auto ladder = spec_halfline();
  const auto w = extract_witness(b_line(ladder), c_wedge(ladder));
  CHECK(w.witness.bound_c == 2);
  CHECK(w.x_unbounded);
  CHECK(w.y_unbounded);
  CHECK(w.contradiction.empty());
  for (const auto& e : w.witness.entries) {
    REQUIRE(e.i == e.j);
  }
  // reach diverges across levels
  for (std::size_t l = 1; l < w.x_reach.size(); ++l) {
    REQUIRE(w.x_reach[l] > w.x_reach[l - 1]);
  }
}

TEST_CASE("no witness when the relation holds") {
  const auto ladder = spec_halfline();
  const auto f = c_wedge(ladder);
  CHECK_THROWS_AS(extract_witness(f, b_line(ladder)), PreconditionError);
  CHECK_THROWS_AS(extract_witness(f, f), PreconditionError);
}

TEST_CASE("single-level ladders propagate inconclusive") {
  const auto ladder = make_ladder({SpaceKind::Halfline}, {32});
  CHECK_THROWS_AS(extract_witness(b_line(ladder), c_wedge(ladder)), InconclusiveError);
}

TEST_CASE("greedy sparsification reproduces the exponential spacing") {
  const auto ladder = spec_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  const auto raw = extract_witness(b, c);
  const auto sparse = sparsify_witness(raw.witness, b, c);
  // 2^k rule retains {0,5,14,31,64,129}; the floor filter drops 0 because
  // c(0,0') = 1 <= C = 2.
  std::vector<int> xs;
  for (const auto& p : sparse.points) xs.push_back(p.x);
  CHECK(xs == std::vector<int>{5, 14, 31, 64, 129});
  CHECK(sparse.bound_c == 2);
  CHECK(sparse.separation_checked);
}

TEST_CASE("the long ladder yields six retained points") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  const auto sparse = sparsify_witness(extract_witness(b, c).witness, b, c);
  std::vector<int> xs;
  for (const auto& p : sparse.points) xs.push_back(p.x);
  CHECK(xs == std::vector<int>{5, 14, 31, 64, 129, 258});
}

TEST_CASE("witnesses that are already well spaced survive unchanged") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  Witness w;
  w.bound_c = 2;
  for (int p : {5, 17, 82, 400}) {
    w.entries.push_back({4, p, p, 1, p + 1});
  }
  const auto sparse = sparsify_witness(w, b, c);
  std::vector<int> xs;
  for (const auto& p : sparse.points) xs.push_back(p.x);
  CHECK(xs == std::vector<int>{5, 17, 82, 400});
}

TEST_CASE("points failing the diagonal floor are dropped") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  Witness w;
  w.bound_c = 2;
  w.entries.push_back({0, 0, 0, 1, 1});  // c(0,0') = 1 <= 2
  for (int p : {5, 17, 82, 400}) {
    w.entries.push_back({4, p, p, 1, p + 1});
  }
  const auto sparse = sparsify_witness(w, b, c);
  for (const auto& p : sparse.points) {
    REQUIRE(p.x != 0);
  }
}

TEST_CASE("too few survivors is a ladder problem, not a crash") {
  const auto ladder = spec_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  Witness w;
  w.bound_c = 2;
  for (int p : {2, 9, 30}) {
    w.entries.push_back({0, p, p, 1, p + 1});
  }
  try {
    sparsify_witness(w, b, c);
    FAIL("expected inconclusive");
  } catch (const InconclusiveError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  CHECK_THROWS_AS(sparsify_witness(Witness{{}, 2}, b, c), PreconditionError);
}

TEST_CASE("separating metric: hand-checked values") {
  const auto base =
      std::make_shared<const FiniteMetric>(generate_space({SpaceKind::Halfline}, 16));
  SparseWitness w;
  w.bound_c = 2;
  w.points = {{1, 1, 0}, {6, 6, 0}, {15, 15, 0}};
  const auto a = build_separating_metric(w, base, 16);
  // a(3,7') = min(2+6+2, 3+1+2, 12+8+2) = 6
  CHECK(a.cross_at(3, 7) == 6);
  // both base terms vanish at a witness pair
  CHECK(a.cross_at(6, 6) == 2);
  CHECK(a.cross_at(1, 1) == 2);
  CHECK(oracles::assembled_is_metric(*base, a.cross));
}

TEST_CASE("a one-point separator is the focused double with lambda = C") {
  const auto base =
      std::make_shared<const FiniteMetric>(generate_space({SpaceKind::Halfline}, 12));
  SparseWitness w;
  w.bound_c = 3;
  w.points = {{4, 4, 0}};
  const auto a = build_separating_metric(w, base, 12);
  CatalogParams params;
  params.basepoint = 4;
  params.lambda = 3;
  const auto focused = make_catalog_double(base, CatalogKind::Focused, params);
  CHECK(a.cross == focused.cross);
}

TEST_CASE("separator families validate at every level") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  const auto sparse = sparsify_witness(extract_witness(b, c).witness, b, c);
  const auto a = build_separating_family(sparse, ladder);
  for (const auto& level : a.levels) {
    REQUIRE(validate_double(*level.base, level.cross).ok);
  }
  CHECK(oracles::assembled_is_metric(*a.top().base, a.top().cross));
}

TEST_CASE("triple-product bounds at penalty 0") {
  const auto ladder = long_halfline();
  const auto bounds = verify_lemma_main(b_line(ladder), c_wedge(ladder));
  CHECK(bounds.bound_c == 2);
  CHECK(bounds.penalty == 0);
  CHECK(bounds.sup_bound == 6);
  CHECK(bounds.sup_diag_aba == 5);
  for (Dist v : bounds.diag_aba) REQUIRE(v == 5);
  CHECK(bounds.diag_aca == std::vector<Dist>{10, 19, 36, 69, 134, 263});
  CHECK(bounds.diag_aba_bounded);
  CHECK(bounds.diag_aca_diverges);
  CHECK(bounds.dominance_num == bounds.dominance_den);  // ACA* >= ABA* everywhere here
  CHECK(bounds.equivalence.combined == VerdictKind::Fails);
  CHECK(bounds.bounds_ok);
  // Fails witness is diagonal at retained points
  const Verdict* failing = bounds.equivalence.forward.kind == VerdictKind::Fails
                               ? &bounds.equivalence.forward
                               : &bounds.equivalence.backward;
  REQUIRE(failing->witness.has_value());
  for (const auto& e : failing->witness->entries) {
    REQUIRE(e.i == e.j);
  }
}

TEST_CASE("triple-product bounds at penalty 1 match the +2 arithmetic") {
  const auto ladder = long_halfline();
  const auto bounds = verify_lemma_main(b_line(ladder), c_wedge(ladder), {}, ComposeOptions{1});
  CHECK(bounds.penalty == 1);
  CHECK(bounds.sup_bound == 8);
  CHECK(bounds.sup_diag_aba == 7);
  CHECK(bounds.diag_aca == std::vector<Dist>{12, 21, 38, 71, 136, 265});
  CHECK(bounds.bounds_ok);
}

TEST_CASE("triple-product diagonals match the chain oracle") {
  const auto ladder = make_ladder({SpaceKind::Halfline}, {12, 24, 48, 96});
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  SparseWitness w;
  w.bound_c = 2;
  w.points = {{1, 1, 0}, {6, 6, 0}, {15, 15, 1}, {40, 40, 2}};
  const auto a = build_separating_family(w, ladder);
  const auto at = family_transpose(a);
  const auto aba = family_compose_chain({&a, &b, &at});
  for (const auto& p : w.points) {
    REQUIRE(aba.top().cross_at(p.x, p.x) ==
            oracles::chain3_at(a.top(), b.top(), at.top(), p.x, p.x, 0));
  }
}

TEST_CASE("the pipeline refuses equal inputs") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  CHECK_THROWS_AS(verify_lemma_main(b, b), PreconditionError);
}

TEST_CASE("mu action on the unit shifts by two quanta") {
  const auto ladder = spec_halfline();
  const auto e1 = b_line(ladder);  // lambda(1)
  const auto mu = mu_action(e1, e1);
  for (int level = 0; level < mu.depth(); ++level) {
    for (std::size_t idx = 0; idx < mu.levels[level].cross.size(); ++idx) {
      REQUIRE(mu.levels[level].cross[idx] == e1.levels[level].cross[idx] + 2);
    }
  }
}

TEST_CASE("mu of a pipeline idempotent is idempotent") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  const auto c = c_wedge(ladder);
  const auto sparse = sparsify_witness(extract_witness(b, c).witness, b, c);
  const auto a = build_separating_family(sparse, ladder);
  const auto at = family_transpose(a);
  const auto e = family_compose(at, a);
  const auto mu = mu_action(c, e);
  const auto report = is_idempotent(mu);
  CHECK(report.verdict == VerdictKind::Holds);
}

TEST_CASE("separation experiment on the halfline") {
  const auto ladder = long_halfline();
  const auto report = fundamentality_experiment(c_wedge(ladder), b_line(ladder));
  REQUIRE_FALSE(report.inconclusive);
  CHECK(report.failing_direction == "controls(T |- S) fails");
  CHECK(report.separation.combined == VerdictKind::Fails);
  CHECK(report.mu_t_diag == std::vector<Dist>{6, 6, 6, 6, 6, 6});
  CHECK(report.mu_s_diag == std::vector<Dist>{16, 34, 68, 134, 264, 522});
  CHECK(report.witness.points.size() == 6);
}

TEST_CASE("separation experiment on the line") {
  const auto ladder = long_line();
  const auto report = fundamentality_experiment(c_wedge_line(ladder), b_line(ladder));
  REQUIRE_FALSE(report.inconclusive);
  CHECK(report.separation.combined == VerdictKind::Fails);
}

TEST_CASE("the doubling ladder is honestly inconclusive") {
  const auto ladder = spec_halfline();
  const auto report = fundamentality_experiment(c_wedge(ladder), b_line(ladder));
  CHECK(report.inconclusive);
  CHECK(report.stage == "separation verdict");
  CHECK(report.ladder_advice.find("512") != std::string::npos);
}

TEST_CASE("equivalent inputs are a precondition error") {
  const auto ladder = long_halfline();
  const auto b = b_line(ladder);
  CHECK_THROWS_AS(fundamentality_experiment(b, b), PreconditionError);
  const auto shifted = family_offset(b, 5);
  CHECK_THROWS_AS(fundamentality_experiment(b, shifted), PreconditionError);
}

TEST_CASE("products with idempotent left factors: ss* is controlled by tt*") {
  const auto ladder = spec_halfline();
  std::vector<MetricFamily> idempotents;
  idempotents.push_back(b_line(ladder));  // lambda(1)
  FamilyRule focused;
  focused.kind = CatalogKind::Focused;
  focused.params.basepoint = 0;
  focused.params.lambda = 1;
  idempotents.push_back(make_family(ladder, focused));
  std::vector<MetricFamily> others;
  others.push_back(c_wedge(ladder));
  others.push_back(make_family(ladder, lambda_rule(4)));
  for (const auto& e : idempotents) {
    for (const auto& g : others) {
      const auto f = family_compose(e, g);
      const auto ff = family_compose(f, family_transpose(f));
      const auto gg = family_compose(g, family_transpose(g));
      const auto verdict = check_controls(ff, gg);
      REQUIRE(verdict.kind == VerdictKind::Holds);
    }
  }
}
