#include <doctest.h>

#include "cubical/errors.hpp"
#include "cubical/lifting.hpp"
#include "cubical/sieve.hpp"
#include "support.hpp"

using namespace cubical;
using namespace cubical::testing;

namespace {

struct GenProblem {
  Subobject S;
  PshMap top, bottom;
};

/// The trivial-fibration generating problem behind a node.
GenProblem trivfib_problem(const GeneratorProblems& P, std::uint32_t v) {
  const auto& fam = P.family(P.family_of(v));
  const SitePtr& site = P.map().dom().site();
  CubSet yn = yoneda(site, fam.n);
  GenProblem g{subobjects_of_representable(site, fam.n)[fam.sieve].as_subobject(yn), {}, {}};
  auto vals = P.values(v);
  std::vector<std::vector<Cell>> lv(site->max_dim() + 1);
  for (unsigned l = 0; l <= site->max_dim(); ++l)
    for (std::size_t c = 0; c < g.S.obj.size(l); ++c)
      lv[l].push_back(fam.shape->eval(P.map().dom(), vals, site->mor(l, fam.n, g.S.incl(l, static_cast<Cell>(c)))));
  g.top = PshMap(g.S.obj, P.map().dom(), std::move(lv));
  g.bottom = yoneda_map(yn, fam.n, P.map().cod(), P.base(v));
  return g;
}

/// Filler of the fibration node v rebuilt through extend_fib_to_cyl_monos.
Cell fib_filler_via_extension(const UniformFib& u, std::uint32_t v) {
  const GeneratorProblems& P = *u.problems;
  const auto& fam = P.family(P.family_of(v));
  const SitePtr& site = P.map().dom().site();
  const CubeSite& s = *site;
  const unsigned n = fam.n;
  CubSet yn = yoneda(site, n);
  Subobject S = subobjects_of_representable(site, n)[fam.sieve].as_subobject(yn);
  LeibnizTensor t = leibniz_tensor(fam.k, S.incl);
  auto member = [&](unsigned l, Cell c) { return s.pair(s.mor(l, 1, t.cb.interval(l, c)), s.mor(l, n, t.cb.point(l, c))); };
  auto vals = P.values(v);
  std::vector<std::vector<Cell>> top(s.max_dim() + 1), bottom(s.max_dim() + 1);
  for (unsigned l = 0; l <= s.max_dim(); ++l) {
    for (std::size_t c = 0; c < t.po.obj.size(l); ++c)
      top[l].push_back(fam.shape->eval(P.map().dom(), vals, member(l, t.corner(l, static_cast<Cell>(c)))));
    for (std::size_t c = 0; c < t.cb.obj().size(l); ++c)
      bottom[l].push_back(P.map().cod().act(member(l, static_cast<Cell>(c)), P.base(v)));
  }
  PshMap d = extend_fib_to_cyl_monos(u, t, PshMap(t.po.obj, P.map().dom(), std::move(top)),
                                     PshMap(t.cb.obj(), P.map().cod(), std::move(bottom)));
  return d(n + 1, t.cb.pack(n + 1, s.algebra(n + 1).generator(0), static_cast<Cell>(s.code(s.degeneracy(n, 0)))));
}

}  // namespace

TEST_CASE("brute force filling") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  SearchBudget b;
  PshMap v0 = nerve_map(nv.pt, nv.edge, {0});
  PshMap bang = to_terminal(nv.edge.obj, one);
  LiftingProblem through_iso{PshMap::identity(nv.pt.obj), bang, v0, to_terminal(nv.pt.obj, one)};
  CHECK(*brute_force_fill(through_iso, b) == v0);
  PshMap e = nerve_map(nv.d2, nv.edge, {0, 1});
  LiftingProblem into_id{e, PshMap::identity(nv.edge.obj), e, PshMap::identity(nv.edge.obj)};
  CHECK(*brute_force_fill(into_id, b) == PshMap::identity(nv.edge.obj));

  // The two ends of the interval cannot be joined in a discrete fiber.
  CubSet y1 = yoneda(s, 1);
  Subobject bd = Sieve::principal(s, s->endpoint(0)).unite(Sieve::principal(s, s->endpoint(1))).as_subobject(y1);
  std::vector<std::vector<Cell>> lv(2);
  for (unsigned n = 0; n <= 1; ++n)
    for (std::size_t c = 0; c < bd.obj.size(n); ++c) {
      unsigned end = s->value(s->mor(n, 1, bd.incl(n, static_cast<Cell>(c)))).components[0].is_top();
      lv[n].push_back(nv.d2.find(n, std::vector<unsigned>(1u << n, end)));
    }
  PshMap ends(bd.obj, nv.d2.obj, std::move(lv));
  REQUIRE_FALSE(check_naturality(ends));
  LiftingProblem gap{bd.incl, to_terminal(nv.d2.obj, one), ends, to_terminal(y1, one)};
  CHECK_FALSE(brute_force_fill(gap, b));
  LiftingProblem bridged{bd.incl, bang, compose(e, ends), to_terminal(y1, one)};
  auto f = brute_force_fill(bridged, b);
  REQUIRE(f);
  CHECK(fills(bridged, *f));
}

TEST_CASE("validation of structures") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  CHECK(validate_fib(canonical_fib_on_iso(PshMap::identity(nv.edge.obj))).ok());
  SearchBudget b;
  auto syn = synth_fib(to_terminal(nv.edge.obj, terminal(s)), b);
  REQUIRE(syn.structure);
  UniformFib u = *syn.structure;
  CHECK(validate_fib(u).ok());

  const GeneratorProblems& P = *u.problems;
  std::uint32_t node = 0;
  while (node < P.size() && P.candidates(node).size() < 2) ++node;
  REQUIRE(node < P.size());
  UniformFib bad = u;
  for (Cell c : P.candidates(node))
    if (c != u.fill[node]) {
      bad.fill[node] = c;
      break;
    }
  Report r = validate_fib(bad);
  CHECK_FALSE(r.ok());
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->find("k=") != std::string::npos);
}

TEST_CASE("synthesis examples") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  SearchBudget b;
  CHECK(synth_trivfib(PshMap::identity(nv.edge.obj), b).structure);
  CHECK(synth_fib(PshMap::identity(nv.edge.obj), b).structure);

  Product xf = product(nv.edge.obj, nv.edge.obj);
  auto proj = synth_trivfib(xf.p1, b);
  REQUIRE(proj.structure);
  CHECK(validate_trivfib(*proj.structure).ok());
  SearchBudget b2;
  CHECK(oracle_generator_problems({xf.p1}, StructureKind::trivial_fibration, b2)[0].all_solvable);

  auto discrete = synth_trivfib(to_terminal(nv.d2.obj, one), b);
  CHECK_FALSE(discrete.structure);
  CHECK_FALSE(discrete.unsolvable.empty());
}

TEST_CASE("synthesis agrees with the oracle") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  std::vector<PshMap> maps{to_terminal(nv.edge.obj, one), to_terminal(nv.d3.obj, one), nerve_map(nv.d2, nv.edge, {0, 1}),
                           nerve_map(nv.edge_pt, nv.edge, {0, 1, 1}), nerve_map(nv.edge, nv.d2, {1, 1})};
  for (auto kind : {StructureKind::trivial_fibration, StructureKind::fibration}) {
    SearchBudget ob;
    auto orc = oracle_generator_problems(maps, kind, ob);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      SearchBudget b;
      bool found = kind == StructureKind::fibration ? bool(synth_fib(maps[i], b).structure)
                                                    : bool(synth_trivfib(maps[i], b).structure);
      CHECK(found == orc[i].all_solvable);
    }
  }
}

TEST_CASE("budgets are reported separately from absence") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  SearchBudget tiny(3);
  CHECK_THROWS_AS(synth_fib(to_terminal(nv.edge.obj, terminal(s)), tiny), BudgetExceeded);
}

TEST_CASE("partial map classifier") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  ClassifierK K = classifier_k(s);
  CHECK(K.obj.size(0) == 2);
  CHECK(K.obj.size(1) == 10);

  PartialMapClassifier p11 = partial_map_classifier(PshMap::identity(one));
  CHECK(p11.obj.size(0) == 2);
  PartialMapClassifier p0 = partial_map_classifier(from_initial(initial(s), nv.edge.obj));
  for (unsigned n = 0; n <= 1; ++n) CHECK(p0.obj.size(n) == nv.edge.obj.size(n));

  std::vector<PshMap> maps{PshMap::identity(one), to_terminal(nv.edge.obj, one), to_terminal(nv.d2.obj, one),
                           nerve_map(nv.edge_pt, nv.edge, {0, 1, 1})};
  for (const auto& f : maps) {
    PartialMapClassifier pmc = partial_map_classifier(f);
    CHECK(pmc.square_is_pullback(K));
    CHECK(is_mono(pmc.eta));
    SearchBudget b;
    auto syn = synth_trivfib(f, b);
    if (!syn.structure) continue;
    PartialMapClassifier shared = partial_map_classifier(syn.structure->problems);
    PshMap r = retraction_from_trivfib(shared, *syn.structure);
    auto back = trivfib_from_retraction(shared, r);
    REQUIRE(back);
    CHECK(back->fill == syn.structure->fill);
  }
}

TEST_CASE("retractions reject what validation rejects") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  SearchBudget b;
  auto syn = synth_trivfib(to_terminal(nv.edge.obj, terminal(s)), b);
  REQUIRE(syn.structure);
  UniformTrivFib u = *syn.structure;
  const GeneratorProblems& P = *u.problems;
  std::uint32_t node = 0;
  while (node < P.size() && P.candidates(node).size() < 2) ++node;
  REQUIRE(node < P.size());
  u.fill[node] = P.candidates(node)[0] == u.fill[node] ? P.candidates(node)[1] : P.candidates(node)[0];
  CHECK_FALSE(validate_trivfib(u).ok());
  PartialMapClassifier pmc = partial_map_classifier(u.problems);
  std::string why;
  CHECK_FALSE(trivfib_from_retraction(pmc, retraction_from_trivfib(pmc, u), &why));
  CHECK_FALSE(why.empty());

  UniformTrivFib forced = canonical_trivfib_on_iso(PshMap::identity(nv.edge.obj));
  PartialMapClassifier idp = partial_map_classifier(forced.problems);
  CHECK(trivfib_from_retraction(idp, retraction_from_trivfib(idp, forced)));
}

TEST_CASE("extension to all monos") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  SearchBudget b;
  auto syn = synth_trivfib(to_terminal(nv.edge.obj, one), b);
  REQUIRE(syn.structure);
  const UniformTrivFib& u = *syn.structure;
  const GeneratorProblems& P = *u.problems;
  for (std::uint32_t v = 0; v < P.size(); v += 3) {
    GenProblem g = trivfib_problem(P, v);
    unsigned n = P.family(P.family_of(v)).n;
    PshMap d = extend_to_all_monos(u, g.S.incl, g.top, g.bottom);
    CHECK(d(n, static_cast<Cell>(s->code(s->identity(n)))) == u.fill[v]);
  }
  std::vector<std::pair<PshMap, PshMap>> cases{
      {from_initial(initial(s), nv.d3.obj), from_initial(initial(s), nv.edge.obj)},
      {nerve_map(nv.d2, nv.edge, {0, 1}), nerve_map(nv.d2, nv.edge, {1, 0})},
      {nerve_map(nv.edge, nv.edge_pt, {0, 1}), nerve_map(nv.edge, nv.edge, {1, 1})}};
  for (const auto& [m, top] : cases) {
    LiftingProblem prob{m, u.map(), top, to_terminal(m.cod(), one)};
    PshMap d = extend_to_all_monos(u, m, top, prob.bottom);
    CHECK(fills(prob, d));
  }
}

TEST_CASE("extension of fibrations to cylinder corners") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  CubSet one = terminal(s);
  SearchBudget b;
  auto syn = synth_fib(to_terminal(nv.edge.obj, one), b);
  REQUIRE(syn.structure);
  const UniformFib& u = *syn.structure;
  for (std::uint32_t v = 0; v < u.problems->size(); v += 11) CHECK(fib_filler_via_extension(u, v) == u.fill[v]);

  for (unsigned k = 0; k < 2; ++k) {
    LeibnizTensor t = leibniz_tensor(k, from_initial(initial(s), nv.pt.obj));
    PshMap top = t.po.mediator(from_initial(t.ca.obj(), nv.edge.obj), nerve_map(nv.pt, nv.edge, {k}));
    PshMap bottom = to_terminal(t.cb.obj(), one);
    PshMap d = extend_fib_to_cyl_monos(u, t, top, bottom);
    CHECK(fills({t.corner, u.map(), top, bottom}, d));
  }
}

TEST_CASE("the sieve object classifies monos") {
  auto s = CubeSite::shared(1);
  SmallNerves nv(s);
  ClassifierK K = classifier_k(s);
  std::vector<PshMap> monos{PshMap::identity(nv.edge.obj), from_initial(initial(s), nv.edge.obj), nerve_map(nv.d2, nv.edge, {0, 1}),
                            nerve_map(nv.pt, nv.edge, {1}), nerve_map(nv.edge, nv.edge_pt, {0, 1})};
  for (const auto& m : monos) {
    CHECK(is_mono(m));
    CHECK(K.reconstructs(m));
    SearchBudget b;
    CHECK(K.count_classifying_maps(m, b) == 1);
    for (const auto& f : {nerve_map(nv.pt, nv.edge, {0}), nerve_map(nv.edge, nv.edge, {1, 0})}) {
      if (!f.cod().same_as(m.cod())) continue;
      CHECK(is_mono(pullback(f, m).p1));
    }
    for (unsigned k = 0; k < 2; ++k) CHECK(is_mono(leibniz_tensor(k, m).corner));
  }
}

TEST_CASE("pulled back structures validate") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  SearchBudget b;
  auto syn = synth_fib(to_terminal(nv.edge.obj, terminal(s)), b);
  REQUIRE(syn.structure);
  Pullback pb = pullback(to_terminal(nv.d2.obj, terminal(s)), syn.structure->map());
  UniformFib q = pullback_fib(*syn.structure, pb);
  CHECK(validate_fib(q).ok());
  CHECK(check_structure_map(q, *syn.structure, pb.p2, to_terminal(nv.d2.obj, terminal(s))).ok());
}
