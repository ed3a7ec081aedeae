#include <doctest.h>

#include "cubical/homotopy.hpp"
#include "cubical/sieve.hpp"
#include "support.hpp"

using namespace cubical;
using namespace cubical::testing;

TEST_CASE("homotopies") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  Homotopy h{nerve_map(nv.edge, nv.edge, {0, 0}), PshMap::identity(nv.edge.obj), edge_contraction(nv.edge, 0, 0)};
  CHECK(validate_homotopy(h).ok());
  h.from = PshMap::identity(nv.edge.obj);
  CHECK_FALSE(validate_homotopy(h).ok());
}

TEST_CASE("standard witnesses validate") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  for (unsigned k = 0; k < 2; ++k) {
    for (const CubSet* x : {&nv.pt.obj, &nv.edge.obj, &nv.d2.obj}) {
      CHECK(validate_she(identity_she(k, *x)).ok());
      CHECK(validate_she(she_on_endpoint(k, *x)).ok());
    }
    for (unsigned v = 0; v < 2; ++v) {
      CHECK(validate_she(contract_edge(nv, k, v)).ok());
      CHECK(validate_she(include_vertex(nv, k, v)).ok());
    }
    CHECK(validate_she(she_on_leibniz(k, nerve_map(nv.pt, nv.edge, {1}))).ok());
    CHECK(validate_she(she_on_leibniz(k, nerve_map(nv.d2, nv.edge, {0, 1}))).ok());
    CHECK(validate_she(she_on_leibniz(k, from_initial(initial(s), nv.d2.obj))).ok());
  }
  // The orientation is not interchangeable.
  CHECK_FALSE(validate_she(SheData{1, contract_edge(nv, 0, 0).f, contract_edge(nv, 0, 0).g, contract_edge(nv, 0, 0).phi,
                                   contract_edge(nv, 0, 0).psi})
                  .ok());
}

TEST_CASE("the endpoint of a point") {
  auto s = CubeSite::shared(2);
  CubSet y0 = yoneda(s, 0);
  for (unsigned k = 0; k < 2; ++k) {
    SheData e = she_on_endpoint(k, y0);
    for (unsigned n = 0; n <= 2; ++n)
      for (Cell x : e.phi.level(n)) CHECK(x == 0);
    Cylinder c1 = cylinder(y0), c2 = cylinder(c1.obj());
    Cell x1 = static_cast<Cell>(s->code(s->index_of(parse_mor("mor(2 -> 1; x1)"))));
    Cell x2 = static_cast<Cell>(s->code(s->index_of(parse_mor("mor(2 -> 1; x2)"))));
    Cell generic = c2.pack(2, x1, c1.pack(2, x2, 0));
    const char* expect = k == 0 ? "mor(2 -> 1; (x1 /\\ x2))" : "mor(2 -> 1; (x1 \\/ x2))";
    CHECK(c1.interval(2, e.psi(2, generic)) == s->code(s->index_of(parse_mor(expect))));
  }
}

TEST_CASE("broken witnesses report the failing equation") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  SheData w = contract_edge(nv, 0, 0);
  w.phi = cyl_eps(cylinder(nv.edge.obj));
  Report r = validate_she(w);
  CHECK_FALSE(r.ok());
  REQUIRE(r.first_failure());
  CHECK(*r.first_failure() == "phi o delta^0 differs from g o f");

  SheData u = include_vertex(nv, 1, 1);
  u.psi = edge_contraction(nv.edge, 1, 0);
  r = validate_she(u);
  CHECK(*r.first_failure() == "psi o delta^1 differs from f o g");
}

TEST_CASE("witnesses and retractions correspond") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  for (unsigned k = 0; k < 2; ++k) {
    std::vector<SheData> all{identity_she(k, nv.pt.obj), she_on_endpoint(k, nv.edge.obj), contract_edge(nv, k, 1),
                             include_vertex(nv, k, 0), she_on_leibniz(k, nerve_map(nv.pt, nv.edge, {0}))};
    for (const auto& w : all) {
      RetractData r = she_to_retract(w);
      CHECK(validate_retract(r).ok());
      SheData back = retract_to_she(r);
      CHECK(validate_she(back).ok());
      CHECK(same_she(back, w));
      CHECK(same_retract(she_to_retract(back), r));
    }
  }
}

TEST_CASE("retracts of witnessed maps carry witnesses") {
  auto s = CubeSite::shared(2);
  SmallNerves nv(s);
  PshMap f = PshMap::identity(nv.pt.obj);
  ArrowMap i{PshMap::identity(nv.pt.obj), nerve_map(nv.pt, nv.edge, {0})};
  ArrowMap r{PshMap::identity(nv.pt.obj), to_terminal(nv.edge.obj, nv.pt.obj)};
  for (unsigned k = 0; k < 2; ++k) {
    RetractData on = she_to_retract(include_vertex(nv, k, 0));
    RetractData closed = retract_closure(k, f, on, i, r);
    CHECK(validate_retract(closed).ok());
    CHECK(validate_she(retract_to_she(closed)).ok());
  }
}

TEST_CASE("the boundary of the interval") {
  auto s = CubeSite::shared(1);
  CubSet y1 = yoneda(s, 1);
  Sieve bd = Sieve::principal(s, s->endpoint(0)).unite(Sieve::principal(s, s->endpoint(1)));
  for (const Sieve& S : {bd, Sieve::principal(s, s->endpoint(0)), Sieve(s, 1)}) {
    Subobject so = S.as_subobject(y1);
    for (unsigned k = 0; k < 2; ++k) {
      SheData w = she_on_leibniz(k, so.incl);
      CHECK(validate_she(w).ok());
      CHECK(same_she(retract_to_she(she_to_retract(w)), w));
    }
  }
}
