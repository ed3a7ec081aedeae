#include <doctest.h>

#include <random>

#include "cubical/cube_site.hpp"
#include "cubical/errors.hpp"

using namespace cubical;

namespace {
const CubeSite& site2() { return *CubeSite::shared(2); }
}  // namespace

TEST_CASE("structural morphisms") {
  const CubeSite& s = site2();
  CubeMor c0 = s.value(s.connection(0));
  REQUIRE(c0.components.size() == 1);
  CHECK(c0.components[0] == dm_meet(DmElem::generator(2, 0), DmElem::generator(2, 1)));
  CHECK(s.value(s.connection(1)).components[0] == dm_join(DmElem::generator(2, 0), DmElem::generator(2, 1)));
  CHECK(s.value(s.identity(2)).components == std::vector<DmElem>{DmElem::generator(2, 0), DmElem::generator(2, 1)});
  CHECK(s.compose(s.involution(), s.involution()) == s.identity(1));
  CHECK(s.value(s.endpoint(0)).components[0].is_bottom());
  CHECK(s.value(s.endpoint(1)).components[0].is_top());
  CHECK(s.value(s.swap()).components == std::vector<DmElem>{DmElem::generator(2, 1), DmElem::generator(2, 0)});
  CHECK(s.value(s.diagonal()).components == std::vector<DmElem>{DmElem::generator(1, 0), DmElem::generator(1, 0)});
}

TEST_CASE("contraction and connection equations") {
  const CubeSite& s = site2();
  for (unsigned k = 0; k < 2; ++k) {
    MorId d = s.endpoint(k), e = s.contraction();
    CHECK(s.compose(e, d) == s.identity(0));
    MorId id1 = s.identity(1);
    MorId outer = s.pair(s.compose(d, s.contraction()), id1);  // delta^k x id : 1 -> 2
    MorId inner = s.pair(id1, s.compose(d, s.contraction()));
    MorId de = s.compose(d, e);
    CHECK(s.compose(s.connection(k), outer) == de);
    CHECK(s.compose(s.connection(k), inner) == de);
    MorId other = s.endpoint(1 - k);
    CHECK(s.compose(s.connection(k), s.pair(s.compose(other, e), id1)) == id1);
    CHECK(s.compose(s.connection(k), s.pair(id1, s.compose(other, e))) == id1);
  }
}

TEST_CASE("hom sizes") {
  const CubeSite& s = site2();
  CHECK(s.hom_size(0, 1) == 2);
  CHECK(s.hom_size(1, 1) == 6);
  CHECK(s.hom_size(2, 1) == 168);
  CHECK(s.hom_size(2, 2) == 168 * 168);
  CHECK(s.hom_enumerate(0, 1).size() == 2);
  CHECK(s.hom_enumerate(1, 1).size() == 6);
}

TEST_CASE("category laws") {
  const CubeSite& s = site2();
  auto all = [&](unsigned m, unsigned n) {
    std::vector<MorId> v;
    for (std::size_t c = 0; c < s.hom_size(m, n); ++c) v.push_back(s.mor(m, n, c));
    return v;
  };
  for (unsigned a = 0; a <= 1; ++a)
    for (unsigned b = 0; b <= 1; ++b)
      for (unsigned c = 0; c <= 1; ++c)
        for (MorId f : all(a, b))
          for (MorId g : all(b, c)) {
            CHECK(s.compose(g, s.identity(b)) == g);
            for (unsigned d = 0; d <= 1; ++d)
              for (MorId h : all(c, d)) CHECK(s.compose(s.compose(h, g), f) == s.compose(h, s.compose(g, f)));
          }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3000; ++i) {
    MorId f = s.mor(2, 2, rng() % s.hom_size(2, 2));
    MorId g = s.mor(2, 2, rng() % s.hom_size(2, 2));
    MorId h = s.mor(2, 1, rng() % s.hom_size(2, 1));
    CHECK(s.compose(s.compose(h, g), f) == s.compose(h, s.compose(g, f)));
    CHECK(s.value(s.compose(g, f)) == compose(s.value(g), s.value(f)));
  }
}

TEST_CASE("generators factor every morphism") {
  const CubeSite& s = site2();
  for (MorId f = 0; f < s.total_morphisms(); f += 37) {
    if (s.is_identity(f)) continue;
    CHECK(s.generator_index(s.first_factor(f)) >= 0);
    CHECK(s.compose(s.first_factor(f), s.rest_factor(f)) == f);
  }
}

TEST_CASE("literals and truncation") {
  const CubeSite& s = site2();
  CubeMor f = parse_mor("mor(2 -> 1; (x1 /\\ !x2))");
  CHECK(f.dom == 2);
  CHECK(parse_mor(f.to_string()) == f);
  CHECK(s.value(s.index_of(f)) == f);
  CHECK_THROWS_AS(parse_mor("mor(2 -> 1; x3)"), Error);
  CHECK_THROWS_AS(s.identity(3), TruncationError);
  CHECK_THROWS_AS(compose(s.value(s.endpoint(0)), s.value(s.endpoint(0))), ContractError);
}
