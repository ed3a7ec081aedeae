#include <doctest.h>

#include <fstream>

#include "cubical/errors.hpp"
#include "scene.hpp"

using namespace cubical;
using namespace cubical::cli;

namespace {
Json read(const std::string& file) {
  std::ifstream in(std::string(CUBICAL_SCENES) + "/" + file);
  REQUIRE(in);
  return Json::parse(in);
}
}  // namespace

TEST_CASE("the interval scene") {
  Scene sc = Scene::load(read("interval.json"), {});
  CHECK(sc.dim() == 2);
  CHECK(sc.object("E").total_cells() == 22);
  CHECK(sc.object("D").total_cells() == 6);
  CHECK(validate_fib(sc.fibration("E.fib")).ok());
  CHECK(validate_she(sc.she("E.contraction")).ok());
  CHECK(sc.validate_all().ok());
  CHECK(sc.has_map("E.bang"));
  CHECK_FALSE(sc.has_map("nothing"));
}

TEST_CASE("a table that is not natural") {
  Scene sc = Scene::load(read("broken_naturality.json"), {});
  Report r = sc.validate_all();
  CHECK_FALSE(r.ok());
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->find("naturality fails at generator cell 0:0") != std::string::npos);
}

TEST_CASE("unresolved names and malformed input") {
  CHECK_THROWS_AS(Scene::load(read("missing_reference.json"), {}), ParseError);
  CHECK_THROWS_AS(Scene::load(Json::parse(R"({"dim": 1, "objects": {"X": {"nerve": {}}}})"), {}), ParseError);
  CHECK_THROWS_AS(Scene::load(Json::parse(R"({"objects": {}})"), {}), ParseError);
  SceneOptions tight;
  tight.dim_cap = 1;
  CHECK_THROWS_AS(Scene::load(read("interval.json"), tight), TruncationError);
  SceneOptions few;
  few.budget_cells = 10;
  CHECK_THROWS_AS(Scene::load(read("interval.json"), few), BudgetExceeded);
}

TEST_CASE("explicit tables reload to the same sets and maps") {
  Scene sc = Scene::load(read("interval.json"), {});
  const CubSet& E = sc.object("E");
  Json doc;
  doc["dim"] = 2;
  doc["objects"]["X"] = object_tables(E);
  doc["maps"]["f"] = Json{{"from", "X"}, {"to", "X"}, {"table", map_tables(PshMap::identity(E))}};
  Scene back = Scene::load(doc, {});
  const CubSet& X = back.object("X");
  for (unsigned n = 0; n <= 2; ++n) CHECK(X.size(n) == E.size(n));
  CHECK(object_tables(X) == object_tables(E));
  CHECK(back.map("f").levels() == PshMap::identity(E).levels());
  CHECK(back.validate_all().ok());
}
