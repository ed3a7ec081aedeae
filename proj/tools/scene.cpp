#include "scene.hpp"

#include "cubical/cylinder.hpp"
#include "cubical/errors.hpp"
#include "cubical/pushforward.hpp"
#include "cubical/sieve.hpp"

namespace cubical::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& def, const char* key, const std::string& ctx) {
  if (!def.is_object() || !def.contains(key)) bad(ctx + ": missing field '" + key + "'");
  return def.at(key);
}

std::string text(const Json& j, const std::string& ctx) {
  if (!j.is_string()) bad(ctx + ": expected a name");
  return j.get<std::string>();
}

unsigned number(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) bad(ctx + ": expected a non-negative integer");
  return j.get<unsigned>();
}

unsigned orientation(const Json& def, const std::string& ctx) {
  unsigned k = number(field(def, "k", ctx), ctx + ".k");
  if (k > 1) bad(ctx + ": orientation must be 0 or 1");
  return k;
}

/// The single constructor tag of a definition, ignoring "from" and "to".
std::string tag_of(const Json& def, const std::string& ctx) {
  if (!def.is_object()) bad(ctx + ": definition must be an object");
  std::string tag;
  for (auto it = def.begin(); it != def.end(); ++it) {
    if (it.key() == "from" || it.key() == "to") continue;
    if (!tag.empty()) bad(ctx + ": more than one constructor ('" + tag + "', '" + it.key() + "')");
    tag = it.key();
  }
  if (tag.empty()) bad(ctx + ": no constructor given");
  return tag;
}

std::vector<std::vector<Cell>> cell_levels(const Json& j, unsigned dim, const std::string& ctx) {
  if (!j.is_array() || j.size() != dim + 1) bad(ctx + ": expected one array per level 0.." + std::to_string(dim));
  std::vector<std::vector<Cell>> lv(dim + 1);
  for (unsigned n = 0; n <= dim; ++n) {
    if (!j[n].is_array()) bad(ctx + ": level " + std::to_string(n) + " is not an array");
    for (const auto& c : j[n]) lv[n].push_back(number(c, ctx));
  }
  return lv;
}

}  // namespace

Json object_tables(const CubSet& x) {
  const CubeSite& s = *x.site();
  Json sizes = Json::array(), action = Json::object();
  for (unsigned n = 0; n <= s.max_dim(); ++n) sizes.push_back(x.size(n));
  for (MorId g : s.generators()) {
    Json t = Json::array();
    for (std::size_t c = 0; c < x.size(s.cod(g)); ++c) t.push_back(x.act(g, static_cast<Cell>(c)));
    action[s.value(g).to_string()] = std::move(t);
  }
  return Json{{"tables", Json{{"sizes", sizes}, {"action", action}}}};
}

Json map_tables(const PshMap& f) {
  Json lv = Json::array();
  for (const auto& l : f.levels()) lv.push_back(l);
  return lv;
}

Scene Scene::load(const Json& doc, const SceneOptions& opts) {
  Scene sc;
  sc.opts_ = opts;
  sc.source_ = doc;
  if (!doc.is_object()) bad("scene: top level must be an object");
  sc.dim_ = number(field(doc, "dim", "scene"), "scene.dim");
  if (sc.dim_ > opts.dim_cap)
    throw TruncationError("scene dimension " + std::to_string(sc.dim_) + " exceeds the cap " + std::to_string(opts.dim_cap));
  sc.site_ = CubeSite::shared(sc.dim_);
  for (const char* key : {"objects", "maps", "structures"})
    if (doc.contains(key) && !doc.at(key).is_object()) bad(std::string("scene.") + key + " must be an object");
  if (doc.contains("objects"))
    for (auto it = doc.at("objects").begin(); it != doc.at("objects").end(); ++it) sc.load_object(it.key(), it.value());
  if (doc.contains("maps"))
    for (auto it = doc.at("maps").begin(); it != doc.at("maps").end(); ++it) sc.load_map(it.key(), it.value());
  if (doc.contains("structures"))
    for (auto it = doc.at("structures").begin(); it != doc.at("structures").end(); ++it)
      sc.load_structure(it.key(), it.value());
  return sc;
}

const CubSet& Scene::object(const std::string& name) const {
  auto it = objects_.find(name);
  if (it == objects_.end()) bad("unknown object '" + name + "'");
  return it->second;
}

const PshMap& Scene::map(const std::string& name) const {
  auto it = maps_.find(name);
  if (it == maps_.end()) bad("unknown map '" + name + "'");
  return it->second;
}

const UniformFib& Scene::fibration(const std::string& name) const {
  auto it = fibs_.find(name);
  if (it == fibs_.end()) bad("unknown fibration structure '" + name + "'");
  return it->second;
}

const UniformTrivFib& Scene::trivial_fibration(const std::string& name) const {
  auto it = trivfibs_.find(name);
  if (it == trivfibs_.end()) bad("unknown trivial fibration structure '" + name + "'");
  return it->second;
}

const SheData& Scene::she(const std::string& name) const {
  auto it = shes_.find(name);
  if (it == shes_.end()) bad("unknown homotopy equivalence '" + name + "'");
  return it->second;
}

const Nerve& Scene::nerve_of(const std::string& name) const {
  auto it = nerves_.find(name);
  if (it == nerves_.end()) bad("'" + name + "' is not a nerve");
  return it->second;
}

void Scene::add_object(const std::string& name, CubSet x) {
  if (objects_.count(name)) bad("object '" + name + "' defined twice");
  cells_ += x.total_cells();
  if (cells_ > opts_.budget_cells)
    throw BudgetExceeded("scene objects exceed the cell budget (" + std::to_string(opts_.budget_cells) + ")");
  objects_.emplace(name, x.named(name));
}

void Scene::add_map(const std::string& name, PshMap f, bool declared) {
  if (maps_.count(name)) bad("map '" + name + "' defined twice");
  maps_.emplace(name, std::move(f));
  if (declared) declared_[name] = true;
}

void Scene::load_object(const std::string& name, const Json& def) {
  const std::string ctx = "object '" + name + "'";
  const std::string tag = tag_of(def, ctx);
  const Json& arg = def.at(tag);
  if (tag == "terminal") {
    add_object(name, terminal(site_));
  } else if (tag == "initial") {
    add_object(name, initial(site_));
  } else if (tag == "representable") {
    add_object(name, yoneda(site_, number(arg, ctx)));
  } else if (tag == "nerve") {
    unsigned nv = number(field(arg, "vertices", ctx), ctx + ".vertices");
    std::vector<std::vector<unsigned>> facets;
    if (arg.contains("facets")) {
      if (!arg.at("facets").is_array()) bad(ctx + ": facets must be an array");
      for (const auto& f : arg.at("facets")) {
        if (!f.is_array()) bad(ctx + ": a facet is an array of vertices");
        std::vector<unsigned> face;
        for (const auto& v : f) face.push_back(number(v, ctx + ".facets"));
        facets.push_back(std::move(face));
      }
    }
    try {
      Nerve nv_obj = nerve(site_, nv, std::move(facets), name);
      add_object(name, nv_obj.obj);
      nerves_.emplace(name, std::move(nv_obj));
    } catch (const ContractError& e) {
      bad(ctx + ": " + e.what());
    }
  } else if (tag == "cylinder") {
    Cylinder c = cylinder(object(text(arg, ctx)));
    add_object(name, c.obj());
    add_map(name + ".interval", c.prod.p1);
    add_map(name + ".point", c.prod.p2);
  } else if (tag == "product" || tag == "coproduct") {
    if (!arg.is_array() || arg.size() != 2) bad(ctx + ": expects two object names");
    const CubSet &a = object(text(arg[0], ctx)), &b = object(text(arg[1], ctx));
    if (tag == "product") {
      Product p = product(a, b);
      add_object(name, p.obj);
      add_map(name + ".p1", p.p1);
      add_map(name + ".p2", p.p2);
    } else {
      Coproduct p = coproduct(a, b);
      add_object(name, p.obj);
      add_map(name + ".i1", p.i1);
      add_map(name + ".i2", p.i2);
    }
  } else if (tag == "pullback" || tag == "pushout") {
    if (!arg.is_array() || arg.size() != 2) bad(ctx + ": expects two map names");
    const PshMap &f = map(text(arg[0], ctx)), &g = map(text(arg[1], ctx));
    try {
      if (tag == "pullback") {
        Pullback p = pullback(f, g);
        add_object(name, p.obj);
        add_map(name + ".p1", p.p1);
        add_map(name + ".p2", p.p2);
      } else {
        Pushout p = pushout(f, g);
        add_object(name, p.obj);
        add_map(name + ".i1", p.i1);
        add_map(name + ".i2", p.i2);
      }
    } catch (const ContractError& e) {
      bad(ctx + ": " + e.what());
    }
  } else if (tag == "leibniz") {
    LeibnizTensor t = leibniz_tensor(orientation(arg, ctx), map(text(field(arg, "map", ctx), ctx)));
    add_object(name, t.po.obj);
    add_map(name + ".corner", t.corner);
    add_map(name + ".i1", t.po.i1);
    add_map(name + ".i2", t.po.i2);
  } else if (tag == "pushforward") {
    if (!arg.is_array() || arg.size() != 2) bad(ctx + ": expects the maps p and a");
    PushforwardLimits lim;
    lim.search_nodes = opts_.budget_search;
    Pushforward pf(map(text(arg[0], ctx)), map(text(arg[1], ctx)), lim);
    add_object(name, pf.obj());
    add_map(name + ".structure", pf.structure());
  } else if (tag == "sieve") {
    unsigned n = number(field(arg, "n", ctx), ctx + ".n");
    if (n > dim_) throw TruncationError(ctx + ": y(" + std::to_string(n) + ") above the scene dimension");
    std::vector<MorId> gens;
    for (const auto& g : field(arg, "generators", ctx)) {
      MorId f = site_->index_of(parse_mor(text(g, ctx)));
      if (site_->cod(f) != n) bad(ctx + ": generator " + g.get<std::string>() + " does not end at " + std::to_string(n));
      gens.push_back(f);
    }
    CubSet yn = yoneda(site_, n);
    Subobject so = Sieve::generated(site_, n, gens).as_subobject(yn);
    add_object(name, so.obj);
    add_map(name + ".incl", so.incl);
  } else if (tag == "tables") {
    const Json& sizes = field(arg, "sizes", ctx);
    if (!sizes.is_array() || sizes.size() != dim_ + 1) bad(ctx + ": one size per level");
    CubSetBuilder b(site_);
    for (unsigned n = 0; n <= dim_; ++n) b.set_size(n, number(sizes[n], ctx + ".sizes"));
    const Json& action = field(arg, "action", ctx);
    if (!action.is_object()) bad(ctx + ": action must map generators to tables");
    for (auto it = action.begin(); it != action.end(); ++it) {
      MorId g = site_->index_of(parse_mor(it.key()));
      if (site_->generator_index(g) < 0) bad(ctx + ": " + it.key() + " is not a site generator");
      std::vector<Cell> t;
      for (const auto& c : it.value()) t.push_back(number(c, ctx + ".action"));
      b.set_action(g, std::move(t));
    }
    try {
      add_object(name, b.build(name));
    } catch (const ContractError& e) {
      bad(ctx + ": " + e.what());
    }
    explicit_objects_[name] = true;
  } else {
    bad(ctx + ": unknown constructor '" + tag + "'");
  }
}

void Scene::load_map(const std::string& name, const Json& def) {
  const std::string ctx = "map '" + name + "'";
  const std::string tag = tag_of(def, ctx);
  const Json& arg = def.at(tag);
  auto from = [&]() -> const CubSet& { return object(text(field(def, "from", ctx), ctx)); };
  auto to = [&]() -> const CubSet& { return object(text(field(def, "to", ctx), ctx)); };
  try {
    if (tag == "identity") {
      add_map(name, PshMap::identity(object(text(arg, ctx))));
    } else if (tag == "to_terminal") {
      add_map(name, to_terminal(object(text(arg, ctx)), to()));
    } else if (tag == "from_initial") {
      add_map(name, from_initial(from(), object(text(arg, ctx))));
    } else if (tag == "vertices") {
      std::vector<unsigned> vm;
      for (const auto& v : arg) vm.push_back(number(v, ctx + ".vertices"));
      const std::string a = text(field(def, "from", ctx), ctx), b = text(field(def, "to", ctx), ctx);
      add_map(name, nerve_map(nerve_of(a), nerve_of(b), vm));
    } else if (tag == "compose") {
      if (!arg.is_array() || arg.empty()) bad(ctx + ": compose expects a non-empty list, outermost first");
      PshMap f = map(text(arg.back(), ctx));
      for (std::size_t i = arg.size() - 1; i-- > 0;) f = compose(map(text(arg[i], ctx)), f);
      add_map(name, f);
    } else if (tag == "inverse") {
      add_map(name, inverse(map(text(arg, ctx))));
    } else if (tag == "table") {
      const CubSet &a = from(), &b = to();
      auto lv = cell_levels(arg, dim_, ctx);
      for (unsigned n = 0; n <= dim_; ++n) {
        if (lv[n].size() != a.size(n)) bad(ctx + ": level " + std::to_string(n) + " has the wrong length");
        for (Cell c : lv[n])
          if (c >= b.size(n)) bad(ctx + ": value out of range at level " + std::to_string(n));
      }
      add_map(name, PshMap(a, b, std::move(lv)), true);
    } else if (tag == "delta" || tag == "eps" || tag == "connection") {
      const CubSet& x = object(text(tag == "eps" ? arg : field(arg, "object", ctx), ctx));
      if (tag == "eps") {
        add_map(name, cyl_eps(cylinder(x)));
      } else if (tag == "delta") {
        add_map(name, cyl_delta(cylinder(x), orientation(arg, ctx)));
      } else {
        add_map(name, cyl_pack(x).conn[orientation(arg, ctx)]);
      }
    } else if (tag == "cylinder_map") {
      const PshMap& f = map(text(arg, ctx));
      add_map(name, cyl_map(cylinder(f.dom()), cylinder(f.cod()), f));
    } else if (tag == "yoneda") {
      unsigned n = number(field(arg, "n", ctx), ctx + ".n");
      const CubSet& x = object(text(field(arg, "object", ctx), ctx));
      Cell c = number(field(arg, "cell", ctx), ctx + ".cell");
      if (n > dim_ || c >= x.size(n)) bad(ctx + ": cell out of range");
      add_map(name, yoneda_map(yoneda(site_, n), n, x, c));
    } else if (tag == "homotopy") {
      // Pointwise homotopy of a nerve: table[b][v] is the vertex at interval value b.
      const std::string xn = text(field(arg, "object", ctx), ctx);
      const Nerve& y = nerve_of(xn);
      const Json& t = field(arg, "table", ctx);
      if (!t.is_array() || t.size() != 2 || t[0].size() != y.vertices || t[1].size() != y.vertices)
        bad(ctx + ": homotopy table must be two rows of one vertex per vertex");
      std::vector<std::vector<unsigned>> h(2);
      for (unsigned b = 0; b < 2; ++b)
        for (const auto& v : t[b]) {
          unsigned w = number(v, ctx + ".table");
          if (w >= y.vertices) bad(ctx + ": vertex out of range");
          h[b].push_back(w);
        }
      add_map(name, nerve_homotopy(y, cylinder(object(xn)), [&](bool b, unsigned v) { return h[b][v]; }));
    } else {
      bad(ctx + ": unknown constructor '" + tag + "'");
    }
  } catch (const ContractError& e) {
    bad(ctx + ": " + e.what());
  }
}

void Scene::load_structure(const std::string& name, const Json& def) {
  const std::string ctx = "structure '" + name + "'";
  const std::string tag = tag_of(def, ctx);
  const Json& arg = def.at(tag);
  if (tag == "fibration" || tag == "trivial_fibration") {
    const bool fib = tag == "fibration";
    const PshMap& f = map(text(field(arg, "map", ctx), ctx));
    const StructureKind kind = fib ? StructureKind::fibration : StructureKind::trivial_fibration;
    if (fib && dim_ == 0) throw TruncationError(ctx + ": fibration problems need dimension at least 1");
    LiftingStructure st;
    if (arg.contains("fill")) {
      st.problems = std::make_shared<const GeneratorProblems>(f, kind);
      for (const auto& c : arg.at("fill")) st.fill.push_back(number(c, ctx + ".fill"));
      if (st.fill.size() != st.problems->size())
        bad(ctx + ": " + std::to_string(st.fill.size()) + " fillers for " + std::to_string(st.problems->size()) + " problems");
    } else if (arg.contains("alternative")) {
      std::size_t i = number(arg.at("alternative"), ctx + ".alternative");
      SearchBudget b = budget();
      std::vector<LiftingStructure> all;
      if (fib)
        for (auto& s : enumerate_fib_structures(f, i + 1, b)) all.push_back(s);
      else
        for (auto& s : enumerate_trivfib_structures(f, i + 1, b)) all.push_back(s);
      if (all.size() <= i) bad(ctx + ": fewer than " + std::to_string(i + 1) + " structures exist");
      st = all[i];
    } else if (arg.contains("canonical")) {
      if (!is_iso(f)) bad(ctx + ": canonical structures exist only on isomorphisms");
      st = fib ? LiftingStructure(canonical_fib_on_iso(f)) : LiftingStructure(canonical_trivfib_on_iso(f));
    } else {
      SearchBudget b = budget();
      bool found = false;
      if (fib) {
        auto syn = synth_fib(f, b);
        if (syn.structure) st = *syn.structure, found = true;
      } else {
        auto syn = synth_trivfib(f, b);
        if (syn.structure) st = *syn.structure, found = true;
      }
      if (!found) bad(ctx + ": no structure exists on '" + arg.at("map").get<std::string>() + "'");
    }
    if (fibs_.count(name) || trivfibs_.count(name) || shes_.count(name)) bad(ctx + ": defined twice");
    if (fib) fibs_.emplace(name, UniformFib{st});
    else trivfibs_.emplace(name, UniformTrivFib{st});
    return;
  }
  SheData she;
  try {
    if (tag == "she") {
      she.k = orientation(arg, ctx);
      she.f = map(text(field(arg, "f", ctx), ctx));
      she.g = map(text(field(arg, "g", ctx), ctx));
      she.phi = map(text(field(arg, "phi", ctx), ctx));
      she.psi = map(text(field(arg, "psi", ctx), ctx));
    } else if (tag == "she_on_endpoint") {
      she = she_on_endpoint(orientation(arg, ctx), object(text(field(arg, "object", ctx), ctx)));
    } else if (tag == "she_on_leibniz") {
      she = she_on_leibniz(orientation(arg, ctx), map(text(field(arg, "map", ctx), ctx)));
    } else if (tag == "identity_she") {
      she = identity_she(orientation(arg, ctx), object(text(field(arg, "object", ctx), ctx)));
    } else {
      bad(ctx + ": unknown constructor '" + tag + "'");
    }
  } catch (const ContractError& e) {
    bad(ctx + ": " + e.what());
  }
  if (fibs_.count(name) || trivfibs_.count(name) || shes_.count(name)) bad(ctx + ": defined twice");
  for (auto [part, m] : {std::pair<const char*, const PshMap*>{"f", &she.f}, {"g", &she.g}, {"phi", &she.phi}, {"psi", &she.psi}})
    if (!maps_.count(name + "." + part)) maps_.emplace(name + "." + part, *m);
  shes_.emplace(name, std::move(she));
}

Report Scene::validate_all() const {
  Report r("scene");
  for (const auto& [name, _] : explicit_objects_) {
    r.group("object " + name + " is functorial");
    auto v = check_functoriality(objects_.at(name));
    r.record(!v, v ? v->describe(*site_) : std::string());
  }
  for (const auto& [name, _] : declared_) {
    r.group("map " + name + " is natural");
    auto v = check_naturality(maps_.at(name));
    r.record(!v, v ? "naturality fails at generator " + v->describe(*site_) : std::string());
  }
  for (const auto& [name, u] : fibs_) r.merge(validate_fib(u), "fibration " + name + ": ");
  for (const auto& [name, u] : trivfibs_) r.merge(validate_trivfib(u), "trivial fibration " + name + ": ");
  for (const auto& [name, s] : shes_) r.merge(validate_she(s), "she " + name + ": ");
  return r;
}

}  // namespace cubical::cli
