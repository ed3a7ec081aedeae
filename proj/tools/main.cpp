// cubical: batch front end over scenes.
//
// Exit codes: 0 success, 1 validation failure (or proven absence for synth),
// 2 input error, 3 resource boundary (truncation or budget).

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cubical/errors.hpp"
#include "cubical/frobenius.hpp"
#include "scene.hpp"

using namespace cubical;
using namespace cubical::cli;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInput = 2, kResource = 3 };

struct Outcome {
  int code = kOk;
  std::string text;          // report body
  std::string summary;       // one line
  std::optional<Json> cert;  // certificate, when produced
};

struct Run {
  std::string report = "text";
  std::string out;
};

std::string cells_of(const CubSet& x) {
  std::string s;
  for (unsigned n = 0; n <= x.max_dim(); ++n) s += (n ? "/" : "") + std::to_string(x.size(n));
  return s;
}

Outcome from_report(const Report& r, const std::string& what) {
  Outcome o;
  o.code = r.ok() ? kOk : kInvalid;
  o.text = r.to_text();
  o.summary = what + ": " + (r.ok() ? "ok" : "FAIL") + " (" + std::to_string(r.checked()) + " checks)";
  if (!r.ok()) o.summary += " first failure: " + r.first_failure().value_or("");
  return o;
}

/// Certificates carry every object and map they mention as explicit tables.
class CertBuilder {
 public:
  explicit CertBuilder(unsigned dim) { doc_["dim"] = dim; }
  void object(const std::string& name, const CubSet& x) { doc_["objects"][name] = object_tables(x); }
  void derived(const std::string& name, Json def) { doc_["objects"][name] = std::move(def); }
  void map(const std::string& name, const std::string& from, const std::string& to, const PshMap& f) {
    doc_["maps"][name] = Json{{"from", from}, {"to", to}, {"table", map_tables(f)}};
  }
  void structure(const std::string& name, Json def) { doc_["structures"][name] = std::move(def); }
  Json done() const { return doc_; }

 private:
  Json doc_;
};

Json fill_json(const LiftingStructure& u) {
  Json a = Json::array();
  for (Cell c : u.fill) a.push_back(c);
  return a;
}

Outcome cmd_validate(const Scene& sc) { return from_report(sc.validate_all(), "validate"); }

Outcome cmd_synth(const Scene& sc, const std::string& map_name, const std::string& kind) {
  if (kind != "fib" && kind != "trivfib") throw ParseError("synth: kind must be fib or trivfib");
  const PshMap& f = sc.map(map_name);
  SearchBudget budget(sc.options().budget_search);
  const bool fib = kind == "fib";
  std::optional<LiftingStructure> st;
  std::shared_ptr<const GeneratorProblems> problems;
  std::vector<std::uint32_t> unsolvable;
  if (fib) {
    auto syn = synth_fib(f, budget);
    problems = syn.problems, unsolvable = syn.unsolvable;
    if (syn.structure) st = *syn.structure;
  } else {
    auto syn = synth_trivfib(f, budget);
    problems = syn.problems, unsolvable = syn.unsolvable;
    if (syn.structure) st = *syn.structure;
  }
  Outcome o;
  std::ostringstream os;
  os << "synth " << kind << " on " << map_name << ": " << problems->size() << " generating problems in "
     << problems->family_count() << " families over cells " << cells_of(f.dom()) << " -> " << cells_of(f.cod()) << "\n";
  if (!st) {
    o.code = kInvalid;
    Json absent{{"map", map_name}, {"kind", kind}, {"problems", problems->size()}};
    Json list = Json::array();
    for (auto v : unsolvable) list.push_back(problems->describe(v));
    absent["unsolvable"] = list;
    absent["search"] = unsolvable.empty() ? "exhausted: no coherent choice of fillers" : "not started: problems without candidates";
    os << "  no structure: " << (unsolvable.empty() ? "search exhausted" : std::to_string(unsolvable.size()) + " problems have no filler") << "\n";
    for (std::size_t i = 0; i < unsolvable.size() && i < 5; ++i) os << "  unsolvable " << problems->describe(unsolvable[i]) << "\n";
    o.text = os.str();
    o.summary = "synth " + kind + " " + map_name + ": absent";
    o.cert = Json{{"dim", sc.dim()}, {"absence", absent}};
    return o;
  }
  Report r = validate_structure(*st);
  os << r.to_text();
  o.code = r.ok() ? kOk : kInvalid;
  o.text = os.str();
  o.summary = "synth " + kind + " " + map_name + ": " + (r.ok() ? "found" : "FAIL") + " (" + std::to_string(st->fill.size()) + " fillers)";
  CertBuilder cert(sc.dim());
  cert.object("X", f.dom());
  cert.object("Y", f.cod());
  cert.map("f", "X", "Y", f);
  cert.structure(map_name + "." + kind, Json{{fib ? "fibration" : "trivial_fibration", Json{{"map", "f"}, {"fill", fill_json(*st)}}}});
  o.cert = cert.done();
  return o;
}

void put_she(CertBuilder& cert, const std::string& name, const SheData& s, const std::string& x, const std::string& y) {
  cert.derived("I" + x, Json{{"cylinder", x}});
  cert.derived("I" + y, Json{{"cylinder", y}});
  cert.map(name + ".f", x, y, s.f);
  cert.map(name + ".g", y, x, s.g);
  cert.map(name + ".phi", "I" + x, x, s.phi);
  cert.map(name + ".psi", "I" + y, y, s.psi);
  cert.structure(name, Json{{"she", Json{{"k", s.k}, {"f", name + ".f"}, {"g", name + ".g"}, {"phi", name + ".phi"}, {"psi", name + ".psi"}}}});
}

Outcome cmd_frobenius(const Scene& sc, const std::string& she_name, const std::string& fib_name) {
  FrobeniusInput in = FrobeniusInput::make(sc.she(she_name), sc.fibration(fib_name));
  if (sc.options().validate) {
    Report pre = validate_input(in);
    if (!pre.ok()) return from_report(pre, "frobenius input");
  }
  FrobeniusResult res = frobenius_pullback_she(in);
  Report r = validate_she(res.she_bar);
  r.group("orientation preserved");
  r.record(res.she_bar.k == in.she.k, "orientation changed");
  Outcome o = from_report(r, "frobenius " + she_name + " along " + fib_name);
  std::ostringstream os;
  const PshMap& gb = in.g_bar();
  os << "frobenius " << she_name << " along " << fib_name << ": pullback cells " << cells_of(gb.dom()) << " -> "
     << cells_of(gb.cod()) << ", " << in.fib.fill.size() << " fillers in the fibration\n";
  o.text = os.str() + o.text;
  CertBuilder cert(sc.dim());
  cert.object("A", gb.dom());
  cert.object("X", gb.cod());
  put_she(cert, she_name + ".bar", res.she_bar, "A", "X");
  o.cert = cert.done();
  return o;
}

Outcome cmd_pushforward(const Scene& sc, const std::string& p_name, const std::string& q_name) {
  const UniformFib &p = sc.fibration(p_name), &q = sc.fibration(q_name);
  PushforwardLimits lim;
  lim.search_nodes = sc.options().budget_search;
  PushforwardFib res = pushforward_fib(p, q, lim);
  Report r = validate_fib(res.fib);
  Outcome o = from_report(r, "pushforward " + q_name + " along " + p_name);
  std::ostringstream os;
  os << "pushforward " << q_name << " along " << p_name << ": p_*A cells " << cells_of(res.pf->obj()) << ", "
     << res.fib.fill.size() << " generating problems\n";
  o.text = os.str() + o.text;
  CertBuilder cert(sc.dim());
  cert.object("X", p.map().dom());
  cert.object("Y", p.map().cod());
  cert.object("A", q.map().dom());
  cert.map("p", "X", "Y", p.map());
  cert.map("q", "A", "X", q.map());
  cert.derived("P", Json{{"pushforward", Json::array({"p", "q"})}});
  cert.structure("P.fib", Json{{"fibration", Json{{"map", "P.structure"}, {"fill", fill_json(res.fib)}}}});
  o.cert = cert.done();
  return o;
}

Outcome cmd_coherence(const Scene& sc, const Json& c) {
  auto name = [&](const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string()) throw ParseError(std::string("coherence: missing '") + key + "'");
    return j.at(key).get<std::string>();
  };
  if (!c.contains("from") || !c.contains("to")) throw ParseError("coherence: needs 'from' and 'to'");
  const Json &a = c.at("from"), &b = c.at("to");
  FrobeniusInput ia = FrobeniusInput::make(sc.she(name(a, "she")), sc.fibration(name(a, "fib")));
  FrobeniusInput ib = FrobeniusInput::make(sc.she(name(b, "she")), sc.fibration(name(b, "fib")));
  FrobeniusResult ra = frobenius_pullback_she(ia), rb = frobenius_pullback_she(ib);
  FrobeniusMorphism m{sc.map(name(c, "tau")), sc.map(name(c, "s")), sc.map(name(c, "t"))};
  return from_report(check_morphism_coherence(ia, ra, ib, rb, m), "coherence");
}

Outcome cmd_beck_chevalley(const Scene& sc, const Json& c) {
  auto name = [&](const char* key) {
    if (!c.contains(key) || !c.at(key).is_string()) throw ParseError(std::string("beck_chevalley: missing '") + key + "'");
    return c.at(key).get<std::string>();
  };
  PushforwardLimits lim;
  lim.search_nodes = sc.options().budget_search;
  Report r = beck_chevalley_check(sc.fibration(name("p")), sc.fibration(name("q")), sc.map(name("s")), sc.map(name("t")),
                                  sc.fibration(name("r")), lim);
  Outcome o = from_report(r, "beck_chevalley");
  if (r.groups().empty()) o.summary = "beck_chevalley: " + r.subject();
  return o;
}

Json read_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scene is not valid JSON: ") + e.what());
  }
}

int code_of(const Error& e) {
  if (dynamic_cast<const TruncationError*>(&e) || dynamic_cast<const BudgetExceeded*>(&e)) return kResource;
  return kInput;
}

const char* kind_of(const Error& e) {
  if (dynamic_cast<const TruncationError*>(&e)) return "truncation boundary";
  if (dynamic_cast<const BudgetExceeded*>(&e)) return "budget exceeded";
  if (dynamic_cast<const ParseError*>(&e)) return "input error";
  return "contract error";
}

/// Runs one command, turning library errors into exit codes.
template <class F>
Outcome guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    Outcome o;
    o.code = code_of(e);
    o.text = what + ": " + kind_of(e) + ": " + e.what() + "\n";
    o.summary = what + ": " + kind_of(e);
    return o;
  } catch (const Json::exception& e) {
    Outcome o;
    o.code = kInput;
    o.text = what + ": input error: " + e.what() + "\n";
    o.summary = what + ": input error";
    return o;
  }
}

void emit(const Outcome& o, const Run& run) {
  std::cout << (run.report == "summary" ? o.summary + "\n" : o.text);
}

void write_cert(const Json& cert, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write certificate '" + path + "'");
  out << cert.dump(1) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform fibrations on truncated cubical sets: validation, synthesis and transfer"};
  app.require_subcommand(1);
  SceneOptions opts;
  Run run;
  bool no_validate = false;
  std::string scene_path;
  app.add_option("--dim-cap", opts.dim_cap, "Largest scene dimension accepted")->capture_default_str();
  app.add_option("--budget-cells", opts.budget_cells, "Total cells allowed in scene objects")->capture_default_str();
  app.add_option("--budget-search", opts.budget_search, "Search nodes allowed per search")->capture_default_str();
  app.add_flag("--no-validate", no_validate, "Skip validation of declared structures and inputs");
  app.add_option("--report", run.report, "Report style")->check(CLI::IsMember({"text", "summary"}))->capture_default_str();
  app.add_option("--out", run.out, "Certificate file (or directory for run)");

  auto* validate = app.add_subcommand("validate", "Run every applicable validator on a scene");
  auto* synth = app.add_subcommand("synth", "Synthesize a structure on a map or certify its absence");
  auto* frob = app.add_subcommand("frobenius", "Pull a homotopy equivalence back along a fibration");
  auto* push = app.add_subcommand("pushforward", "Transfer a fibration structure along pushforward");
  auto* runall = app.add_subcommand("run", "Run the command list stored in a scene");
  std::string map_name, kind = "fib", she_name, fib_name, p_name, q_name;
  for (auto* sub : {validate, synth, frob, push, runall}) {
    sub->add_option("scene", scene_path, "Scene file")->required();
    sub->fallthrough();
  }
  synth->add_option("--map", map_name, "Map to equip")->required();
  synth->add_option("--kind", kind, "fib or trivfib")->check(CLI::IsMember({"fib", "trivfib"}))->capture_default_str();
  frob->add_option("--she", she_name, "Homotopy equivalence on g : B -> Y")->required();
  frob->add_option("--fib", fib_name, "Fibration on p : X -> Y")->required();
  push->add_option("--p", p_name, "Fibration p : X -> Y")->required();
  push->add_option("--q", q_name, "Fibration q : A -> X")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  opts.validate = !no_validate;

  auto t0 = std::chrono::steady_clock::now();
  std::optional<Scene> scene;
  Outcome load = guarded("load", [&] {
    scene = Scene::load(read_scene(scene_path), opts);
    return Outcome{};
  });
  if (load.code != kOk) {
    emit(load, run);
    return load.code;
  }
  const Scene& sc = *scene;
  if (opts.validate && !validate->parsed()) {
    Report r = sc.validate_all();
    if (!r.ok()) {
      emit(from_report(r, "scene validation"), run);
      return kInvalid;
    }
  }

  std::vector<Outcome> outcomes;
  std::vector<std::string> cert_names;
  auto add = [&](Outcome o, const std::string& cname) {
    outcomes.push_back(std::move(o));
    cert_names.push_back(cname);
  };
  if (validate->parsed()) add(guarded("validate", [&] { return cmd_validate(sc); }), "");
  if (synth->parsed()) add(guarded("synth", [&] { return cmd_synth(sc, map_name, kind); }), "");
  if (frob->parsed()) add(guarded("frobenius", [&] { return cmd_frobenius(sc, she_name, fib_name); }), "");
  if (push->parsed()) add(guarded("pushforward", [&] { return cmd_pushforward(sc, p_name, q_name); }), "");
  if (runall->parsed()) {
    const Json& doc = sc.source();
    if (!doc.contains("commands") || !doc.at("commands").is_array()) {
      std::cout << "run: the scene has no command list\n";
      return kInput;
    }
    std::size_t i = 0;
    for (const Json& c : doc.at("commands")) {
      ++i;
      std::string op = c.is_object() && c.size() == 1 ? c.begin().key() : std::string("?");
      const Json arg = op == "?" ? Json() : c.begin().value();
      std::string cname = std::to_string(i) + "-" + op + ".json";
      add(guarded(op, [&]() -> Outcome {
            auto s = [&](const char* key) {
              if (!arg.contains(key) || !arg.at(key).is_string()) throw ParseError(op + ": missing '" + key + "'");
              return arg.at(key).get<std::string>();
            };
            if (op == "validate") return cmd_validate(sc);
            if (op == "synth") return cmd_synth(sc, s("map"), arg.value("kind", std::string("fib")));
            if (op == "frobenius") return cmd_frobenius(sc, s("she"), s("fib"));
            if (op == "pushforward") return cmd_pushforward(sc, s("p"), s("q"));
            if (op == "coherence") return cmd_coherence(sc, arg);
            if (op == "beck_chevalley") return cmd_beck_chevalley(sc, arg);
            throw ParseError("unknown command '" + op + "'");
          }),
          cname);
    }
  }

  int code = kOk;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    emit(outcomes[i], run);
    code = std::max(code, outcomes[i].code);
    if (!run.out.empty() && outcomes[i].cert) {
      std::string path = runall->parsed() ? run.out + "/" + cert_names[i] : run.out;
      try {
        write_cert(*outcomes[i].cert, path);
      } catch (const Error& e) {
        std::cout << e.what() << "\n";
        code = std::max(code, int(kInput));
      }
    }
  }
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "wall time " << static_cast<long long>(ms) << " ms\n";
  return code;
}
