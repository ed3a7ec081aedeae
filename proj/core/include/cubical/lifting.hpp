#pragma once

// Lifting problems, the brute-force filler oracle, and uniform (trivial)
// fibration structures.
//
// A generating problem is indexed by a node (family, t, s): the family fixes
// the mono (a sieve S on y(n) for trivial fibrations, the box
// delta^k (x)^ (S -> y(n)) for fibrations), t is the bottom cell and s the top
// map, recorded by its values at the generators of the shape sieve. Restricting
// along a site generator b sends a node to the node of the pulled-back
// problem; a structure is a filler per node that commutes with these edges.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/cylinder.hpp"
#include "cubical/presheaf.hpp"
#include "cubical/report.hpp"
#include "cubical/search.hpp"
#include "cubical/sieve.hpp"

namespace cubical {

struct LiftingProblem {
  PshMap left;    // A -> B
  PshMap right;   // X -> Y
  PshMap top;     // A -> X
  PshMap bottom;  // B -> Y
};

bool commutes(const LiftingProblem& p);
/// diag o left = top and right o diag = bottom.
bool fills(const LiftingProblem& p, const PshMap& diag);

/// First filler in the search order, or nullopt when none exists.
std::optional<PshMap> brute_force_fill(const LiftingProblem& p, SearchBudget& budget);

/// A sieve with generators, the relations among them, and one factorization
/// of every member through a generator.
class SievePresentation {
 public:
  struct Relation {
    std::uint16_t i, j;
    MorId wi, wj;  // gens[i] o wi = gens[j] o wj
  };

  explicit SievePresentation(Sieve s);
  /// Shared instance per sieve.
  static std::shared_ptr<const SievePresentation> of(const Sieve& s);

  const Sieve& sieve() const { return sieve_; }
  const std::vector<MorId>& gens() const { return gens_; }
  const std::vector<Relation>& relations() const { return relations_; }
  /// (generator index, w) with member = gens[i] o w.
  std::pair<std::uint16_t, MorId> factor(MorId member) const;
  /// Value at a member of the map S -> X given by its generator values.
  Cell eval(const CubSet& x, std::span<const Cell> vals, MorId member) const;
  /// Generator values satisfying every relation, candidates per generator.
  void enumerate(const CubSet& x, const std::function<std::span<const Cell>(std::size_t)>& cand,
                 const std::function<void(std::span<const Cell>)>& visit) const;

 private:
  Sieve sieve_;
  std::vector<MorId> gens_;
  std::vector<Relation> relations_;
  std::vector<std::vector<std::pair<std::uint16_t, MorId>>> factor_;  // [level][code]
};

enum class StructureKind { trivial_fibration, fibration };

/// All generating lifting problems against a map, with their candidate
/// fillers and the restriction edges between them.
class GeneratorProblems {
 public:
  struct Family {
    unsigned k = 0;  // orientation, fibrations only
    unsigned n = 0;
    std::size_t sieve = 0;  // index into subobjects_of_representable(site, n)
    unsigned level = 0;     // n, or n + 1 for fibrations
    std::shared_ptr<const SievePresentation> shape;
  };

  GeneratorProblems(PshMap f, StructureKind kind, std::uint64_t max_nodes = 1u << 22);

  const PshMap& map() const { return f_; }
  StructureKind kind() const { return kind_; }
  std::size_t size() const { return family_of_.size(); }
  std::size_t family_count() const { return families_.size(); }
  const Family& family(std::size_t i) const { return families_[i]; }
  std::size_t family_index(unsigned k, unsigned n, std::size_t sieve) const;

  std::uint32_t family_of(std::uint32_t node) const { return family_of_[node]; }
  Cell base(std::uint32_t node) const { return base_[node]; }
  std::span<const Cell> values(std::uint32_t node) const;
  std::span<const Cell> candidates(std::uint32_t node) const;
  unsigned level(std::uint32_t node) const { return families_[family_of_[node]].level; }
  const ConstraintGraph& graph() const { return graph_; }
  /// First node of each filler level, plus the end.
  const std::vector<std::uint32_t>& level_offsets() const { return level_offset_; }

  std::optional<std::uint32_t> find(std::size_t family, Cell t, std::span<const Cell> vals) const;
  std::string describe(std::uint32_t node) const;

 private:
  void add_families();
  void enumerate_nodes(std::uint64_t max_nodes);
  void build_edges();

  struct KeyHash {
    std::size_t operator()(const std::vector<Cell>& v) const;
  };

  PshMap f_;
  StructureKind kind_;
  SitePtr site_, lower_;  // lower_: generators of the naturality edges
  std::vector<Family> families_;
  std::vector<std::vector<std::size_t>> family_at_;  // [k * (N + 1) + n][sieve]
  std::vector<std::uint32_t> family_of_;
  std::vector<Cell> base_;
  std::vector<std::uint32_t> val_begin_, cand_begin_;
  std::vector<Cell> vals_, cands_;
  std::unordered_map<std::vector<Cell>, std::uint32_t, KeyHash> index_;
  ConstraintGraph graph_;
  std::vector<std::uint32_t> level_offset_;
};

/// A filler per generating problem.
struct LiftingStructure {
  std::shared_ptr<const GeneratorProblems> problems;
  std::vector<Cell> fill;

  const PshMap& map() const { return problems->map(); }
  Cell filler(std::uint32_t node) const { return fill[node]; }
};
struct UniformTrivFib : LiftingStructure {};
struct UniformFib : LiftingStructure {};

Report validate_structure(const LiftingStructure& u);
inline Report validate_trivfib(const UniformTrivFib& u) { return validate_structure(u); }
inline Report validate_fib(const UniformFib& u) { return validate_structure(u); }

/// Result of synthesis: a validated structure, or the certificate of absence.
template <class S>
struct Synthesis {
  std::optional<S> structure;
  std::shared_ptr<const GeneratorProblems> problems;
  std::vector<std::uint32_t> unsolvable;  // nodes with no filler at all
};

Synthesis<UniformTrivFib> synth_trivfib(const PshMap& f, SearchBudget& budget);
Synthesis<UniformFib> synth_fib(const PshMap& f, SearchBudget& budget);
/// The first `limit` structures in search order.
std::vector<UniformTrivFib> enumerate_trivfib_structures(const PshMap& f, std::size_t limit, SearchBudget& budget);
std::vector<UniformFib> enumerate_fib_structures(const PshMap& f, std::size_t limit, SearchBudget& budget);
/// The structure on an identity (or any isomorphism): fillers forced.
UniformTrivFib canonical_trivfib_on_iso(const PshMap& f);
UniformFib canonical_fib_on_iso(const PshMap& f);

/// Oracle for the non-uniform lifting property: every generating problem,
/// enumerated from the monos themselves, has a filler. Works family by family
/// over a batch of maps that share a site.
struct OracleResult {
  bool all_solvable = true;
  std::size_t problems = 0;
  std::size_t unsolvable = 0;
  std::optional<std::string> first_unsolvable;
};
std::vector<OracleResult> oracle_generator_problems(const std::vector<PshMap>& maps, StructureKind kind,
                                                    SearchBudget& budget);

/// The sieve object: K_n = sieves on y(n), acting by pullback, with the point
/// at the full sieve.
struct ClassifierK {
  CubSet obj;
  PshMap point;  // 1 -> K
  /// char_map(i)(b) = b^*(image of i).
  PshMap char_map(const PshMap& mono) const;
  /// The pullback of the point along char_map(i) is isomorphic over B to A.
  bool reconstructs(const PshMap& mono) const;
  /// Number of maps B -> K whose pullback of the point is the image of i.
  std::uint64_t count_classifying_maps(const PshMap& mono, SearchBudget& budget) const;
};
ClassifierK classifier_k(const SitePtr& site, std::size_t budget = kDefaultSieveBudget);

/// P_Y X with eta : X -> P_Y X, both over Y. Cells are the trivial-fibration
/// generating problems (n, S, t, s).
struct PartialMapClassifier {
  std::shared_ptr<const GeneratorProblems> problems;
  CubSet obj;
  PshMap structure;  // P_Y X -> Y
  PshMap eta;        // X -> P_Y X
  PshMap to_k_times_y;  // P_Y X -> K x Y
  /// The square with eta, f, the structure map and y |-> (full, y) is a pullback.
  bool square_is_pullback(const ClassifierK& k) const;
};
PartialMapClassifier partial_map_classifier(const PshMap& f);
PartialMapClassifier partial_map_classifier(std::shared_ptr<const GeneratorProblems> problems);

PshMap retraction_from_trivfib(const PartialMapClassifier& pmc, const UniformTrivFib& u);
/// Checks r o eta = id, f o r = structure and naturality; nullopt with the
/// reason in `why` otherwise.
std::optional<UniformTrivFib> trivfib_from_retraction(const PartialMapClassifier& pmc, const PshMap& r,
                                                      std::string* why = nullptr);

/// Filler of m : A -> B against u from u's generating fillers.
PshMap extend_to_all_monos(const UniformTrivFib& u, const PshMap& m, const PshMap& top, const PshMap& bottom);
/// Filler of the corner of t = leibniz_tensor(k, m) against u; `top` starts at
/// t.po.obj and `bottom` at t.cb.obj().
PshMap extend_fib_to_cyl_monos(const UniformFib& u, const LeibnizTensor& t, const PshMap& top, const PshMap& bottom);

/// Structure on p' : Y' x_Y X -> Y' pulled back along t : Y' -> Y. `pb` must be
/// pullback(t, u.map()).
UniformFib pullback_fib(const UniformFib& u, const Pullback& pb);
UniformTrivFib pullback_trivfib(const UniformTrivFib& u, const Pullback& pb);
/// (s, t) : p -> p' preserves the chosen fillers.
Report check_structure_map(const LiftingStructure& u, const LiftingStructure& v, const PshMap& s, const PshMap& t);

}  // namespace cubical
