#pragma once

// The cube category truncated at dimension N. Objects are dimensions 0..N;
// a morphism m -> n is an n-tuple of elements of the free de Morgan algebra on
// m generators, and composition is substitution.

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "cubical/demorgan.hpp"

namespace cubical {

/// Value form of a cube morphism, independent of any site.
struct CubeMor {
  unsigned dom = 0;
  unsigned cod = 0;
  std::vector<DmElem> components;  // cod entries, each of arity dom

  std::string to_string() const;  // mor(dom -> cod; e1, ..., ecod)
  friend bool operator==(const CubeMor&, const CubeMor&) = default;
};

/// g o f by substitution of f's components into g's.
CubeMor compose(const CubeMor& g, const CubeMor& f);
CubeMor identity_mor(unsigned n);
/// Parses `mor(n -> m; e1, ..., em)`.
CubeMor parse_mor(std::string_view text);

/// Dense global index of a morphism of a fixed site.
using MorId = std::uint32_t;

struct SiteLimits {
  unsigned dim_cap = 2;
  /// Largest hom-set the site is allowed to index.
  std::size_t hom_budget = 1u << 20;
};

class CubeSite {
 public:
  explicit CubeSite(unsigned max_dim = 2, SiteLimits limits = {});
  static std::shared_ptr<const CubeSite> make(unsigned max_dim = 2, SiteLimits limits = {});
  /// Process-wide instance per dimension with default limits.
  static std::shared_ptr<const CubeSite> shared(unsigned max_dim);

  unsigned max_dim() const { return max_dim_; }
  const DmTable& algebra(unsigned m) const { return *algebras_.at(m); }

  std::size_t hom_size(unsigned m, unsigned n) const { return hom_size_[m * (max_dim_ + 1) + n]; }
  std::size_t total_morphisms() const { return dom_.size(); }
  MorId mor(unsigned m, unsigned n, std::size_t code) const {
    return static_cast<MorId>(offset_[m * (max_dim_ + 1) + n] + code);
  }
  unsigned dom(MorId f) const { return dom_[f]; }
  unsigned cod(MorId f) const { return cod_[f]; }
  std::size_t code(MorId f) const { return f - offset_[dom_[f] * (max_dim_ + 1) + cod_[f]]; }
  /// j-th component of f as an index into algebra(dom f).
  DmTable::Index component(MorId f, unsigned j) const;
  MorId from_components(unsigned m, std::span<const DmTable::Index> comps) const;

  MorId compose(MorId g, MorId f) const;
  MorId identity(unsigned n) const;
  bool is_identity(MorId f) const { return f == identity(dom_[f]) && dom_[f] == cod_[f]; }

  /// The structural morphisms. Dimensions above the cap raise TruncationError.
  MorId endpoint(unsigned k) const;    // 0 -> 1 picking bottom (k = 0) or top (k = 1)
  MorId contraction() const;           // 1 -> 0
  MorId connection(unsigned k) const;  // 2 -> 1, x1 /\ x2 (k = 0) or x1 \/ x2 (k = 1)
  MorId swap() const;                  // 2 -> 2
  MorId involution() const;            // 1 -> 1, !x1
  MorId diagonal() const;              // 1 -> 2, (x1, x1)
  /// Face n -> n+1 inserting the constant k at coordinate i.
  MorId face(unsigned n, unsigned i, unsigned k) const;
  /// Degeneracy n+1 -> n forgetting coordinate i.
  MorId degeneracy(unsigned n, unsigned i) const;
  /// Product projections y(a) x y(b) -> y(a), y(b) and pairing into a+b.
  MorId pair(MorId f, MorId g) const;
  /// The constant m -> 1 at k.
  MorId constant(unsigned m, unsigned k) const;
  /// 1 x f : 1+m -> 1+n, the interval coordinate first.
  MorId cylinder(MorId f) const;
  /// The same morphism in another site (TruncationError if it does not fit).
  MorId translate(MorId f, const CubeSite& to) const;

  CubeMor value(MorId f) const;
  MorId index_of(const CubeMor& f) const;

  /// All morphisms m -> n in product order over the enumerated algebra.
  const std::vector<CubeMor>& hom_enumerate(unsigned m, unsigned n) const;

  /// A generating set of morphisms: every morphism is a composite of these.
  const std::vector<MorId>& generators() const { return generators_; }
  /// Generators with codomain n.
  const std::vector<MorId>& generators_into(unsigned n) const { return gens_into_[n]; }
  /// Position of f in generators(), or -1.
  int generator_index(MorId f) const { return gen_index_[f]; }
  /// Decomposition f = first_factor(f) o rest_factor(f) with first_factor a generator;
  /// the identity has no factors.
  MorId first_factor(MorId f) const { return first_[f]; }
  MorId rest_factor(MorId f) const { return rest_[f]; }
  unsigned word_length(MorId f) const { return length_[f]; }

 private:
  void index_homs();
  void build_generators();

  unsigned max_dim_;
  std::vector<std::unique_ptr<DmTable>> algebras_;
  std::vector<std::size_t> hom_size_, offset_;
  std::vector<std::uint8_t> dom_, cod_;
  // subst_[n * (N+1) + m] maps (element e of dM(n), code of an n-tuple over dM(m)) to dM(m).
  std::vector<std::vector<DmTable::Index>> subst_;
  std::vector<MorId> generators_;
  std::vector<std::vector<MorId>> gens_into_;
  std::vector<int> gen_index_;
  std::vector<MorId> first_, rest_;
  std::vector<std::uint8_t> length_;
  mutable std::mutex hom_mutex_;
  mutable std::vector<std::unique_ptr<std::vector<CubeMor>>> hom_cache_;
};

using SitePtr = std::shared_ptr<const CubeSite>;

}  // namespace cubical
