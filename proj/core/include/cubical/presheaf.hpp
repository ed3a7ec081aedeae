#pragma once

// Finite cubical sets over a truncated cube site, natural maps between them and
// the finite limits and colimits the rest of the library is built from.
//
// A cubical set stores, per level n, a count of cells numbered 0..|X_n|-1 and
// the action of morphisms. Tabulated sets keep one table per site generator
// and act through the generator word of a morphism; representables and binary
// products act lazily.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubical/cube_site.hpp"

namespace cubical {

using Cell = std::uint32_t;
inline constexpr Cell kNoCell = 0xffffffffu;

class CubSetImpl {
 public:
  explicit CubSetImpl(SitePtr site) : site_(std::move(site)) {}
  virtual ~CubSetImpl() = default;

  const SitePtr& site() const { return site_; }
  virtual std::size_t size(unsigned n) const = 0;
  /// x . f for f : m -> n and x in X_n; the result lies in X_m.
  virtual Cell act(MorId f, Cell x) const = 0;
  virtual std::string label(unsigned n, Cell x) const;
  /// Action table of the i-th site generator if the implementation stores one.
  virtual const Cell* generator_table(std::size_t) const { return nullptr; }

 protected:
  SitePtr site_;
};

class CubSet {
 public:
  CubSet() = default;
  explicit CubSet(std::shared_ptr<const CubSetImpl> impl, std::string name = {})
      : impl_(std::move(impl)), name_(std::move(name)) {}

  bool valid() const { return impl_ != nullptr; }
  const SitePtr& site() const { return impl_->site(); }
  unsigned max_dim() const { return site()->max_dim(); }
  std::size_t size(unsigned n) const { return impl_->size(n); }
  std::size_t total_cells() const;
  Cell act(MorId f, Cell x) const { return impl_->act(f, x); }
  std::string label(unsigned n, Cell x) const { return impl_->label(n, x); }
  const Cell* generator_table(std::size_t i) const { return impl_->generator_table(i); }

  const std::string& name() const { return name_; }
  CubSet named(std::string name) const { return CubSet(impl_, std::move(name)); }
  const CubSetImpl* impl() const { return impl_.get(); }
  bool same_as(const CubSet& o) const { return impl_ == o.impl_; }
  /// Same site and same level sizes.
  bool same_shape(const CubSet& o) const;

 private:
  std::shared_ptr<const CubSetImpl> impl_;
  std::string name_;
};

/// Builds a tabulated cubical set from generator tables.
class CubSetBuilder {
 public:
  explicit CubSetBuilder(SitePtr site);

  void set_size(unsigned n, std::size_t count);
  void set_labels(unsigned n, std::vector<std::string> labels);
  /// table[x] = x . g for x in X_{cod g}.
  void set_action(MorId generator, std::vector<Cell> table);
  /// Fills every generator table from `act` (called as act(g, x)).
  void set_action_from(const std::function<Cell(MorId, Cell)>& act);
  /// Throws ContractError if a table is missing or out of range. Functoriality is
  /// not checked here; see check_functoriality.
  CubSet build(std::string name = {}) const;

 private:
  SitePtr site_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Cell>> tables_;
  std::vector<bool> have_;
};

struct FunctorialityViolation {
  unsigned level = 0;
  Cell cell = 0;
  MorId f = 0;
  MorId g = 0;  // (x . f) . g differs from x . (f o g)
  std::string describe(const CubeSite& site) const;
};

/// Exhaustive when sum_n |X_n| * |hom(-, n)| is at most `exhaustive_limit`,
/// otherwise checks `samples` random pairs drawn with `seed`.
std::optional<FunctorialityViolation> check_functoriality(const CubSet& x, std::size_t exhaustive_limit = 1u << 22,
                                                          std::size_t samples = 200000, std::uint64_t seed = 1);

CubSet terminal(const SitePtr& site);
CubSet initial(const SitePtr& site);
/// y(n); cells at level m are the codes of hom(m, n). Cached per site.
CubSet yoneda(const SitePtr& site, unsigned n);
/// Copy of x with explicit generator tables.
CubSet tabulate(const CubSet& x);
/// x viewed over the smaller site `to` (levels above to.max_dim() are dropped).
CubSet restrict_to_site(const CubSet& x, const SitePtr& to);

class PshMap {
 public:
  PshMap() = default;
  PshMap(CubSet dom, CubSet cod, std::vector<std::vector<Cell>> levels);

  const CubSet& dom() const { return dom_; }
  const CubSet& cod() const { return cod_; }
  Cell operator()(unsigned n, Cell x) const { return levels_[n][x]; }
  const std::vector<Cell>& level(unsigned n) const { return levels_[n]; }
  const std::vector<std::vector<Cell>>& levels() const { return levels_; }
  bool valid() const { return dom_.valid(); }

  static PshMap identity(const CubSet& x);
  /// Same underlying function on the same shapes.
  friend bool operator==(const PshMap& a, const PshMap& b);

 private:
  CubSet dom_, cod_;
  std::vector<std::vector<Cell>> levels_;
};

/// g o f.
PshMap compose(const PshMap& g, const PshMap& f);
PshMap compose(const PshMap& h, const PshMap& g, const PshMap& f);
/// The map with the same function but new (same-shaped) endpoints.
PshMap retype(const PshMap& f, const CubSet& dom, const CubSet& cod);

struct NaturalityViolation {
  unsigned level = 0;
  Cell cell = 0;
  MorId generator = 0;
  std::string describe(const CubeSite& site) const;
};

/// Checks f(x . g) = f(x) . g on every cell and generator.
std::optional<NaturalityViolation> check_naturality(const PshMap& f);
bool is_mono(const PshMap& f);
bool is_iso(const PshMap& f);
/// Inverse of an isomorphism (ContractError otherwise).
PshMap inverse(const PshMap& f);

/// Unique map to the terminal object, and from the initial one.
PshMap to_terminal(const CubSet& x, const CubSet& one);
PshMap from_initial(const CubSet& zero, const CubSet& x);
/// The map y(n) -> X classifying `cell` in X_n.
PshMap yoneda_map(const CubSet& yn, unsigned n, const CubSet& x, Cell cell);
/// y(f) : y(m) -> y(n) for f : m -> n.
PshMap yoneda_mor(const CubSet& ym, const CubSet& yn, MorId f);

/// Fibers of a map: sorted preimage lists per cell of the codomain.
class Fibers {
 public:
  explicit Fibers(const PshMap& f);
  std::span<const Cell> of(unsigned n, Cell y) const;

 private:
  std::vector<std::vector<std::uint32_t>> start_;
  std::vector<std::vector<Cell>> cells_;
};

struct Product {
  CubSet obj;
  PshMap p1, p2;
  Cell pack(unsigned n, Cell a, Cell b) const;
  PshMap pair(const PshMap& f, const PshMap& g) const;
};
Product product(const CubSet& a, const CubSet& b);
/// f x g between products.
PshMap product_map(const Product& from, const Product& to, const PshMap& f, const PshMap& g);

struct Coproduct {
  CubSet obj;
  PshMap i1, i2;
  PshMap copair(const PshMap& f, const PshMap& g) const;
};
Coproduct coproduct(const CubSet& a, const CubSet& b);

/// Pullback of f : A -> C and g : B -> C; cells are pairs (a, b) with f a = g b,
/// sorted lexicographically per level.
struct Pullback {
  CubSet obj;
  PshMap p1, p2;
  PshMap f, g;
  std::vector<std::vector<std::pair<Cell, Cell>>> pairs;
  std::optional<Cell> find(unsigned n, Cell a, Cell b) const;
  /// The induced W -> obj from a : W -> A and b : W -> B with f a = g b.
  PshMap mediator(const PshMap& a, const PshMap& b) const;
};
Pullback pullback(const PshMap& f, const PshMap& g);

/// Pushout of f : C -> A and g : C -> B. i1 : A -> obj, i2 : B -> obj.
struct Pushout {
  CubSet obj;
  PshMap i1, i2;
  PshMap f, g;
  /// The induced obj -> W from a : A -> W and b : B -> W with a f = b g.
  PshMap mediator(const PshMap& a, const PshMap& b) const;
};
Pushout pushout(const PshMap& f, const PshMap& g);

/// A subobject given by per-level membership closed under restriction.
struct Subobject {
  CubSet obj;
  PshMap incl;
};
Subobject subobject(const CubSet& x, const std::vector<std::vector<bool>>& member);
/// Smallest subobject containing the given cells (per level).
Subobject generated_subobject(const CubSet& x, const std::vector<std::vector<Cell>>& cells);
Subobject image(const PshMap& f);

/// Cells of x that are not restrictions of lower-dimensional cells, per level.
std::vector<std::vector<Cell>> top_generating_cells(const CubSet& x);
/// True iff every cell at level >= n is a restriction of a cell of level < n.
bool generated_below(const CubSet& x, unsigned n);

}  // namespace cubical
