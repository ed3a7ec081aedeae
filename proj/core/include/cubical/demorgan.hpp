#pragma once

// Free de Morgan algebras on finitely many generators.
//
// An element is stored in irredundant disjunctive normal form: a set of
// clauses, each clause a set of literals, with no clause contained in another.
// De Morgan algebras have no complement law, so a clause may contain both a
// generator and its negation and x /\ !x is not bottom.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cubical {

inline constexpr unsigned kMaxDmArity = 8;

/// Generator `generator` (0-based), possibly negated.
struct Literal {
  std::uint8_t generator = 0;
  bool negated = false;

  constexpr unsigned bit() const { return 2u * generator + (negated ? 1u : 0u); }
  friend constexpr bool operator==(Literal, Literal) = default;
};

/// A clause is a conjunction of literals, one bit per literal (bit 2g is x_g, bit 2g+1 is !x_g).
using ClauseMask = std::uint16_t;

/// True iff clause `a` precedes clause `b`: smaller clauses first, then by sorted literal list.
bool clause_less(ClauseMask a, ClauseMask b);

class DmElem {
 public:
  /// Bottom element of the algebra on `arity` generators.
  explicit DmElem(unsigned arity = 0);

  static DmElem bottom(unsigned arity) { return DmElem(arity); }
  static DmElem top(unsigned arity);
  static DmElem generator(unsigned arity, unsigned index, bool negated = false);
  /// Normalizes an arbitrary clause list (duplicates and absorbed clauses are dropped).
  static DmElem from_clauses(unsigned arity, std::vector<ClauseMask> clauses);

  unsigned arity() const { return arity_; }
  const std::vector<ClauseMask>& clauses() const { return clauses_; }

  bool is_bottom() const { return clauses_.empty(); }
  bool is_top() const { return clauses_.size() == 1 && clauses_[0] == 0; }

  std::string to_string() const;

  friend bool operator==(const DmElem&, const DmElem&) = default;
  /// Deterministic total order: lexicographic over the ordered clause lists.
  friend bool operator<(const DmElem& a, const DmElem& b);

 private:
  DmElem(unsigned arity, std::vector<ClauseMask> normalized, int)
      : arity_(static_cast<std::uint8_t>(arity)), clauses_(std::move(normalized)) {}

  std::uint8_t arity_;
  std::vector<ClauseMask> clauses_;
};

DmElem dm_join(const DmElem& a, const DmElem& b);
DmElem dm_meet(const DmElem& a, const DmElem& b);
DmElem dm_neg(const DmElem& a);

/// Image of `a` under the homomorphism sending generator i to sigma[i].
/// All sigma values must share one arity; the result has that arity.
/// `target_arity` is used when sigma is empty (a constant is then re-typed).
DmElem dm_subst(const DmElem& a, std::span<const DmElem> sigma, unsigned target_arity);
DmElem dm_subst(const DmElem& a, std::span<const DmElem> sigma);

/// Default cap on enumeration arity. Arity 3 already has 7 828 354 elements.
inline constexpr unsigned kDefaultEnumerationCap = 2;

/// Every element of the free algebra on n generators, sorted by operator<.
std::vector<DmElem> dm_enumerate(unsigned n, unsigned cap = kDefaultEnumerationCap);

/// Parses `0`, `1`, `xN`, `!xN` (N counted from 1) combined with `/\` and `\/`.
/// Parentheses are optional; `/\` binds tighter than `\/`. `!` may prefix any atom.
DmElem dm_parse(std::string_view text, unsigned arity);

struct DmElemHash {
  std::size_t operator()(const DmElem& e) const;
};

/// Dense indexing of one enumerated algebra with operation tables.
class DmTable {
 public:
  using Index = std::uint16_t;

  explicit DmTable(unsigned arity, unsigned cap = kDefaultEnumerationCap);

  unsigned arity() const { return arity_; }
  std::size_t size() const { return elems_.size(); }
  const DmElem& elem(Index i) const { return elems_[i]; }
  const std::vector<DmElem>& elems() const { return elems_; }
  Index index_of(const DmElem& e) const;

  Index join(Index a, Index b) const { return join_[a * size() + b]; }
  Index meet(Index a, Index b) const { return meet_[a * size() + b]; }
  Index neg(Index a) const { return neg_[a]; }
  Index bottom() const { return bottom_; }
  Index top() const { return top_; }
  Index generator(unsigned g, bool negated = false) const;

  /// Evaluates element `e` (of any arity k) at the k-tuple `args` of this table's elements.
  Index eval(const DmElem& e, std::span<const Index> args) const;

 private:
  unsigned arity_;
  std::vector<DmElem> elems_;
  std::unordered_map<DmElem, Index, DmElemHash> index_;
  std::vector<Index> join_, meet_, neg_;
  Index bottom_ = 0, top_ = 0;
};

}  // namespace cubical
