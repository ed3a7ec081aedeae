#pragma once

// Sieves on representables, i.e. subobjects of y(n), and their enumeration.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cubical/presheaf.hpp"

namespace cubical {

class Sieve {
 public:
  Sieve() = default;
  /// The empty sieve on y(n).
  Sieve(SitePtr site, unsigned n);
  static Sieve full(SitePtr site, unsigned n);
  /// The sieve generated by h : m -> n.
  static Sieve principal(SitePtr site, MorId h);
  /// Sieve generated by a list of morphisms into n.
  static Sieve generated(SitePtr site, unsigned n, const std::vector<MorId>& gens);
  /// Sieve with the given membership member[m][code] over hom(m, n); the caller
  /// guarantees closure under precomposition.
  static Sieve from_membership(SitePtr site, unsigned n, std::vector<std::vector<bool>> member);

  const SitePtr& site() const { return site_; }
  unsigned target() const { return n_; }
  bool contains(MorId f) const { return member_[site_->dom(f)][site_->code(f)]; }
  bool contains(unsigned m, std::size_t code) const { return member_[m][code]; }
  std::size_t size() const { return count_; }
  std::size_t size(unsigned m) const;
  bool is_empty() const { return count_ == 0; }
  bool is_full() const;
  /// Members at level m in increasing code order.
  std::vector<MorId> members(unsigned m) const;
  std::vector<MorId> members() const;

  /// b^* S = { h : b o h in S } for b : m -> n.
  Sieve pullback(MorId b) const;
  Sieve unite(const Sieve& o) const;
  bool subset_of(const Sieve& o) const;
  /// An irredundant generating set of lowest possible dimensions, in increasing
  /// dimension then increasing code.
  const std::vector<MorId>& generators() const;

  /// S as a cubical set, with its inclusion into y(n).
  Subobject as_subobject(const CubSet& yn) const;

  std::string to_string() const;
  std::size_t hash() const;
  friend bool operator==(const Sieve& a, const Sieve& b) { return a.n_ == b.n_ && a.member_ == b.member_; }
  /// Size first, then lexicographic on (level, code).
  friend bool operator<(const Sieve& a, const Sieve& b);

 private:
  friend Sieve box_sieve(const Sieve& s, unsigned k);
  void recount();

  SitePtr site_;
  unsigned n_ = 0;
  std::vector<std::vector<bool>> member_;  // member_[m][code] over hom(m, n)
  std::size_t count_ = 0;
  mutable std::shared_ptr<std::vector<MorId>> gens_;
};

struct SieveHash {
  std::size_t operator()(const Sieve& s) const { return s.hash(); }
};

inline constexpr std::size_t kDefaultSieveBudget = 4096;

/// All sieves on y(n) in the order of operator<: the empty sieve first, the full
/// sieve last. BudgetExceeded when there are more than `budget`. Results are
/// cached per (site, n).
const std::vector<Sieve>& subobjects_of_representable(const SitePtr& site, unsigned n,
                                                      std::size_t budget = kDefaultSieveBudget);
/// Position of a sieve in subobjects_of_representable.
std::size_t sieve_index(const Sieve& s, std::size_t budget = kDefaultSieveBudget);

/// box_k(S) on y(n+1): pairs (u, v) with v in S or u the constant k.
Sieve box_sieve(const Sieve& s, unsigned k);

}  // namespace cubical
