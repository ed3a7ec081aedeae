#include "cubical/sieve.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "cubical/errors.hpp"

namespace cubical {

Sieve::Sieve(SitePtr site, unsigned n) : site_(std::move(site)), n_(n) {
  if (n > site_->max_dim()) throw TruncationError("sieve on y(" + std::to_string(n) + ") above the dimension cap");
  member_.resize(site_->max_dim() + 1);
  for (unsigned m = 0; m <= site_->max_dim(); ++m) member_[m].assign(site_->hom_size(m, n), false);
}

Sieve Sieve::full(SitePtr site, unsigned n) {
  Sieve s(std::move(site), n);
  for (auto& row : s.member_) row.assign(row.size(), true);
  s.recount();
  return s;
}

Sieve Sieve::principal(SitePtr site, MorId h) { return generated(site, site->cod(h), {h}); }

Sieve Sieve::generated(SitePtr site, unsigned n, const std::vector<MorId>& gens) {
  Sieve s(site, n);
  const CubeSite& c = *site;
  for (MorId h : gens) {
    if (c.cod(h) != n) throw ContractError("sieve generator has the wrong codomain");
    if (s.contains(h)) continue;
    for (unsigned l = 0; l <= c.max_dim(); ++l)
      for (std::size_t code = 0; code < c.hom_size(l, c.dom(h)); ++code)
        s.member_[l][c.code(c.compose(h, c.mor(l, c.dom(h), code)))] = true;
  }
  s.recount();
  return s;
}

Sieve Sieve::from_membership(SitePtr site, unsigned n, std::vector<std::vector<bool>> member) {
  Sieve s(std::move(site), n);
  if (member.size() != s.member_.size()) throw ContractError("sieve membership has the wrong number of levels");
  for (std::size_t m = 0; m < member.size(); ++m)
    if (member[m].size() != s.member_[m].size()) throw ContractError("sieve membership has the wrong size");
  s.member_ = std::move(member);
  s.recount();
  return s;
}

void Sieve::recount() {
  count_ = 0;
  for (const auto& row : member_) count_ += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  gens_.reset();
}

std::size_t Sieve::size(unsigned m) const {
  return static_cast<std::size_t>(std::count(member_[m].begin(), member_[m].end(), true));
}

bool Sieve::is_full() const { return member_[n_][site_->code(site_->identity(n_))]; }

std::vector<MorId> Sieve::members(unsigned m) const {
  std::vector<MorId> out;
  for (std::size_t c = 0; c < member_[m].size(); ++c)
    if (member_[m][c]) out.push_back(site_->mor(m, n_, c));
  return out;
}

std::vector<MorId> Sieve::members() const {
  std::vector<MorId> out;
  for (unsigned m = 0; m < member_.size(); ++m) {
    auto v = members(m);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Sieve Sieve::pullback(MorId b) const {
  const CubeSite& c = *site_;
  if (c.cod(b) != n_) throw ContractError("sieve pullback: morphism does not land in the sieve's target");
  unsigned m = c.dom(b);
  Sieve out(site_, m);
  for (unsigned l = 0; l <= c.max_dim(); ++l)
    for (std::size_t code = 0; code < c.hom_size(l, m); ++code)
      out.member_[l][code] = contains(c.compose(b, c.mor(l, m, code)));
  out.recount();
  return out;
}

Sieve Sieve::unite(const Sieve& o) const {
  if (o.n_ != n_) throw ContractError("sieve union: different targets");
  Sieve out = *this;
  for (unsigned m = 0; m < member_.size(); ++m)
    for (std::size_t c = 0; c < member_[m].size(); ++c)
      if (o.member_[m][c]) out.member_[m][c] = true;
  out.recount();
  return out;
}

bool Sieve::subset_of(const Sieve& o) const {
  for (unsigned m = 0; m < member_.size(); ++m)
    for (std::size_t c = 0; c < member_[m].size(); ++c)
      if (member_[m][c] && !o.member_[m][c]) return false;
  return true;
}

const std::vector<MorId>& Sieve::generators() const {
  if (gens_) return *gens_;
  const CubeSite& c = *site_;
  // Greedy cover from dimension 0 up, then drop generators implied by the others,
  // highest dimension first, so that generators sit as low as possible.
  std::vector<MorId> chosen;
  Sieve covered(site_, n_);
  for (unsigned m = 0; m <= c.max_dim(); ++m)
    for (std::size_t code = 0; code < member_[m].size(); ++code) {
      if (!member_[m][code] || covered.member_[m][code]) continue;
      MorId h = c.mor(m, n_, code);
      chosen.push_back(h);
      covered = covered.unite(principal(site_, h));
    }
  std::vector<MorId> kept = chosen;
  for (std::size_t i = kept.size(); i-- > 0;) {
    std::vector<MorId> others;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (j != i) others.push_back(kept[j]);
    if (generated(site_, n_, others).contains(kept[i])) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
  }
  gens_ = std::make_shared<std::vector<MorId>>(std::move(kept));
  return *gens_;
}

Subobject Sieve::as_subobject(const CubSet& yn) const { return subobject(yn, member_); }

std::string Sieve::to_string() const {
  std::string s = "sieve(" + std::to_string(n_) + "; ";
  const auto& g = generators();
  if (g.empty()) return s + "empty)";
  for (std::size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + site_->value(g[i]).to_string();
  return s + ")";
}

std::size_t Sieve::hash() const {
  std::size_t h = n_ * 0x9e3779b97f4a7c15ull;
  for (const auto& row : member_)
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c]) h = (h ^ (c + 0x51ed27)) * 0x100000001b3ull;
  return h;
}

bool operator<(const Sieve& a, const Sieve& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  if (a.count_ != b.count_) return a.count_ < b.count_;
  for (unsigned m = 0; m < a.member_.size(); ++m)
    for (std::size_t c = 0; c < a.member_[m].size(); ++c)
      if (a.member_[m][c] != b.member_[m][c]) return a.member_[m][c];
  return false;
}

namespace {

struct SieveCacheEntry {
  std::vector<Sieve> sieves;
  std::unordered_map<Sieve, std::size_t, SieveHash> index;
  std::size_t failed_budget = 0;  // largest budget already known to be exceeded
  SitePtr keep;
};

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<std::pair<const CubeSite*, unsigned>, SieveCacheEntry>& cache() {
  static std::map<std::pair<const CubeSite*, unsigned>, SieveCacheEntry> c;
  return c;
}

std::vector<Sieve> enumerate_sieves(const SitePtr& site, unsigned n, std::size_t budget) {
  const CubeSite& c = *site;
  // Sieves are exactly the unions of principal sieves. Adding principals one at a
  // time keeps the family closed under unions: F' = F u { S u P : S in F }.
  std::unordered_set<Sieve, SieveHash> family;
  family.insert(Sieve(site, n));
  auto over = [&] {
    throw BudgetExceeded("more than " + std::to_string(budget) + " sieves on y(" + std::to_string(n) + ") at N = " +
                         std::to_string(c.max_dim()));
  };
  for (unsigned m = 0; m <= c.max_dim(); ++m)
    for (std::size_t code = 0; code < c.hom_size(m, n); ++code) {
      MorId h = c.mor(m, n, code);
      Sieve p = Sieve::principal(site, h);
      if (family.count(p)) {
        // Already a union of earlier principals; all its unions are present.
        continue;
      }
      std::vector<Sieve> add;
      for (const Sieve& s : family) {
        Sieve u = s.unite(p);
        if (!family.count(u)) add.push_back(std::move(u));
      }
      for (auto& s : add) {
        family.insert(std::move(s));
        if (family.size() > budget) over();
      }
    }
  std::vector<Sieve> out(family.begin(), family.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const std::vector<Sieve>& subobjects_of_representable(const SitePtr& site, unsigned n, std::size_t budget) {
  if (n > site->max_dim()) throw TruncationError("subobjects of y(" + std::to_string(n) + ") above the dimension cap");
  std::lock_guard lock(cache_mutex());
  auto& e = cache()[{site.get(), n}];
  e.keep = site;
  if (!e.sieves.empty()) {
    if (e.sieves.size() > budget)
      throw BudgetExceeded("more than " + std::to_string(budget) + " sieves on y(" + std::to_string(n) + ")");
    return e.sieves;
  }
  if (e.failed_budget >= budget)
    throw BudgetExceeded("more than " + std::to_string(budget) + " sieves on y(" + std::to_string(n) + ") at N = " +
                         std::to_string(site->max_dim()));
  try {
    e.sieves = enumerate_sieves(site, n, budget);
  } catch (const BudgetExceeded&) {
    e.failed_budget = budget;
    throw;
  }
  for (std::size_t i = 0; i < e.sieves.size(); ++i) e.index.emplace(e.sieves[i], i);
  return e.sieves;
}

std::size_t sieve_index(const Sieve& s, std::size_t budget) {
  subobjects_of_representable(s.site(), s.target(), budget);
  std::lock_guard lock(cache_mutex());
  const auto& e = cache()[{s.site().get(), s.target()}];
  auto it = e.index.find(s);
  if (it == e.index.end()) throw ContractError("sieve_index: not a sieve of this site");
  return it->second;
}

Sieve box_sieve(const Sieve& s, unsigned k) {
  const SitePtr& site = s.site();
  const CubeSite& c = *site;
  unsigned n = s.target();
  Sieve out(site, n + 1);
  for (unsigned m = 0; m <= c.max_dim(); ++m) {
    std::size_t rest = c.hom_size(m, n);
    auto constant = k ? c.algebra(m).top() : c.algebra(m).bottom();
    for (std::size_t code = 0; code < c.hom_size(m, n + 1); ++code)
      out.member_[m][code] = code / rest == constant || s.contains(m, code % rest);
  }
  out.recount();
  return out;
}

}  // namespace cubical
