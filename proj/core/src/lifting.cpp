#include "cubical/lifting.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "cubical/errors.hpp"

namespace cubical {

namespace {

constexpr std::uint16_t kNoGen = 0xffff;

std::string labels(const CubSet& x, std::span<const Cell> cells, std::span<const unsigned> levels) {
  std::string s = "[";
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? ", " : "") + x.label(levels[i], cells[i]);
  return s + "]";
}

// Preimage of each cell under a mono, kNoCell off the image.
std::vector<std::vector<Cell>> preimages(const PshMap& m) {
  const unsigned L = m.dom().max_dim() + 1;
  std::vector<std::vector<Cell>> inv(L);
  for (unsigned n = 0; n < L; ++n) {
    inv[n].assign(m.cod().size(n), kNoCell);
    for (std::size_t a = 0; a < m.dom().size(n); ++a) {
      Cell b = m(n, static_cast<Cell>(a));
      if (inv[n][b] != kNoCell) throw ContractError("expected a monomorphism");
      inv[n][b] = static_cast<Cell>(a);
    }
  }
  return inv;
}

// b^*(image of m) for a cell b of B_n.
Sieve pulled_back_sieve(const CubSet& b_set, const std::vector<std::vector<Cell>>& inv, unsigned n, Cell b) {
  const CubeSite& s = *b_set.site();
  std::vector<std::vector<bool>> member(s.max_dim() + 1);
  for (unsigned m = 0; m <= s.max_dim(); ++m) {
    member[m].resize(s.hom_size(m, n));
    for (std::size_t code = 0; code < member[m].size(); ++code)
      member[m][code] = inv[m][b_set.act(s.mor(m, n, code), b)] != kNoCell;
  }
  return Sieve::from_membership(b_set.site(), n, std::move(member));
}

}  // namespace

bool commutes(const LiftingProblem& p) { return compose(p.right, p.top) == compose(p.bottom, p.left); }

bool fills(const LiftingProblem& p, const PshMap& diag) {
  return compose(diag, p.left) == p.top && compose(p.right, diag) == p.bottom && !check_naturality(diag);
}

std::optional<PshMap> brute_force_fill(const LiftingProblem& p, SearchBudget& budget) {
  if (!commutes(p)) throw ContractError("brute_force_fill: the square does not commute");
  const CubSet& B = p.left.cod();
  const unsigned L = B.max_dim() + 1;
  Fibers fib(p.right);
  // Fixed values where b is in the image of left; conflicting values mean no filler.
  std::vector<std::vector<Cell>> fixed(L);
  for (unsigned n = 0; n < L; ++n) {
    fixed[n].assign(B.size(n), kNoCell);
    for (std::size_t a = 0; a < p.left.dom().size(n); ++a) {
      Cell b = p.left(n, static_cast<Cell>(a)), x = p.top(n, static_cast<Cell>(a));
      if (fixed[n][b] != kNoCell && fixed[n][b] != x) return std::nullopt;
      fixed[n][b] = x;
    }
  }
  std::vector<std::vector<Cell>> single(L);
  for (unsigned n = 0; n < L; ++n) single[n] = fixed[n];
  CandidateFn cand = [&](unsigned n, Cell b) -> std::span<const Cell> {
    if (fixed[n][b] == kNoCell) return fib.of(n, p.bottom(n, b));
    auto over = fib.of(n, p.bottom(n, b));
    if (!std::binary_search(over.begin(), over.end(), fixed[n][b])) return {};
    return std::span<const Cell>(&single[n][b], 1);
  };
  return find_natural_map(B, p.right.dom(), cand, budget);
}

// ---------------------------------------------------------------------------

SievePresentation::SievePresentation(Sieve s) : sieve_(std::move(s)) {
  const CubeSite& c = *sieve_.site();
  const unsigned n = sieve_.target(), L = c.max_dim() + 1;
  gens_ = sieve_.generators();
  factor_.resize(L);
  for (unsigned m = 0; m < L; ++m) factor_[m].assign(c.hom_size(m, n), {kNoGen, 0});
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    auto& f = factor_[c.dom(gens_[i])][c.code(gens_[i])];
    if (f.first == kNoGen) f = {static_cast<std::uint16_t>(i), c.identity(c.dom(gens_[i]))};
  }
  // Points (i, w) with w : m -> dom gens[i], numbered per generator and level.
  std::vector<std::vector<std::size_t>> base(gens_.size(), std::vector<std::size_t>(L + 1, 0));
  std::size_t points = 0;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    unsigned l = c.dom(gens_[i]);
    for (unsigned m = 0; m < L; ++m) {
      base[i][m] = points;
      points += c.hom_size(m, l);
    }
    base[i][L] = points;
  }
  auto point = [&](std::size_t i, MorId w) { return base[i][c.dom(w)] + c.code(w); };
  // Every extra factorization must agree with the first one; keep those not
  // already implied by precomposing the kept ones.
  std::vector<std::tuple<unsigned, std::uint16_t, MorId, std::uint16_t, MorId>> span;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    unsigned l = c.dom(gens_[i]);
    for (unsigned m = 0; m < L; ++m)
      for (std::size_t code = 0; code < c.hom_size(m, l); ++code) {
        MorId w = c.mor(m, l, code);
        MorId h = c.compose(gens_[i], w);
        auto& f = factor_[m][c.code(h)];
        if (f.first == kNoGen) {
          f = {static_cast<std::uint16_t>(i), w};
          continue;
        }
        if (f.first == i && f.second == w) continue;
        span.emplace_back(m, f.first, f.second, static_cast<std::uint16_t>(i), w);
      }
  }
  std::stable_sort(span.begin(), span.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  std::vector<std::size_t> parent(points);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [m, i, wi, j, wj] : span) {
    if (find(point(i, wi)) == find(point(j, wj))) continue;
    relations_.push_back({std::min(i, j), std::max(i, j), i <= j ? wi : wj, i <= j ? wj : wi});
    for (unsigned q = 0; q < L; ++q)
      for (std::size_t code = 0; code < c.hom_size(q, m); ++code) {
        MorId f = c.mor(q, m, code);
        std::size_t a = find(point(i, c.compose(wi, f))), b = find(point(j, c.compose(wj, f)));
        if (a != b) parent[a] = b;
      }
  }
  std::stable_sort(relations_.begin(), relations_.end(), [](const Relation& a, const Relation& b) { return a.j < b.j; });
}

std::shared_ptr<const SievePresentation> SievePresentation::of(const Sieve& s) {
  static std::mutex mutex;
  static std::map<std::pair<const CubeSite*, unsigned>, std::unordered_map<Sieve, std::shared_ptr<const SievePresentation>, SieveHash>> cache;
  {
    std::lock_guard lock(mutex);
    auto& m = cache[{s.site().get(), s.target()}];
    if (auto it = m.find(s); it != m.end()) return it->second;
  }
  auto p = std::make_shared<const SievePresentation>(s);
  std::lock_guard lock(mutex);
  return cache[{s.site().get(), s.target()}].emplace(s, p).first->second;
}

std::pair<std::uint16_t, MorId> SievePresentation::factor(MorId member) const {
  const CubeSite& c = *sieve_.site();
  auto f = factor_[c.dom(member)][c.code(member)];
  if (f.first == kNoGen) throw ContractError("not a member of the sieve: " + c.value(member).to_string());
  return f;
}

Cell SievePresentation::eval(const CubSet& x, std::span<const Cell> vals, MorId member) const {
  auto [i, w] = factor(member);
  return x.act(w, vals[i]);
}

void SievePresentation::enumerate(const CubSet& x, const std::function<std::span<const Cell>(std::size_t)>& cand,
                                  const std::function<void(std::span<const Cell>)>& visit) const {
  const std::size_t G = gens_.size();
  std::vector<Cell> vals(G, kNoCell);
  std::vector<std::size_t> rel_begin(G + 1, 0);
  for (const auto& r : relations_) ++rel_begin[r.j + 1];
  std::partial_sum(rel_begin.begin(), rel_begin.end(), rel_begin.begin());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == G) {
      visit(vals);
      return;
    }
    for (Cell v : cand(i)) {
      vals[i] = v;
      bool ok = true;
      for (std::size_t r = rel_begin[i]; r < rel_begin[i + 1] && ok; ++r) {
        const Relation& rel = relations_[r];
        ok = x.act(rel.wi, vals[rel.i]) == x.act(rel.wj, vals[rel.j]);
      }
      if (ok) rec(i + 1);
    }
    vals[i] = kNoCell;
  };
  rec(0);
}

// ---------------------------------------------------------------------------

std::size_t GeneratorProblems::KeyHash::operator()(const std::vector<Cell>& v) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Cell c : v) h = (h ^ c) * 0x100000001b3ull;
  return h;
}

GeneratorProblems::GeneratorProblems(PshMap f, StructureKind kind, std::uint64_t max_nodes)
    : f_(std::move(f)), kind_(kind), site_(f_.dom().site()) {
  if (kind_ == StructureKind::fibration) {
    if (site_->max_dim() == 0) throw TruncationError("fibration problems need dimension at least 1");
    lower_ = CubeSite::shared(site_->max_dim() - 1);
  } else {
    lower_ = site_;
  }
  add_families();
  enumerate_nodes(max_nodes);
  build_edges();
}

void GeneratorProblems::add_families() {
  const unsigned N = site_->max_dim();
  family_at_.resize(2 * (N + 1));
  const unsigned ks = kind_ == StructureKind::fibration ? 2 : 1;
  const unsigned top = kind_ == StructureKind::fibration ? N - 1 : N;
  for (unsigned k = 0; k < ks; ++k)
    for (unsigned n = 0; n <= top; ++n) {
      const auto& sieves = subobjects_of_representable(site_, n);
      for (std::size_t i = 0; i < sieves.size(); ++i) {
        Family fam;
        fam.k = k;
        fam.n = n;
        fam.sieve = i;
        if (kind_ == StructureKind::fibration) {
          fam.level = n + 1;
          fam.shape = SievePresentation::of(box_sieve(sieves[i], k));
        } else {
          fam.level = n;
          fam.shape = SievePresentation::of(sieves[i]);
        }
        family_at_[k * (N + 1) + n].push_back(families_.size());
        families_.push_back(std::move(fam));
      }
    }
}

std::size_t GeneratorProblems::family_index(unsigned k, unsigned n, std::size_t sieve) const {
  return family_at_.at(k * (site_->max_dim() + 1) + n).at(sieve);
}

void GeneratorProblems::enumerate_nodes(std::uint64_t max_nodes) {
  const CubeSite& s = *site_;
  const CubSet &X = f_.dom(), &Y = f_.cod();
  Fibers fib(f_);
  val_begin_.push_back(0);
  cand_begin_.push_back(0);
  for (std::size_t fi = 0; fi < families_.size(); ++fi) {
    const Family& fam = families_[fi];
    const auto& gens = fam.shape->gens();
    for (std::size_t t = 0; t < Y.size(fam.level); ++t) {
      std::vector<Cell> over(gens.size());
      for (std::size_t j = 0; j < gens.size(); ++j) over[j] = Y.act(gens[j], static_cast<Cell>(t));
      fam.shape->enumerate(
          X, [&](std::size_t j) { return fib.of(s.dom(gens[j]), over[j]); },
          [&](std::span<const Cell> vals) {
            if (family_of_.size() >= max_nodes)
              throw BudgetExceeded("more than " + std::to_string(max_nodes) + " generating lifting problems");
            auto id = static_cast<std::uint32_t>(family_of_.size());
            family_of_.push_back(static_cast<std::uint32_t>(fi));
            base_.push_back(static_cast<Cell>(t));
            vals_.insert(vals_.end(), vals.begin(), vals.end());
            val_begin_.push_back(static_cast<std::uint32_t>(vals_.size()));
            for (Cell x : fib.of(fam.level, static_cast<Cell>(t))) {
              bool ok = true;
              for (std::size_t j = 0; j < gens.size() && ok; ++j) ok = X.act(gens[j], x) == vals[j];
              if (ok) cands_.push_back(x);
            }
            cand_begin_.push_back(static_cast<std::uint32_t>(cands_.size()));
            std::vector<Cell> key{static_cast<Cell>(fi), static_cast<Cell>(t)};
            key.insert(key.end(), vals.begin(), vals.end());
            index_.emplace(std::move(key), id);
          });
    }
  }
  if (kind_ == StructureKind::trivial_fibration) {
    level_offset_.assign(s.max_dim() + 2, 0);
    for (std::uint32_t v = 0; v < family_of_.size(); ++v) ++level_offset_[level(v) + 1];
    std::partial_sum(level_offset_.begin(), level_offset_.end(), level_offset_.begin());
  }
}

void GeneratorProblems::build_edges() {
  const CubeSite& s = *site_;
  const CubeSite& low = *lower_;
  const CubSet &X = f_.dom(), &Y = f_.cod();
  const bool fibr = kind_ == StructureKind::fibration;
  // Per family and lower generator: the target family, the edge morphism and
  // how the target's generator values are read off the source's.
  struct Step {
    std::size_t family;
    MorId b;
    std::vector<std::pair<std::uint16_t, MorId>> read;
  };
  std::vector<std::vector<Step>> steps(families_.size());
  for (std::size_t fi = 0; fi < families_.size(); ++fi) {
    const Family& fam = families_[fi];
    const Sieve& S = subobjects_of_representable(site_, fam.n)[fam.sieve];
    for (MorId g0 : low.generators_into(fam.n)) {
      MorId g = fibr ? low.translate(g0, s) : g0;
      unsigned m = s.dom(g);
      Step st;
      st.family = family_index(fam.k, m, sieve_index(S.pullback(g)));
      st.b = fibr ? s.cylinder(g) : g;
      const Family& to = families_[st.family];
      for (MorId h : to.shape->gens()) st.read.push_back(fam.shape->factor(s.compose(st.b, h)));
      steps[fi].push_back(std::move(st));
    }
  }
  std::vector<std::uint8_t> levels(size());
  std::vector<std::tuple<std::uint32_t, std::uint32_t, MorId>> edges;
  std::vector<Cell> key;
  for (std::uint32_t v = 0; v < size(); ++v) {
    levels[v] = static_cast<std::uint8_t>(level(v));
    auto vals = values(v);
    for (const Step& st : steps[family_of_[v]]) {
      key.assign({static_cast<Cell>(st.family), Y.act(st.b, base_[v])});
      for (auto [i, w] : st.read) key.push_back(X.act(w, vals[i]));
      auto it = index_.find(key);
      if (it == index_.end()) throw ContractError("restricted problem missing: " + describe(v));
      edges.emplace_back(v, it->second, st.b);
    }
  }
  graph_ = ConstraintGraph::from_edges(std::move(levels), edges);
}

std::span<const Cell> GeneratorProblems::values(std::uint32_t node) const {
  return {vals_.data() + val_begin_[node], vals_.data() + val_begin_[node + 1]};
}

std::span<const Cell> GeneratorProblems::candidates(std::uint32_t node) const {
  return {cands_.data() + cand_begin_[node], cands_.data() + cand_begin_[node + 1]};
}

std::optional<std::uint32_t> GeneratorProblems::find(std::size_t family, Cell t, std::span<const Cell> vals) const {
  std::vector<Cell> key{static_cast<Cell>(family), t};
  key.insert(key.end(), vals.begin(), vals.end());
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string GeneratorProblems::describe(std::uint32_t node) const {
  const Family& fam = families_[family_of_[node]];
  const CubeSite& s = *site_;
  std::string out;
  if (kind_ == StructureKind::fibration) out += "k=" + std::to_string(fam.k) + " ";
  out += "S=" + subobjects_of_representable(site_, fam.n)[fam.sieve].to_string();
  out += " t=" + f_.cod().label(fam.level, base_[node]);
  std::vector<unsigned> lv;
  for (MorId g : fam.shape->gens()) lv.push_back(s.dom(g));
  out += " s=" + labels(f_.dom(), values(node), lv);
  return out;
}

// ---------------------------------------------------------------------------

Report validate_structure(const LiftingStructure& u) {
  const GeneratorProblems& P = *u.problems;
  const CubeSite& s = *P.map().dom().site();
  const CubSet& X = P.map().dom();
  Report r(u.problems->kind() == StructureKind::fibration ? "uniform fibration" : "uniform trivial fibration");
  r.group("filler size");
  r.record(u.fill.size() == P.size(), "expected " + std::to_string(P.size()) + " fillers, got " + std::to_string(u.fill.size()));
  if (u.fill.size() != P.size()) return r;
  r.group("fillers fill their problems");
  for (std::uint32_t v = 0; v < P.size(); ++v) {
    const auto& fam = P.family(P.family_of(v));
    Cell x = u.fill[v];
    bool ok = x < X.size(fam.level) && P.map()(fam.level, x) == P.base(v);
    auto vals = P.values(v);
    for (std::size_t j = 0; j < vals.size() && ok; ++j) ok = X.act(fam.shape->gens()[j], x) == vals[j];
    r.record(ok, "filler " + (x < X.size(fam.level) ? X.label(fam.level, x) : std::to_string(x)) + " does not fill " +
                     P.describe(v));
  }
  r.group("naturality along generating squares");
  const ConstraintGraph& g = P.graph();
  for (std::uint32_t v = 0; v < P.size(); ++v)
    for (std::uint32_t e = g.begin[v]; e < g.begin[v + 1]; ++e) {
      std::uint32_t w = g.to[e];
      bool ok = u.fill[v] < X.size(P.level(v)) && X.act(g.mor[e], u.fill[v]) == u.fill[w];
      r.record(ok, "naturality fails along " + s.value(g.mor[e]).to_string() + " from " + P.describe(v) + " to " +
                       P.describe(w));
    }
  return r;
}

namespace {

template <class S>
Synthesis<S> synthesize(const PshMap& f, StructureKind kind, SearchBudget& budget) {
  Synthesis<S> out;
  out.problems = std::make_shared<const GeneratorProblems>(f, kind);
  const GeneratorProblems& P = *out.problems;
  std::vector<std::span<const Cell>> cand(P.size());
  for (std::uint32_t v = 0; v < P.size(); ++v) {
    cand[v] = P.candidates(v);
    if (cand[v].empty()) out.unsolvable.push_back(v);
  }
  if (!out.unsolvable.empty()) return out;
  MapSearch search(P.graph(), f.dom(), std::move(cand));
  auto sol = search.first(budget);
  if (!sol) return out;
  S st;
  st.problems = out.problems;
  st.fill = std::move(*sol);
  Report r = validate_structure(st);
  if (!r.ok()) throw ContractError("synthesized structure fails validation: " + r.first_failure().value_or(""));
  out.structure = std::move(st);
  return out;
}

template <class S>
std::vector<S> enumerate_structures(const PshMap& f, StructureKind kind, std::size_t limit, SearchBudget& budget) {
  auto problems = std::make_shared<const GeneratorProblems>(f, kind);
  const GeneratorProblems& P = *problems;
  std::vector<std::span<const Cell>> cand(P.size());
  for (std::uint32_t v = 0; v < P.size(); ++v) {
    cand[v] = P.candidates(v);
    if (cand[v].empty()) return {};
  }
  std::vector<S> out;
  if (limit == 0) return out;
  MapSearch search(P.graph(), f.dom(), std::move(cand));
  search.enumerate(budget, [&](const std::vector<Cell>& sol) {
    S st;
    st.problems = problems;
    st.fill = sol;
    out.push_back(std::move(st));
    return out.size() < limit;
  });
  return out;
}

template <class S>
S forced(const PshMap& f, StructureKind kind) {
  if (!is_iso(f)) throw ContractError("canonical structure needs an isomorphism");
  S st;
  st.problems = std::make_shared<const GeneratorProblems>(f, kind);
  for (std::uint32_t v = 0; v < st.problems->size(); ++v) {
    auto c = st.problems->candidates(v);
    if (c.size() != 1) throw ContractError("problem against an isomorphism without a unique filler");
    st.fill.push_back(c[0]);
  }
  return st;
}

}  // namespace

Synthesis<UniformTrivFib> synth_trivfib(const PshMap& f, SearchBudget& budget) {
  return synthesize<UniformTrivFib>(f, StructureKind::trivial_fibration, budget);
}

Synthesis<UniformFib> synth_fib(const PshMap& f, SearchBudget& budget) {
  return synthesize<UniformFib>(f, StructureKind::fibration, budget);
}

std::vector<UniformTrivFib> enumerate_trivfib_structures(const PshMap& f, std::size_t limit, SearchBudget& budget) {
  return enumerate_structures<UniformTrivFib>(f, StructureKind::trivial_fibration, limit, budget);
}

std::vector<UniformFib> enumerate_fib_structures(const PshMap& f, std::size_t limit, SearchBudget& budget) {
  return enumerate_structures<UniformFib>(f, StructureKind::fibration, limit, budget);
}

UniformTrivFib canonical_trivfib_on_iso(const PshMap& f) { return forced<UniformTrivFib>(f, StructureKind::trivial_fibration); }
UniformFib canonical_fib_on_iso(const PshMap& f) { return forced<UniformFib>(f, StructureKind::fibration); }

// ---------------------------------------------------------------------------

std::vector<OracleResult> oracle_generator_problems(const std::vector<PshMap>& maps, StructureKind kind,
                                                    SearchBudget& budget) {
  std::vector<OracleResult> out(maps.size());
  if (maps.empty()) return out;
  const SitePtr& site = maps[0].dom().site();
  const CubeSite& s = *site;
  const unsigned N = s.max_dim();
  for (const auto& f : maps)
    if (f.dom().site().get() != site.get()) throw ContractError("oracle: maps over different sites");
  const bool fibr = kind == StructureKind::fibration;
  if (fibr && N == 0) throw TruncationError("fibration problems need dimension at least 1");
  std::vector<Fibers> fibers;
  std::vector<std::vector<std::vector<Cell>>> all(maps.size());
  for (std::size_t q = 0; q < maps.size(); ++q) {
    fibers.emplace_back(maps[q]);
    all[q].resize(N + 1);
    for (unsigned m = 0; m <= N; ++m) {
      all[q][m].resize(maps[q].dom().size(m));
      std::iota(all[q][m].begin(), all[q][m].end(), Cell{0});
    }
  }
  for (unsigned k = 0; k < (fibr ? 2u : 1u); ++k)
    for (unsigned n = 0; n <= (fibr ? N - 1 : N); ++n) {
      const auto& sieves = subobjects_of_representable(site, n);
      CubSet yn = yoneda(site, n);
      for (std::size_t si = 0; si < sieves.size(); ++si) {
        // The generating mono i : D -> B, and B free on the cell b0 at level d.
        Subobject sub = sieves[si].as_subobject(yn);
        PshMap left;
        Cell b0;
        unsigned d;
        if (fibr) {
          LeibnizTensor lt = leibniz_tensor(k, sub.incl);
          left = lt.corner;
          d = n + 1;
          b0 = lt.cb.pack(d, s.algebra(d).generator(0), static_cast<Cell>(s.code(s.degeneracy(n, 0))));
        } else {
          left = sub.incl;
          d = n;
          b0 = static_cast<Cell>(s.code(s.identity(n)));
        }
        const CubSet &D = left.dom(), &B = left.cod();
        std::vector<std::vector<MorId>> word(N + 1);  // cell of B -> w with b = b0 . w
        for (unsigned m = 0; m <= N; ++m) {
          word[m].assign(B.size(m), 0);
          std::vector<bool> hit(B.size(m), false);
          for (std::size_t code = 0; code < s.hom_size(m, d); ++code) {
            MorId w = s.mor(m, d, code);
            Cell b = B.act(w, b0);
            if (hit[b]) throw ContractError("oracle: codomain is not free on one cell");
            hit[b] = true;
            word[m][b] = w;
          }
          if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw ContractError("oracle: codomain is not representable");
        }
        ConstraintGraph g = ConstraintGraph::of(D);
        std::vector<std::uint32_t> reps = source_representatives(g);
        std::vector<MorId> rep_word;
        for (std::uint32_t a : reps) rep_word.push_back(word[g.level[a]][left(g.level[a], a - g.offset[g.level[a]])]);
        for (std::size_t q = 0; q < maps.size(); ++q) {
          const PshMap& f = maps[q];
          const CubSet &X = f.dom(), &Y = f.cod();
          std::vector<std::span<const Cell>> cand(g.nodes());
          for (unsigned m = 0; m <= N; ++m)
            for (std::size_t c = 0; c < D.size(m); ++c) cand[g.offset[m] + c] = all[q][m];
          MapSearch search(g, X, std::move(cand));
          OracleResult& res = out[q];
          search.enumerate(budget, [&](const std::vector<Cell>& top) {
            for (std::size_t t = 0; t < Y.size(d); ++t) {
              bool square = true;
              for (std::size_t r = 0; r < reps.size() && square; ++r)
                square = Y.act(rep_word[r], static_cast<Cell>(t)) == f(g.level[reps[r]], top[reps[r]]);
              if (!square) continue;
              ++res.problems;
              bool solved = false;
              for (Cell x : fibers[q].of(d, static_cast<Cell>(t))) {
                bool ok = true;
                for (std::size_t r = 0; r < reps.size() && ok; ++r) ok = X.act(rep_word[r], x) == top[reps[r]];
                if (ok) {
                  solved = true;
                  break;
                }
              }
              if (!solved) {
                ++res.unsolvable;
                res.all_solvable = false;
                if (!res.first_unsolvable)
                  res.first_unsolvable = (fibr ? "k=" + std::to_string(k) + " " : std::string()) + "S=" +
                                         sieves[si].to_string() + " t=" + Y.label(d, static_cast<Cell>(t));
              }
            }
            return true;
          });
        }
      }
    }
  return out;
}

// ---------------------------------------------------------------------------

ClassifierK classifier_k(const SitePtr& site, std::size_t budget) {
  const CubeSite& s = *site;
  CubSetBuilder b(site);
  std::vector<const std::vector<Sieve>*> sieves;
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    sieves.push_back(&subobjects_of_representable(site, n, budget));
    b.set_size(n, sieves.back()->size());
    std::vector<std::string> lab;
    for (const auto& S : *sieves.back()) lab.push_back(S.to_string());
    b.set_labels(n, std::move(lab));
  }
  b.set_action_from([&](MorId g, Cell c) {
    return static_cast<Cell>(sieve_index((*sieves[s.cod(g)])[c].pullback(g), budget));
  });
  ClassifierK k;
  k.obj = b.build("K");
  CubSet one = terminal(site);
  std::vector<std::vector<Cell>> lv(s.max_dim() + 1);
  for (unsigned n = 0; n <= s.max_dim(); ++n) lv[n].push_back(static_cast<Cell>(sieves[n]->size() - 1));
  k.point = PshMap(one, k.obj, std::move(lv));
  return k;
}

PshMap ClassifierK::char_map(const PshMap& mono) const {
  const CubSet& B = mono.cod();
  auto inv = preimages(mono);
  std::vector<std::vector<Cell>> lv(B.max_dim() + 1);
  for (unsigned n = 0; n <= B.max_dim(); ++n)
    for (std::size_t b = 0; b < B.size(n); ++b)
      lv[n].push_back(static_cast<Cell>(sieve_index(pulled_back_sieve(B, inv, n, static_cast<Cell>(b)))));
  return PshMap(B, obj, std::move(lv));
}

bool ClassifierK::reconstructs(const PshMap& mono) const {
  PshMap chi = char_map(mono);
  if (check_naturality(chi)) return false;
  Pullback pb = pullback(point, chi);
  return is_iso(pb.mediator(to_terminal(mono.dom(), point.dom()), mono));
}

std::uint64_t ClassifierK::count_classifying_maps(const PshMap& mono, SearchBudget& budget) const {
  const CubSet& B = mono.cod();
  auto inv = preimages(mono);
  const unsigned L = B.max_dim() + 1;
  std::vector<std::vector<Cell>> full(L), rest(L);
  for (unsigned n = 0; n < L; ++n) {
    full[n] = {point(n, 0)};
    for (std::size_t c = 0; c < obj.size(n); ++c)
      if (c != point(n, 0)) rest[n].push_back(static_cast<Cell>(c));
  }
  CandidateFn cand = [&](unsigned n, Cell b) -> std::span<const Cell> {
    return inv[n][b] != kNoCell ? std::span<const Cell>(full[n]) : std::span<const Cell>(rest[n]);
  };
  return enumerate_natural_maps(B, obj, cand, budget, [](const PshMap&) { return true; });
}

// ---------------------------------------------------------------------------

PartialMapClassifier partial_map_classifier(const PshMap& f) {
  return partial_map_classifier(std::make_shared<const GeneratorProblems>(f, StructureKind::trivial_fibration));
}

PartialMapClassifier partial_map_classifier(std::shared_ptr<const GeneratorProblems> problems) {
  if (problems->kind() != StructureKind::trivial_fibration) throw ContractError("partial map classifier needs trivial-fibration problems");
  const GeneratorProblems& P = *problems;
  const PshMap& f = P.map();
  const SitePtr& site = f.dom().site();
  const CubeSite& s = *site;
  const unsigned L = s.max_dim() + 1;
  const auto& off = P.level_offsets();
  const ConstraintGraph& g = P.graph();
  CubSetBuilder b(site);
  for (unsigned n = 0; n < L; ++n) {
    b.set_size(n, off[n + 1] - off[n]);
    std::vector<std::string> lab;
    if (off[n + 1] - off[n] <= 4096)
      for (std::uint32_t v = off[n]; v < off[n + 1]; ++v) lab.push_back("(" + P.describe(v) + ")");
    b.set_labels(n, std::move(lab));
  }
  for (unsigned n = 0; n < L; ++n) {
    const auto& gens = s.generators_into(n);
    for (std::size_t e = 0; e < gens.size(); ++e) {
      std::vector<Cell> table;
      unsigned m = s.dom(gens[e]);
      for (std::uint32_t v = off[n]; v < off[n + 1]; ++v) {
        std::uint32_t edge = g.begin[v] + static_cast<std::uint32_t>(e);
        if (g.mor[edge] != gens[e]) throw ContractError("partial map classifier: edge order mismatch");
        table.push_back(g.to[edge] - off[m]);
      }
      b.set_action(gens[e], std::move(table));
    }
  }
  PartialMapClassifier pmc;
  pmc.problems = problems;
  pmc.obj = b.build(f.dom().name().empty() ? std::string() : "P(" + f.dom().name() + ")");
  std::vector<std::vector<Cell>> st(L), eta(L);
  for (unsigned n = 0; n < L; ++n) {
    for (std::uint32_t v = off[n]; v < off[n + 1]; ++v) st[n].push_back(P.base(v));
    std::size_t full = subobjects_of_representable(site, n).size() - 1;
    std::size_t fam = P.family_index(0, n, full);
    for (std::size_t x = 0; x < f.dom().size(n); ++x) {
      Cell c = static_cast<Cell>(x);
      auto v = P.find(fam, f(n, c), std::span<const Cell>(&c, 1));
      if (!v) throw ContractError("partial map classifier: total problem missing");
      eta[n].push_back(*v - off[n]);
    }
  }
  pmc.structure = PshMap(pmc.obj, f.cod(), std::move(st));
  pmc.eta = PshMap(f.dom(), pmc.obj, std::move(eta));
  return pmc;
}

bool PartialMapClassifier::square_is_pullback(const ClassifierK& k) const {
  const GeneratorProblems& P = *problems;
  const PshMap& f = P.map();
  const CubSet& Y = f.cod();
  const unsigned L = Y.max_dim() + 1;
  Product ky = product(k.obj, Y);
  std::vector<std::vector<Cell>> top(L), side(L);
  const auto& off = P.level_offsets();
  for (unsigned n = 0; n < L; ++n) {
    for (std::size_t y = 0; y < Y.size(n); ++y) top[n].push_back(ky.pack(n, k.point(n, 0), static_cast<Cell>(y)));
    for (std::uint32_t v = off[n]; v < off[n + 1]; ++v)
      side[n].push_back(ky.pack(n, static_cast<Cell>(P.family(P.family_of(v)).sieve), P.base(v)));
  }
  PshMap t(Y, ky.obj, std::move(top)), s(obj, ky.obj, std::move(side));
  if (check_naturality(t) || check_naturality(s)) return false;
  Pullback pb = pullback(t, s);
  return is_iso(pb.mediator(f, eta));
}

PshMap retraction_from_trivfib(const PartialMapClassifier& pmc, const UniformTrivFib& u) {
  if (u.problems.get() != pmc.problems.get()) throw ContractError("structure and classifier over different problem sets");
  const auto& off = pmc.problems->level_offsets();
  std::vector<std::vector<Cell>> lv(off.size() - 1);
  for (std::size_t n = 0; n + 1 < off.size(); ++n) lv[n].assign(u.fill.begin() + off[n], u.fill.begin() + off[n + 1]);
  return PshMap(pmc.obj, u.map().dom(), std::move(lv));
}

std::optional<UniformTrivFib> trivfib_from_retraction(const PartialMapClassifier& pmc, const PshMap& r,
                                                      std::string* why) {
  auto reject = [&](std::string w) -> std::optional<UniformTrivFib> {
    if (why) *why = std::move(w);
    return std::nullopt;
  };
  const PshMap& f = pmc.problems->map();
  if (!r.dom().same_shape(pmc.obj) || !r.cod().same_shape(f.dom())) return reject("retraction has the wrong endpoints");
  if (auto v = check_naturality(r)) return reject("retraction is not natural: " + v->describe(*f.dom().site()));
  if (!(compose(r, pmc.eta) == PshMap::identity(f.dom()))) return reject("retraction does not split eta");
  if (!(compose(f, r) == pmc.structure)) return reject("retraction is not a map over Y");
  UniformTrivFib u;
  u.problems = pmc.problems;
  for (const auto& lv : r.levels()) u.fill.insert(u.fill.end(), lv.begin(), lv.end());
  Report rep = validate_trivfib(u);
  if (!rep.ok()) return reject(rep.first_failure().value_or("invalid"));
  return u;
}

// ---------------------------------------------------------------------------

PshMap extend_to_all_monos(const UniformTrivFib& u, const PshMap& m, const PshMap& top, const PshMap& bottom) {
  const GeneratorProblems& P = *u.problems;
  const PshMap& f = P.map();
  LiftingProblem prob{m, f, top, bottom};
  if (!commutes(prob)) throw ContractError("extend_to_all_monos: the square does not commute");
  if (is_iso(f)) return compose(inverse(f), bottom);
  const CubSet& B = m.cod();
  if (B.site().get() != f.dom().site().get()) throw ContractError("extend_to_all_monos: sites differ");
  auto inv = preimages(m);
  std::vector<std::vector<Cell>> lv(B.max_dim() + 1);
  for (unsigned n = 0; n <= B.max_dim(); ++n)
    for (std::size_t b = 0; b < B.size(n); ++b) {
      Sieve S = pulled_back_sieve(B, inv, n, static_cast<Cell>(b));
      std::size_t fam = P.family_index(0, n, sieve_index(S));
      std::vector<Cell> vals;
      for (MorId h : P.family(fam).shape->gens()) vals.push_back(top(B.site()->dom(h), inv[B.site()->dom(h)][B.act(h, static_cast<Cell>(b))]));
      auto v = P.find(fam, bottom(n, static_cast<Cell>(b)), vals);
      if (!v) throw ContractError("extend_to_all_monos: generating problem missing");
      lv[n].push_back(u.fill[*v]);
    }
  PshMap diag(B, f.dom(), std::move(lv));
  if (!fills(prob, diag)) throw ContractError("extend_to_all_monos: assembled fillers do not form a filler");
  return diag;
}

PshMap extend_fib_to_cyl_monos(const UniformFib& u, const LeibnizTensor& t, const PshMap& top, const PshMap& bottom) {
  const GeneratorProblems& P = *u.problems;
  const PshMap& f = P.map();
  LiftingProblem prob{t.corner, f, top, bottom};
  if (!commutes(prob)) throw ContractError("extend_fib_to_cyl_monos: the square does not commute");
  if (is_iso(f)) return compose(inverse(f), bottom);
  const SitePtr& site = f.dom().site();
  const CubeSite& s = *site;
  const unsigned N = s.max_dim();
  const CubSet& B = t.cb.base;
  const CubSet& X = f.dom();
  auto inv = preimages(t.arg);
  std::vector<std::vector<Cell>> fill(N);
  for (unsigned n = 0; n < N; ++n)
    for (std::size_t bi = 0; bi < B.size(n); ++bi) {
      Cell b = static_cast<Cell>(bi);
      Sieve S = pulled_back_sieve(B, inv, n, b);
      std::size_t fam = P.family_index(t.k, n, sieve_index(S));
      std::vector<Cell> vals;
      for (MorId h : P.family(fam).shape->gens()) {
        unsigned l = s.dom(h);
        std::vector<DmTable::Index> comps;
        for (unsigned j = 1; j <= n; ++j) comps.push_back(s.component(h, j));
        Cell uu = s.component(h, 0);
        Cell bv = B.act(s.from_components(l, comps), b);
        Cell pcell = inv[l][bv] != kNoCell ? t.po.i1(l, t.ca.pack(l, uu, inv[l][bv])) : t.po.i2(l, bv);
        vals.push_back(top(l, pcell));
      }
      Cell tc = bottom(n + 1, t.cb.pack(n + 1, s.algebra(n + 1).generator(0), B.act(s.degeneracy(n, 0), b)));
      auto v = P.find(fam, tc, vals);
      if (!v) throw ContractError("extend_fib_to_cyl_monos: generating problem missing");
      fill[n].push_back(u.fill[*v]);
    }
  // Top-level cells of B must be restrictions of lower ones.
  std::vector<std::pair<Cell, MorId>> from_below(B.size(N), {kNoCell, 0});
  std::vector<unsigned> below_level(B.size(N), 0);
  for (unsigned m = N; m-- > 0;)
    for (std::size_t c = 0; c < B.size(m); ++c)
      for (std::size_t code = 0; code < s.hom_size(N, m); ++code) {
        MorId w = s.mor(N, m, code);
        Cell top_cell = B.act(w, static_cast<Cell>(c));
        if (from_below[top_cell].first == kNoCell) {
          from_below[top_cell] = {static_cast<Cell>(c), w};
          below_level[top_cell] = m;
        }
      }
  const CubSet& IB = t.cb.obj();
  std::vector<std::vector<Cell>> lv(N + 1);
  for (unsigned l = 0; l <= N; ++l)
    for (std::size_t c = 0; c < IB.size(l); ++c) {
      Cell uu = t.cb.interval(l, static_cast<Cell>(c)), bc = t.cb.point(l, static_cast<Cell>(c));
      MorId ui = s.mor(l, 1, uu);
      if (l < N) {
        lv[l].push_back(X.act(s.pair(ui, s.identity(l)), fill[l][bc]));
        continue;
      }
      auto [b2, w] = from_below[bc];
      if (b2 == kNoCell)
        throw TruncationError("cell " + B.label(N, bc) + " at the top level is not a restriction of a lower cell");
      lv[l].push_back(X.act(s.pair(ui, w), fill[below_level[bc]][b2]));
    }
  PshMap diag(IB, X, std::move(lv));
  if (!fills(prob, diag)) throw ContractError("extend_fib_to_cyl_monos: assembled fillers do not form a filler");
  return diag;
}

// ---------------------------------------------------------------------------

namespace {

template <class S>
S pulled_back_structure(const S& u, const Pullback& pb) {
  const GeneratorProblems& P = *u.problems;
  if (!(pb.g == P.map())) throw ContractError("pullback is not along the structured map");
  S out;
  out.problems = std::make_shared<const GeneratorProblems>(pb.p1, P.kind());
  const GeneratorProblems& Q = *out.problems;
  const CubeSite& s = *pb.obj.site();
  for (std::uint32_t v = 0; v < Q.size(); ++v) {
    const auto& fam = Q.family(Q.family_of(v));
    auto vals = Q.values(v);
    std::vector<Cell> mapped;
    for (std::size_t j = 0; j < vals.size(); ++j) mapped.push_back(pb.p2(s.dom(fam.shape->gens()[j]), vals[j]));
    Cell t = Q.base(v);
    auto w = P.find(Q.family_of(v), pb.f(fam.level, t), mapped);
    if (!w) throw ContractError("pulled-back problem missing");
    auto c = pb.find(fam.level, t, u.fill[*w]);
    if (!c) throw ContractError("pulled-back filler missing");
    out.fill.push_back(*c);
  }
  return out;
}

}  // namespace

UniformFib pullback_fib(const UniformFib& u, const Pullback& pb) { return pulled_back_structure(u, pb); }
UniformTrivFib pullback_trivfib(const UniformTrivFib& u, const Pullback& pb) { return pulled_back_structure(u, pb); }

Report check_structure_map(const LiftingStructure& u, const LiftingStructure& v, const PshMap& s, const PshMap& t) {
  const GeneratorProblems &P = *u.problems, &Q = *v.problems;
  Report r("map of lifting structures");
  r.group("square");
  r.record(compose(Q.map(), s) == compose(t, P.map()), "the square of maps does not commute");
  if (!r.ok()) return r;
  r.group("fillers preserved");
  const CubeSite& site = *P.map().dom().site();
  for (std::uint32_t n = 0; n < P.size(); ++n) {
    const auto& fam = P.family(P.family_of(n));
    auto vals = P.values(n);
    std::vector<Cell> mapped;
    for (std::size_t j = 0; j < vals.size(); ++j) mapped.push_back(s(site.dom(fam.shape->gens()[j]), vals[j]));
    auto w = Q.find(P.family_of(n), t(fam.level, P.base(n)), mapped);
    bool ok = w && s(fam.level, u.fill[n]) == v.fill[*w];
    r.record(ok, "filler of " + P.describe(n) + " is not carried to the filler of its image");
  }
  return r;
}

}  // namespace cubical
