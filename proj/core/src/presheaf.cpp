#include "cubical/presheaf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

#include "cubical/errors.hpp"

namespace cubical {

std::string CubSetImpl::label(unsigned n, Cell x) const { return std::to_string(n) + ":" + std::to_string(x); }

std::size_t CubSet::total_cells() const {
  std::size_t t = 0;
  for (unsigned n = 0; n <= max_dim(); ++n) t += size(n);
  return t;
}

bool CubSet::same_shape(const CubSet& o) const {
  if (site() != o.site()) return false;
  for (unsigned n = 0; n <= max_dim(); ++n)
    if (size(n) != o.size(n)) return false;
  return true;
}

namespace {

class TabulatedImpl final : public CubSetImpl {
 public:
  TabulatedImpl(SitePtr site, std::vector<std::size_t> sizes, std::vector<std::vector<std::string>> labels,
                std::vector<std::vector<Cell>> tables)
      : CubSetImpl(std::move(site)), sizes_(std::move(sizes)), labels_(std::move(labels)), tables_(std::move(tables)) {}

  std::size_t size(unsigned n) const override { return sizes_[n]; }

  Cell act(MorId f, Cell x) const override {
    const CubeSite& s = *site_;
    while (s.word_length(f)) {
      x = tables_[s.generator_index(s.first_factor(f))][x];
      f = s.rest_factor(f);
    }
    return x;
  }

  const Cell* generator_table(std::size_t i) const override { return tables_[i].data(); }

  std::string label(unsigned n, Cell x) const override {
    if (n < labels_.size() && x < labels_[n].size() && !labels_[n][x].empty()) return labels_[n][x];
    return CubSetImpl::label(n, x);
  }

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Cell>> tables_;
};

class RepresentableImpl final : public CubSetImpl {
 public:
  RepresentableImpl(SitePtr site, unsigned n) : CubSetImpl(std::move(site)), n_(n) {
    const CubeSite& s = *site_;
    for (MorId g : s.generators()) {
      std::vector<Cell> t(s.hom_size(s.cod(g), n));
      for (std::size_t x = 0; x < t.size(); ++x) t[x] = static_cast<Cell>(s.code(s.compose(s.mor(s.cod(g), n, x), g)));
      tables_.push_back(std::move(t));
    }
  }

  const Cell* generator_table(std::size_t i) const override { return tables_[i].data(); }

  std::size_t size(unsigned m) const override { return site_->hom_size(m, n_); }
  Cell act(MorId f, Cell x) const override {
    const CubeSite& s = *site_;
    return static_cast<Cell>(s.code(s.compose(s.mor(s.cod(f), n_, x), f)));
  }
  std::string label(unsigned m, Cell x) const override { return site_->value(site_->mor(m, n_, x)).to_string(); }

 private:
  unsigned n_;
  std::vector<std::vector<Cell>> tables_;
};

class ProductImpl final : public CubSetImpl {
 public:
  ProductImpl(CubSet a, CubSet b) : CubSetImpl(a.site()), a_(std::move(a)), b_(std::move(b)) {}

  std::size_t size(unsigned n) const override { return a_.size(n) * b_.size(n); }
  Cell act(MorId f, Cell x) const override {
    const CubeSite& s = *site_;
    std::size_t bn = b_.size(s.cod(f)), bm = b_.size(s.dom(f));
    return static_cast<Cell>(a_.act(f, static_cast<Cell>(x / bn)) * bm + b_.act(f, static_cast<Cell>(x % bn)));
  }
  std::string label(unsigned n, Cell x) const override {
    std::size_t bn = b_.size(n);
    return "(" + a_.label(n, static_cast<Cell>(x / bn)) + ", " + b_.label(n, static_cast<Cell>(x % bn)) + ")";
  }

 private:
  CubSet a_, b_;
};

void need_same_site(const CubSet& a, const CubSet& b, const char* what) {
  if (a.site() != b.site()) throw ContractError(std::string(what) + ": cubical sets over different sites");
}

}  // namespace

CubSetBuilder::CubSetBuilder(SitePtr site) : site_(std::move(site)) {
  sizes_.assign(site_->max_dim() + 1, 0);
  labels_.assign(site_->max_dim() + 1, {});
  tables_.assign(site_->generators().size(), {});
  have_.assign(site_->generators().size(), false);
}

void CubSetBuilder::set_size(unsigned n, std::size_t count) {
  if (n > site_->max_dim()) throw TruncationError("level " + std::to_string(n) + " above the site's dimension cap");
  if (count >= kNoCell) throw BudgetExceeded("level too large to index");
  sizes_[n] = count;
}

void CubSetBuilder::set_labels(unsigned n, std::vector<std::string> labels) { labels_.at(n) = std::move(labels); }

void CubSetBuilder::set_action(MorId generator, std::vector<Cell> table) {
  int gi = site_->generator_index(generator);
  if (gi < 0) throw ContractError("set_action: not a site generator");
  tables_[gi] = std::move(table);
  have_[gi] = true;
}

void CubSetBuilder::set_action_from(const std::function<Cell(MorId, Cell)>& act) {
  const auto& gens = site_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::vector<Cell> t(sizes_[site_->cod(gens[i])]);
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = act(gens[i], static_cast<Cell>(x));
    tables_[i] = std::move(t);
    have_[i] = true;
  }
}

CubSet CubSetBuilder::build(std::string name) const {
  const auto& gens = site_->generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    MorId g = gens[i];
    std::size_t want = sizes_[site_->cod(g)];
    if (!have_[i] && want == 0) continue;
    if (!have_[i]) throw ContractError("missing action table for " + site_->value(g).to_string());
    if (tables_[i].size() != want)
      throw ContractError("action table for " + site_->value(g).to_string() + " has wrong length");
    for (Cell y : tables_[i])
      if (y >= sizes_[site_->dom(g)])
        throw ContractError("action of " + site_->value(g).to_string() + " leaves the cell range");
  }
  auto tables = tables_;
  for (std::size_t i = 0; i < gens.size(); ++i) tables[i].resize(sizes_[site_->cod(gens[i])]);
  return CubSet(std::make_shared<TabulatedImpl>(site_, sizes_, labels_, std::move(tables)), std::move(name));
}

std::string FunctorialityViolation::describe(const CubeSite& site) const {
  return "cell " + std::to_string(level) + ":" + std::to_string(cell) + " along " + site.value(f).to_string() + " then " +
         site.value(g).to_string();
}

std::optional<FunctorialityViolation> check_functoriality(const CubSet& x, std::size_t exhaustive_limit,
                                                          std::size_t samples, std::uint64_t seed) {
  const CubeSite& s = *x.site();
  const unsigned N = s.max_dim();
  std::vector<std::size_t> into(N + 1, 0);
  std::size_t work = 0;
  for (unsigned n = 0; n <= N; ++n) {
    for (unsigned m = 0; m <= N; ++m) into[n] += s.hom_size(m, n);
    work += into[n] * x.size(n);
  }
  auto pos = [&](MorId f) {
    std::size_t p = 0;
    for (unsigned m = 0; m < s.dom(f); ++m) p += s.hom_size(m, s.cod(f));
    return p + s.code(f);
  };
  if (work <= exhaustive_limit) {
    // V[n][x * into(n) + pos(f)] = x . f, filled along generator words in order of length.
    std::vector<std::vector<Cell>> V(N + 1);
    for (unsigned n = 0; n <= N; ++n) V[n].assign(into[n] * x.size(n), kNoCell);
    std::vector<MorId> order(s.total_morphisms());
    std::iota(order.begin(), order.end(), MorId{0});
    std::stable_sort(order.begin(), order.end(), [&](MorId a, MorId b) { return s.word_length(a) < s.word_length(b); });
    for (MorId f : order) {
      unsigned n = s.cod(f);
      std::size_t pf = pos(f);
      for (std::size_t c = 0; c < x.size(n); ++c) {
        Cell v;
        if (s.word_length(f) == 0) {
          v = static_cast<Cell>(c);
        } else {
          MorId g = s.first_factor(f), r = s.rest_factor(f);
          Cell y = x.act(g, static_cast<Cell>(c));
          v = V[s.dom(g)][y * into[s.dom(g)] + pos(r)];
        }
        V[n][c * into[n] + pf] = v;
      }
    }
    for (unsigned n = 0; n <= N; ++n)
      for (MorId f : order) {
        if (s.cod(f) != n) continue;
        std::size_t pf = pos(f);
        for (MorId h : s.generators_into(s.dom(f))) {
          std::size_t pfh = pos(s.compose(f, h));
          for (std::size_t c = 0; c < x.size(n); ++c) {
            Cell lhs = V[n][c * into[n] + pfh];
            Cell rhs = x.act(h, V[n][c * into[n] + pf]);
            if (lhs != rhs) return FunctorialityViolation{n, static_cast<Cell>(c), f, h};
          }
        }
      }
    return std::nullopt;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    unsigned n = static_cast<unsigned>(rng() % (N + 1));
    if (!x.size(n)) continue;
    Cell c = static_cast<Cell>(rng() % x.size(n));
    unsigned m = static_cast<unsigned>(rng() % (N + 1));
    unsigned l = static_cast<unsigned>(rng() % (N + 1));
    MorId f = s.mor(m, n, rng() % s.hom_size(m, n));
    MorId g = s.mor(l, m, rng() % s.hom_size(l, m));
    if (x.act(s.compose(f, g), c) != x.act(g, x.act(f, c))) return FunctorialityViolation{n, c, f, g};
  }
  return std::nullopt;
}

CubSet terminal(const SitePtr& site) {
  CubSetBuilder b(site);
  for (unsigned n = 0; n <= site->max_dim(); ++n) {
    b.set_size(n, 1);
    b.set_labels(n, {"*"});
  }
  b.set_action_from([](MorId, Cell) { return Cell{0}; });
  return b.build("1");
}

CubSet initial(const SitePtr& site) { return CubSetBuilder(site).build("0"); }

CubSet yoneda(const SitePtr& site, unsigned n) {
  if (n > site->max_dim()) throw TruncationError("y(" + std::to_string(n) + ") above the dimension cap");
  static std::mutex mu;
  static std::map<std::pair<const CubeSite*, unsigned>, std::pair<SitePtr, std::shared_ptr<const CubSetImpl>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{site.get(), n}];
  if (!slot.second) slot = {site, std::make_shared<RepresentableImpl>(site, n)};
  return CubSet(slot.second, "y(" + std::to_string(n) + ")");
}

CubSet tabulate(const CubSet& x) {
  CubSetBuilder b(x.site());
  for (unsigned n = 0; n <= x.max_dim(); ++n) {
    b.set_size(n, x.size(n));
    std::vector<std::string> labels;
    if (x.size(n) <= 4096)
      for (std::size_t c = 0; c < x.size(n); ++c) labels.push_back(x.label(n, static_cast<Cell>(c)));
    b.set_labels(n, std::move(labels));
  }
  b.set_action_from([&](MorId g, Cell c) { return x.act(g, c); });
  return b.build(x.name());
}

CubSet restrict_to_site(const CubSet& x, const SitePtr& to) {
  if (to->max_dim() > x.max_dim()) throw ContractError("restrict_to_site: target site is larger");
  CubSetBuilder b(to);
  for (unsigned n = 0; n <= to->max_dim(); ++n) {
    b.set_size(n, x.size(n));
    std::vector<std::string> labels;
    if (x.size(n) <= 4096)
      for (std::size_t c = 0; c < x.size(n); ++c) labels.push_back(x.label(n, static_cast<Cell>(c)));
    b.set_labels(n, std::move(labels));
  }
  b.set_action_from([&](MorId g, Cell c) { return x.act(to->translate(g, *x.site()), c); });
  return b.build(x.name());
}

PshMap::PshMap(CubSet dom, CubSet cod, std::vector<std::vector<Cell>> levels)
    : dom_(std::move(dom)), cod_(std::move(cod)), levels_(std::move(levels)) {
  need_same_site(dom_, cod_, "PshMap");
  if (levels_.size() != dom_.max_dim() + 1) throw ContractError("PshMap: wrong number of levels");
  for (unsigned n = 0; n <= dom_.max_dim(); ++n) {
    if (levels_[n].size() != dom_.size(n)) throw ContractError("PshMap: level " + std::to_string(n) + " has wrong length");
    for (Cell y : levels_[n])
      if (y >= cod_.size(n)) throw ContractError("PshMap: value out of range at level " + std::to_string(n));
  }
}

PshMap PshMap::identity(const CubSet& x) {
  std::vector<std::vector<Cell>> lv(x.max_dim() + 1);
  for (unsigned n = 0; n <= x.max_dim(); ++n) {
    lv[n].resize(x.size(n));
    std::iota(lv[n].begin(), lv[n].end(), Cell{0});
  }
  return PshMap(x, x, std::move(lv));
}

bool operator==(const PshMap& a, const PshMap& b) {
  return a.dom_.same_shape(b.dom_) && a.cod_.same_shape(b.cod_) && a.levels_ == b.levels_;
}

PshMap compose(const PshMap& g, const PshMap& f) {
  if (!f.cod().same_shape(g.dom())) throw ContractError("compose: codomain and domain do not match");
  std::vector<std::vector<Cell>> lv(f.dom().max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n].resize(f.dom().size(n));
    for (std::size_t x = 0; x < lv[n].size(); ++x) lv[n][x] = g(n, f(n, static_cast<Cell>(x)));
  }
  return PshMap(f.dom(), g.cod(), std::move(lv));
}

PshMap compose(const PshMap& h, const PshMap& g, const PshMap& f) { return compose(h, compose(g, f)); }

PshMap retype(const PshMap& f, const CubSet& dom, const CubSet& cod) {
  if (!f.dom().same_shape(dom) || !f.cod().same_shape(cod)) throw ContractError("retype: shapes differ");
  return PshMap(dom, cod, f.levels());
}

std::string NaturalityViolation::describe(const CubeSite& site) const {
  return "cell " + std::to_string(level) + ":" + std::to_string(cell) + " along " + site.value(generator).to_string();
}

std::optional<NaturalityViolation> check_naturality(const PshMap& f) {
  const CubeSite& s = *f.dom().site();
  for (unsigned n = 0; n <= s.max_dim(); ++n)
    for (MorId g : s.generators_into(n)) {
      unsigned m = s.dom(g);
      for (std::size_t x = 0; x < f.dom().size(n); ++x) {
        Cell c = static_cast<Cell>(x);
        if (f(m, f.dom().act(g, c)) != f.cod().act(g, f(n, c))) return NaturalityViolation{n, c, g};
      }
    }
  return std::nullopt;
}

bool is_mono(const PshMap& f) {
  for (unsigned n = 0; n <= f.dom().max_dim(); ++n) {
    std::vector<bool> seen(f.cod().size(n), false);
    for (Cell y : f.level(n)) {
      if (seen[y]) return false;
      seen[y] = true;
    }
  }
  return true;
}

bool is_iso(const PshMap& f) {
  for (unsigned n = 0; n <= f.dom().max_dim(); ++n)
    if (f.dom().size(n) != f.cod().size(n)) return false;
  return is_mono(f);
}

PshMap inverse(const PshMap& f) {
  if (!is_iso(f)) throw ContractError("inverse: not an isomorphism");
  std::vector<std::vector<Cell>> lv(f.dom().max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n].resize(f.cod().size(n));
    for (std::size_t x = 0; x < f.dom().size(n); ++x) lv[n][f(n, static_cast<Cell>(x))] = static_cast<Cell>(x);
  }
  return PshMap(f.cod(), f.dom(), std::move(lv));
}

PshMap to_terminal(const CubSet& x, const CubSet& one) {
  std::vector<std::vector<Cell>> lv(x.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) lv[n].assign(x.size(n), 0);
  return PshMap(x, one, std::move(lv));
}

PshMap from_initial(const CubSet& zero, const CubSet& x) {
  return PshMap(zero, x, std::vector<std::vector<Cell>>(x.max_dim() + 1));
}

PshMap yoneda_map(const CubSet& yn, unsigned n, const CubSet& x, Cell cell) {
  const CubeSite& s = *x.site();
  std::vector<std::vector<Cell>> lv(s.max_dim() + 1);
  for (unsigned m = 0; m <= s.max_dim(); ++m) {
    lv[m].resize(s.hom_size(m, n));
    for (std::size_t c = 0; c < lv[m].size(); ++c) lv[m][c] = x.act(s.mor(m, n, c), cell);
  }
  return PshMap(yn, x, std::move(lv));
}

PshMap yoneda_mor(const CubSet& ym, const CubSet& yn, MorId f) {
  const CubeSite& s = *ym.site();
  std::vector<std::vector<Cell>> lv(s.max_dim() + 1);
  for (unsigned l = 0; l <= s.max_dim(); ++l) {
    lv[l].resize(s.hom_size(l, s.dom(f)));
    for (std::size_t c = 0; c < lv[l].size(); ++c)
      lv[l][c] = static_cast<Cell>(s.code(s.compose(f, s.mor(l, s.dom(f), c))));
  }
  return PshMap(ym, yn, std::move(lv));
}

Fibers::Fibers(const PshMap& f) {
  const unsigned L = f.dom().max_dim() + 1;
  start_.resize(L);
  cells_.resize(L);
  for (unsigned n = 0; n < L; ++n) {
    std::vector<std::uint32_t> count(f.cod().size(n) + 1, 0);
    for (Cell y : f.level(n)) ++count[y + 1];
    std::partial_sum(count.begin(), count.end(), count.begin());
    start_[n] = count;
    cells_[n].resize(f.dom().size(n));
    for (std::size_t x = 0; x < f.dom().size(n); ++x) cells_[n][count[f(n, static_cast<Cell>(x))]++] = static_cast<Cell>(x);
  }
}

std::span<const Cell> Fibers::of(unsigned n, Cell y) const {
  return std::span<const Cell>(cells_[n]).subspan(start_[n][y], start_[n][y + 1] - start_[n][y]);
}

Cell Product::pack(unsigned n, Cell a, Cell b) const { return static_cast<Cell>(a * p2.cod().size(n) + b); }

PshMap Product::pair(const PshMap& f, const PshMap& g) const {
  if (!f.dom().same_shape(g.dom())) throw ContractError("pair: domains differ");
  const CubSet& w = f.dom();
  std::vector<std::vector<Cell>> lv(w.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n].resize(w.size(n));
    for (std::size_t x = 0; x < w.size(n); ++x)
      lv[n][x] = pack(n, f(n, static_cast<Cell>(x)), g(n, static_cast<Cell>(x)));
  }
  return PshMap(w, obj, std::move(lv));
}

Product product(const CubSet& a, const CubSet& b) {
  need_same_site(a, b, "product");
  Product p;
  std::string name = a.name().empty() || b.name().empty() ? std::string() : a.name() + " x " + b.name();
  p.obj = CubSet(std::make_shared<ProductImpl>(a, b), name);
  std::vector<std::vector<Cell>> l1(a.max_dim() + 1), l2(a.max_dim() + 1);
  for (unsigned n = 0; n < l1.size(); ++n)
    for (std::size_t x = 0; x < a.size(n) * b.size(n); ++x) {
      l1[n].push_back(static_cast<Cell>(x / b.size(n)));
      l2[n].push_back(static_cast<Cell>(x % b.size(n)));
    }
  p.p1 = PshMap(p.obj, a, std::move(l1));
  p.p2 = PshMap(p.obj, b, std::move(l2));
  return p;
}

PshMap product_map(const Product& from, const Product& to, const PshMap& f, const PshMap& g) {
  return to.pair(compose(f, from.p1), compose(g, from.p2));
}

PshMap Coproduct::copair(const PshMap& f, const PshMap& g) const {
  if (!f.cod().same_shape(g.cod())) throw ContractError("copair: codomains differ");
  std::vector<std::vector<Cell>> lv(obj.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n] = f.level(n);
    lv[n].insert(lv[n].end(), g.level(n).begin(), g.level(n).end());
  }
  return PshMap(obj, f.cod(), std::move(lv));
}

Coproduct coproduct(const CubSet& a, const CubSet& b) {
  need_same_site(a, b, "coproduct");
  const CubeSite& s = *a.site();
  CubSetBuilder bld(a.site());
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    bld.set_size(n, a.size(n) + b.size(n));
    std::vector<std::string> labels;
    if (a.size(n) + b.size(n) <= 4096) {
      for (std::size_t x = 0; x < a.size(n); ++x) labels.push_back("in1 " + a.label(n, static_cast<Cell>(x)));
      for (std::size_t x = 0; x < b.size(n); ++x) labels.push_back("in2 " + b.label(n, static_cast<Cell>(x)));
    }
    bld.set_labels(n, std::move(labels));
  }
  bld.set_action_from([&](MorId g, Cell x) {
    std::size_t an = a.size(s.cod(g));
    if (x < an) return a.act(g, x);
    return static_cast<Cell>(a.size(s.dom(g)) + b.act(g, static_cast<Cell>(x - an)));
  });
  Coproduct c;
  std::string name = a.name().empty() || b.name().empty() ? std::string() : a.name() + " + " + b.name();
  c.obj = bld.build(name);
  std::vector<std::vector<Cell>> l1(s.max_dim() + 1), l2(s.max_dim() + 1);
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    for (std::size_t x = 0; x < a.size(n); ++x) l1[n].push_back(static_cast<Cell>(x));
    for (std::size_t x = 0; x < b.size(n); ++x) l2[n].push_back(static_cast<Cell>(a.size(n) + x));
  }
  c.i1 = PshMap(a, c.obj, std::move(l1));
  c.i2 = PshMap(b, c.obj, std::move(l2));
  return c;
}

std::optional<Cell> Pullback::find(unsigned n, Cell a, Cell b) const {
  const auto& v = pairs[n];
  auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(a, b));
  if (it == v.end() || *it != std::make_pair(a, b)) return std::nullopt;
  return static_cast<Cell>(it - v.begin());
}

PshMap Pullback::mediator(const PshMap& a, const PshMap& b) const {
  if (!a.dom().same_shape(b.dom())) throw ContractError("pullback mediator: domains differ");
  std::vector<std::vector<Cell>> lv(obj.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n].resize(a.dom().size(n));
    for (std::size_t w = 0; w < lv[n].size(); ++w) {
      auto c = find(n, a(n, static_cast<Cell>(w)), b(n, static_cast<Cell>(w)));
      if (!c) throw ContractError("pullback mediator: the cone does not commute");
      lv[n][w] = *c;
    }
  }
  return PshMap(a.dom(), obj, std::move(lv));
}

Pullback pullback(const PshMap& f, const PshMap& g) {
  if (!f.cod().same_shape(g.cod())) throw ContractError("pullback: codomains differ");
  const CubeSite& s = *f.dom().site();
  const CubSet &A = f.dom(), &B = g.dom();
  Pullback pb;
  pb.f = f;
  pb.g = g;
  pb.pairs.resize(s.max_dim() + 1);
  Fibers gf(g);
  CubSetBuilder bld(f.dom().site());
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    for (std::size_t a = 0; a < A.size(n); ++a)
      for (Cell b : gf.of(n, f(n, static_cast<Cell>(a)))) pb.pairs[n].emplace_back(static_cast<Cell>(a), b);
    bld.set_size(n, pb.pairs[n].size());
    std::vector<std::string> labels;
    if (pb.pairs[n].size() <= 4096)
      for (auto [a, b] : pb.pairs[n]) labels.push_back("(" + A.label(n, a) + ", " + B.label(n, b) + ")");
    bld.set_labels(n, std::move(labels));
  }
  bld.set_action_from([&](MorId h, Cell x) {
    auto [a, b] = pb.pairs[s.cod(h)][x];
    return *pb.find(s.dom(h), A.act(h, a), B.act(h, b));
  });
  pb.obj = bld.build();
  std::vector<std::vector<Cell>> l1(s.max_dim() + 1), l2(s.max_dim() + 1);
  for (unsigned n = 0; n <= s.max_dim(); ++n)
    for (auto [a, b] : pb.pairs[n]) {
      l1[n].push_back(a);
      l2[n].push_back(b);
    }
  pb.p1 = PshMap(pb.obj, A, std::move(l1));
  pb.p2 = PshMap(pb.obj, B, std::move(l2));
  return pb;
}

PshMap Pushout::mediator(const PshMap& a, const PshMap& b) const {
  if (!a.cod().same_shape(b.cod())) throw ContractError("pushout mediator: codomains differ");
  std::vector<std::vector<Cell>> lv(obj.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n) {
    lv[n].assign(obj.size(n), kNoCell);
    auto put = [&](Cell cls, Cell v) {
      if (lv[n][cls] == kNoCell) lv[n][cls] = v;
      else if (lv[n][cls] != v) throw ContractError("pushout mediator: the cocone does not commute");
    };
    for (std::size_t x = 0; x < a.dom().size(n); ++x) put(i1(n, static_cast<Cell>(x)), a(n, static_cast<Cell>(x)));
    for (std::size_t y = 0; y < b.dom().size(n); ++y) put(i2(n, static_cast<Cell>(y)), b(n, static_cast<Cell>(y)));
  }
  return PshMap(obj, a.cod(), std::move(lv));
}

Pushout pushout(const PshMap& f, const PshMap& g) {
  if (!f.dom().same_shape(g.dom())) throw ContractError("pushout: domains differ");
  const CubeSite& s = *f.dom().site();
  const CubSet &A = f.cod(), &B = g.cod();
  const unsigned L = s.max_dim() + 1;
  std::vector<std::vector<Cell>> cls_a(L), cls_b(L), rep(L);  // rep: encoded side/cell of a class
  CubSetBuilder bld(f.dom().site());
  for (unsigned n = 0; n < L; ++n) {
    std::size_t na = A.size(n), nb = B.size(n);
    std::vector<std::uint32_t> parent(na + nb);
    std::iota(parent.begin(), parent.end(), 0u);
    auto findp = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t c = 0; c < f.dom().size(n); ++c) {
      std::uint32_t x = findp(f(n, static_cast<Cell>(c))), y = findp(static_cast<std::uint32_t>(na + g(n, static_cast<Cell>(c))));
      if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
    std::vector<Cell> id(na + nb, kNoCell);
    for (std::size_t x = 0; x < na + nb; ++x) {
      std::uint32_t r = findp(static_cast<std::uint32_t>(x));
      if (id[r] == kNoCell) {
        id[r] = static_cast<Cell>(rep[n].size());
        rep[n].push_back(static_cast<Cell>(x));
      }
      id[x] = id[r];
    }
    cls_a[n].assign(id.begin(), id.begin() + na);
    cls_b[n].assign(id.begin() + na, id.end());
    bld.set_size(n, rep[n].size());
    std::vector<std::string> labels;
    if (rep[n].size() <= 4096)
      for (Cell r : rep[n]) labels.push_back(r < na ? A.label(n, r) : B.label(n, static_cast<Cell>(r - na)));
    bld.set_labels(n, std::move(labels));
  }
  bld.set_action_from([&](MorId h, Cell x) {
    unsigned n = s.cod(h), m = s.dom(h);
    Cell r = rep[n][x];
    if (r < A.size(n)) return cls_a[m][A.act(h, r)];
    return cls_b[m][B.act(h, static_cast<Cell>(r - A.size(n)))];
  });
  Pushout po;
  po.f = f;
  po.g = g;
  po.obj = bld.build();
  po.i1 = PshMap(A, po.obj, std::move(cls_a));
  po.i2 = PshMap(B, po.obj, std::move(cls_b));
  return po;
}

Subobject subobject(const CubSet& x, const std::vector<std::vector<bool>>& member) {
  const CubeSite& s = *x.site();
  const unsigned L = s.max_dim() + 1;
  std::vector<std::vector<Cell>> cells(L), index(L);
  CubSetBuilder bld(x.site());
  for (unsigned n = 0; n < L; ++n) {
    index[n].assign(x.size(n), kNoCell);
    for (std::size_t c = 0; c < x.size(n); ++c)
      if (n < member.size() && c < member[n].size() && member[n][c]) {
        index[n][c] = static_cast<Cell>(cells[n].size());
        cells[n].push_back(static_cast<Cell>(c));
      }
    bld.set_size(n, cells[n].size());
    std::vector<std::string> labels;
    if (cells[n].size() <= 4096)
      for (Cell c : cells[n]) labels.push_back(x.label(n, c));
    bld.set_labels(n, std::move(labels));
  }
  bld.set_action_from([&](MorId h, Cell i) {
    Cell r = index[s.dom(h)][x.act(h, cells[s.cod(h)][i])];
    if (r == kNoCell) throw ContractError("subobject: membership is not closed under restriction");
    return r;
  });
  Subobject sub;
  sub.obj = bld.build();
  sub.incl = PshMap(sub.obj, x, std::move(cells));
  return sub;
}

Subobject generated_subobject(const CubSet& x, const std::vector<std::vector<Cell>>& cells) {
  const CubeSite& s = *x.site();
  std::vector<std::vector<bool>> member(s.max_dim() + 1);
  std::vector<std::pair<unsigned, Cell>> work;
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    member[n].assign(x.size(n), false);
    if (n < cells.size())
      for (Cell c : cells[n]) work.emplace_back(n, c);
  }
  while (!work.empty()) {
    auto [n, c] = work.back();
    work.pop_back();
    if (member[n][c]) continue;
    member[n][c] = true;
    for (MorId g : s.generators_into(n)) {
      Cell d = x.act(g, c);
      if (!member[s.dom(g)][d]) work.emplace_back(s.dom(g), d);
    }
  }
  return subobject(x, member);
}

Subobject image(const PshMap& f) {
  std::vector<std::vector<bool>> member(f.cod().max_dim() + 1);
  for (unsigned n = 0; n < member.size(); ++n) {
    member[n].assign(f.cod().size(n), false);
    for (Cell y : f.level(n)) member[n][y] = true;
  }
  return subobject(f.cod(), member);
}

namespace {

// reached[m][c]: c is x' . f for some x' of level below `below`.
std::vector<std::vector<bool>> reached_from_below(const CubSet& x, unsigned below) {
  const CubeSite& s = *x.site();
  std::vector<std::vector<bool>> reached(s.max_dim() + 1);
  for (unsigned m = 0; m <= s.max_dim(); ++m) {
    reached[m].assign(x.size(m), false);
    for (unsigned j = 0; j < std::min(below, m + 1) && j < m; ++j)
      for (std::size_t c = 0; c < x.size(j); ++c)
        for (std::size_t code = 0; code < s.hom_size(m, j); ++code)
          reached[m][x.act(s.mor(m, j, code), static_cast<Cell>(c))] = true;
  }
  return reached;
}

}  // namespace

std::vector<std::vector<Cell>> top_generating_cells(const CubSet& x) {
  const CubeSite& s = *x.site();
  std::vector<std::vector<Cell>> out(s.max_dim() + 1);
  auto reached = reached_from_below(x, s.max_dim() + 1);
  for (unsigned n = 0; n <= s.max_dim(); ++n)
    for (std::size_t c = 0; c < x.size(n); ++c)
      if (!reached[n][c]) out[n].push_back(static_cast<Cell>(c));
  return out;
}

bool generated_below(const CubSet& x, unsigned n) {
  auto reached = reached_from_below(x, n);
  for (unsigned m = n; m < reached.size(); ++m)
    for (bool r : reached[m])
      if (!r) return false;
  return true;
}

}  // namespace cubical
