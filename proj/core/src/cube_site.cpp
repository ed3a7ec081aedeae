#include "cubical/cube_site.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "cubical/errors.hpp"

namespace cubical {

std::string CubeMor::to_string() const {
  std::string s = "mor(" + std::to_string(dom) + " -> " + std::to_string(cod) + ";";
  for (std::size_t j = 0; j < components.size(); ++j) s += (j ? ", " : " ") + components[j].to_string();
  return s + ")";
}

CubeMor compose(const CubeMor& g, const CubeMor& f) {
  if (f.cod != g.dom)
    throw ContractError("compose: codomain " + std::to_string(f.cod) + " does not match domain " + std::to_string(g.dom));
  CubeMor h{f.dom, g.cod, {}};
  h.components.reserve(g.components.size());
  for (const DmElem& e : g.components) h.components.push_back(dm_subst(e, f.components, f.dom));
  return h;
}

CubeMor identity_mor(unsigned n) {
  CubeMor id{n, n, {}};
  for (unsigned i = 0; i < n; ++i) id.components.push_back(DmElem::generator(n, i));
  return id;
}

CubeMor parse_mor(std::string_view text) {
  auto fail = [&](const std::string& why) -> void { throw ParseError("morphism literal: " + why + " in '" + std::string(text) + "'"); };
  std::size_t p = 0;
  auto ws = [&] {
    while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
  };
  auto number = [&] {
    ws();
    std::size_t s = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (s == p) fail("expected a dimension");
    return static_cast<unsigned>(std::stoul(std::string(text.substr(s, p - s))));
  };
  ws();
  if (text.substr(p, 4) != "mor(") fail("expected 'mor('");
  p += 4;
  unsigned m = number();
  ws();
  if (text.substr(p, 2) != "->") fail("expected '->'");
  p += 2;
  unsigned n = number();
  ws();
  if (p >= text.size() || (text[p] != ';' && text[p] != ')')) fail("expected ';'");
  CubeMor f{m, n, {}};
  if (text[p] == ';') {
    ++p;
    // Split on commas at parenthesis depth zero up to the closing ')'.
    int depth = 0;
    std::size_t start = p;
    for (; p < text.size(); ++p) {
      char c = text[p];
      if (c == '(') ++depth;
      if (c == ')') {
        if (depth == 0) break;
        --depth;
      }
      if (c == ',' && depth == 0) {
        f.components.push_back(dm_parse(text.substr(start, p - start), m));
        start = p + 1;
      }
    }
    if (p >= text.size()) fail("missing ')'");
    std::string_view last = text.substr(start, p - start);
    if (last.find_first_not_of(" \t\r\n") != std::string_view::npos) f.components.push_back(dm_parse(last, m));
  }
  if (p >= text.size() || text[p] != ')') fail("missing ')'");
  ++p;
  ws();
  if (p != text.size()) fail("trailing input");
  if (f.components.size() != n)
    fail("expected " + std::to_string(n) + " components, got " + std::to_string(f.components.size()));
  return f;
}

CubeSite::CubeSite(unsigned max_dim, SiteLimits limits) : max_dim_(max_dim) {
  if (max_dim > limits.dim_cap)
    throw TruncationError("dimension cap " + std::to_string(max_dim) + " exceeds configured cap " +
                          std::to_string(limits.dim_cap));
  if (max_dim > kDefaultEnumerationCap)
    throw BudgetExceeded("cube site at N = " + std::to_string(max_dim) +
                         " needs the free de Morgan algebra on 3 generators (7828354 elements)");
  for (unsigned m = 0; m <= max_dim; ++m) algebras_.push_back(std::make_unique<DmTable>(m, max_dim));
  const unsigned d = max_dim + 1;
  hom_size_.assign(d * d, 1);
  offset_.assign(d * d, 0);
  std::size_t total = 0;
  for (unsigned m = 0; m < d; ++m)
    for (unsigned n = 0; n < d; ++n) {
      std::size_t s = 1;
      for (unsigned j = 0; j < n; ++j) s *= algebras_[m]->size();
      if (s > limits.hom_budget)
        throw BudgetExceeded("hom(" + std::to_string(m) + ", " + std::to_string(n) + ") has " + std::to_string(s) +
                             " elements, over budget");
      hom_size_[m * d + n] = s;
      offset_[m * d + n] = total;
      total += s;
    }
  index_homs();
  hom_cache_.resize(d * d);
  build_generators();
}

std::shared_ptr<const CubeSite> CubeSite::make(unsigned max_dim, SiteLimits limits) {
  return std::make_shared<const CubeSite>(max_dim, limits);
}

std::shared_ptr<const CubeSite> CubeSite::shared(unsigned max_dim) {
  static std::mutex mu;
  static std::vector<std::shared_ptr<const CubeSite>> cache;
  std::lock_guard lock(mu);
  if (cache.size() <= max_dim) cache.resize(max_dim + 1);
  if (!cache[max_dim]) cache[max_dim] = make(max_dim, SiteLimits{max_dim > 2 ? max_dim : 2, 1u << 20});
  return cache[max_dim];
}

void CubeSite::index_homs() {
  const unsigned d = max_dim_ + 1;
  std::size_t total = offset_[d * d - 1] + hom_size_[d * d - 1];
  dom_.resize(total);
  cod_.resize(total);
  for (unsigned m = 0; m < d; ++m)
    for (unsigned n = 0; n < d; ++n)
      for (std::size_t c = 0; c < hom_size(m, n); ++c) {
        dom_[offset_[m * d + n] + c] = static_cast<std::uint8_t>(m);
        cod_[offset_[m * d + n] + c] = static_cast<std::uint8_t>(n);
      }
  subst_.resize(d * d);
  for (unsigned n = 0; n < d; ++n)
    for (unsigned m = 0; m < d; ++m) {
      const DmTable& src = *algebras_[n];
      const DmTable& dst = *algebras_[m];
      std::size_t tuples = hom_size(m, n);
      auto& table = subst_[n * d + m];
      table.resize(src.size() * tuples);
      std::vector<DmTable::Index> args(n);
      for (std::size_t c = 0; c < tuples; ++c) {
        std::size_t rem = c;
        for (unsigned j = n; j-- > 0;) {
          args[j] = static_cast<DmTable::Index>(rem % dst.size());
          rem /= dst.size();
        }
        for (std::size_t e = 0; e < src.size(); ++e) table[e * tuples + c] = dst.eval(src.elem(e), args);
      }
    }
}

DmTable::Index CubeSite::component(MorId f, unsigned j) const {
  unsigned m = dom_[f], n = cod_[f];
  std::size_t c = code(f);
  std::size_t base = algebras_[m]->size();
  for (unsigned i = n; i-- > j + 1;) c /= base;
  return static_cast<DmTable::Index>(c % base);
}

MorId CubeSite::from_components(unsigned m, std::span<const DmTable::Index> comps) const {
  unsigned n = static_cast<unsigned>(comps.size());
  if (m > max_dim_ || n > max_dim_) throw TruncationError("morphism outside truncated site");
  std::size_t c = 0, base = algebras_[m]->size();
  for (auto x : comps) c = c * base + x;
  return mor(m, n, c);
}

MorId CubeSite::compose(MorId g, MorId f) const {
  unsigned m = dom_[f], n = cod_[f], p = cod_[g];
  if (dom_[g] != n) throw ContractError("compose: object mismatch");
  const unsigned d = max_dim_ + 1;
  const auto& table = subst_[n * d + m];
  std::size_t tuples = hom_size(m, n), fc = code(f), gc = code(g);
  std::size_t gbase = algebras_[n]->size(), base = algebras_[m]->size();
  // Decode g's components most-significant first.
  DmTable::Index gcomp[kMaxDmArity];
  for (unsigned j = p; j-- > 0;) {
    gcomp[j] = static_cast<DmTable::Index>(gc % gbase);
    gc /= gbase;
  }
  std::size_t out = 0;
  for (unsigned j = 0; j < p; ++j) out = out * base + table[gcomp[j] * tuples + fc];
  return mor(m, p, out);
}

MorId CubeSite::identity(unsigned n) const {
  if (n > max_dim_) throw TruncationError("identity(" + std::to_string(n) + ") above dimension cap");
  std::vector<DmTable::Index> comps;
  for (unsigned i = 0; i < n; ++i) comps.push_back(algebras_[n]->generator(i));
  return from_components(n, comps);
}

namespace {
void need(unsigned dim, unsigned cap, const char* what) {
  if (dim > cap) throw TruncationError(std::string(what) + " needs dimension " + std::to_string(dim) + " above cap " + std::to_string(cap));
}
}  // namespace

MorId CubeSite::endpoint(unsigned k) const {
  need(1, max_dim_, "endpoint");
  DmTable::Index c = k ? algebras_[0]->top() : algebras_[0]->bottom();
  return from_components(0, std::span(&c, 1));
}

MorId CubeSite::contraction() const {
  need(1, max_dim_, "contraction");
  return from_components(1, {});
}

MorId CubeSite::connection(unsigned k) const {
  need(2, max_dim_, "connection");
  const DmTable& a = *algebras_[2];
  DmTable::Index x = a.generator(0), y = a.generator(1);
  DmTable::Index c = k ? a.join(x, y) : a.meet(x, y);
  return from_components(2, std::span(&c, 1));
}

MorId CubeSite::swap() const {
  need(2, max_dim_, "swap");
  const DmTable& a = *algebras_[2];
  DmTable::Index c[2] = {a.generator(1), a.generator(0)};
  return from_components(2, c);
}

MorId CubeSite::involution() const {
  need(1, max_dim_, "involution");
  DmTable::Index c = algebras_[1]->generator(0, true);
  return from_components(1, std::span(&c, 1));
}

MorId CubeSite::diagonal() const {
  need(2, max_dim_, "diagonal");
  DmTable::Index x = algebras_[1]->generator(0);
  DmTable::Index c[2] = {x, x};
  return from_components(1, c);
}

MorId CubeSite::face(unsigned n, unsigned i, unsigned k) const {
  need(n + 1, max_dim_, "face");
  if (i > n) throw ContractError("face coordinate out of range");
  const DmTable& a = *algebras_[n];
  std::vector<DmTable::Index> comps;
  for (unsigned j = 0, g = 0; j <= n; ++j)
    comps.push_back(j == i ? (k ? a.top() : a.bottom()) : a.generator(g++));
  return from_components(n, comps);
}

MorId CubeSite::degeneracy(unsigned n, unsigned i) const {
  need(n + 1, max_dim_, "degeneracy");
  if (i > n) throw ContractError("degeneracy coordinate out of range");
  const DmTable& a = *algebras_[n + 1];
  std::vector<DmTable::Index> comps;
  for (unsigned j = 0; j <= n; ++j)
    if (j != i) comps.push_back(a.generator(j));
  return from_components(n + 1, comps);
}

MorId CubeSite::pair(MorId f, MorId g) const {
  if (dom_[f] != dom_[g]) throw ContractError("pair: domains differ");
  std::vector<DmTable::Index> comps;
  for (unsigned j = 0; j < cod_[f]; ++j) comps.push_back(component(f, j));
  for (unsigned j = 0; j < cod_[g]; ++j) comps.push_back(component(g, j));
  return from_components(dom_[f], comps);
}

MorId CubeSite::constant(unsigned m, unsigned k) const {
  need(1, max_dim_, "constant");
  DmTable::Index c = k ? algebras_[m]->top() : algebras_[m]->bottom();
  return from_components(m, std::span(&c, 1));
}

MorId CubeSite::cylinder(MorId f) const {
  unsigned m = dom_[f], n = cod_[f];
  need(n + 1, max_dim_, "cylinder");
  need(m + 1, max_dim_, "cylinder");
  DmTable::Index x = algebras_[m + 1]->generator(0);
  MorId u = from_components(m + 1, std::span(&x, 1));
  if (n == 0) return u;
  return pair(u, compose(f, degeneracy(m, 0)));
}

MorId CubeSite::translate(MorId f, const CubeSite& to) const {
  if (&to == this) return f;
  return to.index_of(value(f));
}

CubeMor CubeSite::value(MorId f) const {
  CubeMor v{dom_[f], cod_[f], {}};
  for (unsigned j = 0; j < v.cod; ++j) v.components.push_back(algebras_[v.dom]->elem(component(f, j)));
  return v;
}

MorId CubeSite::index_of(const CubeMor& f) const {
  if (f.dom > max_dim_ || f.cod > max_dim_) throw TruncationError("morphism " + f.to_string() + " outside truncated site");
  if (f.components.size() != f.cod) throw ContractError("morphism component count mismatch");
  std::vector<DmTable::Index> comps;
  for (const DmElem& e : f.components) {
    if (e.arity() != f.dom) throw ArityError("morphism component arity mismatch in " + f.to_string());
    comps.push_back(algebras_[f.dom]->index_of(e));
  }
  return from_components(f.dom, comps);
}

const std::vector<CubeMor>& CubeSite::hom_enumerate(unsigned m, unsigned n) const {
  if (m > max_dim_ || n > max_dim_) throw TruncationError("hom_enumerate outside truncated site");
  std::lock_guard lock(hom_mutex_);
  auto& slot = hom_cache_[m * (max_dim_ + 1) + n];
  if (!slot) {
    auto v = std::make_unique<std::vector<CubeMor>>();
    v->reserve(hom_size(m, n));
    for (std::size_t c = 0; c < hom_size(m, n); ++c) v->push_back(value(mor(m, n, c)));
    slot = std::move(v);
  }
  return *slot;
}

void CubeSite::build_generators() {
  const std::size_t total = dom_.size();
  std::vector<MorId> candidates;
  for (unsigned n = 0; n < max_dim_; ++n)
    for (unsigned i = 0; i <= n; ++i) {
      candidates.push_back(face(n, i, 0));
      candidates.push_back(face(n, i, 1));
      candidates.push_back(degeneracy(n, i));
    }
  for (unsigned n = 1; n <= max_dim_; ++n)
    for (unsigned i = 0; i < n; ++i) {
      std::vector<DmTable::Index> comps;
      for (unsigned j = 0; j < n; ++j) comps.push_back(algebras_[n]->generator(j, j == i));
      candidates.push_back(from_components(n, comps));
    }
  if (max_dim_ >= 2) {
    candidates.push_back(swap());
    candidates.push_back(connection(0));
    candidates.push_back(connection(1));
    candidates.push_back(diagonal());
  }

  first_.assign(total, 0);
  rest_.assign(total, 0);
  length_.assign(total, 0);
  gen_index_.assign(total, -1);
  std::vector<bool> known(total, false);
  std::deque<MorId> queue;
  for (unsigned n = 0; n <= max_dim_; ++n) {
    MorId id = identity(n);
    known[id] = true;
    first_[id] = rest_[id] = id;
    queue.push_back(id);
  }
  gens_into_.assign(max_dim_ + 1, {});
  auto add_generator = [&](MorId g) {
    if (gen_index_[g] >= 0 || is_identity(g)) return;
    gen_index_[g] = static_cast<int>(generators_.size());
    generators_.push_back(g);
    gens_into_[cod_[g]].push_back(g);
  };
  // Breadth-first closure: extending known f' by a generator g gives g o f'.
  auto close = [&] {
    while (!queue.empty()) {
      MorId f = queue.front();
      queue.pop_front();
      for (MorId g : generators_) {
        if (dom_[g] != cod_[f]) continue;
        MorId h = compose(g, f);
        if (known[h]) continue;
        known[h] = true;
        first_[h] = g;
        rest_[h] = f;
        length_[h] = static_cast<std::uint8_t>(length_[f] + 1);
        queue.push_back(h);
      }
    }
  };
  for (MorId g : candidates) add_generator(g);
  // Re-seed with identities after the candidate set is final, then patch holes greedily.
  close();
  for (std::size_t f = 0; f < total; ++f) {
    if (known[f]) continue;
    MorId g = static_cast<MorId>(f);
    add_generator(g);
    for (std::size_t e = 0; e < total; ++e) {
      if (!known[e] || cod_[e] != dom_[g]) continue;
      MorId h = compose(g, static_cast<MorId>(e));
      if (known[h]) continue;
      known[h] = true;
      first_[h] = g;
      rest_[h] = static_cast<MorId>(e);
      length_[h] = static_cast<std::uint8_t>(length_[e] + 1);
      queue.push_back(h);
    }
    close();
  }
}

}  // namespace cubical
