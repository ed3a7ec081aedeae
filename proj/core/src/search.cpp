#include "cubical/search.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <tuple>

#include "cubical/errors.hpp"

namespace cubical {

void SearchBudget::spend(std::uint64_t k) {
  used_ += k;
  if (used_ > limit_) throw BudgetExceeded("search budget of " + std::to_string(limit_) + " nodes exhausted");
}

ConstraintGraph ConstraintGraph::of(const CubSet& d) {
  const CubeSite& s = *d.site();
  ConstraintGraph g;
  g.offset.assign(s.max_dim() + 2, 0);
  for (unsigned n = 0; n <= s.max_dim(); ++n) g.offset[n + 1] = static_cast<std::uint32_t>(g.offset[n] + d.size(n));
  g.level.resize(g.offset.back());
  g.begin.assign(g.level.size() + 1, 0);
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    const auto& gens = s.generators_into(n);
    for (std::size_t x = 0; x < d.size(n); ++x) {
      std::uint32_t v = static_cast<std::uint32_t>(g.offset[n] + x);
      g.level[v] = static_cast<std::uint8_t>(n);
      for (MorId h : gens) {
        g.to.push_back(static_cast<std::uint32_t>(g.offset[s.dom(h)] + d.act(h, static_cast<Cell>(x))));
        g.mor.push_back(h);
      }
      g.begin[v + 1] = static_cast<std::uint32_t>(g.to.size());
    }
  }
  return g;
}

ConstraintGraph ConstraintGraph::from_edges(std::vector<std::uint8_t> level,
                                            const std::vector<std::tuple<std::uint32_t, std::uint32_t, MorId>>& edges) {
  ConstraintGraph g;
  g.level = std::move(level);
  g.begin.assign(g.level.size() + 1, 0);
  for (const auto& e : edges) ++g.begin[std::get<0>(e) + 1];
  std::partial_sum(g.begin.begin(), g.begin.end(), g.begin.begin());
  g.to.resize(edges.size());
  g.mor.resize(edges.size());
  std::vector<std::uint32_t> fill(g.begin.begin(), g.begin.end() - 1);
  for (const auto& [a, b, m] : edges) {
    g.to[fill[a]] = b;
    g.mor[fill[a]++] = m;
  }
  return g;
}

std::vector<std::uint32_t> source_representatives(const ConstraintGraph& g) {
  const std::uint32_t n = static_cast<std::uint32_t>(g.nodes());
  constexpr std::uint32_t kUnset = 0xffffffffu;
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0, ncomp = 0;
  // Iterative Tarjan: frames hold (node, next edge).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> frames;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, g.begin[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, e] = frames.back();
      if (e < g.begin[v + 1]) {
        std::uint32_t w = g.to[e++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, g.begin[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      std::uint32_t done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  std::vector<bool> has_in(ncomp, false);
  for (std::uint32_t v = 0; v < n; ++v)
    for (std::uint32_t e = g.begin[v]; e < g.begin[v + 1]; ++e)
      if (comp[g.to[e]] != comp[v]) has_in[comp[g.to[e]]] = true;
  std::vector<std::uint32_t> rep(ncomp, kUnset);
  for (std::uint32_t v = 0; v < n; ++v)
    if (!has_in[comp[v]] && rep[comp[v]] == kUnset) rep[comp[v]] = v;
  std::vector<std::uint32_t> out;
  for (std::uint32_t r : rep)
    if (r != kUnset) out.push_back(r);
  std::sort(out.begin(), out.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (g.level[a] != g.level[b]) return g.level[a] > g.level[b];
    return a < b;
  });
  return out;
}

MapSearch::MapSearch(const ConstraintGraph& g, CubSet target, std::vector<std::span<const Cell>> candidates)
    : g_(g), target_(std::move(target)), cand_(std::move(candidates)) {
  if (cand_.size() != g.nodes()) throw ContractError("MapSearch: one candidate list per node required");
  reps_ = source_representatives(g);
  val_.assign(g.nodes(), kNoCell);
  const CubeSite& s = *target_.site();
  table_.resize(g.to.size(), nullptr);
  for (std::size_t e = 0; e < g.to.size(); ++e) {
    int gi = s.generator_index(g.mor[e]);
    if (gi >= 0) table_[e] = target_.generator_table(static_cast<std::size_t>(gi));
  }
}

bool MapSearch::assign(std::uint32_t v, Cell value, SearchBudget& budget) {
  auto ok = [&](std::uint32_t w, Cell x) {
    const auto& c = cand_[w];
    return std::binary_search(c.begin(), c.end(), x);
  };
  if (val_[v] != kNoCell) return val_[v] == value;
  if (!ok(v, value)) return false;
  val_[v] = value;
  trail_.push_back(v);
  queue_.clear();
  queue_.push_back(v);
  for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
    std::uint32_t u = queue_[qi];
    budget.spend();
    Cell x = val_[u];
    for (std::uint32_t e = g_.begin[u]; e < g_.begin[u + 1]; ++e) {
      std::uint32_t w = g_.to[e];
      Cell y = table_[e] ? table_[e][x] : target_.act(g_.mor[e], x);
      if (val_[w] != kNoCell) {
        if (val_[w] != y) return false;
        continue;
      }
      if (!ok(w, y)) return false;
      val_[w] = y;
      trail_.push_back(w);
      queue_.push_back(w);
    }
  }
  return true;
}

void MapSearch::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    val_[trail_.back()] = kNoCell;
    trail_.pop_back();
  }
}

bool MapSearch::rec(std::size_t i, SearchBudget& budget, const std::function<bool(const std::vector<Cell>&)>& visit,
                    std::uint64_t& count) {
  if (i == reps_.size()) {
    ++count;
    return visit(val_);
  }
  std::uint32_t v = reps_[i];
  if (val_[v] != kNoCell) return rec(i + 1, budget, visit, count);
  for (Cell c : cand_[v]) {
    std::size_t mark = trail_.size();
    budget.spend();
    if (assign(v, c, budget)) {
      if (!rec(i + 1, budget, visit, count)) {
        undo(mark);
        return false;
      }
    }
    undo(mark);
  }
  return true;
}

std::optional<std::vector<Cell>> MapSearch::first(SearchBudget& budget) {
  std::optional<std::vector<Cell>> out;
  enumerate(budget, [&](const std::vector<Cell>& v) {
    out = v;
    return false;
  });
  return out;
}

std::uint64_t MapSearch::enumerate(SearchBudget& budget, const std::function<bool(const std::vector<Cell>&)>& visit) {
  std::uint64_t count = 0;
  undo(0);
  try {
    rec(0, budget, visit, count);
  } catch (...) {
    undo(0);
    throw;
  }
  undo(0);
  return count;
}

namespace {

std::vector<std::span<const Cell>> collect(const CubSet& d, const ConstraintGraph& g, const CandidateFn& cand) {
  std::vector<std::span<const Cell>> spans(g.nodes());
  for (unsigned n = 0; n <= d.max_dim(); ++n)
    for (std::size_t x = 0; x < d.size(n); ++x) spans[g.offset[n] + x] = cand(n, static_cast<Cell>(x));
  return spans;
}

PshMap to_map(const CubSet& d, const CubSet& x, const ConstraintGraph& g, const std::vector<Cell>& v) {
  std::vector<std::vector<Cell>> lv(d.max_dim() + 1);
  for (unsigned n = 0; n <= d.max_dim(); ++n) lv[n].assign(v.begin() + g.offset[n], v.begin() + g.offset[n + 1]);
  return PshMap(d, x, std::move(lv));
}

}  // namespace

std::optional<PshMap> find_natural_map(const CubSet& d, const CubSet& x, const CandidateFn& cand, SearchBudget& budget) {
  ConstraintGraph g = ConstraintGraph::of(d);
  MapSearch search(g, x, collect(d, g, cand));
  auto v = search.first(budget);
  if (!v) return std::nullopt;
  return to_map(d, x, g, *v);
}

std::uint64_t enumerate_natural_maps(const CubSet& d, const CubSet& x, const CandidateFn& cand, SearchBudget& budget,
                                     const std::function<bool(const PshMap&)>& visit) {
  ConstraintGraph g = ConstraintGraph::of(d);
  MapSearch search(g, x, collect(d, g, cand));
  return search.enumerate(budget, [&](const std::vector<Cell>& v) { return visit(to_map(d, x, g, v)); });
}

CandidateFn all_cells(const CubSet& x) {
  auto levels = std::make_shared<std::vector<std::vector<Cell>>>(x.max_dim() + 1);
  for (unsigned n = 0; n <= x.max_dim(); ++n) {
    (*levels)[n].resize(x.size(n));
    std::iota((*levels)[n].begin(), (*levels)[n].end(), Cell{0});
  }
  return [levels](unsigned n, Cell) { return std::span<const Cell>((*levels)[n]); };
}

}  // namespace cubical
