#pragma once

// Independent oracles and small corpora shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "cubical/demorgan.hpp"
#include "cubical/homotopy.hpp"
#include "cubical/nerve.hpp"
#include "cubical/presheaf.hpp"
#include "cubical/search.hpp"

namespace cubical::testing {

// The four-element de Morgan algebra 2 x 2^op, which generates the variety:
// two free elements are equal iff they agree at every point of M4^n.
struct M4 {
  bool a = false, b = false;
  friend bool operator==(M4, M4) = default;
};
inline M4 m4_join(M4 x, M4 y) { return {x.a || y.a, x.b || y.b}; }
inline M4 m4_meet(M4 x, M4 y) { return {x.a && y.a, x.b && y.b}; }
inline M4 m4_neg(M4 x) { return {!x.b, !x.a}; }

/// Evaluates the disjunctive form read straight off the clause bits.
inline M4 m4_eval(const DmElem& e, const std::vector<M4>& point) {
  M4 out{false, false};
  for (ClauseMask c : e.clauses()) {
    M4 t{true, true};
    for (unsigned bit = 0; bit < 2 * e.arity(); ++bit)
      if (c & (1u << bit)) t = m4_meet(t, bit & 1u ? m4_neg(point[bit / 2]) : point[bit / 2]);
    out = m4_join(out, t);
  }
  return out;
}

inline std::vector<std::vector<M4>> m4_points(unsigned n) {
  std::vector<std::vector<M4>> pts;
  for (unsigned code = 0; code < (1u << (2 * n)); ++code) {
    std::vector<M4> p(n);
    for (unsigned i = 0; i < n; ++i) p[i] = {bool(code >> (2 * i) & 1u), bool(code >> (2 * i + 1) & 1u)};
    pts.push_back(p);
  }
  return pts;
}

/// Truth table over M4^n; equal elements have equal tables.
inline std::vector<std::uint8_t> m4_table(const DmElem& e) {
  std::vector<std::uint8_t> t;
  for (const auto& p : m4_points(e.arity())) {
    M4 v = m4_eval(e, p);
    t.push_back(std::uint8_t(v.a | v.b << 1));
  }
  return t;
}

/// Antichains in the power set of the 2n literals, as sorted clause-mask lists.
inline std::set<std::vector<ClauseMask>> antichain_oracle(unsigned n) {
  const unsigned subsets = 1u << (2 * n);
  std::set<std::vector<ClauseMask>> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    std::vector<ClauseMask> cs;
    for (unsigned s = 0; s < subsets; ++s)
      if (fam >> s & 1u) cs.push_back(static_cast<ClauseMask>(s));
    bool anti = true;
    for (std::size_t i = 0; anti && i < cs.size(); ++i)
      for (std::size_t j = 0; anti && j < cs.size(); ++j)
        if (i != j && (cs[i] & cs[j]) == cs[i]) anti = false;
    if (anti) out.insert(cs);
  }
  return out;
}

inline std::vector<ClauseMask> sorted_clauses(const DmElem& e) {
  std::vector<ClauseMask> c = e.clauses();
  std::sort(c.begin(), c.end());
  return c;
}

/// Small nerves, all at most 30 cells at N = 2.
struct SmallNerves {
  SitePtr site;
  Nerve pt, d2, d3, edge, edge_pt;
  explicit SmallNerves(SitePtr s)
      : site(s),
        pt(nerve(s, 1, {}, "pt")),
        d2(nerve(s, 2, {}, "D")),
        d3(nerve(s, 3, {}, "D3")),
        edge(nerve(s, 2, {{0, 1}}, "E")),
        edge_pt(nerve(s, 3, {{0, 1}}, "E+pt")) {}
};

/// Straight-line contraction of the edge onto vertex v, constant at the k end.
inline PshMap edge_contraction(const Nerve& e, unsigned k, unsigned v) {
  return nerve_homotopy(e, cylinder(e.obj), [k, v](bool u, unsigned x) { return u == bool(k) ? v : x; });
}

/// E -> pt with g the vertex v.
inline SheData contract_edge(const SmallNerves& nv, unsigned k, unsigned v) {
  return {k, to_terminal(nv.edge.obj, nv.pt.obj), nerve_map(nv.pt, nv.edge, {v}), edge_contraction(nv.edge, k, v),
          cyl_eps(cylinder(nv.pt.obj))};
}

/// The vertex v : pt -> E with g = E -> pt.
inline SheData include_vertex(const SmallNerves& nv, unsigned k, unsigned v) {
  return {k, nerve_map(nv.pt, nv.edge, {v}), to_terminal(nv.edge.obj, nv.pt.obj), cyl_eps(cylinder(nv.pt.obj)),
          edge_contraction(nv.edge, k, v)};
}

/// Number of natural maps d -> x with the given candidates.
inline std::uint64_t count_maps(const CubSet& d, const CubSet& x, const CandidateFn& cand) {
  SearchBudget b(1ull << 32);
  return enumerate_natural_maps(d, x, cand, b, [](const PshMap&) { return true; });
}

/// Candidates for maps over a base: cells of x lying over base_of(level, cell).
inline CandidateFn over(const PshMap& structure, const std::function<Cell(unsigned, Cell)>& base_of) {
  auto fib = std::make_shared<Fibers>(structure);
  return [fib, base_of](unsigned n, Cell c) { return fib->of(n, base_of(n, c)); };
}

}  // namespace cubical::testing
