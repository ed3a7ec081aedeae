#include "cubical/nerve.hpp"

#include <algorithm>

#include "cubical/errors.hpp"

namespace cubical {

namespace {

bool reversed_less(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

}  // namespace

bool eval_boolean(const DmElem& e, unsigned m, unsigned point) {
  for (auto cl : e.clauses()) {
    bool ok = true;
    for (unsigned i = 0; i < m && ok; ++i) {
      bool bit = (point >> i) & 1;
      if (((cl >> (2 * i)) & 1) && !bit) ok = false;
      if (((cl >> (2 * i + 1)) & 1) && bit) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

Cell Nerve::find(unsigned m, const std::vector<unsigned>& values) const {
  auto& lv = cells[m];
  auto it = std::lower_bound(lv.begin(), lv.end(), values, reversed_less);
  if (it == lv.end() || *it != values) throw ContractError("nerve: values do not span a face");
  return static_cast<Cell>(it - lv.begin());
}

Nerve nerve(const SitePtr& site, unsigned vertices, std::vector<std::vector<unsigned>> facets, std::string name) {
  const CubeSite& s = *site;
  if (vertices == 0 || vertices > 16) throw ContractError("nerve: between 1 and 16 vertices");
  std::vector<unsigned> masks;
  for (auto& f : facets) {
    unsigned fm = 0;
    for (unsigned v : f) {
      if (v >= vertices) throw ContractError("nerve: facet vertex out of range");
      fm |= 1u << v;
    }
    masks.push_back(fm);
  }
  for (unsigned v = 0; v < vertices; ++v) masks.push_back(1u << v);
  auto is_face = [&](unsigned mask) {
    return std::any_of(masks.begin(), masks.end(), [&](unsigned fm) { return (mask & ~fm) == 0; });
  };
  Nerve out;
  out.vertices = vertices;
  out.facets = std::move(facets);
  out.cells.resize(s.max_dim() + 1);
  for (unsigned m = 0; m <= s.max_dim(); ++m) {
    const unsigned pts = 1u << m;
    std::vector<unsigned> f(pts, 0);
    // Odometer over V^(2^m), keeping functions whose image is a face.
    while (true) {
      unsigned mask = 0;
      for (unsigned v : f) mask |= 1u << v;
      if (is_face(mask)) out.cells[m].push_back(f);
      unsigned i = 0;
      while (i < pts && ++f[i] == vertices) f[i++] = 0;
      if (i == pts) break;
    }
    std::sort(out.cells[m].begin(), out.cells[m].end(), reversed_less);
  }
  CubSetBuilder b(site);
  for (unsigned m = 0; m <= s.max_dim(); ++m) b.set_size(m, out.cells[m].size());
  b.set_action_from([&](MorId g, Cell c) {
    unsigned m = s.dom(g), n = s.cod(g);
    std::vector<unsigned> v(1u << m);
    for (unsigned p = 0; p < v.size(); ++p) {
      unsigned q = 0;
      for (unsigned j = 0; j < n; ++j)
        if (eval_boolean(s.algebra(m).elem(s.component(g, j)), m, p)) q |= 1u << j;
      v[p] = out.cells[n][c][q];
    }
    return out.find(m, v);
  });
  out.obj = b.build(std::move(name));
  return out;
}

PshMap nerve_map(const Nerve& a, const Nerve& b, const std::vector<unsigned>& vertex_map) {
  if (vertex_map.size() != a.vertices) throw ContractError("nerve_map: one image per vertex required");
  for (unsigned v : vertex_map)
    if (v >= b.vertices) throw ContractError("nerve_map: vertex image out of range");
  std::vector<std::vector<Cell>> lv(a.cells.size());
  for (unsigned m = 0; m < a.cells.size(); ++m)
    for (auto& f : a.cells[m]) {
      std::vector<unsigned> g(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) g[i] = vertex_map[f[i]];
      lv[m].push_back(b.find(m, g));
    }
  return PshMap(a.obj, b.obj, std::move(lv));
}

PshMap nerve_homotopy(const Nerve& y, const Cylinder& c, const std::function<unsigned(bool, unsigned)>& h) {
  const CubeSite& s = *y.obj.site();
  if (!c.base.same_shape(y.obj)) throw ContractError("nerve_homotopy: cylinder of a different object");
  std::vector<std::vector<Cell>> lv(y.cells.size());
  for (unsigned m = 0; m < y.cells.size(); ++m)
    for (std::size_t cc = 0; cc < c.obj().size(m); ++cc) {
      Cell u = c.interval(m, static_cast<Cell>(cc)), x = c.point(m, static_cast<Cell>(cc));
      const DmElem& e = s.algebra(m).elem(u);
      std::vector<unsigned> f(1u << m);
      for (unsigned p = 0; p < f.size(); ++p) f[p] = h(eval_boolean(e, m, p), y.cells[m][x][p]);
      lv[m].push_back(y.find(m, f));
    }
  return PshMap(c.obj(), y.obj, std::move(lv));
}

}  // namespace cubical
