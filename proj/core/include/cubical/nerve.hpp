#pragma once

// Boolean nerves of simplicial complexes. A level-m cell is a function
// 2^m -> V whose image lies in a face; a site morphism acts by evaluating its
// components on the Boolean points.

#include <functional>
#include <string>
#include <vector>

#include "cubical/cylinder.hpp"
#include "cubical/presheaf.hpp"

namespace cubical {

struct Nerve {
  CubSet obj;
  unsigned vertices = 0;
  std::vector<std::vector<unsigned>> facets;
  std::vector<std::vector<std::vector<unsigned>>> cells;  // [level][cell] = values on 2^level

  /// Index of the cell with the given values (ContractError if absent).
  Cell find(unsigned m, const std::vector<unsigned>& values) const;
};

Nerve nerve(const SitePtr& site, unsigned vertices, std::vector<std::vector<unsigned>> facets, std::string name = {});
/// The map induced by a simplicial vertex map.
PshMap nerve_map(const Nerve& a, const Nerve& b, const std::vector<unsigned>& vertex_map);
/// The map I (x) Y -> Y sending (u, y) to p |-> h(u(p), y(p)); `c` must be cylinder(y.obj).
PshMap nerve_homotopy(const Nerve& y, const Cylinder& c, const std::function<unsigned(bool, unsigned)>& h);
/// Value of a de Morgan element of arity m at a Boolean point (bit i = coordinate i).
bool eval_boolean(const DmElem& e, unsigned m, unsigned point);

}  // namespace cubical
