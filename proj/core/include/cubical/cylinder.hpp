#pragma once

// The cylinder I (x) X = y(1) x X with its endpoint inclusions, contraction and
// connections, the Leibniz tensor with an endpoint, and the Leibniz exponential.
//
// The interval coordinate is always the first one: a cell of I (x) X at level n
// is a pair (u, x) with u : n -> 1 and x in X_n. I (x) I (x) X is I (x) (I (x) X).

#include <string>
#include <vector>

#include "cubical/presheaf.hpp"

namespace cubical {

struct Cylinder {
  CubSet base;
  Product prod;  // y(1) x base
  const CubSet& obj() const { return prod.obj; }
  Cell pack(unsigned n, Cell u, Cell x) const { return prod.pack(n, u, x); }
  Cell interval(unsigned n, Cell c) const { return prod.p1(n, c); }
  Cell point(unsigned n, Cell c) const { return prod.p2(n, c); }
};

Cylinder cylinder(const CubSet& x);
/// delta^k (x) X : X -> I (x) X.
PshMap cyl_delta(const Cylinder& c, unsigned k);
/// epsilon (x) X : I (x) X -> X.
PshMap cyl_eps(const Cylinder& c);
/// I (x) f : I (x) A -> I (x) B.
PshMap cyl_map(const Cylinder& a, const Cylinder& b, const PshMap& f);

/// Everything needed for the cylinder axioms on one X.
struct CylPack {
  Cylinder c1;  // I (x) X
  Cylinder c2;  // I (x) I (x) X
  PshMap delta[2], eps;
  PshMap conn[2];           // c^k (x) X : I (x) I (x) X -> I (x) X
  PshMap delta_outer[2];    // delta^k (x) I (x) X
  PshMap delta_inner[2];    // I (x) delta^k (x) X
};
CylPack cyl_pack(const CubSet& x);

struct DiagramCheck {
  std::string name;
  bool ok = false;
};
/// The contraction and connection equations for both k.
std::vector<DiagramCheck> check_cylinder_axioms(const CylPack& p);
/// delta^k (x) (-) is cartesian: the naturality square at f is a pullback.
bool delta_cartesian_at(const PshMap& f, unsigned k);

/// Leibniz tensor delta^k (x)^ i for i : A -> B:
/// corner : (I (x) A) +_A B -> I (x) B.
struct LeibnizTensor {
  unsigned k = 0;
  PshMap arg;  // i
  Cylinder ca, cb;
  Pushout po;  // of delta^k (x) A and i; i1 = iota_0, i2 = iota_1
  PshMap corner;
};
LeibnizTensor leibniz_tensor(unsigned k, const PshMap& i);

struct ArrowMap {
  PshMap top, bottom;
};
/// theta^k (x)^ f : f -> delta^k (x)^ f with components iota_0 o (delta^(1-k) (x) A) and delta^(1-k) (x) B.
ArrowMap theta(const LeibnizTensor& t);
/// The square bottom o from = to o top.
bool square_commutes(const PshMap& from, const PshMap& to, const ArrowMap& m);

/// Leibniz exponential of p : X -> Y with the endpoint k, as a map of cubical sets
/// over the site one dimension lower: X^I -> Y^I x_Y X, where X^I has cells
/// X_{n+1} at level n.
struct LeibnizExp {
  unsigned k = 0;
  SitePtr site;  // dimension N - 1
  CubSet path_x, path_y, x_low, y_low;
  PshMap ev_x, ev_y;  // evaluation at k
  PshMap exp_p;       // p^I : X^I -> Y^I
  PshMap p_low;
  Pullback target;    // Y^I x_Y X
  PshMap corner;      // X^I -> Y^I x_Y X
  unsigned defined_levels = 0;  // levels 0 .. defined_levels - 1 are exact
};
LeibnizExp leibniz_exp(unsigned k, const PshMap& p);
/// X^I over the site with one dimension less.
CubSet path_object(const CubSet& x, const SitePtr& lower);

}  // namespace cubical
