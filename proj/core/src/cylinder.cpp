#include "cubical/cylinder.hpp"

#include "cubical/errors.hpp"

namespace cubical {

Cylinder cylinder(const CubSet& x) {
  Cylinder c;
  c.base = x;
  c.prod = product(yoneda(x.site(), 1), x);
  c.prod.obj = c.prod.obj.named(x.name().empty() ? std::string() : "I(x)" + x.name());
  c.prod.p1 = retype(c.prod.p1, c.prod.obj, c.prod.p1.cod());
  c.prod.p2 = retype(c.prod.p2, c.prod.obj, c.prod.p2.cod());
  return c;
}

PshMap cyl_delta(const Cylinder& c, unsigned k) {
  const CubeSite& s = *c.base.site();
  std::vector<std::vector<Cell>> lv(s.max_dim() + 1);
  for (unsigned n = 0; n <= s.max_dim(); ++n) {
    Cell u = static_cast<Cell>(s.code(s.constant(n, k)));
    for (std::size_t x = 0; x < c.base.size(n); ++x) lv[n].push_back(c.pack(n, u, static_cast<Cell>(x)));
  }
  return PshMap(c.base, c.obj(), std::move(lv));
}

PshMap cyl_eps(const Cylinder& c) { return c.prod.p2; }

PshMap cyl_map(const Cylinder& a, const Cylinder& b, const PshMap& f) {
  if (!f.dom().same_shape(a.base) || !f.cod().same_shape(b.base)) throw ContractError("cyl_map: endpoints do not match");
  const unsigned L = a.base.max_dim() + 1;
  std::vector<std::vector<Cell>> lv(L);
  for (unsigned n = 0; n < L; ++n) {
    lv[n].resize(a.obj().size(n));
    for (std::size_t c = 0; c < lv[n].size(); ++c)
      lv[n][c] = b.pack(n, a.interval(n, static_cast<Cell>(c)), f(n, a.point(n, static_cast<Cell>(c))));
  }
  return PshMap(a.obj(), b.obj(), std::move(lv));
}

CylPack cyl_pack(const CubSet& x) {
  const CubeSite& s = *x.site();
  CylPack p;
  p.c1 = cylinder(x);
  p.c2 = cylinder(p.c1.obj());
  for (unsigned k = 0; k < 2; ++k) p.delta[k] = cyl_delta(p.c1, k);
  p.eps = cyl_eps(p.c1);
  for (unsigned k = 0; k < 2; ++k) {
    p.delta_outer[k] = cyl_delta(p.c2, k);
    p.delta_inner[k] = cyl_map(p.c1, p.c2, p.delta[k]);
    std::vector<std::vector<Cell>> lv(s.max_dim() + 1);
    for (unsigned n = 0; n <= s.max_dim(); ++n) {
      const DmTable& alg = s.algebra(n);
      for (std::size_t c = 0; c < p.c2.obj().size(n); ++c) {
        Cell u = p.c2.interval(n, static_cast<Cell>(c));
        Cell w = p.c2.point(n, static_cast<Cell>(c));
        Cell v = p.c1.interval(n, w), xx = p.c1.point(n, w);
        auto a = static_cast<DmTable::Index>(u), b = static_cast<DmTable::Index>(v);
        Cell uv = k ? alg.join(a, b) : alg.meet(a, b);
        lv[n].push_back(p.c1.pack(n, uv, xx));
      }
    }
    p.conn[k] = PshMap(p.c2.obj(), p.c1.obj(), std::move(lv));
  }
  return p;
}

std::vector<DiagramCheck> check_cylinder_axioms(const CylPack& p) {
  std::vector<DiagramCheck> out;
  PshMap id_x = PshMap::identity(p.c1.base), id_c = PshMap::identity(p.c1.obj());
  for (unsigned k = 0; k < 2; ++k) {
    std::string K = std::to_string(k);
    out.push_back({"eps . delta" + K + " = id", compose(p.eps, p.delta[k]) == id_x});
  }
  for (unsigned k = 0; k < 2; ++k) {
    std::string K = std::to_string(k);
    PshMap de = compose(p.delta[k], p.eps);
    out.push_back({"c" + K + " . (delta" + K + " (x) I) = delta" + K + " . eps", compose(p.conn[k], p.delta_outer[k]) == de});
    out.push_back({"c" + K + " . (I (x) delta" + K + ") = delta" + K + " . eps", compose(p.conn[k], p.delta_inner[k]) == de});
    std::string J = std::to_string(1 - k);
    out.push_back({"c" + K + " . (delta" + J + " (x) I) = id", compose(p.conn[k], p.delta_outer[1 - k]) == id_c});
    out.push_back({"c" + K + " . (I (x) delta" + J + ") = id", compose(p.conn[k], p.delta_inner[1 - k]) == id_c});
  }
  return out;
}

bool delta_cartesian_at(const PshMap& f, unsigned k) {
  Cylinder ca = cylinder(f.dom()), cb = cylinder(f.cod());
  Pullback pb = pullback(cyl_delta(cb, k), cyl_map(ca, cb, f));
  return is_iso(pb.mediator(f, cyl_delta(ca, k)));
}

LeibnizTensor leibniz_tensor(unsigned k, const PshMap& i) {
  LeibnizTensor t;
  t.k = k;
  t.arg = i;
  t.ca = cylinder(i.dom());
  t.cb = cylinder(i.cod());
  t.po = pushout(cyl_delta(t.ca, k), i);
  t.corner = t.po.mediator(cyl_map(t.ca, t.cb, i), cyl_delta(t.cb, k));
  return t;
}

ArrowMap theta(const LeibnizTensor& t) {
  return {compose(t.po.i1, cyl_delta(t.ca, 1 - t.k)), cyl_delta(t.cb, 1 - t.k)};
}

bool square_commutes(const PshMap& from, const PshMap& to, const ArrowMap& m) {
  return compose(m.bottom, from) == compose(to, m.top);
}

CubSet path_object(const CubSet& x, const SitePtr& lower) {
  const CubeSite& big = *x.site();
  if (lower->max_dim() + 1 != big.max_dim()) throw ContractError("path_object: site must be one dimension lower");
  CubSetBuilder b(lower);
  for (unsigned n = 0; n <= lower->max_dim(); ++n) {
    b.set_size(n, x.size(n + 1));
    std::vector<std::string> labels;
    if (x.size(n + 1) <= 4096)
      for (std::size_t c = 0; c < x.size(n + 1); ++c) labels.push_back(x.label(n + 1, static_cast<Cell>(c)));
    b.set_labels(n, std::move(labels));
  }
  b.set_action_from([&](MorId g, Cell c) { return x.act(big.cylinder(lower->translate(g, big)), c); });
  return b.build(x.name().empty() ? std::string() : x.name() + "^I");
}

LeibnizExp leibniz_exp(unsigned k, const PshMap& p) {
  const CubeSite& big = *p.dom().site();
  if (big.max_dim() == 0) throw TruncationError("leibniz_exp needs dimension at least 1");
  LeibnizExp e;
  e.k = k;
  e.site = CubeSite::shared(big.max_dim() - 1);
  const CubSet &X = p.dom(), &Y = p.cod();
  e.path_x = path_object(X, e.site);
  e.path_y = path_object(Y, e.site);
  e.x_low = restrict_to_site(X, e.site);
  e.y_low = restrict_to_site(Y, e.site);
  const unsigned L = e.site->max_dim() + 1;
  std::vector<std::vector<Cell>> evx(L), evy(L), ep(L), pl(L);
  for (unsigned n = 0; n < L; ++n) {
    MorId face = big.face(n, 0, k);
    for (std::size_t c = 0; c < X.size(n + 1); ++c) {
      evx[n].push_back(X.act(face, static_cast<Cell>(c)));
      ep[n].push_back(p(n + 1, static_cast<Cell>(c)));
    }
    for (std::size_t c = 0; c < Y.size(n + 1); ++c) evy[n].push_back(Y.act(face, static_cast<Cell>(c)));
    pl[n] = p.level(n);
  }
  e.ev_x = PshMap(e.path_x, e.x_low, std::move(evx));
  e.ev_y = PshMap(e.path_y, e.y_low, std::move(evy));
  e.exp_p = PshMap(e.path_x, e.path_y, std::move(ep));
  e.p_low = PshMap(e.x_low, e.y_low, std::move(pl));
  e.target = pullback(e.ev_y, e.p_low);
  e.corner = e.target.mediator(e.exp_p, e.ev_x);
  e.defined_levels = L;
  return e;
}

}  // namespace cubical
