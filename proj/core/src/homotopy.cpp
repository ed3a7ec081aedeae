#include "cubical/homotopy.hpp"

#include "cubical/errors.hpp"

namespace cubical {

namespace {

void check_map(Report& r, const PshMap& m, const std::string& name) {
  auto v = check_naturality(m);
  r.record(!v, v ? name + " is not natural: " + v->describe(*m.dom().site()) : std::string());
}

}  // namespace

Report validate_homotopy(const Homotopy& h) {
  Report r("homotopy");
  Cylinder c = cylinder(h.from.dom());
  r.group("shapes");
  r.record(h.body.dom().same_shape(c.obj()) && h.body.cod().same_shape(h.from.cod()), "body has the wrong endpoints");
  if (!r.ok()) return r;
  r.group("endpoints");
  r.record(compose(h.body, cyl_delta(c, 0)) == h.from, "body o delta^0 differs from the source map");
  r.record(compose(h.body, cyl_delta(c, 1)) == h.to, "body o delta^1 differs from the target map");
  return r;
}

Report validate_she(const SheData& s) {
  Report r("strong " + std::to_string(s.k) + "-oriented homotopy equivalence");
  const CubSet &X = s.f.dom(), &Y = s.f.cod();
  Cylinder cx = cylinder(X), cy = cylinder(Y);
  r.group("shapes");
  r.record(s.k <= 1, "orientation must be 0 or 1");
  r.record(s.g.dom().same_shape(Y) && s.g.cod().same_shape(X), "g is not a map Y -> X");
  r.record(s.phi.dom().same_shape(cx.obj()) && s.phi.cod().same_shape(X), "phi is not a map I (x) X -> X");
  r.record(s.psi.dom().same_shape(cy.obj()) && s.psi.cod().same_shape(Y), "psi is not a map I (x) Y -> Y");
  if (!r.ok()) return r;
  r.group("naturality");
  check_map(r, s.f, "f");
  check_map(r, s.g, "g");
  check_map(r, s.phi, "phi");
  check_map(r, s.psi, "psi");
  const unsigned k = s.k;
  const std::string K = std::to_string(k), J = std::to_string(1 - k);
  r.group("phi endpoints");
  r.record(compose(s.phi, cyl_delta(cx, k)) == compose(s.g, s.f), "phi o delta^" + K + " differs from g o f");
  r.record(compose(s.phi, cyl_delta(cx, 1 - k)) == PshMap::identity(X), "phi o delta^" + J + " differs from id");
  r.group("psi endpoints");
  r.record(compose(s.psi, cyl_delta(cy, k)) == compose(s.f, s.g), "psi o delta^" + K + " differs from f o g");
  r.record(compose(s.psi, cyl_delta(cy, 1 - k)) == PshMap::identity(Y), "psi o delta^" + J + " differs from id");
  r.group("strength");
  r.record(compose(s.f, s.phi) == compose(s.psi, cyl_map(cx, cy, s.f)), "f o phi differs from psi o (I (x) f)");
  return r;
}

Report validate_retract(const RetractData& rt) {
  Report r("retraction of theta^" + std::to_string(rt.k));
  const PshMap& f = rt.f();
  r.group("shapes");
  r.record(rt.dom.dom().same_shape(rt.lt.po.obj) && rt.dom.cod().same_shape(f.dom()), "domain component has the wrong endpoints");
  r.record(rt.cod.dom().same_shape(rt.lt.cb.obj()) && rt.cod.cod().same_shape(f.cod()), "codomain component has the wrong endpoints");
  if (!r.ok()) return r;
  r.group("naturality");
  check_map(r, rt.dom, "domain component");
  check_map(r, rt.cod, "codomain component");
  ArrowMap th = theta(rt.lt);
  r.group("retraction");
  r.record(compose(rt.dom, th.top) == PshMap::identity(f.dom()), "domain component o theta differs from id");
  r.record(compose(rt.cod, th.bottom) == PshMap::identity(f.cod()), "codomain component o theta differs from id");
  r.group("map of arrows");
  r.record(compose(f, rt.dom) == compose(rt.cod, rt.lt.corner), "f o domain component differs from codomain component o corner");
  return r;
}

RetractData she_to_retract(const SheData& s) {
  RetractData r;
  r.k = s.k;
  r.lt = leibniz_tensor(s.k, s.f);
  r.dom = r.lt.po.mediator(retype(s.phi, r.lt.ca.obj(), s.f.dom()), s.g);
  r.cod = retype(s.psi, r.lt.cb.obj(), s.f.cod());
  return r;
}

SheData retract_to_she(const RetractData& r) {
  SheData s;
  s.k = r.k;
  s.f = r.lt.arg;
  s.phi = compose(r.dom, r.lt.po.i1);
  s.g = compose(r.dom, r.lt.po.i2);
  s.psi = r.cod;
  return s;
}

bool same_she(const SheData& a, const SheData& b) {
  return a.k == b.k && a.f == b.f && a.g == b.g && a.phi == b.phi && a.psi == b.psi;
}

bool same_retract(const RetractData& a, const RetractData& b) {
  return a.k == b.k && a.f() == b.f() && a.dom == b.dom && a.cod == b.cod;
}

SheData identity_she(unsigned k, const CubSet& x) {
  Cylinder c = cylinder(x);
  return {k, PshMap::identity(x), PshMap::identity(x), cyl_eps(c), cyl_eps(c)};
}

SheData she_on_endpoint(unsigned k, const CubSet& x) {
  CylPack p = cyl_pack(x);
  return {k, p.delta[k], p.eps, p.eps, p.conn[k]};
}

SheData she_on_leibniz(unsigned k, const PshMap& h) {
  const CubSet &X = h.dom(), &Y = h.cod();
  LeibnizTensor lt = leibniz_tensor(k, h);
  CylPack px = cyl_pack(X), py = cyl_pack(Y);
  SheData s;
  s.k = k;
  s.f = lt.corner;
  s.g = compose(lt.po.i2, cyl_eps(lt.cb));
  Cylinder ccb = cylinder(lt.cb.obj());
  s.psi = retype(py.conn[k], ccb.obj(), lt.cb.obj());
  // I (x) P as the pushout of I (x) delta^k (x) X and I (x) h.
  PshMap ih = retype(cyl_map(lt.ca, lt.cb, h), px.c1.obj(), lt.cb.obj());
  Pushout q = pushout(px.delta_inner[k], ih);
  PshMap on_q = q.mediator(compose(lt.po.i1, retype(px.conn[k], px.c2.obj(), lt.ca.obj())), s.g);
  Cylinder cp = cylinder(lt.po.obj);
  Cylinder cca = cylinder(lt.ca.obj());
  PshMap to_ip = q.mediator(retype(cyl_map(cca, cp, lt.po.i1), px.c2.obj(), cp.obj()), cyl_map(lt.cb, cp, lt.po.i2));
  if (!is_iso(to_ip)) throw ContractError("she_on_leibniz: I (x) (-) did not preserve the pushout");
  s.phi = compose(on_q, inverse(to_ip));
  return s;
}

ArrowMap leibniz_map(const LeibnizTensor& from, const LeibnizTensor& to, const ArrowMap& m) {
  ArrowMap out;
  out.top = from.po.mediator(compose(to.po.i1, cyl_map(from.ca, to.ca, m.top)), compose(to.po.i2, m.bottom));
  out.bottom = cyl_map(from.cb, to.cb, m.bottom);
  return out;
}

RetractData retract_closure(unsigned k, const PshMap& f, const RetractData& on, const ArrowMap& i, const ArrowMap& r) {
  if (on.k != k) throw ContractError("retract_closure: orientation mismatch");
  RetractData out;
  out.k = k;
  out.lt = leibniz_tensor(k, f);
  ArrowMap lm = leibniz_map(out.lt, on.lt, i);
  out.dom = compose(r.top, on.dom, lm.top);
  out.cod = compose(r.bottom, on.cod, lm.bottom);
  return out;
}

}  // namespace cubical
