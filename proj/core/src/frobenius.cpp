#include "cubical/frobenius.hpp"

#include <map>

#include "cubical/errors.hpp"
#include "cubical/sieve.hpp"

namespace cubical {

FrobeniusInput FrobeniusInput::make(SheData she, UniformFib fib) {
  FrobeniusInput in{std::move(she), std::move(fib), {}};
  in.square = pullback(in.she.f, in.fib.map());
  return in;
}

Report validate_input(const FrobeniusInput& in) {
  Report r("Frobenius input");
  r.merge(validate_she(in.she), "she: ");
  r.merge(validate_fib(in.fib), "fibration: ");
  r.group("pullback square");
  r.record(in.square.f == in.g() && in.square.g == in.p(), "the square is not over g and p");
  return r;
}

FrobeniusResult frobenius_pullback_she(const FrobeniusInput& in) {
  const unsigned k = in.she.k;
  const PshMap& p = in.p();
  const CubSet& X = p.dom();
  FrobeniusResult out;
  out.rho = she_to_retract(in.she);

  // delta^(1-k) (x) X is the Leibniz tensor with the empty subobject.
  LeibnizTensor t0 = leibniz_tensor(1 - k, from_initial(initial(X.site()), X));
  PshMap top = t0.po.mediator(from_initial(t0.ca.obj(), X), PshMap::identity(X));
  PshMap bottom = compose(out.rho.cod, cyl_map(t0.cb, out.rho.lt.cb, p));
  PshMap cod_bar = extend_fib_to_cyl_monos(in.fib, t0, top, bottom);

  RetractData& rb = out.rho_bar;
  rb.k = k;
  rb.lt = leibniz_tensor(k, in.g_bar());
  rb.cod = retype(cod_bar, rb.lt.cb.obj(), X);
  ArrowMap sigma{in.square.p1, p};
  ArrowMap ds = leibniz_map(rb.lt, out.rho.lt, sigma);
  rb.dom = in.square.mediator(compose(out.rho.dom, ds.top), compose(rb.cod, rb.lt.corner));
  out.she_bar = retract_to_she(rb);
  return out;
}

PshMap fill_against_trivcof(const SheData& she, const UniformFib& u, const PshMap& top, const PshMap& bottom) {
  LiftingProblem prob{she.f, u.map(), top, bottom};
  if (!is_mono(she.f)) throw ContractError("fill_against_trivcof: the left map is not a mono");
  if (!commutes(prob)) throw ContractError("fill_against_trivcof: the square does not commute");
  if (is_iso(u.map())) return compose(inverse(u.map()), bottom);
  RetractData r = she_to_retract(she);
  PshMap d = extend_fib_to_cyl_monos(u, r.lt, compose(top, r.dom), compose(bottom, r.cod));
  PshMap filler = compose(d, theta(r.lt).bottom);
  if (!fills(prob, filler)) throw ContractError("fill_against_trivcof: the composite does not fill");
  return filler;
}

Report check_morphism_coherence(const FrobeniusInput& a, const FrobeniusResult& ra, const FrobeniusInput& b,
                                const FrobeniusResult& rb, const FrobeniusMorphism& m) {
  Report r("Frobenius coherence");
  try {
    r.group("connecting squares");
    r.record(compose(m.t, a.g()) == compose(b.g(), m.tau), "t o g differs from g' o tau");
    r.record(compose(m.t, a.p()) == compose(b.p(), m.s), "t o p differs from p' o s");
    if (!r.ok()) return r;
    r.merge(check_structure_map(a.fib, b.fib, m.s, m.t), "fibration map: ");

    r.group("she map");
    Cylinder cb = cylinder(a.g().dom()), cb2 = cylinder(b.g().dom());
    Cylinder cy = cylinder(a.g().cod()), cy2 = cylinder(b.g().cod());
    r.record(compose(m.tau, a.she.g) == compose(b.she.g, m.t), "tau o inverse differs from inverse' o t");
    r.record(compose(m.tau, a.she.phi) == compose(b.she.phi, cyl_map(cb, cb2, m.tau)), "tau o phi differs from phi' o (I (x) tau)");
    r.record(compose(m.t, a.she.psi) == compose(b.she.psi, cyl_map(cy, cy2, m.t)), "t o psi differs from psi' o (I (x) t)");

    PshMap on_a = b.square.mediator(compose(m.tau, a.square.p1), compose(m.s, a.square.p2));
    r.group("codomain coherence");
    r.record(compose(m.s, ra.rho_bar.cod) == compose(rb.rho_bar.cod, cyl_map(ra.rho_bar.lt.cb, rb.rho_bar.lt.cb, m.s)),
             "s o cod(rho-bar) differs from cod(rho-bar') o (I (x) s)");
    r.group("domain coherence");
    ArrowMap lm = leibniz_map(ra.rho_bar.lt, rb.rho_bar.lt, {on_a, m.s});
    r.record(compose(on_a, ra.rho_bar.dom) == compose(rb.rho_bar.dom, lm.top),
             "the induced map on pullbacks does not commute with dom(rho-bar)");
  } catch (const Error& e) {
    r.group("construction");
    r.record(false, e.what());
  }
  return r;
}

PushforwardFib pushforward_fib(const UniformFib& p, const UniformFib& q, PushforwardLimits limits) {
  PushforwardFib out;
  out.pf = std::make_shared<const Pushforward>(p.map(), q.map(), limits);
  const Pushforward& pf = *out.pf;
  auto problems = std::make_shared<const GeneratorProblems>(pf.structure(), StructureKind::fibration);
  const GeneratorProblems& P = *problems;
  const SitePtr& site = pf.obj().site();
  const CubeSite& s = *site;
  const CubSet& Y = p.map().cod();
  const bool q_iso = is_iso(q.map());
  const PshMap q_inv = q_iso ? inverse(q.map()) : PshMap();

  std::map<std::pair<unsigned, std::size_t>, SheData> she_cache;
  out.fib.problems = problems;
  out.fib.fill.reserve(P.size());
  for (std::uint32_t v = 0; v < P.size(); ++v) {
    const auto& fam = P.family(P.family_of(v));
    const unsigned k = fam.k, n = fam.n;
    const Cell t = P.base(v);
    if (q_iso) {
      // Against an isomorphism the filler is forced: the section x |-> q^-1(x) over t.
      const Pullback& e = pf.fiber(n + 1, t);
      PshMap filler = compose(q_inv, e.p2);
      out.fib.fill.push_back(pf.transpose_at(e, filler, n + 1, static_cast<Cell>(s.code(s.identity(n + 1)))));
      continue;
    }
    CubSet yn = yoneda(site, n);
    auto [it, fresh] = she_cache.try_emplace({k * (s.max_dim() + 1) + n, fam.sieve});
    if (fresh) {
      const Sieve& S = subobjects_of_representable(site, n)[fam.sieve];
      it->second = she_on_leibniz(k, S.as_subobject(yn).incl);
    }
    const SheData& she = it->second;
    const PshMap& j = she.f;
    Cylinder cyn = cylinder(yn);

    // The square from j to p_*A -> Y given by the node.
    auto vals = P.values(v);
    std::vector<std::vector<Cell>> top_lv(s.max_dim() + 1), bot_lv(s.max_dim() + 1);
    for (unsigned l = 0; l <= s.max_dim(); ++l) {
      for (std::size_t c = 0; c < j.dom().size(l); ++c) {
        Cell cc = j(l, static_cast<Cell>(c));
        MorId member = s.pair(s.mor(l, 1, cyn.interval(l, cc)), s.mor(l, n, cyn.point(l, cc)));
        top_lv[l].push_back(fam.shape->eval(pf.obj(), vals, member));
      }
      for (std::size_t c = 0; c < j.cod().size(l); ++c) {
        Cell cc = static_cast<Cell>(c);
        bot_lv[l].push_back(Y.act(s.pair(s.mor(l, 1, cyn.interval(l, cc)), s.mor(l, n, cyn.point(l, cc))), t));
      }
    }
    PshMap top(j.dom(), pf.obj(), std::move(top_lv));
    PshMap bottom(j.cod(), Y, std::move(bot_lv));

    // Transpose to a square from the pullback of j against q.
    Pullback E = pullback(bottom, p.map());
    FrobeniusInput in = FrobeniusInput::make(she, pullback_fib(p, E));
    FrobeniusResult res = frobenius_pullback_she(in);
    Pullback D = pullback(compose(pf.structure(), top), p.map());
    PshMap top2 = compose(pf.untranspose(D, top), D.mediator(in.square.p1, compose(E.p2, in.square.p2)));
    PshMap filler = fill_against_trivcof(res.she_bar, q, top2, E.p2);
    Cell generic = cyn.pack(n + 1, s.algebra(n + 1).generator(0), static_cast<Cell>(s.code(s.degeneracy(n, 0))));
    out.fib.fill.push_back(pf.transpose_at(E, filler, n + 1, generic));
  }
  return out;
}

Report beck_chevalley_check(const UniformFib& p, const UniformFib& q, const PshMap& s, const PshMap& t,
                            const UniformFib& r, PushforwardLimits limits) {
  if (!(compose(t, p.map()) == compose(q.map(), s))) {
    Report bad("Beck-Chevalley comparison");
    bad.group("square commutes");
    bad.record(false, "t o p differs from q o s");
    return bad;
  }
  Pullback pb = pullback(t, q.map());
  if (!is_iso(pb.mediator(p.map(), s))) return Report("Beck-Chevalley comparison: not applicable, the square is not a pullback");
  Report rep("Beck-Chevalley comparison");
  try {
    PushforwardFib qr = pushforward_fib(q, r, limits);
    Pullback left_pb = pullback(t, qr.fib.map());
    UniformFib left = pullback_fib(qr.fib, left_pb);
    Pullback sr_pb = pullback(s, r.map());
    UniformFib sr = pullback_fib(r, sr_pb);
    PushforwardFib ps = pushforward_fib(p, sr, limits);

    Pullback tx = pullback(left_pb.p1, p.map());
    Pullback tx2 = pullback(compose(qr.pf->structure(), left_pb.p2), q.map());
    PshMap untr = qr.pf->untranspose(tx2, left_pb.p2);
    PshMap v = sr_pb.mediator(tx.p2, compose(untr, tx2.mediator(tx.p1, compose(s, tx.p2))));
    PshMap cmp = ps.pf->transpose(tx, v);
    rep.group("comparison is an isomorphism");
    rep.record(is_iso(cmp), "the comparison map is not invertible");
    rep.merge(check_structure_map(left, ps.fib, cmp, PshMap::identity(p.map().cod())), "filler tables: ");
  } catch (const Error& e) {
    rep.group("transfer");
    rep.record(false, e.what());
  }
  return rep;
}

}  // namespace cubical
