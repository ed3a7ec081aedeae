#pragma once

// Pullback of strong homotopy equivalences along uniform fibrations, lifting
// against monos carrying such a witness, coherence along morphisms, and
// transfer of fibration structure along pushforward.

#include <memory>
#include <string>

#include "cubical/homotopy.hpp"
#include "cubical/lifting.hpp"
#include "cubical/pushforward.hpp"
#include "cubical/report.hpp"

namespace cubical {

/// she on g : B -> Y, fib on p : X -> Y and the pullback A = B x_Y X with
/// square.p1 : A -> B and g-bar = square.p2 : A -> X.
struct FrobeniusInput {
  SheData she;
  UniformFib fib;
  Pullback square;

  static FrobeniusInput make(SheData she, UniformFib fib);
  const PshMap& g() const { return she.f; }
  const PshMap& p() const { return fib.map(); }
  const PshMap& g_bar() const { return square.p2; }
};
/// The witness and the structure validate, and the square is the pullback of g and p.
Report validate_input(const FrobeniusInput& in);

struct FrobeniusResult {
  RetractData rho;      // the input witness as a retraction
  RetractData rho_bar;  // on g-bar
  SheData she_bar;
};

/// Solves the endpoint problem delta^(1-k) (x) X against p to get the codomain
/// part of rho-bar, then the domain part through the pullback.
FrobeniusResult frobenius_pullback_she(const FrobeniusInput& in);

/// Filler for the square (top, bottom) from c to u.map(), where she is a witness on the mono c.
PshMap fill_against_trivcof(const SheData& she, const UniformFib& u, const PshMap& top, const PshMap& bottom);

/// tau : B -> B', s : X -> X', t : Y -> Y' from the first input to the second.
struct FrobeniusMorphism {
  PshMap tau, s, t;
};
/// The connecting squares, the structure map, the she map, and the two
/// coherence squares of the constructed retractions.
Report check_morphism_coherence(const FrobeniusInput& a, const FrobeniusResult& ra, const FrobeniusInput& b,
                                const FrobeniusResult& rb, const FrobeniusMorphism& m);

struct PushforwardFib {
  std::shared_ptr<const Pushforward> pf;
  UniformFib fib;  // on pf->structure()
};
/// Structure on p_*A -> Y for fibrations p : X -> Y and q : A -> X.
PushforwardFib pushforward_fib(const UniformFib& p, const UniformFib& q, PushforwardLimits limits = {});

/// For a pullback square t o p = q o s of fibrations (p : X -> Y, q : X' -> Y')
/// and a fibration r : R -> X', compares t^*(q_* r) with p_*(s^* r).
Report beck_chevalley_check(const UniformFib& p, const UniformFib& q, const PshMap& s, const PshMap& t,
                            const UniformFib& r, PushforwardLimits limits = {});

}  // namespace cubical
