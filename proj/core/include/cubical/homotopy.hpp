#pragma once

// Homotopies, strong k-oriented homotopy equivalences and their description as
// retracts of the Leibniz tensor with an endpoint.
//
// For orientation k, phi : I (x) X -> X runs from g o f at the k end to id at
// the other end, psi : I (x) Y -> Y from f o g to id, and strength is
// f o phi = psi o (I (x) f).

#include "cubical/cylinder.hpp"
#include "cubical/presheaf.hpp"
#include "cubical/report.hpp"

namespace cubical {

struct Homotopy {
  PshMap from, to;  // X -> Y
  PshMap body;      // I (x) X -> Y
};
/// body o delta^0 = from and body o delta^1 = to.
Report validate_homotopy(const Homotopy& h);

struct SheData {
  unsigned k = 0;
  PshMap f;    // X -> Y
  PshMap g;    // Y -> X
  PshMap phi;  // I (x) X -> X
  PshMap psi;  // I (x) Y -> Y
};

/// The two endpoint equations of phi and of psi, and strength.
Report validate_she(const SheData& s);

/// rho : delta^k (x)^ f -> f with rho o theta = id.
struct RetractData {
  unsigned k = 0;
  LeibnizTensor lt;  // leibniz_tensor(k, f)
  PshMap dom;        // (I (x) X) +_X Y -> X
  PshMap cod;        // I (x) Y -> Y
  const PshMap& f() const { return lt.arg; }
};
Report validate_retract(const RetractData& r);

RetractData she_to_retract(const SheData& s);
SheData retract_to_she(const RetractData& r);
/// Componentwise equality of two witnesses.
bool same_she(const SheData& a, const SheData& b);
bool same_retract(const RetractData& a, const RetractData& b);

/// f = g = id, phi = psi = the contraction.
SheData identity_she(unsigned k, const CubSet& x);
/// delta^k (x) X with g = eps (x) X, phi = eps (x) X and psi = c^k (x) X.
SheData she_on_endpoint(unsigned k, const CubSet& x);
/// The corner of delta^k (x)^ h with g = iota_1 o (eps (x) Y), psi = c^k (x) Y and
/// phi amalgamated from c^k (x) X and eps (x) Y on I (x) of the pushout.
SheData she_on_leibniz(unsigned k, const PshMap& h);

/// delta^k (x)^ m for a map m : f -> f' of arrows, as a map of corners.
ArrowMap leibniz_map(const LeibnizTensor& from, const LeibnizTensor& to, const ArrowMap& m);
/// Retraction on f induced by a retract diagram i : f -> f', r : f' -> f with
/// r o i = id and a retraction on f'.
RetractData retract_closure(unsigned k, const PshMap& f, const RetractData& on, const ArrowMap& i, const ArrowMap& r);

}  // namespace cubical
