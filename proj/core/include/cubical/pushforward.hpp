#pragma once

// Dependent product p_* : Psh/X -> Psh/Y along p : X -> Y.
//
// A cell of p_*A at level n is a pair (y, s) with y in Y_n and s a section of
// A -> X over the pullback y(n) x_Y X. Restriction along f : m -> n sends s to
// (h, x) |-> s(f o h, x).

#include <cstdint>
#include <map>
#include <vector>

#include "cubical/presheaf.hpp"
#include "cubical/search.hpp"

namespace cubical {

struct PushforwardLimits {
  std::uint64_t max_sections = 1u << 16;
  /// Bound on stored section entries summed over all fibers.
  std::uint64_t max_entries = 1ull << 25;
  std::uint64_t search_nodes = 1ull << 30;
};

class Pushforward {
 public:
  /// p : X -> Y, a : A -> X.
  Pushforward(PshMap p, PshMap a, PushforwardLimits limits = {});

  const PshMap& p() const { return p_; }
  const PshMap& a() const { return a_; }
  const CubSet& obj() const { return obj_; }
  /// p_*A -> Y.
  const PshMap& structure() const { return structure_; }

  /// Base cell of a cell of p_*A, and its section as (h, x) -> A value.
  Cell base(unsigned n, Cell c) const { return cells_[n][c].first; }
  /// s(h, x) for h : m -> n in the fiber over base(n, c), x in X_m.
  Cell section_value(unsigned n, Cell c, unsigned m, std::size_t h_code, Cell x) const;

  /// For b : B -> Y and v : B x_Y X -> A over X (given with its pullback),
  /// the transpose B -> p_*A over Y.
  PshMap transpose(const Pullback& bx, const PshMap& v) const;
  /// y(n) x_Y X for the cell y in Y_n, as a pullback of yoneda_map(y(n), y) and p.
  const Pullback& fiber(unsigned n, Cell y) const { return fibers_[n][y].e; }
  /// The transpose at one cell of B.
  Cell transpose_at(const Pullback& bx, const PshMap& v, unsigned n, Cell beta) const;
  /// For u : B -> p_*A over Y, the map B x_Y X -> A over X; `bx` must be
  /// pullback(structure o u, p).
  PshMap untranspose(const Pullback& bx, const PshMap& u) const;

 private:
  struct Fiber {
    Pullback e;                             // y(n) x_Y X
    std::vector<std::uint32_t> reps;        // source representatives in node numbering
    std::vector<std::uint32_t> offset;      // level offsets of e's cells
    std::vector<std::vector<Cell>> tables;  // per section, values over all e cells
    std::map<std::vector<Cell>, std::uint32_t> by_key;
  };
  std::uint32_t lookup(unsigned n, Cell y, const std::vector<Cell>& key) const;

  PshMap p_, a_;
  CubSet obj_;
  PshMap structure_;
  std::vector<std::vector<Fiber>> fibers_;  // [n][y]
  std::vector<std::vector<std::pair<Cell, std::uint32_t>>> cells_;  // (y, section) per level
  std::vector<std::vector<std::vector<Cell>>> cell_index_;          // [n][y][section] -> cell
};

}  // namespace cubical
