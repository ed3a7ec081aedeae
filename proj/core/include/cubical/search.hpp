#pragma once

// Backtracking search for natural maps and, more generally, for assignments
// to a graph of nodes where each edge fixes the value at its target as the
// action of a morphism on the value at its source.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cubical/presheaf.hpp"

namespace cubical {

/// Counts search nodes; throws BudgetExceeded past the limit.
class SearchBudget {
 public:
  explicit SearchBudget(std::uint64_t limit = 1ull << 28) : limit_(limit) {}
  void spend(std::uint64_t k = 1);
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

struct ConstraintGraph {
  std::vector<std::uint8_t> level;   // level of the value at each node
  std::vector<std::uint32_t> begin;  // CSR offsets, nodes() + 1 entries
  std::vector<std::uint32_t> to;
  std::vector<MorId> mor;
  std::vector<std::uint32_t> offset;  // level offsets when built from a cubical set

  std::size_t nodes() const { return level.size(); }
  /// Restriction graph of d along site generators; node of (n, x) is offset[n] + x.
  static ConstraintGraph of(const CubSet& d);
  /// Builds CSR from an edge list.
  static ConstraintGraph from_edges(std::vector<std::uint8_t> level,
                                    const std::vector<std::tuple<std::uint32_t, std::uint32_t, MorId>>& edges);
};

/// One representative per source strongly connected component, largest level
/// first. Assigning these determines every other node by propagation.
std::vector<std::uint32_t> source_representatives(const ConstraintGraph& g);

class MapSearch {
 public:
  /// `candidates[v]` is the sorted list of values allowed at node v; values
  /// live in `target` at level g.level[v].
  MapSearch(const ConstraintGraph& g, CubSet target, std::vector<std::span<const Cell>> candidates);

  /// First solution in the deterministic search order.
  std::optional<std::vector<Cell>> first(SearchBudget& budget);
  /// Visits solutions in order until `visit` returns false; returns the count visited.
  std::uint64_t enumerate(SearchBudget& budget, const std::function<bool(const std::vector<Cell>&)>& visit);

 private:
  bool assign(std::uint32_t v, Cell value, SearchBudget& budget);
  void undo(std::size_t mark);
  bool rec(std::size_t i, SearchBudget& budget, const std::function<bool(const std::vector<Cell>&)>& visit,
           std::uint64_t& count);

  const ConstraintGraph& g_;
  CubSet target_;
  std::vector<std::span<const Cell>> cand_;
  std::vector<std::uint32_t> reps_;
  std::vector<Cell> val_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::uint32_t> queue_;
  std::vector<const Cell*> table_;  // per edge, when the target stores the generator's table
};

using CandidateFn = std::function<std::span<const Cell>(unsigned level, Cell cell)>;

/// Natural maps D -> X restricted to candidates per cell of D.
std::optional<PshMap> find_natural_map(const CubSet& d, const CubSet& x, const CandidateFn& cand, SearchBudget& budget);
std::uint64_t enumerate_natural_maps(const CubSet& d, const CubSet& x, const CandidateFn& cand, SearchBudget& budget,
                                     const std::function<bool(const PshMap&)>& visit);
/// Candidate function allowing every cell of x.
CandidateFn all_cells(const CubSet& x);

}  // namespace cubical
