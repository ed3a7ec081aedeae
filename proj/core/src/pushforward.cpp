#include "cubical/pushforward.hpp"

#include "cubical/errors.hpp"

namespace cubical {

Pushforward::Pushforward(PshMap p, PshMap a, PushforwardLimits limits) : p_(std::move(p)), a_(std::move(a)) {
  if (!a_.cod().same_shape(p_.dom())) throw ContractError("pushforward: A -> X does not land in the domain of p");
  const CubeSite& s = *p_.dom().site();
  const CubSet &X = p_.dom(), &Y = p_.cod(), &A = a_.dom();
  const unsigned L = s.max_dim() + 1;
  Fibers afib(a_);
  SearchBudget budget(limits.search_nodes);
  std::uint64_t entries = 0, sections = 0;
  fibers_.resize(L);
  cells_.resize(L);
  cell_index_.resize(L);
  for (unsigned n = 0; n < L; ++n) {
    CubSet yn = yoneda(p_.dom().site(), n);
    fibers_[n].resize(Y.size(n));
    cell_index_[n].resize(Y.size(n));
    for (std::size_t y = 0; y < Y.size(n); ++y) {
      Fiber& fb = fibers_[n][y];
      fb.e = pullback(yoneda_map(yn, n, Y, static_cast<Cell>(y)), p_);
      ConstraintGraph g = ConstraintGraph::of(fb.e.obj);
      fb.reps = source_representatives(g);
      fb.offset = g.offset;
      std::vector<std::span<const Cell>> cand(g.nodes());
      for (unsigned m = 0; m < L; ++m)
        for (std::size_t c = 0; c < fb.e.obj.size(m); ++c) cand[g.offset[m] + c] = afib.of(m, fb.e.p2(m, static_cast<Cell>(c)));
      MapSearch search(g, A, std::move(cand));
      search.enumerate(budget, [&](const std::vector<Cell>& v) {
        if (++sections > limits.max_sections) throw BudgetExceeded("pushforward: too many sections");
        entries += v.size();
        if (entries > limits.max_entries) throw BudgetExceeded("pushforward: section tables over budget");
        std::vector<Cell> key;
        for (std::uint32_t r : fb.reps) key.push_back(v[r]);
        fb.by_key.emplace(std::move(key), static_cast<std::uint32_t>(fb.tables.size()));
        cell_index_[n][y].push_back(static_cast<Cell>(cells_[n].size()));
        cells_[n].emplace_back(static_cast<Cell>(y), static_cast<std::uint32_t>(fb.tables.size()));
        fb.tables.push_back(v);
        return true;
      });
    }
  }
  CubSetBuilder bld(p_.dom().site());
  for (unsigned n = 0; n < L; ++n) {
    bld.set_size(n, cells_[n].size());
    std::vector<std::string> labels;
    if (cells_[n].size() <= 4096)
      for (auto [y, i] : cells_[n]) labels.push_back("(" + Y.label(n, y) + ", s" + std::to_string(i) + ")");
    bld.set_labels(n, std::move(labels));
  }
  bld.set_action_from([&](MorId f, Cell c) {
    unsigned n = s.cod(f), m = s.dom(f);
    auto [y, i] = cells_[n][c];
    Cell y2 = Y.act(f, y);
    const Fiber& target = fibers_[m][y2];
    std::vector<Cell> key;
    for (std::uint32_t r : target.reps) {
      unsigned l = 0;
      while (target.offset[l + 1] <= r) ++l;
      auto [h, x] = target.e.pairs[l][r - target.offset[l]];
      MorId fh = s.compose(f, s.mor(l, m, h));
      key.push_back(section_value(n, c, l, s.code(fh), x));
    }
    return cell_index_[m][y2][lookup(m, y2, key)];
  });
  obj_ = bld.build();
  std::vector<std::vector<Cell>> lv(L);
  for (unsigned n = 0; n < L; ++n)
    for (auto [y, i] : cells_[n]) lv[n].push_back(y);
  structure_ = PshMap(obj_, Y, std::move(lv));
  (void)X;
}

std::uint32_t Pushforward::lookup(unsigned n, Cell y, const std::vector<Cell>& key) const {
  const auto& m = fibers_[n][y].by_key;
  auto it = m.find(key);
  if (it == m.end()) throw ContractError("pushforward: restricted section is not a section");
  return it->second;
}

Cell Pushforward::section_value(unsigned n, Cell c, unsigned m, std::size_t h_code, Cell x) const {
  auto [y, i] = cells_[n][c];
  const Fiber& fb = fibers_[n][y];
  auto e = fb.e.find(m, static_cast<Cell>(h_code), x);
  if (!e) throw ContractError("pushforward: (h, x) is not in the fiber");
  return fb.tables[i][fb.offset[m] + *e];
}

Cell Pushforward::transpose_at(const Pullback& bx, const PshMap& v, unsigned n, Cell beta) const {
  const CubeSite& s = *p_.dom().site();
  const PshMap& b = bx.f;
  const CubSet& B = b.dom();
  Cell y = b(n, beta);
  const Fiber& fb = fibers_[n][y];
  std::vector<Cell> key;
  for (std::uint32_t r : fb.reps) {
    unsigned l = 0;
    while (fb.offset[l + 1] <= r) ++l;
    auto [h, x] = fb.e.pairs[l][r - fb.offset[l]];
    Cell bh = B.act(s.mor(l, n, h), beta);
    auto q = bx.find(l, bh, x);
    if (!q) throw ContractError("transpose: pullback is not B x_Y X");
    key.push_back(v(l, *q));
  }
  return cell_index_[n][y][lookup(n, y, key)];
}

PshMap Pushforward::transpose(const Pullback& bx, const PshMap& v) const {
  const CubSet& B = bx.f.dom();
  std::vector<std::vector<Cell>> lv(B.max_dim() + 1);
  for (unsigned n = 0; n < lv.size(); ++n)
    for (std::size_t beta = 0; beta < B.size(n); ++beta) lv[n].push_back(transpose_at(bx, v, n, static_cast<Cell>(beta)));
  return PshMap(B, obj_, std::move(lv));
}

PshMap Pushforward::untranspose(const Pullback& bx, const PshMap& u) const {
  const CubeSite& s = *p_.dom().site();
  const unsigned L = s.max_dim() + 1;
  std::vector<std::vector<Cell>> lv(L);
  for (unsigned n = 0; n < L; ++n) {
    std::size_t id = s.code(s.identity(n));
    for (auto [beta, x] : bx.pairs[n]) lv[n].push_back(section_value(n, u(n, beta), n, id, x));
  }
  return PshMap(bx.obj, a_.dom(), std::move(lv));
}

}  // namespace cubical
