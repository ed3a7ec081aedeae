#include "cubical/demorgan.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "cubical/errors.hpp"

namespace cubical {

bool clause_less(ClauseMask a, ClauseMask b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  // Equal size: compare sorted literal lists. The first differing literal decides.
  ClauseMask diff = a ^ b;
  if (!diff) return false;
  ClauseMask low = diff & static_cast<ClauseMask>(-diff);
  return (a & low) != 0;
}

namespace {

void check_arity(unsigned arity) {
  if (arity > kMaxDmArity) throw ArityError("de Morgan arity " + std::to_string(arity) + " exceeds " + std::to_string(kMaxDmArity));
}

std::vector<ClauseMask> normalize(std::vector<ClauseMask> cs) {
  std::sort(cs.begin(), cs.end(), clause_less);
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  // Sorted by size, so a clause can only be absorbed by an earlier one.
  std::vector<ClauseMask> out;
  out.reserve(cs.size());
  for (ClauseMask c : cs) {
    bool absorbed = false;
    for (ClauseMask d : out) {
      if ((d & c) == d) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.push_back(c);
  }
  return out;
}

void same_arity(const DmElem& a, const DmElem& b, const char* op) {
  if (a.arity() != b.arity())
    throw ArityError(std::string(op) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                     std::to_string(b.arity()) + ")");
}

}  // namespace

DmElem::DmElem(unsigned arity) : arity_(static_cast<std::uint8_t>(arity)) { check_arity(arity); }

DmElem DmElem::top(unsigned arity) {
  check_arity(arity);
  return DmElem(arity, {ClauseMask{0}}, 0);
}

DmElem DmElem::generator(unsigned arity, unsigned index, bool negated) {
  check_arity(arity);
  if (index >= arity) throw ArityError("generator x" + std::to_string(index + 1) + " outside arity " + std::to_string(arity));
  return DmElem(arity, {static_cast<ClauseMask>(1u << (2 * index + (negated ? 1 : 0)))}, 0);
}

DmElem DmElem::from_clauses(unsigned arity, std::vector<ClauseMask> clauses) {
  check_arity(arity);
  ClauseMask allowed = static_cast<ClauseMask>((1u << (2 * arity)) - 1u);
  for (ClauseMask c : clauses)
    if (c & ~allowed) throw ArityError("clause mentions a generator outside arity " + std::to_string(arity));
  return DmElem(arity, normalize(std::move(clauses)), 0);
}

bool operator<(const DmElem& a, const DmElem& b) {
  if (a.arity_ != b.arity_) return a.arity_ < b.arity_;
  return std::lexicographical_compare(a.clauses_.begin(), a.clauses_.end(), b.clauses_.begin(), b.clauses_.end(),
                                      clause_less);
}

std::string DmElem::to_string() const {
  if (is_bottom()) return "0";
  auto clause_text = [](ClauseMask c) {
    if (c == 0) return std::string("1");
    std::string s;
    int n = 0;
    for (unsigned bit = 0; bit < 2 * kMaxDmArity; ++bit) {
      if (!(c & (1u << bit))) continue;
      std::string lit = (bit & 1u ? "!x" : "x") + std::to_string(bit / 2 + 1);
      s = n == 0 ? lit : "(" + s + " /\\ " + lit + ")";
      ++n;
    }
    return s;
  };
  std::string s;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    std::string c = clause_text(clauses_[i]);
    s = i == 0 ? c : "(" + s + " \\/ " + c + ")";
  }
  return s;
}

DmElem dm_join(const DmElem& a, const DmElem& b) {
  same_arity(a, b, "dm_join");
  std::vector<ClauseMask> cs = a.clauses();
  cs.insert(cs.end(), b.clauses().begin(), b.clauses().end());
  return DmElem::from_clauses(a.arity(), std::move(cs));
}

DmElem dm_meet(const DmElem& a, const DmElem& b) {
  same_arity(a, b, "dm_meet");
  std::vector<ClauseMask> cs;
  cs.reserve(a.clauses().size() * b.clauses().size());
  for (ClauseMask c : a.clauses())
    for (ClauseMask d : b.clauses()) cs.push_back(c | d);
  return DmElem::from_clauses(a.arity(), std::move(cs));
}

DmElem dm_neg(const DmElem& a) {
  // !(C1 \/ ... \/ Cr) = /\_i \/_{l in Ci} !l, expanded back into DNF one clause at a time.
  DmElem acc = DmElem::top(a.arity());
  for (ClauseMask c : a.clauses()) {
    std::vector<ClauseMask> flipped;
    for (unsigned bit = 0; bit < 2 * a.arity(); ++bit)
      if (c & (1u << bit)) flipped.push_back(static_cast<ClauseMask>(1u << (bit ^ 1u)));
    acc = dm_meet(acc, DmElem::from_clauses(a.arity(), std::move(flipped)));
  }
  return acc;
}

DmElem dm_subst(const DmElem& a, std::span<const DmElem> sigma, unsigned target_arity) {
  if (sigma.size() != a.arity())
    throw ArityError("dm_subst: substitution has " + std::to_string(sigma.size()) + " values for arity " +
                     std::to_string(a.arity()));
  for (const DmElem& s : sigma)
    if (s.arity() != target_arity) throw ArityError("dm_subst: substitution values have mixed arity");
  std::vector<DmElem> negs;
  negs.reserve(sigma.size());
  for (const DmElem& s : sigma) negs.push_back(dm_neg(s));
  DmElem result = DmElem::bottom(target_arity);
  for (ClauseMask c : a.clauses()) {
    DmElem term = DmElem::top(target_arity);
    for (unsigned bit = 0; bit < 2 * a.arity(); ++bit)
      if (c & (1u << bit)) term = dm_meet(term, bit & 1u ? negs[bit / 2] : sigma[bit / 2]);
    result = dm_join(result, term);
  }
  return result;
}

DmElem dm_subst(const DmElem& a, std::span<const DmElem> sigma) {
  if (sigma.empty()) {
    if (a.arity() != 0) throw ArityError("dm_subst: empty substitution for a non-constant");
    return a;
  }
  return dm_subst(a, sigma, sigma[0].arity());
}

std::vector<DmElem> dm_enumerate(unsigned n, unsigned cap) {
  if (n > cap) throw BudgetExceeded("dm_enumerate: arity " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  check_arity(n);
  // Elements are exactly the antichains of literal sets; build them by ordered inclusion.
  std::vector<ClauseMask> all;
  for (unsigned c = 0; c < (1u << (2 * n)); ++c) all.push_back(static_cast<ClauseMask>(c));
  std::sort(all.begin(), all.end(), clause_less);
  std::vector<DmElem> out;
  std::vector<ClauseMask> chosen;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.push_back(DmElem::from_clauses(n, chosen));
    for (std::size_t i = from; i < all.size(); ++i) {
      ClauseMask c = all[i];
      bool ok = true;
      for (ClauseMask d : chosen)
        if ((d & c) == d || (d & c) == c) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(c);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, unsigned arity) : text_(text), arity_(arity) {}

  DmElem parse() {
    DmElem e = parse_join();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("de Morgan expression: " + what + " in '" + std::string(text_) + "'", 1, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  DmElem parse_join() {
    DmElem e = parse_meet();
    while (eat("\\/")) e = dm_join(e, parse_meet());
    return e;
  }

  DmElem parse_meet() {
    DmElem e = parse_atom();
    while (eat("/\\")) e = dm_meet(e, parse_atom());
    return e;
  }

  DmElem parse_atom() {
    skip_ws();
    if (eat("!")) return dm_neg(parse_atom());
    if (eat("(")) {
      DmElem e = parse_join();
      if (!eat(")")) fail("expected ')'");
      return e;
    }
    if (eat("0")) return DmElem::bottom(arity_);
    if (eat("1")) return DmElem::top(arity_);
    if (eat("x")) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected generator number");
      unsigned long g = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (g == 0 || g > arity_) fail("generator x" + std::to_string(g) + " outside arity " + std::to_string(arity_));
      return DmElem::generator(arity_, static_cast<unsigned>(g - 1));
    }
    fail("expected 0, 1, xN, !, or '('");
  }

  std::string_view text_;
  unsigned arity_;
  std::size_t pos_ = 0;
};

}  // namespace

DmElem dm_parse(std::string_view text, unsigned arity) {
  check_arity(arity);
  return Parser(text, arity).parse();
}

std::size_t DmElemHash::operator()(const DmElem& e) const {
  std::size_t h = e.arity() * 0x9e3779b97f4a7c15ull;
  for (ClauseMask c : e.clauses()) h = (h ^ c) * 0x100000001b3ull;
  return h;
}

DmTable::DmTable(unsigned arity, unsigned cap) : arity_(arity), elems_(dm_enumerate(arity, cap)) {
  const std::size_t n = elems_.size();
  for (std::size_t i = 0; i < n; ++i) index_.emplace(elems_[i], static_cast<Index>(i));
  join_.resize(n * n);
  meet_.resize(n * n);
  neg_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    neg_[i] = index_of(dm_neg(elems_[i]));
    for (std::size_t j = 0; j < n; ++j) {
      join_[i * n + j] = index_of(dm_join(elems_[i], elems_[j]));
      meet_[i * n + j] = index_of(dm_meet(elems_[i], elems_[j]));
    }
  }
  bottom_ = index_of(DmElem::bottom(arity));
  top_ = index_of(DmElem::top(arity));
}

DmTable::Index DmTable::index_of(const DmElem& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) throw ArityError("element " + e.to_string() + " not in table of arity " + std::to_string(arity_));
  return it->second;
}

DmTable::Index DmTable::generator(unsigned g, bool negated) const {
  return index_of(DmElem::generator(arity_, g, negated));
}

DmTable::Index DmTable::eval(const DmElem& e, std::span<const Index> args) const {
  if (args.size() != e.arity()) throw ArityError("DmTable::eval: argument count mismatch");
  Index result = bottom_;
  for (ClauseMask c : e.clauses()) {
    Index term = top_;
    for (unsigned bit = 0; bit < 2 * e.arity(); ++bit)
      if (c & (1u << bit)) term = meet(term, bit & 1u ? neg(args[bit / 2]) : args[bit / 2]);
    result = join(result, term);
  }
  return result;
}

}  // namespace cubical
