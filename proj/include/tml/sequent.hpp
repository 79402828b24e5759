#pragma once

#include <string>
#include <string_view>

#include "tml/formula.hpp"
#include "tml/parse.hpp"

namespace tml {

// Gamma => Delta with set semantics on both sides.
struct Sequent {
  FormulaSet left;
  FormulaSet right;

  Sequent() = default;
  Sequent(FormulaSet l, FormulaSet r) : left(std::move(l)), right(std::move(r)) {}

  bool is_axiom() const { return left.intersects(right); }
  bool contained_in(const Sequent& o) const { return left.subset_of(o.left) && right.subset_of(o.right); }
  Sequent united(const Sequent& o) const { return {left.united(o.left), right.united(o.right)}; }

  std::size_t hash() const { return left.hash() * 31 + right.hash(); }

  friend bool operator==(const Sequent& a, const Sequent& b) { return a.left == b.left && a.right == b.right; }
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
  friend bool operator<(const Sequent& a, const Sequent& b) {
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  }
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const noexcept { return s.hash(); }
};

inline std::string render(const Sequent& s, Style style = Style::Ascii) {
  std::string out = render(s.left, style);
  const char* arrow = style == Style::Ascii ? "=>" : "\xE2\x87\x92";
  if (!s.left.empty()) out += ' ';
  out += arrow;
  if (!s.right.empty()) out += ' ' + render(s.right, style);
  return out;
}

// "G => D" with comma-separated formulas; either side may be empty.
inline Sequent parse_sequent(std::string_view text) {
  detail::Parser p(detail::Lexer(text).run());
  auto lhs = detail::formula_list(p, detail::Tok::Arrow);
  p.expect(detail::Tok::Arrow);
  auto rhs = detail::formula_list(p, detail::Tok::End);
  if (p.peek().kind != detail::Tok::End) p.fail("',' or end of input");
  return {FormulaSet(std::move(lhs)), FormulaSet(std::move(rhs))};
}

}  // namespace tml
