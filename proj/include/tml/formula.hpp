#pragma once

// Formula trees over {or, and, neg, box, bot, variables}, finite formula sets,
// one-variable templates, substitution and the negation closure used to bound
// backward proof search.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tml {

enum class Op : std::uint8_t { Var, Bot, Neg, Box, And, Or };

inline constexpr std::string_view kBotKeyword = "bot";

inline bool is_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return s != kBotKeyword;
}

// Immutable, structurally shared formula handle. Each node caches its size,
// its minimal-parenthesis ascii rendering (a canonical key: two formulas are
// equal iff their renderings are equal) and a hash of that rendering.
class Formula {
 public:
  Formula() : Formula(bot()) {}

  static Formula var(std::string name) {
    if (!is_identifier(name))
      throw std::invalid_argument("invalid variable name '" + name + "'");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->size = 1;
    n->text = std::move(name);
    return Formula(finish(std::move(n)));
  }

  static Formula bot() {
    static const Formula b = [] {
      auto n = std::make_shared<Node>();
      n->op = Op::Bot;
      n->size = 1;
      n->text = std::string(kBotKeyword);
      return Formula(finish(std::move(n)));
    }();
    return b;
  }

  static Formula neg(const Formula& a) { return unary(Op::Neg, a); }
  static Formula box(const Formula& a) { return unary(Op::Box, a); }
  static Formula conj(const Formula& a, const Formula& b) { return binary(Op::And, a, b); }
  static Formula disj(const Formula& a, const Formula& b) { return binary(Op::Or, a, b); }

  Op op() const { return node_->op; }
  bool is(Op o) const { return node_->op == o; }
  bool is_var() const { return is(Op::Var); }
  bool is_bot() const { return is(Op::Bot); }
  bool is_neg() const { return is(Op::Neg); }
  bool is_box() const { return is(Op::Box); }
  bool is_and() const { return is(Op::And); }
  bool is_or() const { return is(Op::Or); }
  bool is_binary() const { return is_and() || is_or(); }
  bool is_unary() const { return is_neg() || is_box(); }

  // Variable name; only meaningful for Var.
  const std::string& name() const { return node_->text; }
  const Formula& child() const { return node_->kids[0]; }
  const Formula& left() const { return node_->kids[0]; }
  const Formula& right() const { return node_->kids[1]; }
  std::size_t arity() const { return node_->kids.size(); }
  const std::vector<Formula>& children() const { return node_->kids; }

  // Number of connective and atom occurrences.
  std::size_t size() const { return node_->size; }
  std::size_t connectives() const { return node_->connectives; }
  std::size_t hash() const { return node_->hash; }
  const std::string& text() const { return node_->text; }

  // Matches ~~a, ~(a|b), ~#a and similar two-level shapes.
  bool is_neg_of(Op inner) const { return is_neg() && child().is(inner); }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ ||
           (a.node_->hash == b.node_->hash && a.node_->text == b.node_->text);
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  // Canonical order: by size, then by ascii rendering.
  friend bool operator<(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return false;
    if (a.node_->size != b.node_->size) return a.node_->size < b.node_->size;
    return a.node_->text < b.node_->text;
  }
  friend bool operator>(const Formula& a, const Formula& b) { return b < a; }
  friend bool operator<=(const Formula& a, const Formula& b) { return !(b < a); }
  friend bool operator>=(const Formula& a, const Formula& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << f.text(); }

  // Binding strength used by the renderer: or < and < unary < atom.
  int precedence() const {
    switch (op()) {
      case Op::Or: return 1;
      case Op::And: return 2;
      case Op::Neg:
      case Op::Box: return 3;
      default: return 4;
    }
  }

 private:
  struct Node {
    Op op = Op::Bot;
    std::vector<Formula> kids;
    std::size_t size = 1;
    std::size_t connectives = 0;
    std::size_t hash = 0;
    std::string text;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> finish(std::shared_ptr<Node> n) {
    n->hash = std::hash<std::string>{}(n->text);
    return n;
  }

  static Formula unary(Op op, const Formula& a) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = {a};
    n->size = a.size() + 1;
    n->connectives = a.connectives() + 1;
    const bool paren = a.precedence() < 3;
    n->text.reserve(a.text().size() + 3);
    n->text += (op == Op::Neg ? '~' : '#');
    if (paren) n->text += '(';
    n->text += a.text();
    if (paren) n->text += ')';
    return Formula(finish(std::move(n)));
  }

  static Formula binary(Op op, const Formula& a, const Formula& b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = {a, b};
    n->size = a.size() + b.size() + 1;
    n->connectives = a.connectives() + b.connectives() + 1;
    const int prec = op == Op::Or ? 1 : 2;
    // Left-associative: the right operand needs parentheses at equal strength.
    const bool pl = a.precedence() < prec;
    const bool pr = b.precedence() <= prec;
    std::string& t = n->text;
    t.reserve(a.text().size() + b.text().size() + 7);
    if (pl) t += '(';
    t += a.text();
    if (pl) t += ')';
    t += op == Op::Or ? " | " : " & ";
    if (pr) t += '(';
    t += b.text();
    if (pr) t += ')';
    return Formula(finish(std::move(n)));
  }

  std::shared_ptr<const Node> node_;
};

// Short constructors.
inline Formula var(std::string name) { return Formula::var(std::move(name)); }
inline Formula bot() { return Formula::bot(); }
inline Formula neg(const Formula& a) { return Formula::neg(a); }
inline Formula box(const Formula& a) { return Formula::box(a); }
inline Formula conj(const Formula& a, const Formula& b) { return Formula::conj(a, b); }
inline Formula disj(const Formula& a, const Formula& b) { return Formula::disj(a, b); }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// Finite set of formulas kept sorted in canonical order.
class FormulaSet {
 public:
  using const_iterator = std::vector<Formula>::const_iterator;

  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> fs) : items_(fs) { normalize(); }
  explicit FormulaSet(std::vector<Formula> fs) : items_(std::move(fs)) { normalize(); }

  bool contains(const Formula& f) const {
    return std::binary_search(items_.begin(), items_.end(), f);
  }
  // Returns false when already present.
  bool insert(const Formula& f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it != items_.end() && *it == f) return false;
    items_.insert(it, f);
    return true;
  }
  bool erase(const Formula& f) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f);
    if (it == items_.end() || *it != f) return false;
    items_.erase(it);
    return true;
  }
  FormulaSet with(const Formula& f) const {
    FormulaSet r = *this;
    r.insert(f);
    return r;
  }
  FormulaSet without(const Formula& f) const {
    FormulaSet r = *this;
    r.erase(f);
    return r;
  }
  FormulaSet united(const FormulaSet& o) const {
    FormulaSet r;
    r.items_.reserve(items_.size() + o.items_.size());
    std::set_union(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                   std::back_inserter(r.items_));
    return r;
  }
  FormulaSet minus(const FormulaSet& o) const {
    FormulaSet r;
    std::set_difference(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                        std::back_inserter(r.items_));
    return r;
  }
  bool subset_of(const FormulaSet& o) const {
    return std::includes(o.items_.begin(), o.items_.end(), items_.begin(), items_.end());
  }
  bool intersects(const FormulaSet& o) const { return first_common(o) != nullptr; }
  // First shared member in canonical order, or nullptr.
  const Formula* first_common(const FormulaSet& o) const {
    auto a = items_.begin();
    auto b = o.items_.begin();
    while (a != items_.end() && b != o.items_.end()) {
      if (*a < *b) ++a;
      else if (*b < *a) ++b;
      else return &*a;
    }
    return nullptr;
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  const Formula& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Formula>& items() const { return items_; }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ items_.size();
    for (const auto& f : items_) h = (h ^ f.hash()) * 0x100000001b3ULL;
    return h;
  }

  friend bool operator==(const FormulaSet& a, const FormulaSet& b) { return a.items_ == b.items_; }
  friend bool operator!=(const FormulaSet& a, const FormulaSet& b) { return !(a == b); }
  friend bool operator<(const FormulaSet& a, const FormulaSet& b) {
    return std::lexicographical_compare(a.items_.begin(), a.items_.end(), b.items_.begin(),
                                        b.items_.end());
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }
  std::vector<Formula> items_;
};

// Apply `fn` to every member, collecting results into a set.
template <typename Fn>
FormulaSet map_set(const FormulaSet& s, Fn&& fn) {
  std::vector<Formula> out;
  out.reserve(s.size());
  for (const auto& f : s) out.push_back(fn(f));
  return FormulaSet(std::move(out));
}

inline FormulaSet negate_all(const FormulaSet& s) { return map_set(s, [](const Formula& f) { return neg(f); }); }

// Rebuild `f` with the same top connective over new children.
inline Formula rebuild(const Formula& f, const std::vector<Formula>& kids) {
  switch (f.op()) {
    case Op::Neg: return neg(kids.at(0));
    case Op::Box: return box(kids.at(0));
    case Op::And: return conj(kids.at(0), kids.at(1));
    case Op::Or: return disj(kids.at(0), kids.at(1));
    default: return f;
  }
}

inline void collect_variables(const Formula& f, std::set<std::string>& out) {
  if (f.is_var()) {
    out.insert(f.name());
    return;
  }
  for (const auto& k : f.children()) collect_variables(k, out);
}

inline std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_variables(f, out);
  return out;
}

template <typename Range>
std::set<std::string> variables_of(const Range& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) collect_variables(f, out);
  return out;
}

inline void collect_subformulas(const Formula& f, FormulaSet& out) {
  if (!out.insert(f)) return;
  for (const auto& k : f.children()) collect_subformulas(k, out);
}

inline FormulaSet subformulas(const Formula& f) {
  FormulaSet out;
  collect_subformulas(f, out);
  return out;
}

template <typename Range>
FormulaSet subformulas_of(const Range& fs) {
  FormulaSet out;
  for (const auto& f : fs) collect_subformulas(f, out);
  return out;
}

// Replace every occurrence of variable `name` in `f` by `target`.
inline Formula substitute_var(const Formula& f, const std::string& name, const Formula& target) {
  if (f.is_var()) return f.name() == name ? target : f;
  if (f.arity() == 0) return f;
  std::vector<Formula> kids;
  kids.reserve(f.arity());
  bool changed = false;
  for (const auto& k : f.children()) {
    kids.push_back(substitute_var(k, name, target));
    changed = changed || kids.back() != k;
  }
  return changed ? rebuild(f, kids) : f;
}

// A formula whose only variable is the placeholder `p`.
class FormulaTemplate {
 public:
  static constexpr std::string_view kPlaceholder = "p";

  explicit FormulaTemplate(Formula body) : body_(std::move(body)) {
    for (const auto& v : variables(body_))
      if (v != kPlaceholder)
        throw std::invalid_argument("template '" + body_.text() + "' mentions variable '" + v +
                                    "'; only the placeholder p is allowed");
  }
  static FormulaTemplate placeholder() { return FormulaTemplate(var(std::string(kPlaceholder))); }

  const Formula& body() const { return body_; }
  bool is_placeholder() const { return body_.is_var(); }

  friend bool operator==(const FormulaTemplate& a, const FormulaTemplate& b) { return a.body_ == b.body_; }

 private:
  Formula body_;
};

inline Formula substitute(const FormulaTemplate& t, const Formula& target) {
  return substitute_var(t.body(), std::string(FormulaTemplate::kPlaceholder), target);
}

// Smallest superset of `fs` closed under immediate subformulas and containing
// ~f for every member f that is not itself a negation.
inline FormulaSet closure(const FormulaSet& fs) {
  FormulaSet subs = subformulas_of(fs);
  FormulaSet out = subs;
  for (const auto& f : subs)
    if (!f.is_neg()) out.insert(neg(f));
  return out;
}

}  // namespace tml

template <>
struct std::hash<tml::Formula> {
  std::size_t operator()(const tml::Formula& f) const noexcept { return f.hash(); }
};
