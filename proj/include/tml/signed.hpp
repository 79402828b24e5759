#pragma once

// The generic signed-formula calculus SF_M for a finite matrix: rule
// generation, n-sequents, derivation checking and backward search.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tml/matrix.hpp"

namespace tml {

struct SignedFormula {
  TruthValue sign;
  Formula body;

  friend bool operator==(const SignedFormula& a, const SignedFormula& b) {
    return a.sign == b.sign && a.body == b.body;
  }
  friend bool operator!=(const SignedFormula& a, const SignedFormula& b) { return !(a == b); }
  friend bool operator<(const SignedFormula& a, const SignedFormula& b) {
    if (a.sign != b.sign) return a.sign < b.sign;
    return a.body < b.body;
  }
};

inline std::string render(const SignedFormula& s, const LogicalMatrix& m) {
  return m.name(s.sign) + ":" + s.body.text();
}

// "1:p | ~#p"
inline SignedFormula parse_signed(std::string_view text, const LogicalMatrix& m) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError(1, 1, "expected 'value:formula'");
  std::string_view sign = text.substr(0, colon);
  while (!sign.empty() && sign.back() == ' ') sign.remove_suffix(1);
  while (!sign.empty() && sign.front() == ' ') sign.remove_prefix(1);
  return {m.value(sign), parse(text.substr(colon + 1))};
}

// Finite set of signed formulas, sorted by sign then formula.
class SignedSet {
 public:
  SignedSet() = default;
  SignedSet(std::initializer_list<SignedFormula> xs) : items_(xs) { normalize(); }
  explicit SignedSet(std::vector<SignedFormula> xs) : items_(std::move(xs)) { normalize(); }

  bool contains(const SignedFormula& s) const { return std::binary_search(items_.begin(), items_.end(), s); }
  bool insert(const SignedFormula& s) {
    auto it = std::lower_bound(items_.begin(), items_.end(), s);
    if (it != items_.end() && *it == s) return false;
    items_.insert(it, s);
    return true;
  }
  SignedSet with(const SignedFormula& s) const {
    SignedSet r = *this;
    r.insert(s);
    return r;
  }
  SignedSet without(const SignedFormula& s) const {
    SignedSet r = *this;
    auto it = std::lower_bound(r.items_.begin(), r.items_.end(), s);
    if (it != r.items_.end() && *it == s) r.items_.erase(it);
    return r;
  }
  SignedSet united(const SignedSet& o) const {
    SignedSet r;
    std::set_union(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(), std::back_inserter(r.items_));
    return r;
  }
  bool subset_of(const SignedSet& o) const {
    return std::includes(o.items_.begin(), o.items_.end(), items_.begin(), items_.end());
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<SignedFormula>& items() const { return items_; }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& s : items_) h = (h ^ (s.body.hash() + s.sign.index)) * 0x100000001b3ULL;
    return h;
  }

  friend bool operator==(const SignedSet& a, const SignedSet& b) { return a.items_ == b.items_; }
  friend bool operator<(const SignedSet& a, const SignedSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  void normalize() {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }
  std::vector<SignedFormula> items_;
};

struct SignedSetHash {
  std::size_t operator()(const SignedSet& s) const noexcept { return s.hash(); }
};

inline std::string render(const SignedSet& s, const LogicalMatrix& m) {
  std::string out = "{";
  for (const auto& x : s) {
    if (out.size() > 1) out += ", ";
    out += render(x, m);
  }
  return out + "}";
}

// Gamma_0 | ... | Gamma_{n-1}, one component per truth value.
struct NSequent {
  std::vector<FormulaSet> components;

  std::size_t arity() const { return components.size(); }
  friend bool operator==(const NSequent& a, const NSequent& b) { return a.components == b.components; }
};

inline std::string render(const NSequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    if (i) out += " | ";
    out += "{" + render(s.components[i]) + "}";
  }
  return out;
}

inline SignedSet to_signed(const NSequent& s) {
  std::vector<SignedFormula> out;
  for (std::size_t i = 0; i < s.components.size(); ++i)
    for (const auto& f : s.components[i]) out.push_back({TruthValue(static_cast<int>(i)), f});
  return SignedSet(std::move(out));
}

inline NSequent to_nsequent(const SignedSet& s, const LogicalMatrix& m) {
  NSequent out{std::vector<FormulaSet>(m.size())};
  for (const auto& x : s) out.components[x.sign.index].insert(x.body);
  return out;
}

inline bool satisfies(const Valuation& v, const SignedSet& s, const LogicalMatrix& m) {
  for (const auto& x : s)
    if (eval(x.body, v, m) == x.sign) return true;
  return false;
}

inline bool nsequent_satisfied(const Valuation& v, const NSequent& s, const LogicalMatrix& m) {
  if (s.arity() != m.size()) throw MatrixError("n-sequent arity does not match the matrix");
  return satisfies(v, to_signed(s), m);
}

inline bool valid(const SignedSet& s, const LogicalMatrix& m) {
  std::set<std::string> vars;
  for (const auto& x : s) collect_variables(x.body, vars);
  for (const auto& v : valuations(vars, m))
    if (!satisfies(v, s, m)) return false;
  return true;
}

// Gamma in every undesignated component, Delta in every designated one.
inline NSequent embed_two_sided(const FormulaSet& gamma, const FormulaSet& delta, const LogicalMatrix& m = m4()) {
  NSequent out;
  for (auto t : m.all_values()) out.components.push_back(m.designated(t) ? delta : gamma);
  return out;
}

// --- rules ---------------------------------------------------------------

enum class SignedRuleKind { Axiom, Weakening, Logical, Constant };

// Schematic rule: premise i is "Omega, args[i] : alpha_i"; the conclusion is
// "Omega, result : f(alpha_1, ..., alpha_k)". Constants have no premises.
struct SignedRule {
  std::string name;
  SignedRuleKind kind = SignedRuleKind::Logical;
  std::string connective;
  std::vector<TruthValue> args;
  TruthValue result;

  std::size_t arity() const { return args.size(); }
};

inline std::string rule_name(const std::string& connective, const std::vector<TruthValue>& args,
                             const LogicalMatrix& m) {
  std::string out = connective;
  for (auto a : args) out += "_" + m.name(a);
  return out;
}

// Axiom, weakening, then for each connective of positive arity (table order)
// one rule per argument tuple. Nullary connectives become premise-free
// constant rules.
inline std::vector<SignedRule> generate_sf_rules(const LogicalMatrix& m) {
  std::vector<SignedRule> out;
  out.push_back({"axiom", SignedRuleKind::Axiom, "", {}, {}});
  out.push_back({"weaken", SignedRuleKind::Weakening, "", {}, {}});
  for (const auto& c : m.connectives()) {
    if (c.arity == 0) continue;
    for (const auto& args : argument_tuples(c.arity, m.size()))
      out.push_back({rule_name(c.name, args, m), SignedRuleKind::Logical, c.name, args, c.apply(args.data(), m.size())});
  }
  for (const auto& c : m.connectives())
    if (c.arity == 0) out.push_back({c.name, SignedRuleKind::Constant, c.name, {}, c.table.at(0)});
  return out;
}

inline std::size_t count_logical(const std::vector<SignedRule>& rules) {
  return static_cast<std::size_t>(
      std::count_if(rules.begin(), rules.end(), [](const SignedRule& r) { return r.kind == SignedRuleKind::Logical; }));
}

// --- derivations ---------------------------------------------------------

struct SFNode;
using SFDerivation = std::shared_ptr<const SFNode>;

struct SFNode {
  SignedSet signed_set;
  std::string rule;
  std::vector<SFDerivation> premises;
};

struct CheckResult {
  bool ok = true;
  std::string error;

  explicit operator bool() const { return ok; }
  static CheckResult fail(std::string msg) { return {false, std::move(msg)}; }
};

namespace detail {

inline bool connective_matches(const Formula& f, const std::string& name) {
  return !f.is_var() && f.arity() > 0 && connective_name(f.op()) == name;
}

inline bool is_constant(const Formula& f, const std::string& name) {
  return f.arity() == 0 && !f.is_var() && connective_name(f.op()) == name;
}

inline const Formula* axiom_witness(const SignedSet& s, std::size_t n_values) {
  // Signs are the primary key, so count per body.
  std::map<std::string, std::pair<const Formula*, std::size_t>> seen;
  for (const auto& x : s) {
    auto& e = seen[x.body.text()];
    e.first = &x.body;
    if (++e.second == n_values) return e.first;
  }
  return nullptr;
}

}  // namespace detail

inline CheckResult check_sf_derivation(const SFDerivation& d, const LogicalMatrix& m) {
  if (!d) return CheckResult::fail("empty derivation");
  const auto rules = generate_sf_rules(m);
  std::vector<const SFNode*> stack{d.get()};
  std::set<const SFNode*> done;
  while (!stack.empty()) {
    const SFNode* node = stack.back();
    stack.pop_back();
    if (!done.insert(node).second) continue;
    const std::string where = " at node " + render(node->signed_set, m);
    for (const auto& p : node->premises) {
      if (!p) return CheckResult::fail("missing premise" + where);
      stack.push_back(p.get());
    }
    if (node->rule == "axiom") {
      if (!node->premises.empty()) return CheckResult::fail("axiom has premises" + where);
      if (!detail::axiom_witness(node->signed_set, m.size()))
        return CheckResult::fail("axiom: no formula carries every sign" + where);
      continue;
    }
    if (node->rule == "weaken") {
      if (node->premises.size() != 1) return CheckResult::fail("weaken needs one premise" + where);
      if (!node->premises[0]->signed_set.subset_of(node->signed_set))
        return CheckResult::fail("weaken: premise is not a subset" + where);
      continue;
    }
    auto rule = std::find_if(rules.begin(), rules.end(), [&](const SignedRule& r) { return r.name == node->rule; });
    if (rule == rules.end() || rule->kind == SignedRuleKind::Axiom || rule->kind == SignedRuleKind::Weakening)
      return CheckResult::fail("unknown rule '" + node->rule + "'" + where);
    if (node->premises.size() != rule->arity())
      return CheckResult::fail(node->rule + ": expected " + std::to_string(rule->arity()) + " premise(s), found " +
                               std::to_string(node->premises.size()) + where);
    bool matched = false;
    for (const auto& c : node->signed_set) {
      if (c.sign != rule->result) continue;
      if (rule->kind == SignedRuleKind::Constant) {
        matched = detail::is_constant(c.body, rule->connective);
      } else {
        if (!detail::connective_matches(c.body, rule->connective) || c.body.arity() != rule->arity()) continue;
        for (const SignedSet& omega : {node->signed_set, node->signed_set.without(c)}) {
          bool all = true;
          for (std::size_t i = 0; i < rule->arity() && all; ++i)
            all = node->premises[i]->signed_set == omega.with({rule->args[i], c.body.children()[i]});
          if (all) {
            matched = true;
            break;
          }
        }
      }
      if (matched) break;
    }
    if (!matched) return CheckResult::fail(node->rule + ": no principal signed formula matches the schema" + where);
  }
  return {};
}

namespace detail {

class SFSearch {
 public:
  explicit SFSearch(const LogicalMatrix& m) : m_(m) {
    for (const auto& c : m.connectives())
      if (c.arity > 0) tuples_[c.name] = argument_tuples(c.arity, m.size());
  }

  SFDerivation run(const SignedSet& s) {
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    SFDerivation result = attempt(s);
    memo_.emplace(s, result);
    return result;
  }

 private:
  SFDerivation attempt(const SignedSet& s) {
    if (axiom_witness(s, m_.size())) return std::make_shared<SFNode>(SFNode{s, "axiom", {}});
    for (const auto& x : s) {
      if (x.body.is_var() || x.body.arity() != 0) continue;
      const Connective* c = m_.connective(x.body.op());
      if (c && c->table.at(0) == x.sign) return std::make_shared<SFNode>(SFNode{s, c->name, {}});
    }
    // Order: sign index, then formula size (the set's own order).
    for (const auto& x : s) {
      if (x.body.arity() == 0) continue;
      const Connective* c = m_.connective(x.body.op());
      if (!c) throw EvalError("matrix has no table for '" + std::string(connective_name(x.body.op())) + "'");
      for (const auto& args : tuples_.at(c->name)) {
        if (c->apply(args.data(), m_.size()) != x.sign) continue;
        bool progressing = true;
        for (std::size_t i = 0; i < args.size() && progressing; ++i)
          progressing = !s.contains({args[i], x.body.children()[i]});
        if (!progressing) continue;
        std::vector<SFDerivation> prems;
        for (std::size_t i = 0; i < args.size(); ++i) {
          auto p = run(s.with({args[i], x.body.children()[i]}));
          if (!p) return nullptr;
          prems.push_back(std::move(p));
        }
        return std::make_shared<SFNode>(SFNode{s, rule_name(c->name, args, m_), std::move(prems)});
      }
    }
    return nullptr;
  }

  const LogicalMatrix& m_;
  std::map<std::string, std::vector<std::vector<TruthValue>>> tuples_;
  std::unordered_map<SignedSet, SFDerivation, SignedSetHash> memo_;
};

}  // namespace detail

// Backward search with the conclusion retained in every premise. Any
// application whose premises all grow is invertible, so the first one is
// taken; a set where none remains is refutable unless it is an axiom.
inline std::optional<SFDerivation> sf_prove(const SignedSet& goal, const LogicalMatrix& m) {
  detail::SFSearch search(m);
  auto d = search.run(goal);
  if (!d) return std::nullopt;
  return d;
}

// --- JSON ----------------------------------------------------------------

inline nlohmann::ordered_json sf_to_json(const SFDerivation& d, const LogicalMatrix& m) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json signed_list = nlohmann::ordered_json::array();
  for (const auto& x : d->signed_set) signed_list.push_back(render(x, m));
  j["signed"] = signed_list;
  j["rule"] = d->rule;
  nlohmann::ordered_json prems = nlohmann::ordered_json::array();
  for (const auto& p : d->premises) prems.push_back(sf_to_json(p, m));
  j["premises"] = prems;
  return j;
}

inline SFDerivation sf_from_json(const nlohmann::json& j, const LogicalMatrix& m) {
  auto node = std::make_shared<SFNode>();
  std::vector<SignedFormula> xs;
  for (const auto& s : j.at("signed")) xs.push_back(parse_signed(s.get<std::string>(), m));
  node->signed_set = SignedSet(std::move(xs));
  node->rule = j.at("rule").get<std::string>();
  if (j.contains("premises"))
    for (const auto& p : j.at("premises")) node->premises.push_back(sf_from_json(p, m));
  return node;
}

inline std::string render_tree(const SFDerivation& d, const LogicalMatrix& m, int indent = 0) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += render(d->signed_set, m) + "   [" + d->rule + "]\n";
  for (const auto& p : d->premises) out += render_tree(p, m, indent + 1);
  return out;
}

}  // namespace tml
