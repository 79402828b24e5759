#pragma once

// The two-sided calculus SC_TML: rule schemas, proof trees, the checker and a
// terminating backward prover.

#include <algorithm>
#include <array>
#include <iterator>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tml/formula.hpp"
#include "tml/parse.hpp"
#include "tml/sequent.hpp"
#include "tml/signed.hpp"

namespace tml {

enum class ScRule : std::uint8_t {
  Axiom, WeakL, WeakR, Cut,
  OrL, OrR, NegOrL, NegOrR,
  AndL, AndR, NegAndL, NegAndR,
  NegNegL, NegNegR,
  BoxL1, BoxL2, BoxR, NegBoxL, NegBoxR1, NegBoxR2,
};

inline constexpr std::array<ScRule, 20> kAllScRules{
    ScRule::Axiom,   ScRule::WeakL,   ScRule::WeakR,   ScRule::Cut,     ScRule::OrL,     ScRule::OrR,    ScRule::NegOrL,
    ScRule::NegOrR,  ScRule::AndL,    ScRule::AndR,    ScRule::NegAndL, ScRule::NegAndR, ScRule::NegNegL, ScRule::NegNegR,
    ScRule::BoxL1,   ScRule::BoxL2,   ScRule::BoxR,    ScRule::NegBoxL, ScRule::NegBoxR1, ScRule::NegBoxR2,
};

inline std::string_view rule_id(ScRule r) {
  switch (r) {
    case ScRule::Axiom: return "axiom";
    case ScRule::WeakL: return "weak_l";
    case ScRule::WeakR: return "weak_r";
    case ScRule::Cut: return "cut";
    case ScRule::OrL: return "or_l";
    case ScRule::OrR: return "or_r";
    case ScRule::NegOrL: return "neg_or_l";
    case ScRule::NegOrR: return "neg_or_r";
    case ScRule::AndL: return "and_l";
    case ScRule::AndR: return "and_r";
    case ScRule::NegAndL: return "neg_and_l";
    case ScRule::NegAndR: return "neg_and_r";
    case ScRule::NegNegL: return "neg_neg_l";
    case ScRule::NegNegR: return "neg_neg_r";
    case ScRule::BoxL1: return "box_l1";
    case ScRule::BoxL2: return "box_l2";
    case ScRule::BoxR: return "box_r";
    case ScRule::NegBoxL: return "neg_box_l";
    case ScRule::NegBoxR1: return "neg_box_r1";
    case ScRule::NegBoxR2: return "neg_box_r2";
  }
  return "?";
}

// Conventional label, e.g. "(~#=>)" or "(=>v)".
inline std::string_view rule_label(ScRule r) {
  switch (r) {
    case ScRule::Axiom: return "(ax)";
    case ScRule::WeakL: return "(w=>)";
    case ScRule::WeakR: return "(=>w)";
    case ScRule::Cut: return "(cut)";
    case ScRule::OrL: return "(v=>)";
    case ScRule::OrR: return "(=>v)";
    case ScRule::NegOrL: return "(~v=>)";
    case ScRule::NegOrR: return "(=>~v)";
    case ScRule::AndL: return "(&=>)";
    case ScRule::AndR: return "(=>&)";
    case ScRule::NegAndL: return "(~&=>)";
    case ScRule::NegAndR: return "(=>~&)";
    case ScRule::NegNegL: return "(~~=>)";
    case ScRule::NegNegR: return "(=>~~)";
    case ScRule::BoxL1: return "(#=>)1";
    case ScRule::BoxL2: return "(#=>)2";
    case ScRule::BoxR: return "(=>#)";
    case ScRule::NegBoxL: return "(~#=>)";
    case ScRule::NegBoxR1: return "(=>~#)1";
    case ScRule::NegBoxR2: return "(=>~#)2";
  }
  return "?";
}

inline std::optional<ScRule> rule_from_id(std::string_view id) {
  for (auto r : kAllScRules)
    if (rule_id(r) == id) return r;
  return std::nullopt;
}

inline bool is_logical(ScRule r) {
  return r != ScRule::Axiom && r != ScRule::WeakL && r != ScRule::WeakR && r != ScRule::Cut;
}

// Side formulas added to the context in one premise.
struct PremiseShape {
  std::vector<Formula> left, right;
};

// Where the principal formula sits and what each premise adds.
struct RuleShape {
  bool principal_left = false;
  std::vector<PremiseShape> premises;
};

// nullopt when `f` does not have the rule's principal shape.
inline std::optional<RuleShape> rule_shape(ScRule r, const Formula& f) {
  auto L = [](std::vector<Formula> xs) { return PremiseShape{std::move(xs), {}}; };
  auto R = [](std::vector<Formula> xs) { return PremiseShape{{}, std::move(xs)}; };
  switch (r) {
    case ScRule::OrL:
      if (f.is_or()) return RuleShape{true, {L({f.left()}), L({f.right()})}};
      break;
    case ScRule::OrR:
      if (f.is_or()) return RuleShape{false, {R({f.left(), f.right()})}};
      break;
    case ScRule::NegOrL:
      if (f.is_neg_of(Op::Or)) return RuleShape{true, {L({neg(f.child().left()), neg(f.child().right())})}};
      break;
    case ScRule::NegOrR:
      if (f.is_neg_of(Op::Or)) return RuleShape{false, {R({neg(f.child().left())}), R({neg(f.child().right())})}};
      break;
    case ScRule::AndL:
      if (f.is_and()) return RuleShape{true, {L({f.left(), f.right()})}};
      break;
    case ScRule::AndR:
      if (f.is_and()) return RuleShape{false, {R({f.left()}), R({f.right()})}};
      break;
    case ScRule::NegAndL:
      if (f.is_neg_of(Op::And)) return RuleShape{true, {L({neg(f.child().left())}), L({neg(f.child().right())})}};
      break;
    case ScRule::NegAndR:
      if (f.is_neg_of(Op::And)) return RuleShape{false, {R({neg(f.child().left()), neg(f.child().right())})}};
      break;
    case ScRule::NegNegL:
      if (f.is_neg_of(Op::Neg)) return RuleShape{true, {L({f.child().child()})}};
      break;
    case ScRule::NegNegR:
      if (f.is_neg_of(Op::Neg)) return RuleShape{false, {R({f.child().child()})}};
      break;
    case ScRule::BoxL1:
      if (f.is_box()) return RuleShape{true, {L({f.child()})}};
      break;
    case ScRule::BoxL2:
      if (f.is_box()) return RuleShape{true, {R({neg(f.child())})}};
      break;
    case ScRule::BoxR:
      if (f.is_box()) return RuleShape{false, {R({f.child()}), L({neg(f.child())})}};
      break;
    case ScRule::NegBoxL:
      if (f.is_neg_of(Op::Box)) return RuleShape{true, {R({f.child().child()}), L({neg(f.child().child())})}};
      break;
    case ScRule::NegBoxR1:
      if (f.is_neg_of(Op::Box)) return RuleShape{false, {L({f.child().child()})}};
      break;
    case ScRule::NegBoxR2:
      if (f.is_neg_of(Op::Box)) return RuleShape{false, {R({neg(f.child().child())})}};
      break;
    default: break;
  }
  return std::nullopt;
}

// Premise sequent for an application on `s`; the principal stays in the
// context when `retain` holds.
inline Sequent premise_of(const Sequent& s, const Formula& principal, const RuleShape& shape, std::size_t i,
                          bool retain = true) {
  Sequent out = s;
  if (!retain) (shape.principal_left ? out.left : out.right).erase(principal);
  for (const auto& f : shape.premises[i].left) out.left.insert(f);
  for (const auto& f : shape.premises[i].right) out.right.insert(f);
  return out;
}

// --- proofs --------------------------------------------------------------

struct ScNode;
using ScProof = std::shared_ptr<const ScNode>;

struct ScNode {
  ScRule rule = ScRule::Axiom;
  Sequent sequent;
  std::vector<Formula> principal;
  std::vector<ScProof> premises;
};

inline ScProof make_node(ScRule rule, Sequent sequent, std::vector<Formula> principal = {},
                         std::vector<ScProof> premises = {}) {
  return std::make_shared<const ScNode>(ScNode{rule, std::move(sequent), std::move(principal), std::move(premises)});
}

// Pre-order traversal; shared subproofs are visited once per occurrence.
template <typename Fn>
void for_each_node(const ScProof& p, Fn&& fn) {
  std::vector<const ScNode*> stack{p.get()};
  while (!stack.empty()) {
    const ScNode* n = stack.back();
    stack.pop_back();
    fn(*n);
    for (auto it = n->premises.rbegin(); it != n->premises.rend(); ++it) stack.push_back(it->get());
  }
}

inline bool is_cut_free(const ScProof& p) {
  bool free = true;
  std::vector<const ScNode*> stack{p.get()};
  std::unordered_map<const ScNode*, bool> seen;
  while (!stack.empty() && free) {
    const ScNode* n = stack.back();
    stack.pop_back();
    if (!seen.emplace(n, true).second) continue;
    if (n->rule == ScRule::Cut) free = false;
    for (const auto& q : n->premises) stack.push_back(q.get());
  }
  return free;
}

inline std::vector<ScRule> rule_sequence(const ScProof& p) {
  std::vector<ScRule> out;
  for_each_node(p, [&](const ScNode& n) { out.push_back(n.rule); });
  return out;
}

inline std::size_t proof_size(const ScProof& p) {
  std::size_t n = 0;
  for_each_node(p, [&](const ScNode&) { ++n; });
  return n;
}

// --- checking ------------------------------------------------------------

namespace detail {

inline std::string describe(const ScNode& n) {
  return std::string(rule_id(n.rule)) + " node '" + render(n.sequent) + "'";
}

inline std::optional<std::string> check_node(const ScNode& n, bool allow_cut) {
  const Sequent& s = n.sequent;
  auto need_premises = [&](std::size_t k) -> std::optional<std::string> {
    if (n.premises.size() != k)
      return "expected " + std::to_string(k) + " premise(s), found " + std::to_string(n.premises.size());
    for (const auto& p : n.premises)
      if (!p) return std::string("missing premise");
    return std::nullopt;
  };
  auto need_principal = [&]() -> std::optional<std::string> {
    if (n.principal.size() != 1) return std::string("expected exactly one principal formula");
    return std::nullopt;
  };
  switch (n.rule) {
    case ScRule::Axiom: {
      if (auto e = need_premises(0)) return e;
      if (!s.is_axiom()) return std::string("left and right share no formula");
      if (n.principal.size() > 1) return std::string("too many principal formulas");
      if (n.principal.size() == 1 && !(s.left.contains(n.principal[0]) && s.right.contains(n.principal[0])))
        return "principal '" + n.principal[0].text() + "' is not on both sides";
      return std::nullopt;
    }
    case ScRule::WeakL:
    case ScRule::WeakR: {
      if (auto e = need_premises(1)) return e;
      if (auto e = need_principal()) return e;
      const Sequent& p = n.premises[0]->sequent;
      const bool left = n.rule == ScRule::WeakL;
      const FormulaSet& grown = left ? s.left : s.right;
      const FormulaSet& fixed = left ? s.right : s.left;
      const FormulaSet& pg = left ? p.left : p.right;
      const FormulaSet& pf = left ? p.right : p.left;
      if (pf != fixed || pg.with(n.principal[0]) != grown)
        return "conclusion is not the premise '" + render(p) + "' weakened by '" + n.principal[0].text() + "'";
      return std::nullopt;
    }
    case ScRule::Cut: {
      if (!allow_cut) return std::string("cut is not allowed");
      if (auto e = need_premises(2)) return e;
      if (auto e = need_principal()) return e;
      const Formula& a = n.principal[0];
      if (n.premises[0]->sequent != Sequent{s.left, s.right.with(a)})
        return "first premise must be '" + render(Sequent{s.left, s.right.with(a)}) + "'";
      if (n.premises[1]->sequent != Sequent{s.left.with(a), s.right})
        return "second premise must be '" + render(Sequent{s.left.with(a), s.right}) + "'";
      return std::nullopt;
    }
    default: break;
  }
  if (auto e = need_principal()) return e;
  const Formula& f = n.principal[0];
  auto shape = rule_shape(n.rule, f);
  if (!shape) return "principal '" + f.text() + "' does not have the rule's shape";
  if (!(shape->principal_left ? s.left : s.right).contains(f))
    return "principal '" + f.text() + "' is not on the " + (shape->principal_left ? "left" : "right");
  if (auto e = need_premises(shape->premises.size())) return e;
  for (std::size_t i = 0; i < shape->premises.size(); ++i) {
    const Sequent& got = n.premises[i]->sequent;
    if (got != premise_of(s, f, *shape, i, false) && got != premise_of(s, f, *shape, i, true))
      return "premise " + std::to_string(i + 1) + " '" + render(got) + "' should be '" +
             render(premise_of(s, f, *shape, i, false)) + "'";
  }
  return std::nullopt;
}

}  // namespace detail

inline CheckResult check_sc_proof(const ScProof& p, bool allow_cut) {
  if (!p) return CheckResult::fail("empty proof");
  std::vector<const ScNode*> stack{p.get()};
  std::unordered_map<const ScNode*, bool> seen;
  while (!stack.empty()) {
    const ScNode* n = stack.back();
    stack.pop_back();
    if (!seen.emplace(n, true).second) continue;
    if (auto err = detail::check_node(*n, allow_cut)) return CheckResult::fail(detail::describe(*n) + ": " + *err);
    for (auto it = n->premises.rbegin(); it != n->premises.rend(); ++it) stack.push_back(it->get());
  }
  return {};
}

// --- search --------------------------------------------------------------

inline constexpr std::array<ScRule, 10> kSinglePremiseOrder{
    ScRule::NegNegL, ScRule::NegNegR, ScRule::AndL,     ScRule::OrR,   ScRule::NegOrL,
    ScRule::NegAndR, ScRule::NegBoxR1, ScRule::NegBoxR2, ScRule::BoxL1, ScRule::BoxL2,
};
inline constexpr std::array<ScRule, 6> kBranchingOrder{
    ScRule::OrL, ScRule::AndR, ScRule::NegOrR, ScRule::NegAndL, ScRule::BoxR, ScRule::NegBoxL,
};

struct ProveOptions {
  // Try every progressing application in order instead of committing to the
  // first one.
  bool backtrack = false;
};

namespace detail {

struct Application {
  ScRule rule;
  Formula principal;
  RuleShape shape;
};

class ScSearch {
 public:
  explicit ScSearch(ProveOptions opts) : opts_(opts) {}

  ScProof run(const Sequent& s) {
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    ScProof result = attempt(s);
    memo_.emplace(s, result);
    return result;
  }

 private:
  // Applications whose every premise strictly grows the sequent, in search
  // order: single-premise tier, then branching tier; within a tier by
  // principal (size, rendering) and then rule order.
  std::vector<Application> applications(const Sequent& s) const {
    std::vector<Formula> candidates;
    candidates.reserve(s.left.size() + s.right.size());
    std::merge(s.left.begin(), s.left.end(), s.right.begin(), s.right.end(), std::back_inserter(candidates));
    std::vector<Application> out;
    auto scan = [&](const auto& order) {
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i > 0 && candidates[i] == candidates[i - 1]) continue;
        const Formula& f = candidates[i];
        if (f.is_var() || f.is_bot()) continue;
        for (ScRule r : order) {
          auto shape = rule_shape(r, f);
          if (!shape) continue;
          if (!(shape->principal_left ? s.left : s.right).contains(f)) continue;
          bool progressing = true;
          for (const auto& prem : shape->premises) {
            bool grows = false;
            for (const auto& g : prem.left) grows = grows || !s.left.contains(g);
            for (const auto& g : prem.right) grows = grows || !s.right.contains(g);
            progressing = progressing && grows;
          }
          if (progressing) out.push_back({r, f, *shape});
        }
      }
    };
    scan(kSinglePremiseOrder);
    scan(kBranchingOrder);
    return out;
  }

  static bool closes(const Sequent& s, const Application& a) {
    for (std::size_t i = 0; i < a.shape.premises.size(); ++i)
      if (!premise_of(s, a.principal, a.shape, i).is_axiom()) return false;
    return true;
  }

  ScProof apply(const Sequent& s, const Application& a) {
    std::vector<ScProof> prems;
    for (std::size_t i = 0; i < a.shape.premises.size(); ++i) {
      ScProof p = run(premise_of(s, a.principal, a.shape, i));
      if (!p) return nullptr;
      prems.push_back(std::move(p));
    }
    return make_node(a.rule, s, {a.principal}, std::move(prems));
  }

  ScProof attempt(const Sequent& s) {
    if (const Formula* w = s.left.first_common(s.right)) return make_node(ScRule::Axiom, s, {*w});
    auto apps = applications(s);
    for (const auto& a : apps)
      if (closes(s, a)) return apply(s, a);
    if (!opts_.backtrack) return apps.empty() ? nullptr : apply(s, apps.front());
    for (const auto& a : apps)
      if (ScProof p = apply(s, a)) return p;
    return nullptr;
  }

  ProveOptions opts_;
  std::unordered_map<Sequent, ScProof, SequentHash> memo_;
};

inline bool mentions_bot(const Formula& f) {
  if (f.is_bot()) return true;
  for (const auto& k : f.children())
    if (mentions_bot(k)) return true;
  return false;
}

}  // namespace detail

class ScLanguageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cut-free backward search. Premises keep the conclusion, so every
// application is invertible; generated formulas are subformulas or single
// negations of subformulas, so the search terminates.
inline std::optional<ScProof> prove(const Sequent& s, ProveOptions opts = {}) {
  for (const auto& side : {&s.left, &s.right})
    for (const auto& f : *side)
      if (detail::mentions_bot(f))
        throw ScLanguageError("'" + f.text() + "' mentions bot, which has no SC_TML rules; write ~p & #p instead");
  detail::ScSearch search(opts);
  ScProof p = search.run(s);
  if (!p) return std::nullopt;
  return p;
}

// --- serialization -------------------------------------------------------

inline nlohmann::ordered_json sequent_to_json(const Sequent& s) {
  nlohmann::ordered_json left = nlohmann::ordered_json::array(), right = nlohmann::ordered_json::array();
  for (const auto& f : s.left) left.push_back(f.text());
  for (const auto& f : s.right) right.push_back(f.text());
  return {{"left", left}, {"right", right}};
}

inline Sequent sequent_from_json(const nlohmann::json& j) {
  std::vector<Formula> left, right;
  for (const auto& f : j.at("left")) left.push_back(parse(f.get<std::string>()));
  for (const auto& f : j.at("right")) right.push_back(parse(f.get<std::string>()));
  return {FormulaSet(left), FormulaSet(right)};
}

inline nlohmann::ordered_json sc_to_json(const ScProof& p) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(rule_id(p->rule));
  j["sequent"] = sequent_to_json(p->sequent);
  nlohmann::ordered_json pr = nlohmann::ordered_json::array();
  for (const auto& f : p->principal) pr.push_back(f.text());
  j["principal"] = pr;
  nlohmann::ordered_json prems = nlohmann::ordered_json::array();
  for (const auto& q : p->premises) prems.push_back(sc_to_json(q));
  j["premises"] = prems;
  return j;
}

class ProofFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ScProof sc_from_json(const nlohmann::json& j) {
  try {
    auto rule = rule_from_id(j.at("rule").get<std::string>());
    if (!rule) throw ProofFormatError("unknown SC rule '" + j.at("rule").get<std::string>() + "'");
    std::vector<Formula> principal;
    if (j.contains("principal"))
      for (const auto& f : j.at("principal")) principal.push_back(parse(f.get<std::string>()));
    std::vector<ScProof> prems;
    if (j.contains("premises"))
      for (const auto& q : j.at("premises")) prems.push_back(sc_from_json(q));
    return make_node(*rule, sequent_from_json(j.at("sequent")), std::move(principal), std::move(prems));
  } catch (const nlohmann::json::exception& e) {
    throw ProofFormatError(std::string("malformed proof: ") + e.what());
  }
}

// Conclusion first, premises indented beneath, one node per line.
inline std::string render_proof(const ScProof& p, Style style = Style::Ascii, int indent = 0) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += render(p->sequent, style);
  out += "   ";
  out += rule_label(p->rule);
  out += "\n";
  for (const auto& q : p->premises) out += render_proof(q, style, indent + 1);
  return out;
}

}  // namespace tml
