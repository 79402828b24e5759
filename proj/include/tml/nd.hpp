#pragma once

// ND_TML deductions: hypotheses with markers, discharge bookkeeping, the
// checker, and serialization.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tml/formula.hpp"
#include "tml/parse.hpp"
#include "tml/sc.hpp"

namespace tml {

enum class NdRule : std::uint8_t {
  Hyp, MA,
  AndI, AndE1, AndE2, NegAndI1, NegAndI2, NegAndE,
  OrI1, OrI2, OrE, NegOrI, NegOrE1, NegOrE2,
  NegNegI, NegNegE,
  BoxIStar, BoxE, NegBoxI, NegBoxE,
  BotI, BotE,
};

inline constexpr std::array<NdRule, 22> kAllNdRules{
    NdRule::Hyp,     NdRule::MA,      NdRule::AndI,     NdRule::AndE1,   NdRule::AndE2,   NdRule::NegAndI1,
    NdRule::NegAndI2, NdRule::NegAndE, NdRule::OrI1,    NdRule::OrI2,    NdRule::OrE,     NdRule::NegOrI,
    NdRule::NegOrE1, NdRule::NegOrE2, NdRule::NegNegI,  NdRule::NegNegE, NdRule::BoxIStar, NdRule::BoxE,
    NdRule::NegBoxI, NdRule::NegBoxE, NdRule::BotI,     NdRule::BotE,
};

inline std::string_view rule_id(NdRule r) {
  switch (r) {
    case NdRule::Hyp: return "hyp";
    case NdRule::MA: return "ma";
    case NdRule::AndI: return "and_i";
    case NdRule::AndE1: return "and_e1";
    case NdRule::AndE2: return "and_e2";
    case NdRule::NegAndI1: return "neg_and_i1";
    case NdRule::NegAndI2: return "neg_and_i2";
    case NdRule::NegAndE: return "neg_and_e";
    case NdRule::OrI1: return "or_i1";
    case NdRule::OrI2: return "or_i2";
    case NdRule::OrE: return "or_e";
    case NdRule::NegOrI: return "neg_or_i";
    case NdRule::NegOrE1: return "neg_or_e1";
    case NdRule::NegOrE2: return "neg_or_e2";
    case NdRule::NegNegI: return "neg_neg_i";
    case NdRule::NegNegE: return "neg_neg_e";
    case NdRule::BoxIStar: return "box_i_star";
    case NdRule::BoxE: return "box_e";
    case NdRule::NegBoxI: return "neg_box_i";
    case NdRule::NegBoxE: return "neg_box_e";
    case NdRule::BotI: return "bot_i";
    case NdRule::BotE: return "bot_e";
  }
  return "?";
}

inline std::optional<NdRule> nd_rule_from_id(std::string_view id) {
  for (auto r : kAllNdRules)
    if (rule_id(r) == id) return r;
  return std::nullopt;
}

struct Discharge {
  std::string marker;
  Formula formula;
  friend bool operator==(const Discharge&, const Discharge&) = default;
};

struct NdNode;
using NdDeduction = std::shared_ptr<const NdNode>;

struct NdNode {
  NdRule rule = NdRule::Hyp;
  Formula conclusion;
  std::string marker;  // Hyp only
  std::vector<Discharge> discharges;
  std::vector<NdDeduction> premises;
};

inline NdDeduction nd_hyp(std::string marker, Formula f) {
  return std::make_shared<const NdNode>(NdNode{NdRule::Hyp, std::move(f), std::move(marker), {}, {}});
}

inline NdDeduction nd_node(NdRule rule, Formula conclusion, std::vector<NdDeduction> premises,
                           std::vector<Discharge> discharges = {}) {
  return std::make_shared<const NdNode>(
      NdNode{rule, std::move(conclusion), {}, std::move(discharges), std::move(premises)});
}

// Right fold over the canonical order; the empty disjunction is bot.
inline Formula disjunction_of(const FormulaSet& delta) {
  if (delta.empty()) return bot();
  Formula out = delta[delta.size() - 1];
  for (std::size_t i = delta.size() - 1; i-- > 0;) out = disj(delta[i], out);
  return out;
}

inline Formula disjunction_of(const std::vector<Formula>& delta) { return disjunction_of(FormulaSet(delta)); }

// --- checking ------------------------------------------------------------

struct NdCheckResult {
  bool ok = true;
  std::string error;
  Formula conclusion;
  FormulaSet open;
  explicit operator bool() const { return ok; }
};

namespace detail {

struct OpenLeaf {
  std::string marker;
  Formula formula;
};

// A class of hypotheses a rule may close: its formula and the premise it
// lives in.
struct DischargeSlot {
  Formula formula;
  std::size_t premise;
};

class NdChecker {
 public:
  std::optional<std::string> run(const NdNode& n, std::vector<OpenLeaf>& open) {
    if (n.rule == NdRule::Hyp) {
      if (!n.premises.empty() || !n.discharges.empty()) return fail(n, "a hypothesis has no premises or discharges");
      if (n.marker.empty()) return fail(n, "hypothesis without a marker");
      open.push_back({n.marker, n.conclusion});
      return std::nullopt;
    }
    for (const auto& p : n.premises)
      if (!p) return fail(n, "missing premise");
    std::vector<std::vector<OpenLeaf>> sub(n.premises.size());
    for (std::size_t i = 0; i < n.premises.size(); ++i)
      if (auto e = run(*n.premises[i], sub[i])) return e;
    if (auto e = schema(n)) return fail(n, *e);

    auto slots = slots_of(n);
    std::vector<bool> used(slots.size(), false);
    for (const auto& d : n.discharges) {
      if (!discharged_.insert(d.marker).second) return fail(n, "marker '" + d.marker + "' is discharged twice");
      std::vector<std::size_t> where;
      for (std::size_t i = 0; i < sub.size(); ++i)
        for (const auto& leaf : sub[i])
          if (leaf.marker == d.marker) {
            if (leaf.formula != d.formula)
              return fail(n, "marker '" + d.marker + "' labels '" + leaf.formula.text() + "', not '" +
                                 d.formula.text() + "'");
            if (where.empty() || where.back() != i) where.push_back(i);
          }
      if (where.empty()) return fail(n, "marker '" + d.marker + "' has no open assumption to discharge");
      if (where.size() > 1) return fail(n, "marker '" + d.marker + "' is open in more than one premise");
      bool matched = false;
      for (std::size_t s = 0; s < slots.size() && !matched; ++s)
        if (!used[s] && slots[s].premise == where[0] && slots[s].formula == d.formula) used[s] = matched = true;
      if (!matched)
        return fail(n, "discharge of '" + d.formula.text() + "' (" + d.marker + ") is outside its designated premise");
      auto& leaves = sub[where[0]];
      std::erase_if(leaves, [&](const OpenLeaf& l) { return l.marker == d.marker; });
    }
    for (auto& s : sub) open.insert(open.end(), s.begin(), s.end());
    return std::nullopt;
  }

  const std::set<std::string>& discharged() const { return discharged_; }

 private:
  static std::optional<std::string> fail(const NdNode& n, const std::string& msg) {
    return std::string(rule_id(n.rule)) + " node '" + n.conclusion.text() + "': " + msg;
  }

  static std::vector<DischargeSlot> slots_of(const NdNode& n) {
    switch (n.rule) {
      case NdRule::OrE: {
        const Formula& d = n.premises[0]->conclusion;
        return {{d.left(), 1}, {d.right(), 2}};
      }
      case NdRule::NegAndE: {
        const Formula& d = n.premises[0]->conclusion.child();
        return {{neg(d.left()), 1}, {neg(d.right()), 2}};
      }
      case NdRule::BoxIStar: return {{neg(n.conclusion.right().child()), 1}};
      default: return {};
    }
  }

  static std::optional<std::string> schema(const NdNode& n) {
    const Formula& c = n.conclusion;
    const auto& P = n.premises;
    auto arity = [&](std::size_t k) -> std::optional<std::string> {
      if (P.size() != k) return "expected " + std::to_string(k) + " premise(s), found " + std::to_string(P.size());
      return std::nullopt;
    };
    auto pc = [&](std::size_t i) -> const Formula& { return P[i]->conclusion; };
    auto bad = [](const char* what) -> std::optional<std::string> { return std::string(what); };
    const bool closes = n.rule == NdRule::OrE || n.rule == NdRule::NegAndE || n.rule == NdRule::BoxIStar;
    if (!closes && !n.discharges.empty()) return bad("this rule discharges no assumptions");

    switch (n.rule) {
      case NdRule::Hyp: return std::nullopt;
      case NdRule::MA:
        if (auto e = arity(0)) return e;
        if (!(c.is_or() && c.right().is_neg_of(Op::Box) && c.right().child().child() == c.left()))
          return bad("conclusion must be 'a | ~#a'");
        return std::nullopt;
      case NdRule::AndI:
        if (auto e = arity(2)) return e;
        if (!c.is_and() || pc(0) != c.left() || pc(1) != c.right()) return bad("premises must be the conjuncts");
        return std::nullopt;
      case NdRule::AndE1:
      case NdRule::AndE2:
        if (auto e = arity(1)) return e;
        if (!pc(0).is_and() || (n.rule == NdRule::AndE1 ? pc(0).left() : pc(0).right()) != c)
          return bad("premise must be a conjunction with the conclusion as that conjunct");
        return std::nullopt;
      case NdRule::NegAndI1:
      case NdRule::NegAndI2:
        if (auto e = arity(1)) return e;
        if (!c.is_neg_of(Op::And) ||
            pc(0) != neg(n.rule == NdRule::NegAndI1 ? c.child().left() : c.child().right()))
          return bad("premise must negate the matching conjunct");
        return std::nullopt;
      case NdRule::NegAndE:
        if (auto e = arity(3)) return e;
        if (!pc(0).is_neg_of(Op::And) || pc(1) != c || pc(2) != c)
          return bad("premises must be '~(a & b)' and two deductions of the conclusion");
        return std::nullopt;
      case NdRule::OrI1:
      case NdRule::OrI2:
        if (auto e = arity(1)) return e;
        if (!c.is_or() || pc(0) != (n.rule == NdRule::OrI1 ? c.left() : c.right()))
          return bad("premise must be the matching disjunct");
        return std::nullopt;
      case NdRule::OrE:
        if (auto e = arity(3)) return e;
        if (!pc(0).is_or() || pc(1) != c || pc(2) != c)
          return bad("premises must be 'a | b' and two deductions of the conclusion");
        return std::nullopt;
      case NdRule::NegOrI:
        if (auto e = arity(2)) return e;
        if (!c.is_neg_of(Op::Or) || pc(0) != neg(c.child().left()) || pc(1) != neg(c.child().right()))
          return bad("premises must be the negated disjuncts");
        return std::nullopt;
      case NdRule::NegOrE1:
      case NdRule::NegOrE2:
        if (auto e = arity(1)) return e;
        if (!pc(0).is_neg_of(Op::Or) ||
            neg(n.rule == NdRule::NegOrE1 ? pc(0).child().left() : pc(0).child().right()) != c)
          return bad("conclusion must negate the matching disjunct");
        return std::nullopt;
      case NdRule::NegNegI:
        if (auto e = arity(1)) return e;
        if (c != neg(neg(pc(0)))) return bad("conclusion must be the double negation of the premise");
        return std::nullopt;
      case NdRule::NegNegE:
        if (auto e = arity(1)) return e;
        if (pc(0) != neg(neg(c))) return bad("premise must be the double negation of the conclusion");
        return std::nullopt;
      case NdRule::BoxIStar:
        if (auto e = arity(2)) return e;
        if (!c.is_or() || !c.right().is_box() || pc(0) != disj(c.left(), c.right().child()) || pc(1) != c.left())
          return bad("premises must be 'psi | phi' and 'psi' for 'psi | #phi'");
        return std::nullopt;
      case NdRule::BoxE:
        if (auto e = arity(1)) return e;
        if (pc(0) != box(c)) return bad("premise must be the box of the conclusion");
        return std::nullopt;
      case NdRule::NegBoxI:
        if (auto e = arity(1)) return e;
        if (!c.is_neg_of(Op::Box) || pc(0) != neg(c.child().child())) return bad("premise must be '~a' for '~#a'");
        return std::nullopt;
      case NdRule::NegBoxE:
        if (auto e = arity(2)) return e;
        if (!c.is_neg() || pc(0) != neg(box(c.child())) || pc(1) != c.child())
          return bad("premises must be '~#a' and 'a' for '~a'");
        return std::nullopt;
      case NdRule::BotI:
        if (auto e = arity(1)) return e;
        if (!c.is_bot() || !pc(0).is_and() || !pc(0).right().is_box() || pc(0).left() != neg(pc(0).right().child()))
          return bad("premise must be '~a & #a' and the conclusion bot");
        return std::nullopt;
      case NdRule::BotE:
        if (auto e = arity(1)) return e;
        if (!pc(0).is_bot()) return bad("premise must be bot");
        return std::nullopt;
    }
    return bad("unknown rule");
  }

  std::set<std::string> discharged_;
};

}  // namespace detail

inline NdCheckResult check_nd(const NdDeduction& d) {
  NdCheckResult r;
  if (!d) return {false, "empty deduction", {}, {}};
  detail::NdChecker checker;
  std::vector<detail::OpenLeaf> open;
  if (auto e = checker.run(*d, open)) return {false, *e, d->conclusion, {}};
  for (const auto& leaf : open) {
    if (checker.discharged().count(leaf.marker))
      return {false, "marker '" + leaf.marker + "' is both open and discharged", d->conclusion, {}};
    r.open.insert(leaf.formula);
  }
  r.conclusion = d->conclusion;
  return r;
}

// --- construction helpers --------------------------------------------------

// From d : phi and a deduction of bot from [~phi]^u, a deduction of #phi
// (box introduction as box_i_star with psi = bot).
inline NdDeduction nd_box_intro(const NdDeduction& d1, const std::string& u, const NdDeduction& d2,
                                const std::string& a, const std::string& b) {
  const Formula phi = d1->conclusion;
  auto e1 = nd_node(NdRule::OrI2, disj(bot(), phi), {d1});
  auto e2 = nd_node(NdRule::BoxIStar, disj(bot(), box(phi)), {e1, d2}, {{u, neg(phi)}});
  return nd_node(NdRule::OrE, box(phi),
                 {e2, nd_node(NdRule::BotE, box(phi), {nd_hyp(a, bot())}), nd_hyp(b, box(phi))},
                 {{a, bot()}, {b, box(phi)}});
}

inline std::size_t nd_size(const NdDeduction& d) {
  std::size_t n = 1;
  for (const auto& p : d->premises) n += nd_size(p);
  return n;
}

// --- serialization -------------------------------------------------------

inline nlohmann::ordered_json nd_to_json(const NdDeduction& d) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(rule_id(d->rule));
  if (d->rule == NdRule::Hyp) {
    j["marker"] = d->marker;
    j["conclusion"] = d->conclusion.text();
    return j;
  }
  j["conclusion"] = d->conclusion.text();
  nlohmann::ordered_json ds = nlohmann::ordered_json::array();
  for (const auto& x : d->discharges) ds.push_back({{"marker", x.marker}, {"formula", x.formula.text()}});
  j["discharges"] = ds;
  nlohmann::ordered_json prems = nlohmann::ordered_json::array();
  for (const auto& p : d->premises) prems.push_back(nd_to_json(p));
  j["premises"] = prems;
  return j;
}

inline NdDeduction nd_from_json(const nlohmann::json& j) {
  try {
    auto rule = nd_rule_from_id(j.at("rule").get<std::string>());
    if (!rule) throw ProofFormatError("unknown ND rule '" + j.at("rule").get<std::string>() + "'");
    Formula c = parse(j.at("conclusion").get<std::string>());
    if (*rule == NdRule::Hyp) return nd_hyp(j.at("marker").get<std::string>(), c);
    std::vector<Discharge> ds;
    if (j.contains("discharges"))
      for (const auto& x : j.at("discharges"))
        ds.push_back({x.at("marker").get<std::string>(), parse(x.at("formula").get<std::string>())});
    std::vector<NdDeduction> prems;
    if (j.contains("premises"))
      for (const auto& p : j.at("premises")) prems.push_back(nd_from_json(p));
    return nd_node(*rule, c, std::move(prems), std::move(ds));
  } catch (const nlohmann::json::exception& e) {
    throw ProofFormatError(std::string("malformed deduction: ") + e.what());
  }
}

// Conclusion first, premises indented beneath. Hypotheses closed further
// down are bracketed: "[p]^u1".
inline std::string render_deduction(const NdDeduction& d, Style style = Style::Ascii) {
  std::string out;
  std::set<std::string> closed;
  std::function<void(const NdDeduction&, int)> go = [&](const NdDeduction& n, int indent) {
    out += std::string(static_cast<std::size_t>(indent) * 2, ' ');
    if (n->rule == NdRule::Hyp) {
      const bool c = closed.count(n->marker) > 0;
      out += (c ? "[" : "") + render(n->conclusion, style) + (c ? "]" : "") + "^" + n->marker + "\n";
      return;
    }
    out += render(n->conclusion, style) + "   (" + std::string(rule_id(n->rule));
    for (const auto& x : n->discharges) out += ", " + x.marker;
    out += ")\n";
    std::vector<std::string> added;
    for (const auto& x : n->discharges)
      if (closed.insert(x.marker).second) added.push_back(x.marker);
    for (const auto& p : n->premises) go(p, indent + 1);
    for (const auto& m : added) closed.erase(m);
  };
  go(d, 0);
  return out;
}

}  // namespace tml
