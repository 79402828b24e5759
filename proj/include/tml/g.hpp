#pragma once

// The single-conclusion calculus G: proofs, checking, bounded cut-free search
// and the cut-necessity probe.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tml/formula.hpp"
#include "tml/matrix.hpp"
#include "tml/sc.hpp"

namespace tml {

struct GSequent {
  FormulaSet left;
  Formula right;

  Sequent as_sequent() const { return {left, {right}}; }
  std::size_t hash() const { return left.hash() * 31 + right.hash(); }

  friend bool operator==(const GSequent& a, const GSequent& b) { return a.left == b.left && a.right == b.right; }
  friend bool operator!=(const GSequent& a, const GSequent& b) { return !(a == b); }
};

struct GSequentHash {
  std::size_t operator()(const GSequent& s) const noexcept { return s.hash(); }
};

inline std::string render(const GSequent& s, Style style = Style::Ascii) { return render(s.as_sequent(), style); }

inline GSequent parse_gsequent(std::string_view text) {
  Sequent s = parse_sequent(text);
  if (s.right.size() != 1) throw ParseError(1, 1, "a G sequent has exactly one formula on the right");
  return {s.left, s.right[0]};
}

enum class GRule : std::uint8_t {
  StructAx, ModalAx, Weak, Cut, AndL, AndR, OrL, OrR1, OrR2, NegRule, BotRule, NegNegL, NegNegR, BoxL, BoxR,
};

inline constexpr std::array<GRule, 15> kAllGRules{
    GRule::StructAx, GRule::ModalAx, GRule::Weak,    GRule::Cut,     GRule::AndL,
    GRule::AndR,     GRule::OrL,     GRule::OrR1,    GRule::OrR2,    GRule::NegRule,
    GRule::BotRule,  GRule::NegNegL, GRule::NegNegR, GRule::BoxL,    GRule::BoxR,
};

inline std::string_view rule_id(GRule r) {
  switch (r) {
    case GRule::StructAx: return "g.struct_ax";
    case GRule::ModalAx: return "g.modal_ax";
    case GRule::Weak: return "g.weak";
    case GRule::Cut: return "g.cut";
    case GRule::AndL: return "g.and_l";
    case GRule::AndR: return "g.and_r";
    case GRule::OrL: return "g.or_l";
    case GRule::OrR1: return "g.or_r1";
    case GRule::OrR2: return "g.or_r2";
    case GRule::NegRule: return "g.neg";
    case GRule::BotRule: return "g.bot";
    case GRule::NegNegL: return "g.neg_neg_l";
    case GRule::NegNegR: return "g.neg_neg_r";
    case GRule::BoxL: return "g.box_l";
    case GRule::BoxR: return "g.box_r";
  }
  return "?";
}

inline std::optional<GRule> g_rule_from_id(std::string_view id) {
  for (auto r : kAllGRules)
    if (rule_id(r) == id) return r;
  return std::nullopt;
}

struct GNode;
using GProof = std::shared_ptr<const GNode>;

struct GNode {
  GRule rule = GRule::StructAx;
  GSequent sequent;
  std::vector<GProof> premises;
};

inline GProof make_gnode(GRule rule, GSequent s, std::vector<GProof> premises = {}) {
  return std::make_shared<const GNode>(GNode{rule, std::move(s), std::move(premises)});
}

inline bool is_modal_axiom(const Formula& f) {
  return f.is_or() && f.right().is_neg_of(Op::Box) && f.right().child().child() == f.left();
}

namespace detail {

// Left-hand sides a premise may have when `principal` is replaced by `adds`:
// with the principal dropped or kept.
inline std::array<FormulaSet, 2> left_variants(const FormulaSet& left, const Formula& principal,
                                              const std::vector<Formula>& adds) {
  FormulaSet dropped = left.without(principal), kept = left;
  for (const auto& a : adds) {
    dropped.insert(a);
    kept.insert(a);
  }
  return {dropped, kept};
}

inline bool is_variant(const FormulaSet& got, const std::array<FormulaSet, 2>& vs) {
  return got == vs[0] || got == vs[1];
}

inline std::optional<std::string> check_gnode(const GNode& n, bool allow_cut) {
  const FormulaSet& L = n.sequent.left;
  const Formula& g = n.sequent.right;
  const auto& P = n.premises;
  auto arity = [&](std::size_t k) -> std::optional<std::string> {
    if (P.size() != k) return "expected " + std::to_string(k) + " premise(s), found " + std::to_string(P.size());
    for (const auto& p : P)
      if (!p) return std::string("missing premise");
    return std::nullopt;
  };
  auto same_right = [&](std::size_t i) { return P[i]->sequent.right == g; };
  auto same_left = [&](std::size_t i) { return P[i]->sequent.left == L; };
  // Some left formula of the given shape whose replacement yields premise 0.
  auto left_rule = [&](auto shape, auto adds) -> bool {
    if (!same_right(0)) return false;
    for (const auto& f : L)
      if (shape(f) && is_variant(P[0]->sequent.left, left_variants(L, f, adds(f)))) return true;
    return false;
  };

  switch (n.rule) {
    case GRule::StructAx:
      if (auto e = arity(0)) return e;
      if (L.size() != 1 || L[0] != g) return std::string("structural axiom must be 'a => a'");
      return std::nullopt;
    case GRule::ModalAx:
      if (auto e = arity(0)) return e;
      if (!L.empty() || !is_modal_axiom(g)) return std::string("modal axiom must be '=> a | ~#a'");
      return std::nullopt;
    case GRule::Weak: {
      if (auto e = arity(1)) return e;
      const FormulaSet& pl = P[0]->sequent.left;
      if (!same_right(0) || !pl.subset_of(L) || L.size() > pl.size() + 1)
        return std::string("conclusion is not the premise with one formula added on the left");
      return std::nullopt;
    }
    case GRule::Cut: {
      if (!allow_cut) return std::string("cut is not allowed");
      if (auto e = arity(2)) return e;
      const Formula& a = P[0]->sequent.right;
      if (!same_left(0) || P[1]->sequent.left != L.with(a) || !same_right(1))
        return std::string("premises must be 'D => a' and 'D, a => b'");
      return std::nullopt;
    }
    case GRule::AndL:
      if (auto e = arity(1)) return e;
      if (!left_rule([](const Formula& f) { return f.is_and(); },
                     [](const Formula& f) { return std::vector<Formula>{f.left(), f.right()}; }))
        return std::string("no conjunction on the left matches the premise");
      return std::nullopt;
    case GRule::AndR:
      if (auto e = arity(2)) return e;
      if (!g.is_and() || !same_left(0) || !same_left(1) || P[0]->sequent.right != g.left() ||
          P[1]->sequent.right != g.right())
        return std::string("premises must be 'D => a' and 'D => b' for 'a & b'");
      return std::nullopt;
    case GRule::OrL: {
      if (auto e = arity(2)) return e;
      if (!same_right(0) || !same_right(1)) return std::string("premises must keep the right-hand formula");
      for (const auto& f : L) {
        if (!f.is_or()) continue;
        auto a = left_variants(L, f, {f.left()}), b = left_variants(L, f, {f.right()});
        for (int k = 0; k < 2; ++k)
          if (P[0]->sequent.left == a[k] && P[1]->sequent.left == b[k]) return std::nullopt;
      }
      return std::string("no disjunction on the left matches the premises");
    }
    case GRule::OrR1:
    case GRule::OrR2: {
      if (auto e = arity(1)) return e;
      const bool first = n.rule == GRule::OrR1;
      if (!g.is_or() || !same_left(0) || P[0]->sequent.right != (first ? g.left() : g.right()))
        return std::string("premise must prove the ") + (first ? "left" : "right") + " disjunct";
      return std::nullopt;
    }
    case GRule::NegRule: {
      if (auto e = arity(1)) return e;
      const GSequent& p = P[0]->sequent;
      if (p.left.size() != 1 || L.size() != 1 || L[0] != neg(p.right) || g != neg(p.left[0]))
        return std::string("negation rule must take 'a => b' to '~b => ~a' with no context");
      return std::nullopt;
    }
    case GRule::BotRule:
      if (auto e = arity(1)) return e;
      if (!same_left(0) || !P[0]->sequent.right.is_bot()) return std::string("premise must be 'D => bot'");
      return std::nullopt;
    case GRule::NegNegL:
      if (auto e = arity(1)) return e;
      if (!left_rule([](const Formula& f) { return f.is_neg_of(Op::Neg); },
                     [](const Formula& f) { return std::vector<Formula>{f.child().child()}; }))
        return std::string("no double negation on the left matches the premise");
      return std::nullopt;
    case GRule::NegNegR:
      if (auto e = arity(1)) return e;
      if (!g.is_neg_of(Op::Neg) || !same_left(0) || P[0]->sequent.right != g.child().child())
        return std::string("premise must be 'D => a' for '~~a'");
      return std::nullopt;
    case GRule::BoxL:
      if (auto e = arity(1)) return e;
      if (!left_rule([&](const Formula& f) { return f.is_neg_of(Op::Box) && L.contains(f.child().child()); },
                     [](const Formula& f) { return std::vector<Formula>{neg(f.child().child())}; }))
        return std::string("premise must be 'D, a, ~a => b' for 'D, a, ~#a => b'");
      return std::nullopt;
    case GRule::BoxR: {
      if (auto e = arity(1)) return e;
      if (!g.is_and() || !g.right().is_neg_of(Op::Box) || g.right().child().child() != g.left() || !same_left(0) ||
          P[0]->sequent.right != conj(g.left(), neg(g.left())))
        return std::string("premise must be 'D => a & ~a' for 'D => a & ~#a'");
      return std::nullopt;
    }
  }
  return std::string("unknown rule");
}

}  // namespace detail

inline CheckResult check_g_proof(const GProof& p, bool allow_cut) {
  if (!p) return CheckResult::fail("empty proof");
  std::vector<const GNode*> stack{p.get()};
  while (!stack.empty()) {
    const GNode* n = stack.back();
    stack.pop_back();
    if (auto err = detail::check_gnode(*n, allow_cut))
      return CheckResult::fail(std::string(rule_id(n->rule)) + " node '" + render(n->sequent) + "': " + *err);
    for (auto it = n->premises.rbegin(); it != n->premises.rend(); ++it) stack.push_back(it->get());
  }
  return {};
}

inline bool is_cut_free(const GProof& p) {
  if (p->rule == GRule::Cut) return false;
  for (const auto& q : p->premises)
    if (!is_cut_free(q)) return false;
  return true;
}

inline int height(const GProof& p) {
  int h = 0;
  for (const auto& q : p->premises) h = std::max(h, height(q));
  return h + 1;
}

// --- bounded search --------------------------------------------------------

// Formulas a backward cut-free search may introduce: subformulas, bot, and
// for every a & ~#a the shapes a & ~a and ~a forced by the box rule.
inline FormulaSet g_closure(const GSequent& s) {
  FormulaSet out = subformulas_of(s.as_sequent().left.united(s.as_sequent().right));
  out.insert(bot());
  std::vector<Formula> extra;
  for (const auto& f : out)
    if (f.is_and() && f.right().is_neg_of(Op::Box) && f.right().child().child() == f.left()) {
      extra.push_back(conj(f.left(), neg(f.left())));
      extra.push_back(neg(f.left()));
    }
  for (const auto& f : extra) out.insert(f);
  return out;
}

namespace detail {

class GSearch {
 public:
  explicit GSearch(FormulaSet closure) : closure_(std::move(closure)) {}

  GProof run(const GSequent& s, int depth) {
    if (depth <= 0) return nullptr;
    auto& entry = memo_[s];
    if (entry.proof && entry.proof_depth <= depth) return entry.proof;
    if (depth <= entry.failed_depth) return nullptr;
    GProof p = attempt(s, depth);
    auto& e = memo_[s];
    if (p) {
      e.proof = p;
      e.proof_depth = height(p);
    } else {
      e.failed_depth = std::max(e.failed_depth, depth);
    }
    return p;
  }

 private:
  struct Entry {
    GProof proof;
    int proof_depth = 0;
    int failed_depth = 0;
  };

  bool inside(const GSequent& s) const {
    if (!closure_.contains(s.right)) return false;
    for (const auto& f : s.left)
      if (!closure_.contains(f)) return false;
    return true;
  }

  GProof attempt(const GSequent& s, int depth) {
    const FormulaSet& L = s.left;
    const Formula& g = s.right;
    if (L.size() == 1 && L[0] == g) return make_gnode(GRule::StructAx, s);
    if (L.empty() && is_modal_axiom(g)) return make_gnode(GRule::ModalAx, s);

    auto one = [&](GRule r, const GSequent& p) -> GProof {
      if (p == s || !inside(p)) return nullptr;
      if (GProof q = run(p, depth - 1)) return make_gnode(r, s, {q});
      return nullptr;
    };
    auto two = [&](GRule r, const GSequent& a, const GSequent& b) -> GProof {
      if (!inside(a) || !inside(b)) return nullptr;
      GProof qa = run(a, depth - 1);
      if (!qa) return nullptr;
      GProof qb = run(b, depth - 1);
      return qb ? make_gnode(r, s, {qa, qb}) : nullptr;
    };

    // Right rules.
    if (g.is_and()) {
      if (g.right().is_neg_of(Op::Box) && g.right().child().child() == g.left())
        if (GProof p = one(GRule::BoxR, {L, conj(g.left(), neg(g.left()))})) return p;
      if (GProof p = two(GRule::AndR, {L, g.left()}, {L, g.right()})) return p;
    }
    if (g.is_or()) {
      if (GProof p = one(GRule::OrR1, {L, g.left()})) return p;
      if (GProof p = one(GRule::OrR2, {L, g.right()})) return p;
    }
    if (g.is_neg_of(Op::Neg))
      if (GProof p = one(GRule::NegNegR, {L, g.child().child()})) return p;
    if (g.is_neg() && L.size() == 1 && L[0].is_neg())
      if (GProof p = one(GRule::NegRule, {{g.child()}, L[0].child()})) return p;

    // Left rules, principal dropped or kept.
    for (const auto& f : L) {
      auto variants = [&](std::vector<Formula> adds) { return left_variants(L, f, adds); };
      if (f.is_and())
        for (const auto& v : variants({f.left(), f.right()}))
          if (GProof p = one(GRule::AndL, {v, g})) return p;
      if (f.is_or()) {
        auto a = variants({f.left()}), b = variants({f.right()});
        for (int k = 0; k < 2; ++k)
          if (GProof p = two(GRule::OrL, {a[k], g}, {b[k], g})) return p;
      }
      if (f.is_neg_of(Op::Neg))
        for (const auto& v : variants({f.child().child()}))
          if (GProof p = one(GRule::NegNegL, {v, g})) return p;
      if (f.is_neg_of(Op::Box) && L.contains(f.child().child()))
        for (const auto& v : variants({neg(f.child().child())}))
          if (GProof p = one(GRule::BoxL, {v, g})) return p;
    }

    // Structural: drop one formula, or go through bot.
    for (const auto& f : L)
      if (GProof p = one(GRule::Weak, {L.without(f), g})) return p;
    if (!g.is_bot())
      if (GProof p = one(GRule::BotRule, {L, bot()})) return p;
    return nullptr;
  }

  FormulaSet closure_;
  std::unordered_map<GSequent, Entry, GSequentHash> memo_;
};

}  // namespace detail

// Cut-free proof of height at most `depth`, if one exists inside the
// closure bound.
inline std::optional<GProof> g_search_cutfree(const GSequent& s, int depth) {
  detail::GSearch search(g_closure(s));
  if (GProof p = search.run(s, depth)) return p;
  return std::nullopt;
}

struct CutProbeReport {
  Formula alpha;
  GSequent sequent;
  int depth = 0;
  bool valid = false;
  bool g_cutfree_found = false;
  bool sc_cutfree_found = false;
  bool vacuous = false;  // depth 0 explores nothing
};

// Looks for a cut-free G proof of => #(a | ~#a) and compares with SC_TML.
inline CutProbeReport cut_necessity_probe(const Formula& alpha, int depth) {
  CutProbeReport r;
  r.alpha = alpha;
  r.depth = depth;
  r.sequent = {{}, box(disj(alpha, neg(box(alpha))))};
  r.valid = valid(r.sequent.as_sequent(), m4());
  r.g_cutfree_found = g_search_cutfree(r.sequent, depth).has_value();
  auto sc = prove(r.sequent.as_sequent());
  r.sc_cutfree_found = sc && is_cut_free(*sc);
  r.vacuous = depth <= 0;
  return r;
}

inline nlohmann::ordered_json probe_to_json(const CutProbeReport& r) {
  return {{"alpha", r.alpha.text()},       {"sequent", render(r.sequent)},
          {"depth", r.depth},              {"valid", r.valid},
          {"g_cutfree_found", r.g_cutfree_found}, {"sc_cutfree_found", r.sc_cutfree_found},
          {"vacuous", r.vacuous}};
}

// --- serialization -------------------------------------------------------

inline nlohmann::ordered_json g_to_json(const GProof& p) {
  nlohmann::ordered_json j;
  j["rule"] = std::string(rule_id(p->rule));
  j["sequent"] = sequent_to_json(p->sequent.as_sequent());
  nlohmann::ordered_json prems = nlohmann::ordered_json::array();
  for (const auto& q : p->premises) prems.push_back(g_to_json(q));
  j["premises"] = prems;
  return j;
}

inline GProof g_from_json(const nlohmann::json& j) {
  try {
    auto rule = g_rule_from_id(j.at("rule").get<std::string>());
    if (!rule) throw ProofFormatError("unknown G rule '" + j.at("rule").get<std::string>() + "'");
    Sequent s = sequent_from_json(j.at("sequent"));
    if (s.right.size() != 1) throw ProofFormatError("G sequent '" + render(s) + "' needs exactly one conclusion");
    std::vector<GProof> prems;
    if (j.contains("premises"))
      for (const auto& q : j.at("premises")) prems.push_back(g_from_json(q));
    return make_gnode(*rule, {s.left, s.right[0]}, std::move(prems));
  } catch (const nlohmann::json::exception& e) {
    throw ProofFormatError(std::string("malformed proof: ") + e.what());
  }
}

inline std::string render_proof(const GProof& p, Style style = Style::Ascii, int indent = 0) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += render(p->sequent, style) + "   (" + std::string(rule_id(p->rule).substr(2)) + ")\n";
  for (const auto& q : p->premises) out += render_proof(q, style, indent + 1);
  return out;
}

}  // namespace tml
