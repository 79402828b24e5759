#pragma once

// Proof transformations on SC_TML: weakening to a target, contraposition,
// necessitation and its inverse, and local rule soundness.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tml/algebra.hpp"
#include "tml/matrix.hpp"
#include "tml/sc.hpp"

namespace tml {

class TransformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Extends `p` with weakening steps until it concludes `target`.
inline ScProof weaken_to(ScProof p, const Sequent& target) {
  if (!p->sequent.contained_in(target))
    throw TransformError("cannot weaken '" + render(p->sequent) + "' to '" + render(target) + "'");
  for (const auto& f : target.left)
    if (!p->sequent.left.contains(f))
      p = make_node(ScRule::WeakL, {p->sequent.left.with(f), p->sequent.right}, {f}, {p});
  for (const auto& f : target.right)
    if (!p->sequent.right.contains(f))
      p = make_node(ScRule::WeakR, {p->sequent.left, p->sequent.right.with(f)}, {f}, {p});
  return p;
}

// Applies a logical rule at `conclusion`; each subproof is weakened to the
// corresponding retained premise.
inline ScProof infer(ScRule rule, const Sequent& conclusion, const Formula& principal, std::vector<ScProof> subs) {
  auto shape = rule_shape(rule, principal);
  if (!shape || shape->premises.size() != subs.size())
    throw TransformError(std::string(rule_id(rule)) + " does not apply to '" + principal.text() + "'");
  for (std::size_t i = 0; i < subs.size(); ++i)
    subs[i] = weaken_to(subs[i], premise_of(conclusion, principal, *shape, i));
  return make_node(rule, conclusion, {principal}, std::move(subs));
}

inline ScProof cut_on(const Sequent& conclusion, const Formula& a, const ScProof& right_premise,
                      const ScProof& left_premise) {
  return make_node(ScRule::Cut, conclusion, {a},
                   {weaken_to(right_premise, {conclusion.left, conclusion.right.with(a)}),
                    weaken_to(left_premise, {conclusion.left.with(a), conclusion.right})});
}

// a => ~~a
inline ScProof dneg_intro(const Formula& a) {
  Sequent s{{a}, {neg(neg(a))}};
  return make_node(ScRule::NegNegR, s, {neg(neg(a))}, {make_node(ScRule::Axiom, {s.left, s.right.with(a)}, {a})});
}

// ~~a => a
inline ScProof dneg_elim(const Formula& a) {
  Sequent s{{neg(neg(a))}, {a}};
  return make_node(ScRule::NegNegL, s, {neg(neg(a))}, {make_node(ScRule::Axiom, {s.left.with(a), s.right}, {a})});
}

// ~a & #a =>, the definable bottom.
inline ScProof bot_proof(const Formula& a) {
  const Formula na = neg(a), ba = box(a);
  Sequent s0{{conj(na, ba)}, {}};
  Sequent s1{s0.left.with(na).with(ba), {}};
  Sequent s2{s1.left, {na}};
  return make_node(ScRule::AndL, s0, {conj(na, ba)},
                   {make_node(ScRule::BoxL2, s1, {ba}, {make_node(ScRule::Axiom, s2, {na})})});
}

namespace detail {

// From a proof whose conclusion fits in `target` plus ~~a on the right, a
// proof of `target` (which has a on the right).
inline ScProof bridge_right(const ScProof& sub, const Sequent& target, const std::vector<Formula>& as) {
  if (as.empty()) return weaken_to(sub, target);
  const Formula nn = neg(neg(as.front()));
  std::vector<Formula> rest(as.begin() + 1, as.end());
  return cut_on(target, nn, bridge_right(sub, {target.left, target.right.with(nn)}, rest), dneg_elim(as.front()));
}

// Same on the left: ~~a in the subproof's antecedent, a in the target's.
inline ScProof bridge_left(const ScProof& sub, const Sequent& target, const std::vector<Formula>& as) {
  if (as.empty()) return weaken_to(sub, target);
  const Formula nn = neg(neg(as.front()));
  std::vector<Formula> rest(as.begin() + 1, as.end());
  return cut_on(target, nn, dneg_intro(as.front()), bridge_left(sub, {target.left.with(nn), target.right}, rest));
}

class Contraposer {
 public:
  ScProof run(const ScProof& p) {
    if (auto it = memo_.find(p.get()); it != memo_.end()) return it->second;
    ScProof out = step(*p);
    memo_.emplace(p.get(), out);
    return out;
  }

 private:
  static Sequent flip(const Sequent& s) { return {negate_all(s.right), negate_all(s.left)}; }

  ScProof step(const ScNode& n) {
    using R = ScRule;
    const Sequent t = flip(n.sequent);
    std::vector<ScProof> ih;
    if (n.rule == R::Cut) throw TransformError("contrapose expects a cut-free proof");
    for (const auto& q : n.premises) ih.push_back(run(q));

    if (n.rule == R::Axiom) {
      const Formula* w = n.sequent.left.first_common(n.sequent.right);
      if (!w) throw TransformError("axiom node '" + render(n.sequent) + "' is not an axiom");
      return make_node(R::Axiom, t, {neg(*w)});
    }
    if (n.rule == R::WeakL || n.rule == R::WeakR) return weaken_to(ih.at(0), t);

    const Formula& f = n.principal.at(0);
    const Formula nf = neg(f);
    // Sequent t extended on one side.
    auto plus_l = [](const Sequent& s, const Formula& g) { return Sequent{s.left.with(g), s.right}; };
    auto plus_r = [](const Sequent& s, const Formula& g) { return Sequent{s.left, s.right.with(g)}; };

    switch (n.rule) {
      case R::OrL: return infer(R::NegOrR, t, nf, ih);
      case R::OrR: return infer(R::NegOrL, t, nf, ih);
      case R::AndL: return infer(R::NegAndR, t, nf, ih);
      case R::AndR: return infer(R::NegAndL, t, nf, ih);
      case R::NegNegL: return infer(R::NegNegR, t, nf, ih);
      case R::NegNegR: return infer(R::NegNegL, t, nf, ih);
      case R::BoxL1: return infer(R::NegBoxR2, t, nf, ih);

      case R::NegOrL:
      case R::NegAndR: {
        // The side formulas come back doubly negated and are bridged.
        const Formula body = f.child();
        const bool left = n.rule == R::NegOrL;
        const Formula a = body.left(), b = body.right();
        if (left) {
          Sequent s1 = plus_r(t, body);
          Sequent s2 = plus_r(plus_r(s1, a), b);
          auto inner = make_node(R::OrR, s1, {body}, {bridge_right(ih[0], s2, {a, b})});
          return make_node(R::NegNegR, t, {nf}, {inner});
        }
        Sequent s1 = plus_l(t, body);
        Sequent s2 = plus_l(plus_l(s1, a), b);
        auto inner = make_node(R::AndL, s1, {body}, {bridge_left(ih[0], s2, {a, b})});
        return make_node(R::NegNegL, t, {nf}, {inner});
      }
      case R::NegOrR: {
        const Formula body = f.child();
        Sequent s1 = plus_l(t, body);
        auto inner = make_node(R::OrL, s1, {body},
                               {bridge_left(ih[0], plus_l(s1, body.left()), {body.left()}),
                                bridge_left(ih[1], plus_l(s1, body.right()), {body.right()})});
        return make_node(R::NegNegL, t, {nf}, {inner});
      }
      case R::NegAndL: {
        const Formula body = f.child();
        Sequent s1 = plus_r(t, body);
        auto inner = make_node(R::AndR, s1, {body},
                               {bridge_right(ih[0], plus_r(s1, body.left()), {body.left()}),
                                bridge_right(ih[1], plus_r(s1, body.right()), {body.right()})});
        return make_node(R::NegNegR, t, {nf}, {inner});
      }
      case R::BoxL2: {
        const Formula a = f.child();
        Sequent s1 = plus_l(t, a);
        return make_node(R::NegBoxR1, t, {nf}, {bridge_left(ih[0], s1, {a})});
      }
      case R::BoxR: {
        const Formula a = f.child();
        return make_node(R::NegBoxL, t, {nf},
                         {bridge_right(ih[1], plus_r(t, a), {a}), weaken_to(ih[0], plus_l(t, neg(a)))});
      }
      case R::NegBoxL: {
        const Formula boxed = f.child(), a = boxed.child();
        Sequent s1 = plus_r(t, boxed);
        auto inner = make_node(R::BoxR, s1, {boxed},
                               {bridge_right(ih[1], plus_r(s1, a), {a}), weaken_to(ih[0], plus_l(s1, neg(a)))});
        return make_node(R::NegNegR, t, {nf}, {inner});
      }
      case R::NegBoxR1: {
        const Formula boxed = f.child();
        Sequent s1 = plus_l(t, boxed);
        auto inner = infer(R::BoxL2, s1, boxed, {ih[0]});
        return make_node(R::NegNegL, t, {nf}, {inner});
      }
      case R::NegBoxR2: {
        const Formula boxed = f.child(), a = boxed.child();
        Sequent s1 = plus_l(t, boxed);
        auto inner = make_node(R::BoxL1, s1, {boxed}, {bridge_left(ih[0], plus_l(s1, a), {a})});
        return make_node(R::NegNegL, t, {nf}, {inner});
      }
      default: break;
    }
    throw TransformError("unexpected rule " + std::string(rule_id(n.rule)));
  }

  std::unordered_map<const ScNode*, ScProof> memo_;
};

}  // namespace detail

// From a cut-free proof of G => D, a proof of ~D => ~G. The result uses cut
// for the box cases and to pass between a and ~~a; with `rederive` it is
// replaced by a cut-free proof found by search.
inline ScProof contrapose(const ScProof& p, bool rederive = false) {
  if (!is_cut_free(p)) throw TransformError("contrapose expects a cut-free proof");
  if (auto r = check_sc_proof(p, false); !r) throw TransformError("input proof does not check: " + r.error);
  ScProof out = detail::Contraposer().run(p);
  if (rederive) {
    auto q = prove(out->sequent);
    if (!q) throw TransformError("no cut-free proof of '" + render(out->sequent) + "'");
    return *q;
  }
  return out;
}

// From a proof of => psi, a proof of => #psi.
inline ScProof necessitate(const ScProof& p) {
  const Sequent& s = p->sequent;
  if (!s.left.empty() || s.right.size() != 1)
    throw TransformError("necessitate expects a proof of '=> psi', got '" + render(s) + "'");
  const Formula psi = s.right[0], bpsi = box(psi);
  const Sequent goal{{}, {bpsi}};
  return infer(ScRule::BoxR, goal, bpsi, {p, contrapose(p)});
}

namespace detail {

// The same proof with `f` removed from every right-hand side; null when the
// result no longer checks.
inline ScProof strengthen_right(const ScProof& p, const Formula& f) {
  std::unordered_map<const ScNode*, ScProof> memo;
  std::function<ScProof(const ScProof&)> go = [&](const ScProof& q) -> ScProof {
    if (auto it = memo.find(q.get()); it != memo.end()) return it->second;
    std::vector<ScProof> prems;
    for (const auto& r : q->premises) prems.push_back(go(r));
    Sequent s{q->sequent.left, q->sequent.right.without(f)};
    ScProof out = make_node(q->rule, s, q->principal, std::move(prems));
    memo.emplace(q.get(), out);
    return out;
  };
  ScProof out = go(p);
  return check_sc_proof(out, true) ? out : nullptr;
}

inline const ScProof& skip_weakenings(const ScProof& p) {
  const ScProof* cur = &p;
  while (((*cur)->rule == ScRule::WeakL || (*cur)->rule == ScRule::WeakR) && (*cur)->premises.size() == 1)
    cur = &(*cur)->premises[0];
  return *cur;
}

}  // namespace detail

// From a proof of => #psi ending in (=>#), a proof of => psi built from its
// first premise.
inline ScProof denecessitate(const ScProof& p) {
  const Sequent& s = p->sequent;
  if (!s.left.empty() || s.right.size() != 1 || !s.right[0].is_box())
    throw TransformError("denecessitate expects a proof of '=> #psi', got '" + render(s) + "'");
  const Formula bpsi = s.right[0], psi = bpsi.child();
  const ScProof& root = detail::skip_weakenings(p);
  if (root->rule != ScRule::BoxR || root->principal.empty() || root->principal[0] != bpsi)
    throw TransformError("the last inference is not (=>#) on '" + bpsi.text() + "'");
  const Sequent target{{}, {psi}};
  ScProof first = root->premises.at(0);
  // Peel the weakenings that only re-add #psi or restore the context.
  while ((first->rule == ScRule::WeakR || first->rule == ScRule::WeakL) &&
         first->premises.at(0)->sequent.contained_in({{}, {psi, bpsi}}) &&
         first->premises[0]->sequent.right.contains(psi))
    first = first->premises[0];
  if (first->sequent == target) return first;
  if (first->sequent.contained_in({{}, {psi, bpsi}}) && first->sequent.right.contains(psi)) {
    if (ScProof q = detail::strengthen_right(first, bpsi)) return weaken_to(q, target);
    // #psi => psi closes the gap with a cut.
    auto box_elim = make_node(ScRule::BoxL1, {{bpsi}, {psi}}, {bpsi},
                              {make_node(ScRule::Axiom, {{bpsi, psi}, {psi}}, {psi})});
    return cut_on(target, bpsi, first, box_elim);
  }
  throw TransformError("first premise '" + render(first->sequent) + "' does not prove '=> " + psi.text() + "'");
}

// --- local soundness -----------------------------------------------------

// A rule instance over schematic variables: g and d for the contexts, a and
// b for the principal's immediate parts.
struct SchematicRule {
  std::string name;
  std::vector<Sequent> premises;
  Sequent conclusion;
};

inline SchematicRule schematic_instance(ScRule r) {
  const Formula g = var("g"), d = var("d"), a = var("a"), b = var("b");
  const Sequent base{{g}, {d}};
  switch (r) {
    case ScRule::Axiom: return {"axiom", {}, {{g, a}, {d, a}}};
    case ScRule::WeakL: return {"weak_l", {base}, {{g, a}, {d}}};
    case ScRule::WeakR: return {"weak_r", {base}, {{g}, {d, a}}};
    case ScRule::Cut: return {"cut", {{{g}, {d, a}}, {{g, a}, {d}}}, base};
    default: break;
  }
  // Smallest principal of the rule's shape.
  Formula principal = a;
  for (const Formula& f : {disj(a, b), conj(a, b), neg(disj(a, b)), neg(conj(a, b)), neg(neg(a)), box(a), neg(box(a))})
    if (rule_shape(r, f)) {
      principal = f;
      break;
    }
  auto shape = rule_shape(r, principal);
  SchematicRule out{std::string(rule_id(r)), {}, {}};
  out.conclusion = shape->principal_left ? Sequent{{g, principal}, {d}} : Sequent{{g}, {d, principal}};
  for (std::size_t i = 0; i < shape->premises.size(); ++i)
    out.premises.push_back(premise_of(out.conclusion, principal, *shape, i, false));
  return out;
}

struct SoundnessReport {
  bool sound = true;
  std::string algebra;  // where the witness was found
  std::string witness;  // "a=b,d=0,g=1"
  explicit operator bool() const { return sound; }
};

inline SoundnessReport rule_soundness(const SchematicRule& rule) {
  std::set<std::string> names;
  for (const auto& s : rule.premises)
    for (const auto* side : {&s.left, &s.right})
      for (const auto& f : *side) collect_variables(f, names);
  for (const auto* side : {&rule.conclusion.left, &rule.conclusion.right})
    for (const auto& f : *side) collect_variables(f, names);

  // Matrix reading: every valuation satisfying all premises satisfies the
  // conclusion.
  const LogicalMatrix& m = m4();
  for (const auto& v : valuations(names, m)) {
    bool premises = true;
    for (const auto& s : rule.premises) premises = premises && satisfies(v, s, m);
    if (premises && !satisfies(v, rule.conclusion, m)) return {false, "M4", render(v, m)};
  }

  // Order reading in M4 x M4: meet of the left below join of the right.
  const Algebra m4a = Algebra::from_matrix(m);
  const Algebra sq = product_algebra(m4a, m4a);
  auto holds = [&](const Sequent& s, const Assignment& h) {
    Algebra::Elem lhs = sq.one(), rhs = sq.zero();
    for (const auto& f : s.left) lhs = sq.meet(lhs, eval(f, h, sq));
    for (const auto& f : s.right) rhs = sq.join(rhs, eval(f, h, sq));
    return sq.leq(lhs, rhs);
  };
  std::vector<std::string> vars(names.begin(), names.end());
  Assignment h;
  std::function<std::optional<std::string>(std::size_t)> search = [&](std::size_t i) -> std::optional<std::string> {
    if (i == vars.size()) {
      bool premises = true;
      for (const auto& s : rule.premises) premises = premises && holds(s, h);
      if (premises && !holds(rule.conclusion, h)) {
        std::string w;
        for (const auto& [k, e] : h) w += (w.empty() ? "" : ",") + k + "=" + sq.name(e);
        return w;
      }
      return std::nullopt;
    }
    for (Algebra::Elem e = 0; e < sq.size(); ++e) {
      h[vars[i]] = e;
      if (auto w = search(i + 1)) return w;
    }
    return std::nullopt;
  };
  if (auto w = search(0)) return {false, "M4xM4", *w};

  if (rule.name == "box_r") {
    auto law = check_tma_laws(sq).find("x <= y | z and x & ~z <= y imply x <= y | box z");
    if (!law || !law->passed) return {false, "M4xM4", law ? law->witness : "law missing"};
  }
  return {};
}

inline SoundnessReport rule_soundness(ScRule r) { return rule_soundness(schematic_instance(r)); }

}  // namespace tml
