#pragma once

// Translations between cut-free SC_TML proofs and ND_TML deductions.
// A proof of Gamma => Delta becomes a deduction of the disjunction of Delta
// from hypotheses in Gamma; a deduction becomes an SC proof (with cuts) of
// its open hypotheses => its conclusion.

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tml/nd.hpp"
#include "tml/sc_transform.hpp"

namespace tml {

namespace detail {

using NdBranch = std::function<NdDeduction(const Formula&, const NdDeduction&)>;

class NdBuilder {
 public:
  std::string fresh() { return "u" + std::to_string(++counter_); }

  NdDeduction hyp(const Formula& f) { return nd_hyp(fresh(), f); }

  // Disjunction of items[from..], right folded.
  static Formula tail(const std::vector<Formula>& items, std::size_t from) {
    if (from >= items.size()) return bot();
    Formula out = items.back();
    for (std::size_t i = items.size() - 1; i-- > from;) out = disj(items[i], out);
    return out;
  }

  // d : delta, delta a member of B; result : the disjunction of B.
  static NdDeduction embed(NdDeduction d, const Formula& delta, const FormulaSet& B) {
    const auto& items = B.items();
    auto it = std::lower_bound(items.begin(), items.end(), delta);
    if (it == items.end() || *it != delta)
      throw TransformError("'" + delta.text() + "' is not among the target disjuncts");
    const auto i = static_cast<std::size_t>(it - items.begin());
    if (i + 1 < items.size()) d = nd_node(NdRule::OrI1, disj(delta, tail(items, i + 1)), {d});
    for (std::size_t j = i; j-- > 0;) d = nd_node(NdRule::OrI2, disj(items[j], d->conclusion), {d});
    return d;
  }

  // d : the disjunction of S; each member is handed to `branch` as a
  // deduction of it, and every branch must conclude chi.
  NdDeduction cases(const NdDeduction& d, const FormulaSet& S, const Formula& chi, const NdBranch& branch) {
    return cases_from(d, S.items(), 0, chi, branch);
  }

  NdDeduction inject(const NdDeduction& d, const FormulaSet& S, const FormulaSet& B) {
    return cases(d, S, disjunction_of(B), [&](const Formula& x, const NdDeduction& h) { return embed(h, x, B); });
  }

  // Disjunction elimination that only lists non-vacuous discharges.
  static NdDeduction or_elim(const NdDeduction& major, const std::string& u, const NdDeduction& left,
                             const std::string& v, const NdDeduction& right, NdRule rule = NdRule::OrE) {
    const Formula& c = major->conclusion;
    Formula a = rule == NdRule::OrE ? c.left() : neg(c.child().left());
    Formula b = rule == NdRule::OrE ? c.right() : neg(c.child().right());
    std::vector<Discharge> ds;
    if (count_open(left, u)) ds.push_back({u, a});
    if (count_open(right, v)) ds.push_back({v, b});
    return nd_node(rule, left->conclusion, {major, left, right}, std::move(ds));
  }

  static std::size_t count_open(const NdDeduction& d, const std::string& marker) {
    if (d->rule == NdRule::Hyp) return d->marker == marker;
    for (const auto& x : d->discharges)
      if (x.marker == marker) return 0;
    std::size_t n = 0;
    for (const auto& p : d->premises) n += count_open(p, marker);
    return n;
  }

  // Renames every marker discharged inside d.
  NdDeduction refresh(const NdDeduction& d) {
    std::map<std::string, std::string> names;
    return rename(d, names);
  }

  // Replaces each open hypothesis of formula f by a fresh copy of make().
  NdDeduction substitute_open(const NdDeduction& d, const Formula& f, const std::function<NdDeduction()>& make) {
    std::set<std::string> bound;
    return subst(d, f, make, bound);
  }

  NdDeduction relabel(const NdDeduction& d, const Formula& f, const std::string& marker) {
    return substitute_open(d, f, [&] { return nd_hyp(marker, f); });
  }

  // (g | a) & (g | b) |- g | (a & b)
  NdDeduction distribute(const NdDeduction& d) {
    const Formula& c = d->conclusion;
    const Formula g = c.left().left(), a = c.left().right(), b = c.right().right();
    const Formula goal = disj(g, conj(a, b));
    const auto u1 = fresh(), u2 = fresh(), u3 = fresh(), u4 = fresh();
    auto inner = or_elim(nd_node(NdRule::AndE2, c.right(), {refresh(d)}), u3,
                         nd_node(NdRule::OrI1, goal, {nd_hyp(u3, g)}), u4,
                         nd_node(NdRule::OrI2, goal, {nd_node(NdRule::AndI, conj(a, b), {nd_hyp(u2, a), nd_hyp(u4, b)})}));
    return or_elim(nd_node(NdRule::AndE1, c.left(), {d}), u1, nd_node(NdRule::OrI1, goal, {nd_hyp(u1, g)}), u2, inner);
  }

  // g | (a & b) |- (g | a) & (g | b)
  NdDeduction undistribute(const NdDeduction& d) {
    const Formula& c = d->conclusion;
    const Formula g = c.left(), a = c.right().left(), b = c.right().right();
    auto side = [&](const NdDeduction& major, NdRule pick, const Formula& x) {
      const Formula goal = disj(g, x);
      const auto u = fresh(), v = fresh();
      return or_elim(major, u, nd_node(NdRule::OrI1, goal, {nd_hyp(u, g)}), v,
                     nd_node(NdRule::OrI2, goal, {nd_node(pick, x, {nd_hyp(v, c.right())})}));
    };
    auto l = side(d, NdRule::AndE1, a);
    auto r = side(refresh(d), NdRule::AndE2, b);
    return nd_node(NdRule::AndI, conj(l->conclusion, r->conclusion), {l, r});
  }

  // a | (#g & ~#g) |- a | bot
  NdDeduction collapse(const NdDeduction& d) {
    const Formula& c = d->conclusion;
    const Formula a = c.left(), pair = c.right(), bg = pair.left(), g = bg.child();
    const Formula goal = disj(a, bot());
    const auto u = fresh(), v = fresh();
    auto not_g = nd_node(NdRule::NegBoxE, neg(g),
                         {nd_node(NdRule::AndE2, pair.right(), {nd_hyp(v, pair)}),
                          nd_node(NdRule::BoxE, g, {nd_node(NdRule::AndE1, bg, {nd_hyp(v, pair)})})});
    auto falsum = nd_node(NdRule::BotI, bot(),
                          {nd_node(NdRule::AndI, conj(neg(g), bg),
                                   {not_g, nd_node(NdRule::AndE1, bg, {nd_hyp(v, pair)})})});
    return or_elim(d, u, nd_node(NdRule::OrI1, goal, {nd_hyp(u, a)}), v, nd_node(NdRule::OrI2, goal, {falsum}));
  }

  // a | bot |- a | (#g & ~#g)
  NdDeduction expand(const NdDeduction& d, const Formula& g) {
    const Formula a = d->conclusion.left();
    const Formula goal = disj(a, conj(box(g), neg(box(g))));
    const auto u = fresh(), v = fresh();
    return or_elim(d, u, nd_node(NdRule::OrI1, goal, {nd_hyp(u, a)}), v,
                   nd_node(NdRule::BotE, goal, {nd_hyp(v, bot())}));
  }

  // a | bot |- a
  NdDeduction drop_bot(const NdDeduction& d) {
    const Formula a = d->conclusion.left();
    const auto u = fresh(), v = fresh();
    return or_elim(d, u, nd_hyp(u, a), v, nd_node(NdRule::BotE, a, {nd_hyp(v, bot())}));
  }

  // ~a, #a |- chi
  NdDeduction absurd(const NdDeduction& na, const NdDeduction& ba, const Formula& chi) {
    const Formula a = ba->conclusion.child();
    auto b = nd_node(NdRule::BotI, bot(), {nd_node(NdRule::AndI, conj(neg(a), box(a)), {na, ba})});
    return chi.is_bot() ? b : nd_node(NdRule::BotE, chi, {b});
  }

 private:
  NdDeduction cases_from(const NdDeduction& d, const std::vector<Formula>& S, std::size_t i, const Formula& chi,
                         const NdBranch& branch) {
    if (i >= S.size()) return chi.is_bot() ? d : nd_node(NdRule::BotE, chi, {d});
    if (i + 1 == S.size()) return branch(S[i], d);
    const auto u = fresh(), v = fresh();
    auto left = branch(S[i], nd_hyp(u, S[i]));
    auto right = cases_from(nd_hyp(v, tail(S, i + 1)), S, i + 1, chi, branch);
    return or_elim(d, u, left, v, right);
  }

  NdDeduction rename(const NdDeduction& d, std::map<std::string, std::string>& names) {
    if (d->rule == NdRule::Hyp) {
      auto it = names.find(d->marker);
      return it == names.end() ? d : nd_hyp(it->second, d->conclusion);
    }
    if (names.empty() && !has_discharge(d)) return d;
    std::vector<Discharge> ds = d->discharges;
    for (auto& x : ds) x.marker = names[x.marker] = fresh();
    std::vector<NdDeduction> prems;
    for (const auto& p : d->premises) prems.push_back(rename(p, names));
    return nd_node(d->rule, d->conclusion, std::move(prems), std::move(ds));
  }

  static bool has_discharge(const NdDeduction& d) {
    if (!d->discharges.empty()) return true;
    for (const auto& p : d->premises)
      if (has_discharge(p)) return true;
    return false;
  }

  NdDeduction subst(const NdDeduction& d, const Formula& f, const std::function<NdDeduction()>& make,
                    std::set<std::string>& bound) {
    if (d->rule == NdRule::Hyp)
      return d->conclusion == f && !bound.count(d->marker) ? refresh(make()) : d;
    std::vector<std::string> added;
    for (const auto& x : d->discharges)
      if (bound.insert(x.marker).second) added.push_back(x.marker);
    std::vector<NdDeduction> prems;
    bool changed = false;
    for (const auto& p : d->premises) {
      prems.push_back(subst(p, f, make, bound));
      changed = changed || prems.back() != p;
    }
    for (const auto& m : added) bound.erase(m);
    return changed ? nd_node(d->rule, d->conclusion, std::move(prems), d->discharges) : d;
  }

  std::size_t counter_ = 0;
};

class ScToNd {
 public:
  NdDeduction run(const ScProof& p) {
    auto it = memo_.find(p.get());
    if (it != memo_.end()) return b_.refresh(it->second);
    auto d = translate(*p);
    memo_.emplace(p.get(), d);
    return d;
  }

 private:
  NdDeduction translate(const ScNode& n) {
    const Sequent& s = n.sequent;
    const FormulaSet& D = s.right;
    const Formula target = disjunction_of(D);
    auto prem = [&](std::size_t i) { return run(n.premises.at(i)); };
    auto prem_right = [&](std::size_t i) -> const FormulaSet& { return n.premises.at(i)->sequent.right; };
    const Formula phi = n.principal.empty() ? *s.left.first_common(s.right) : n.principal[0];
    auto embed_in = [&](const Formula& x, const NdDeduction& h) { return NdBuilder::embed(h, x, D); };
    // Right rules: members of the premise outside Delta are the side formulas.
    auto right_rule = [&](const std::function<NdDeduction(const Formula&, const NdDeduction&)>& intro) {
      return b_.cases(prem(0), prem_right(0), target, [&](const Formula& x, const NdDeduction& h) {
        return D.contains(x) ? embed_in(x, h) : embed_in(phi, intro(x, h));
      });
    };
    auto replace = [&](NdDeduction d, const Formula& x, NdRule r) {
      return b_.substitute_open(d, x, [&] { return nd_node(r, x, {b_.hyp(phi)}); });
    };

    switch (n.rule) {
      case ScRule::Axiom: {
        return embed_in(phi, b_.hyp(phi));
      }
      case ScRule::WeakL: return prem(0);
      case ScRule::WeakR: return b_.inject(prem(0), prem_right(0), D);
      case ScRule::Cut: throw TransformError("translation to ND needs a cut-free proof");

      case ScRule::AndL: return replace(replace(prem(0), phi.left(), NdRule::AndE1), phi.right(), NdRule::AndE2);
      case ScRule::NegOrL:
        return replace(replace(prem(0), neg(phi.child().left()), NdRule::NegOrE1), neg(phi.child().right()),
                       NdRule::NegOrE2);
      case ScRule::NegNegL: return replace(prem(0), phi.child().child(), NdRule::NegNegE);
      case ScRule::BoxL1: return replace(prem(0), phi.child(), NdRule::BoxE);
      case ScRule::OrL:
      case ScRule::NegAndL: {
        const bool is_or = n.rule == ScRule::OrL;
        const Formula a = is_or ? phi.left() : neg(phi.child().left());
        const Formula b = is_or ? phi.right() : neg(phi.child().right());
        const auto u = b_.fresh(), v = b_.fresh();
        return NdBuilder::or_elim(b_.hyp(phi), u, b_.relabel(prem(0), a, u), v, b_.relabel(prem(1), b, v),
                                  is_or ? NdRule::OrE : NdRule::NegAndE);
      }
      case ScRule::BoxL2: {
        return b_.cases(prem(0), prem_right(0), target, [&](const Formula& x, const NdDeduction& h) {
          return D.contains(x) ? embed_in(x, h) : b_.absurd(h, b_.hyp(phi), target);
        });
      }

      case ScRule::OrR:
        return right_rule([&](const Formula& x, const NdDeduction& h) {
          return nd_node(x == phi.left() ? NdRule::OrI1 : NdRule::OrI2, phi, {h});
        });
      case ScRule::NegAndR:
        return right_rule([&](const Formula& x, const NdDeduction& h) {
          return nd_node(x == neg(phi.child().left()) ? NdRule::NegAndI1 : NdRule::NegAndI2, phi, {h});
        });
      case ScRule::NegNegR:
        return right_rule([&](const Formula&, const NdDeduction& h) { return nd_node(NdRule::NegNegI, phi, {h}); });
      case ScRule::NegBoxR2:
        return right_rule([&](const Formula&, const NdDeduction& h) { return nd_node(NdRule::NegBoxI, phi, {h}); });
      case ScRule::AndR:
      case ScRule::NegOrR: {
        const bool is_and = n.rule == ScRule::AndR;
        const Formula a = is_and ? phi.left() : neg(phi.child().left());
        auto d2 = prem(1);
        return b_.cases(prem(0), prem_right(0), target, [&](const Formula& x, const NdDeduction& h) {
          if (D.contains(x) || x != a) return embed_in(x, h);
          return b_.cases(b_.refresh(d2), prem_right(1), target, [&](const Formula& y, const NdDeduction& k) {
            if (D.contains(y)) return embed_in(y, k);
            return embed_in(phi, nd_node(is_and ? NdRule::AndI : NdRule::NegOrI, phi, {h, k}));
          });
        });
      }
      case ScRule::NegBoxR1: {
        const Formula a = phi.child().child();
        const auto u = b_.fresh(), v = b_.fresh();
        auto major = nd_node(NdRule::MA, disj(a, phi), {});
        return NdBuilder::or_elim(major, v, b_.inject(b_.relabel(prem(0), a, v), prem_right(0), D), u,
                                  embed_in(phi, nd_hyp(u, phi)));
      }
      case ScRule::BoxR: {
        const Formula a = phi.child();
        const FormulaSet D0 = D.without(phi);
        const Formula psi = disjunction_of(D0);
        const Formula psi_a = disj(psi, a);
        auto d1 = b_.cases(prem(0), prem_right(0), psi_a, [&](const Formula& x, const NdDeduction& h) {
          if (x == a) return nd_node(NdRule::OrI2, psi_a, {h});
          if (x == phi) return nd_node(NdRule::OrI2, psi_a, {nd_node(NdRule::BoxE, a, {h})});
          return nd_node(NdRule::OrI1, psi_a, {NdBuilder::embed(h, x, D0)});
        });
        const auto u = b_.fresh();
        auto d2 = b_.cases(b_.relabel(prem(1), neg(a), u), prem_right(1), psi,
                           [&](const Formula& x, const NdDeduction& h) {
                             if (x == phi) return b_.absurd(nd_hyp(u, neg(a)), h, psi);
                             return NdBuilder::embed(h, x, D0);
                           });
        auto e = box_i_star(d1, d2, u);
        const auto x = b_.fresh(), y = b_.fresh();
        return NdBuilder::or_elim(e, x, b_.inject(nd_hyp(x, psi), D0, D), y, embed_in(phi, nd_hyp(y, phi)));
      }
      case ScRule::NegBoxL: {
        const Formula a = phi.child().child();
        const Formula psi = target;
        const Formula psi_a = disj(psi, a);
        auto d1 = b_.cases(prem(0), prem_right(0), psi_a, [&](const Formula& x, const NdDeduction& h) {
          if (x == a) return nd_node(NdRule::OrI2, psi_a, {h});
          return nd_node(NdRule::OrI1, psi_a, {embed_in(x, h)});
        });
        const auto u = b_.fresh();
        auto d2 = b_.relabel(prem(1), neg(a), u);
        auto e1 = box_i_star(d1, d2, u);
        auto e2 = nd_node(NdRule::OrI2, disj(psi, phi), {b_.hyp(phi)});
        auto e3 = nd_node(NdRule::AndI, conj(e1->conclusion, e2->conclusion), {e1, e2});
        return b_.drop_bot(b_.collapse(b_.distribute(e3)));
      }
    }
    throw TransformError("unsupported rule");
  }

  static NdDeduction box_i_star(const NdDeduction& d1, const NdDeduction& d2, const std::string& u) {
    const Formula& c = d1->conclusion;
    std::vector<Discharge> ds;
    if (NdBuilder::count_open(d2, u)) ds.push_back({u, neg(c.right())});
    return nd_node(NdRule::BoxIStar, disj(c.left(), box(c.right())), {d1, d2}, std::move(ds));
  }

  NdBuilder b_;
  std::unordered_map<const ScNode*, NdDeduction> memo_;
};

}  // namespace detail

// From a cut-free proof of Gamma => Delta, a deduction of the disjunction
// of Delta whose open hypotheses lie in Gamma.
inline NdDeduction sc_to_nd(const ScProof& p) {
  if (!check_sc_proof(p, false)) throw TransformError("input is not a cut-free SC proof");
  detail::ScToNd t;
  return t.run(p);
}

// Bot has no SC rules; it is read as the definable falsum ~p & #p.
inline Formula definable_bot() { return conj(neg(var("p")), box(var("p"))); }

inline Formula replace_bot(const Formula& f) {
  if (f.is_bot()) return definable_bot();
  if (f.is_var()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f.children()) kids.push_back(replace_bot(k));
  return rebuild(f, kids);
}

inline Sequent replace_bot(const Sequent& s) {
  return {map_set(s.left, [](const Formula& f) { return replace_bot(f); }),
          map_set(s.right, [](const Formula& f) { return replace_bot(f); })};
}

namespace detail {

class NdToSc {
 public:
  struct Out {
    ScProof proof;
    FormulaSet open;  // translated
  };

  Out run(const NdNode& n) {
    const Formula C = replace_bot(n.conclusion);
    if (n.rule == NdRule::Hyp) return {make_node(ScRule::Axiom, Sequent{{C}, {C}}, {C}), {C}};
    std::vector<Out> subs;
    for (const auto& p : n.premises) subs.push_back(run(*p));

    const FormulaSet open = open_of(n);
    const Sequent goal{open, {C}};
    auto pc = [&](std::size_t i) { return replace_bot(n.premises[i]->conclusion); };
    auto with_left = [&](const Formula& f) { return Sequent{open.with(f), {C}}; };

    switch (n.rule) {
      case NdRule::Hyp: break;
      case NdRule::MA: return {lemma(Sequent{{}, {C}}), open};
      case NdRule::AndI:
      case NdRule::NegOrI: {
        auto r = n.rule == NdRule::AndI ? ScRule::AndR : ScRule::NegOrR;
        return {infer(r, goal, C, {subs[0].proof, subs[1].proof}), open};
      }
      case NdRule::OrI1:
      case NdRule::OrI2: return {infer(ScRule::OrR, goal, C, {subs[0].proof}), open};
      case NdRule::NegAndI1:
      case NdRule::NegAndI2: return {infer(ScRule::NegAndR, goal, C, {subs[0].proof}), open};
      case NdRule::NegNegI: return {infer(ScRule::NegNegR, goal, C, {subs[0].proof}), open};
      case NdRule::NegBoxI: return {infer(ScRule::NegBoxR2, goal, C, {subs[0].proof}), open};
      case NdRule::OrE:
      case NdRule::NegAndE: {
        const Formula major = pc(0);
        auto left = infer(n.rule == NdRule::OrE ? ScRule::OrL : ScRule::NegAndL, with_left(major), major,
                          {subs[1].proof, subs[2].proof});
        return {cut_on(goal, major, subs[0].proof, left), open};
      }
      case NdRule::BoxIStar: {
        // psi | phi => psi, phi closes the first premise; the second is
        // psi from ~phi.
        const Formula psi = C.left(), bphi = C.right(), phi = bphi.child();
        const Sequent t1{open, {C, psi, bphi}};
        const Sequent t1a{open, {C, psi, bphi, phi}};
        auto first = cut_on(t1a, pc(0), subs[0].proof, lemma(Sequent{{pc(0)}, {psi, phi}}));
        auto boxed = infer(ScRule::BoxR, t1, bphi, {first, subs[1].proof});
        return {infer(ScRule::OrR, goal, C, {boxed}), open};
      }
      default: {
        // Eliminations and bot rules: cut the premises against a lemma.
        Sequent lem{{}, {C}};
        for (std::size_t i = 0; i < subs.size(); ++i) lem.left.insert(pc(i));
        FormulaSet ctx = open.united(lem.left);
        ScProof p = weaken_to(lemma(lem), Sequent{ctx, {C}});
        for (std::size_t i = subs.size(); i-- > 0;) {
          const Formula f = pc(i);
          if (open.contains(f)) continue;
          bool later = false;
          for (std::size_t j = 0; j < i; ++j) later = later || pc(j) == f;
          if (later) continue;
          ctx.erase(f);
          p = cut_on(Sequent{ctx, {C}}, f, weaken_to(subs[i].proof, Sequent{ctx, {C, f}}), p);
        }
        return {p, open};
      }
    }
    throw TransformError("unsupported rule");
  }

 private:
  // Translated formulas of the hypotheses left open in n.
  static FormulaSet open_of(const NdNode& n) {
    FormulaSet out;
    std::set<std::string> bound;
    std::function<void(const NdNode&)> go = [&](const NdNode& x) {
      if (x.rule == NdRule::Hyp) {
        if (!bound.count(x.marker)) out.insert(replace_bot(x.conclusion));
        return;
      }
      std::vector<std::string> added;
      for (const auto& y : x.discharges)
        if (bound.insert(y.marker).second) added.push_back(y.marker);
      for (const auto& p : x.premises) go(*p);
      for (const auto& m : added) bound.erase(m);
    };
    go(n);
    return out;
  }

  ScProof lemma(const Sequent& s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    auto p = prove(s);
    if (!p) throw TransformError("lemma '" + render(s) + "' is not provable");
    cache_.emplace(s, *p);
    return *p;
  }

  std::unordered_map<Sequent, ScProof, SequentHash> cache_;
};

}  // namespace detail

// An SC proof (using cut) of open(d) => conclusion(d), with bot read as
// ~p & #p throughout.
inline ScProof nd_to_sc(const NdDeduction& d) {
  auto res = check_nd(d);
  if (!res) throw TransformError("input is not a valid deduction: " + res.error);
  detail::NdToSc t;
  return t.run(*d).proof;
}

}  // namespace tml
