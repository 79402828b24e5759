#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tml/sc_transform.hpp"

using namespace tml;

namespace {

Sequent seq(const char* text) { return parse_sequent(text); }
ScProof proof_of(const char* text) { return *prove(seq(text)); }

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
    case 0: return var("p");
    case 1: return var("q");
    case 2: return neg(random_formula(rng, depth - 1));
    case 3: return box(random_formula(rng, depth - 1));
    case 4: return conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return neg(box(random_formula(rng, depth - 1)));
  }
}

Sequent flipped(const Sequent& s) { return {negate_all(s.right), negate_all(s.left)}; }

int count_rule(const ScProof& p, ScRule r) {
  int n = 0;
  for_each_node(p, [&](const ScNode& x) { n += x.rule == r; });
  return n;
}

}  // namespace

TEST(Weaken, ToTarget) {
  auto p = weaken_to(proof_of("p => p"), seq("p, q => p, r"));
  EXPECT_EQ(p->sequent, seq("p, q => p, r"));
  EXPECT_TRUE(check_sc_proof(p, false));
  EXPECT_THROW(weaken_to(proof_of("p => p"), seq("q => p")), TransformError);
}

TEST(Contrapose, Axiom) {
  auto c = contrapose(proof_of("p => p"));
  EXPECT_EQ(c->sequent, seq("~p => ~p"));
  EXPECT_EQ(c->rule, ScRule::Axiom);
}

TEST(Contrapose, Conjunction) {
  auto c = contrapose(proof_of("p & q => p"));
  EXPECT_EQ(c->sequent, seq("~p => ~(p & q)"));
  EXPECT_TRUE(check_sc_proof(c, true));
}

TEST(Contrapose, ModalAxiom) {
  auto c = contrapose(proof_of("=> p | ~#p"));
  EXPECT_EQ(c->sequent, seq("~(p | ~#p) =>"));
  EXPECT_TRUE(check_sc_proof(c, true));
  EXPECT_TRUE(oracle::valid(c->sequent.left, c->sequent.right));
}

TEST(Contrapose, BoxCasesUseCut) {
  auto c = contrapose(proof_of("=> #(p | ~#p)"));
  EXPECT_EQ(c->sequent, seq("~#(p | ~#p) =>"));
  EXPECT_TRUE(check_sc_proof(c, true));
  EXPECT_GT(count_rule(c, ScRule::Cut), 0);
  auto again = contrapose(proof_of("=> #(p | ~#p)"), true);
  EXPECT_TRUE(is_cut_free(again));
  EXPECT_EQ(again->sequent, c->sequent);
}

TEST(Contrapose, RejectsCut) {
  auto ax = make_node(ScRule::Axiom, seq("p => p"), {parse("p")});
  auto cut = make_node(ScRule::Cut, seq("p => p"), {parse("q")},
                       {make_node(ScRule::WeakR, seq("p => p, q"), {parse("q")}, {ax}),
                        make_node(ScRule::WeakL, seq("p, q => p"), {parse("q")}, {ax})});
  EXPECT_THROW(contrapose(cut), TransformError);
}

TEST(Contrapose, RandomProofs) {
  std::mt19937 rng(21);
  int done = 0;
  for (int i = 0; i < 4000 && done < 400; ++i) {
    std::vector<Formula> l, r;
    for (int k = rng() % 3; k > 0; --k) l.push_back(random_formula(rng, 3));
    for (int k = 1 + rng() % 2; k > 0; --k) r.push_back(random_formula(rng, 3));
    Sequent s{FormulaSet(l), FormulaSet(r)};
    auto p = prove(s);
    if (!p) continue;
    ++done;
    auto c = contrapose(*p);
    ASSERT_EQ(c->sequent, flipped(s)) << render(s);
    auto res = check_sc_proof(c, true);
    ASSERT_TRUE(res) << render(s) << ": " << res.error;
  }
  EXPECT_GE(done, 400);
}

TEST(Contrapose, AssortedRules) {
  for (const char* text : {"~(p | q) => ~p", "~p => ~(p & q)", "~~p => p", "#p => p", "#p, p => ~~p",
                           "~#p, p => ~p", "=> ~#p, p", "~(p & q) => ~p, ~q", "~p, ~q => ~(p | q)"}) {
    auto p = prove(seq(text));
    ASSERT_TRUE(p) << text;
    auto c = contrapose(*p);
    EXPECT_TRUE(check_sc_proof(c, true)) << text << ": " << check_sc_proof(c, true).error;
  }
}

TEST(Contrapose, DroppedPrincipalForm) {
  auto ax = make_node(ScRule::Axiom, seq("p => p, q"), {parse("p")});
  auto p = make_node(ScRule::OrR, seq("p => p | q"), {parse("p | q")}, {ax});
  auto c = contrapose(p);
  EXPECT_EQ(c->sequent, seq("~(p | q) => ~p"));
  EXPECT_TRUE(check_sc_proof(c, true));
}

TEST(Necessitate, ModalAxiom) {
  auto n = necessitate(proof_of("=> p | ~#p"));
  EXPECT_EQ(n->sequent, seq("=> #(p | ~#p)"));
  EXPECT_TRUE(check_sc_proof(n, true));
  EXPECT_EQ(n->rule, ScRule::BoxR);
}

TEST(Necessitate, DefinableBottom) {
  auto n = necessitate(proof_of("=> ~(~p & #p)"));
  EXPECT_EQ(n->sequent, seq("=> #~(~p & #p)"));
  EXPECT_TRUE(check_sc_proof(n, true));
}

TEST(Necessitate, ShapeError) { EXPECT_THROW(necessitate(proof_of("p => p")), TransformError); }

TEST(Denecessitate, Golden) {
  auto p = proof_of("=> #(p | ~#p)");
  auto d = denecessitate(p);
  EXPECT_EQ(d->sequent, seq("=> p | ~#p"));
  EXPECT_TRUE(check_sc_proof(d, false));
  EXPECT_EQ(rule_sequence(d), (std::vector<ScRule>{ScRule::OrR, ScRule::NegBoxR1, ScRule::Axiom}));
}

TEST(Denecessitate, InvertsNecessitate) {
  auto q = proof_of("=> p | ~#p");
  EXPECT_EQ(denecessitate(necessitate(q)), q);
}

TEST(Denecessitate, SearchOutput) {
  auto d = denecessitate(proof_of("=> #~(~p & #p)"));
  EXPECT_EQ(d->sequent, seq("=> ~(~p & #p)"));
  EXPECT_TRUE(check_sc_proof(d, false));
  EXPECT_THROW(denecessitate(proof_of("#p => #p")), TransformError);
}

TEST(Bot, Helper) {
  auto b = bot_proof(parse("p | q"));
  EXPECT_EQ(b->sequent, seq("~(p | q) & #(p | q) =>"));
  EXPECT_TRUE(check_sc_proof(b, false));
}

TEST(Soundness, AllRules) {
  for (auto r : kAllScRules) EXPECT_TRUE(rule_soundness(r)) << rule_id(r);
}

TEST(Soundness, MutatedBoxR) {
  auto inst = schematic_instance(ScRule::BoxR);
  inst.premises.pop_back();
  auto rep = rule_soundness(inst);
  EXPECT_FALSE(rep);
  EXPECT_EQ(rep.algebra, "M4");
  EXPECT_NE(rep.witness.find("a=b"), std::string::npos) << rep.witness;
}

TEST(Soundness, NonInvertedNegation) {
  // p => q over ~q => ~p fails in M4.
  SchematicRule r{"contra", {seq("a => b")}, seq("~b => ~a")};
  EXPECT_FALSE(rule_soundness(r));
}
