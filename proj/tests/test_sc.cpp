#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tml/sc.hpp"

using namespace tml;

namespace {

Sequent seq(const char* text) { return parse_sequent(text); }

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

Sequent random_sequent(std::mt19937& rng, int depth) {
  std::vector<Formula> l, r;
  for (int i = rng() % 3; i > 0; --i) l.push_back(random_formula(rng, depth));
  for (int i = rng() % 3; i > 0; --i) r.push_back(random_formula(rng, depth));
  return {FormulaSet(l), FormulaSet(r)};
}

using R = ScRule;

}  // namespace

TEST(Rules, Shapes) {
  auto s = rule_shape(R::BoxR, parse("#p"));
  ASSERT_TRUE(s);
  EXPECT_FALSE(s->principal_left);
  ASSERT_EQ(s->premises.size(), 2u);
  EXPECT_EQ(s->premises[0].right[0], parse("p"));
  EXPECT_EQ(s->premises[1].left[0], parse("~p"));
  EXPECT_FALSE(rule_shape(R::BoxR, parse("~#p")));
  EXPECT_TRUE(rule_shape(R::NegBoxL, parse("~#p")));
  EXPECT_FALSE(rule_shape(R::NegNegL, parse("~p")));
  for (auto r : kAllScRules) EXPECT_EQ(rule_from_id(rule_id(r)), r);
}

TEST(Prove, GoldenExcludedMiddle) {
  auto p = prove(seq("=> p | ~#p"));
  ASSERT_TRUE(p);
  EXPECT_EQ(rule_sequence(*p), (std::vector<R>{R::OrR, R::NegBoxR1, R::Axiom}));
  EXPECT_TRUE(check_sc_proof(*p, false));
}

TEST(Prove, GoldenNecessitated) {
  auto p = prove(seq("=> #(p | ~#p)"));
  ASSERT_TRUE(p);
  EXPECT_EQ(rule_sequence(*p), (std::vector<R>{R::BoxR, R::OrR, R::NegBoxR1, R::Axiom, R::NegOrL, R::NegNegL,
                                               R::BoxL2, R::Axiom}));
  EXPECT_TRUE(check_sc_proof(*p, false));
  EXPECT_TRUE(is_cut_free(*p));
}

TEST(Prove, KnownCases) {
  EXPECT_FALSE(prove(seq("~#p => p")));
  EXPECT_FALSE(prove(seq("=> p | ~p")));
  EXPECT_FALSE(prove(seq("p, ~p =>")));
  EXPECT_TRUE(prove(seq("~p & #p =>")));
  EXPECT_TRUE(prove(seq("p & q => q & p")));
  EXPECT_TRUE(prove(seq("#p => p")));
  EXPECT_FALSE(prove(seq("p => #p")));
  EXPECT_TRUE(prove(seq("#(p & q) => #p & #q")));
  EXPECT_TRUE(prove(seq("=> #p, ~#p")));
}

TEST(Prove, RejectsBot) { EXPECT_THROW(prove(seq("bot =>")), ScLanguageError); }

TEST(Prove, AgreesWithOracle) {
  std::mt19937 rng(11);
  int valid = 0;
  for (int i = 0; i < 3000; ++i) {
    Sequent s = random_sequent(rng, 3);
    bool expected = oracle::valid(s.left, s.right);
    auto p = prove(s);
    ASSERT_EQ(p.has_value(), expected) << render(s);
    if (p) {
      ++valid;
      ASSERT_TRUE(check_sc_proof(*p, false)) << render(s) << ": " << check_sc_proof(*p, false).error;
      ASSERT_EQ((*p)->sequent, s);
    }
  }
  EXPECT_GT(valid, 100);
}

TEST(Prove, BacktrackingFindsTheSame) {
  std::mt19937 rng(12);
  for (int i = 0; i < 500; ++i) {
    Sequent s = random_sequent(rng, 2);
    EXPECT_EQ(prove(s).has_value(), prove(s, {.backtrack = true}).has_value()) << render(s);
  }
}

TEST(Check, RejectsBadProofs) {
  auto ax = make_node(R::Axiom, seq("p => p"), {parse("p")});
  EXPECT_TRUE(check_sc_proof(ax, false));
  EXPECT_FALSE(check_sc_proof(make_node(R::Axiom, seq("p => q")), false));

  // Wrong premise for (=>v).
  auto bad = make_node(R::OrR, seq("=> p | q"), {parse("p | q")}, {make_node(R::Axiom, seq("p => p"))});
  auto r = check_sc_proof(bad, false);
  EXPECT_FALSE(r);
  EXPECT_NE(r.error.find("or_r"), std::string::npos);

  // Cut only with permission.
  auto cut = make_node(R::Cut, seq("p => p"), {parse("q")},
                       {make_node(R::WeakR, seq("p => p, q"), {parse("q")}, {ax}),
                        make_node(R::WeakL, seq("p, q => p"), {parse("q")}, {ax})});
  EXPECT_FALSE(check_sc_proof(cut, false));
  EXPECT_TRUE(check_sc_proof(cut, true));
  EXPECT_FALSE(is_cut_free(cut));
}

TEST(Check, AcceptsBothPremiseForms) {
  auto ax = make_node(R::Axiom, seq("p => p, q"), {parse("p")});
  auto dropped = make_node(R::OrR, seq("p => p | q"), {parse("p | q")}, {ax});
  EXPECT_TRUE(check_sc_proof(dropped, false));
  auto kept = make_node(R::OrR, seq("p => p | q"), {parse("p | q")},
                        {make_node(R::Axiom, seq("p => p, q, p | q"), {parse("p")})});
  EXPECT_TRUE(check_sc_proof(kept, false));
}

TEST(Json, RoundTrip) {
  auto p = *prove(seq("=> #(p | ~#p)"));
  auto j = sc_to_json(p);
  EXPECT_EQ(j["rule"], "box_r");
  EXPECT_EQ(j["sequent"]["right"][0], "#(p | ~#p)");
  auto back = sc_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(sc_to_json(back), j);
  EXPECT_TRUE(check_sc_proof(back, false));
  EXPECT_THROW(sc_from_json(nlohmann::json::parse(R"({"rule":"nope"})")), ProofFormatError);
}

TEST(Render, Tree) {
  auto text = render_proof(*prove(seq("=> p | ~#p")));
  EXPECT_EQ(text, "=> p | ~#p   (=>v)\n  => p, ~#p, p | ~#p   (=>~#)1\n    p => p, ~#p, p | ~#p   (ax)\n");
}
