#include <random>

#include <gtest/gtest.h>

#include "tml/parse.hpp"
#include "tml/sequent.hpp"

using namespace tml;

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
  static const char* names[] = {"p", "q", "r1", "x_Y"};
  switch (pick(rng)) {
    case 0:
    case 1: return var(names[rng() % 4]);
    case 2: return bot();
    case 3: return neg(random_formula(rng, depth - 1));
    case 4: return box(random_formula(rng, depth - 1));
    case 5: return conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: return disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

FormulaSet set_of(std::initializer_list<const char*> texts) {
  std::vector<Formula> fs;
  for (auto t : texts) fs.push_back(parse(t));
  return FormulaSet(fs);
}

}  // namespace

TEST(Parse, ModalAxiomShape) {
  Formula f = parse("p | ~#p");
  ASSERT_TRUE(f.is_or());
  EXPECT_EQ(f.left(), var("p"));
  EXPECT_TRUE(f.right().is_neg());
  EXPECT_TRUE(f.right().child().is_box());
  EXPECT_EQ(f.right().child().child(), var("p"));
}

TEST(Parse, BotDefinitionShape) {
  Formula f = parse("~p & #p");
  ASSERT_TRUE(f.is_and());
  EXPECT_EQ(f.left(), neg(var("p")));
  EXPECT_EQ(f.right(), box(var("p")));
}

TEST(Parse, AndBindsTighter) { EXPECT_EQ(parse("p & q | r"), disj(conj(var("p"), var("q")), var("r"))); }

TEST(Parse, LeftAssociative) {
  EXPECT_EQ(parse("p | q | r"), disj(disj(var("p"), var("q")), var("r")));
  EXPECT_EQ(parse("p & q & r"), conj(conj(var("p"), var("q")), var("r")));
}

TEST(Parse, UnicodeAliases) {
  EXPECT_EQ(parse("p ∨ ¬□p"), parse("p | ~#p"));
  EXPECT_EQ(parse("⊥ ∧ q"), conj(bot(), var("q")));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse("p &\n  | q");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
    EXPECT_NE(std::string(e.what()).find("expected formula"), std::string::npos);
  }
  EXPECT_THROW(parse("(p | q"), ParseError);
  EXPECT_THROW(parse("p q"), ParseError);
  EXPECT_THROW(parse("P"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Parse, BotIsReserved) {
  EXPECT_TRUE(parse("bot").is_bot());
  EXPECT_THROW(var("bot"), std::invalid_argument);
  EXPECT_EQ(parse("bots"), var("bots"));
}

TEST(Render, Unicode) { EXPECT_EQ(render(parse("p | ~#p"), Style::Unicode), "p ∨ ¬□p"); }

TEST(Render, Bot) { EXPECT_EQ(render(bot()), "bot"); }

TEST(Render, ForcedParentheses) {
  EXPECT_EQ(render(conj(disj(var("p"), var("q")), var("r"))), "(p | q) & r");
  EXPECT_EQ(render(disj(var("p"), disj(var("q"), var("r")))), "p | (q | r)");
  EXPECT_EQ(render(neg(conj(var("p"), var("q")))), "~(p & q)");
  EXPECT_EQ(render(neg(box(neg(var("p"))))), "~#~p");
}

TEST(Render, RoundTripRandom) {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, 5);
    EXPECT_EQ(parse(render(f)), f) << render(f);
    EXPECT_EQ(parse(render(f, Style::Unicode)), f) << render(f);
  }
}

TEST(Substitute, Examples) {
  FormulaTemplate neg_p(parse("~p"));
  EXPECT_EQ(substitute(neg_p, parse("q | r")), parse("~(q | r)"));
  EXPECT_EQ(substitute(FormulaTemplate::placeholder(), parse("#q & r")), parse("#q & r"));
  Formula got = substitute(neg_p, parse("#q"));
  ASSERT_TRUE(got.is_neg());
  ASSERT_TRUE(got.child().is_box());
  EXPECT_EQ(got.child().child(), var("q"));
  EXPECT_THROW(FormulaTemplate(parse("p | q")), std::invalid_argument);
}

TEST(Closure, Examples) {
  EXPECT_EQ(closure(set_of({"#p"})), set_of({"#p", "~#p", "p", "~p"}));
  EXPECT_EQ(closure(set_of({"p"})), set_of({"p", "~p"}));
  EXPECT_EQ(closure(set_of({"~(p | q)"})), set_of({"~(p | q)", "p | q", "p", "q", "~p", "~q"}));
}

TEST(Closure, Properties) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    FormulaSet a{random_formula(rng, 4), random_formula(rng, 3)};
    FormulaSet b = a.with(random_formula(rng, 3));
    FormulaSet ca = closure(a);
    EXPECT_EQ(closure(ca), ca);
    EXPECT_TRUE(ca.subset_of(closure(b)));
    EXPECT_TRUE(a.subset_of(ca));
    EXPECT_LE(ca.size(), 4 * subformulas_of(a).size());
  }
}

TEST(FormulaSetTest, SetSemantics) {
  FormulaSet s = set_of({"q", "p", "q", "p & q"});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], var("p"));
  EXPECT_TRUE(s.contains(parse("p&q")));
  EXPECT_EQ(s.without(var("q")).size(), 2u);
}

TEST(SequentSyntax, ParseAndRender) {
  Sequent s = parse_sequent("p, q => q | p");
  EXPECT_EQ(s.left, set_of({"p", "q"}));
  EXPECT_EQ(s.right, set_of({"q | p"}));
  EXPECT_EQ(render(s), "p, q => q | p");
  EXPECT_EQ(render(parse_sequent("=> p | ~#p")), "=> p | ~#p");
  EXPECT_EQ(render(parse_sequent("~p & #p =>")), "~p & #p =>");
  EXPECT_EQ(render(parse_sequent("=>")), "=>");
  EXPECT_EQ(render(parse_sequent("p ⇒ □p"), Style::Unicode), "p ⇒ □p");
  EXPECT_THROW(parse_sequent("p, => q"), ParseError);
  EXPECT_THROW(parse_sequent("p q"), ParseError);
}
