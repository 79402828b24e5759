#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tml/nd_translate.hpp"

using namespace tml;

namespace {

Sequent seq(const char* text) { return parse_sequent(text); }
Formula f(const char* text) { return parse(text); }

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

void expect_translates(const Sequent& s) {
  auto p = prove(s);
  ASSERT_TRUE(p) << render(s);
  auto d = sc_to_nd(*p);
  auto res = check_nd(d);
  ASSERT_TRUE(res) << render(s) << ": " << res.error;
  EXPECT_EQ(res.conclusion, disjunction_of(s.right)) << render(s);
  EXPECT_TRUE(res.open.subset_of(s.left)) << render(s) << ": " << render(res.open);

  auto back = nd_to_sc(d);
  auto chk = check_sc_proof(back, true);
  ASSERT_TRUE(chk) << render(s) << ": " << chk.error;
  EXPECT_EQ(back->sequent, replace_bot(Sequent{res.open, {res.conclusion}}));
  EXPECT_TRUE(oracle::valid(back->sequent.left, back->sequent.right));
}

}  // namespace

TEST(Disjunction, CanonicalFold) {
  EXPECT_EQ(disjunction_of(FormulaSet{}), bot());
  EXPECT_EQ(disjunction_of(FormulaSet{f("q")}), f("q"));
  EXPECT_EQ(disjunction_of(std::vector<Formula>{f("r"), f("p"), f("q"), f("p")}), f("p | (q | r)"));
  EXPECT_EQ(disjunction_of(std::vector<Formula>{f("#p"), f("q")}), f("q | #p"));
}

TEST(Check, ModalAxiomLeaf) {
  auto d = nd_node(NdRule::MA, f("p & q | ~#(p & q)"), {});
  auto r = check_nd(d);
  EXPECT_TRUE(r);
  EXPECT_TRUE(r.open.empty());
  EXPECT_FALSE(check_nd(nd_node(NdRule::MA, f("p | ~#q"), {})));
}

TEST(Check, OpenHypotheses) {
  auto d = nd_node(NdRule::AndI, f("p & q"), {nd_hyp("a", f("p")), nd_hyp("b", f("q"))});
  auto r = check_nd(d);
  ASSERT_TRUE(r);
  EXPECT_EQ(r.open, (FormulaSet{f("p"), f("q")}));
  EXPECT_FALSE(check_nd(nd_node(NdRule::AndI, f("q & p"), {nd_hyp("a", f("p")), nd_hyp("b", f("q"))})));
  EXPECT_FALSE(check_nd(nd_hyp("", f("p"))));
}

TEST(Check, DisjunctionElimination) {
  // p | q |- q | p
  auto make = [](const std::string& m1, const Formula& f1, const std::string& m2) {
    return nd_node(NdRule::OrE, f("q | p"),
                   {nd_hyp("w", f("p | q")), nd_node(NdRule::OrI2, f("q | p"), {nd_hyp("u", f("p"))}),
                    nd_node(NdRule::OrI1, f("q | p"), {nd_hyp("v", f("q"))})},
                   {{m1, f1}, {m2, f("q")}});
  };
  auto good = check_nd(make("u", f("p"), "v"));
  ASSERT_TRUE(good) << good.error;
  EXPECT_EQ(good.open, FormulaSet{f("p | q")});

  auto wrong_formula = check_nd(make("u", f("q"), "v"));
  EXPECT_FALSE(wrong_formula);
  auto dangling = check_nd(make("x", f("p"), "v"));
  EXPECT_FALSE(dangling);
  EXPECT_NE(dangling.error.find("no open assumption"), std::string::npos) << dangling.error;
  auto twice = check_nd(make("v", f("p"), "v"));
  EXPECT_FALSE(twice);
}

TEST(Check, DischargeOutsideItsPremise) {
  // The class for p lives in the second premise; discharging it from the third fails.
  auto d = nd_node(NdRule::OrE, f("p"),
                   {nd_hyp("w", f("p | p")), nd_hyp("x", f("p")), nd_hyp("u", f("p"))}, {{"u", f("p")}});
  EXPECT_TRUE(check_nd(d));
  auto e = nd_node(NdRule::OrE, f("p"),
                   {nd_hyp("w", f("p | q")), nd_hyp("x", f("p")), nd_node(NdRule::BotE, f("p"), {nd_hyp("u", bot())})},
                   {{"u", f("p")}});
  EXPECT_FALSE(check_nd(e));
}

TEST(Check, MarkerOpenAndDischarged) {
  auto inner = nd_node(NdRule::OrE, f("p"), {nd_hyp("w", f("p | p")), nd_hyp("u", f("p")), nd_hyp("u2", f("p"))},
                       {{"u", f("p")}, {"u2", f("p")}});
  auto d = nd_node(NdRule::AndI, f("p & p"), {inner, nd_hyp("u", f("p"))});
  auto r = check_nd(d);
  EXPECT_FALSE(r);
  EXPECT_NE(r.error.find("both open and discharged"), std::string::npos) << r.error;
}

TEST(Check, BoxIntroStar) {
  // psi = q, phi = p.
  auto d1 = nd_hyp("a", f("q | p"));
  auto d2 = nd_hyp("b", f("q"));
  auto ok = check_nd(nd_node(NdRule::BoxIStar, f("q | #p"), {d1, d2}));
  EXPECT_TRUE(ok) << ok.error;
  auto discharged = nd_node(NdRule::BoxIStar, f("q | #p"),
                            {d1, nd_node(NdRule::BotE, f("q"), {nd_node(NdRule::BotI, bot(),
                                                                       {nd_hyp("c", f("~p & #p"))})})});
  EXPECT_TRUE(check_nd(discharged));
  EXPECT_FALSE(check_nd(nd_node(NdRule::BoxIStar, f("q | #p"), {d1, d2}, {{"b", f("~p")}})));
}

TEST(Check, DerivedBoxIntro) {
  // |- p | ~#p, so |- #(p | ~#p) via box_i_star with psi = bot.
  auto ma = nd_node(NdRule::MA, f("p | ~#p"), {});
  const Formula phi = f("p | ~#p");
  // From [~(p | ~#p)]^u: ~~#p, so #p; ~p; then bot.
  auto hyp = nd_hyp("u", neg(phi));
  auto nnbp = nd_node(NdRule::NegOrE2, f("~~#p"), {hyp});
  auto bp = nd_node(NdRule::NegNegE, f("#p"), {nnbp});
  auto np = nd_node(NdRule::NegOrE1, f("~p"), {nd_hyp("u", neg(phi))});
  auto falsum = nd_node(NdRule::BotI, bot(), {nd_node(NdRule::AndI, f("~p & #p"), {np, bp})});
  auto d = nd_box_intro(ma, "u", falsum, "a", "b");
  auto r = check_nd(d);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, box(phi));
  EXPECT_TRUE(r.open.empty());
}

TEST(Json, RoundTrip) {
  auto d = sc_to_nd(*prove(seq("p | q => q | p")));
  auto j = nd_to_json(d);
  auto back = nd_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(nd_to_json(back), j);
  EXPECT_TRUE(check_nd(back));
  EXPECT_THROW(nd_from_json(nlohmann::json::parse(R"({"rule":"nope","conclusion":"p"})")), ProofFormatError);
}

TEST(Render, Brackets) {
  auto d = nd_node(NdRule::OrE, f("q | p"),
                   {nd_hyp("w", f("p | q")), nd_node(NdRule::OrI2, f("q | p"), {nd_hyp("u", f("p"))}),
                    nd_node(NdRule::OrI1, f("q | p"), {nd_hyp("v", f("q"))})},
                   {{"u", f("p")}, {"v", f("q")}});
  EXPECT_EQ(render_deduction(d),
            "q | p   (or_e, u, v)\n  p | q^w\n  q | p   (or_i2)\n    [p]^u\n  q | p   (or_i1)\n    [q]^v\n");
}

TEST(Macros, Distribution) {
  detail::NdBuilder b;
  auto d = b.distribute(nd_hyp("h", f("(r | p) & (r | q)")));
  auto r = check_nd(d);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("r | p & q"));
  EXPECT_EQ(r.open, FormulaSet{f("(r | p) & (r | q)")});

  auto e = b.undistribute(nd_hyp("h", f("r | p & q")));
  r = check_nd(e);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("(r | p) & (r | q)"));
  EXPECT_EQ(r.open, FormulaSet{f("r | p & q")});
}

TEST(Macros, BoxContradiction) {
  detail::NdBuilder b;
  auto d = b.collapse(nd_hyp("h", f("r | #p & ~#p")));
  auto r = check_nd(d);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("r | bot"));
  EXPECT_EQ(r.open, FormulaSet{f("r | #p & ~#p")});

  auto e = b.expand(nd_hyp("h", f("r | bot")), f("p"));
  r = check_nd(e);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("r | #p & ~#p"));

  auto g = b.drop_bot(nd_hyp("h", f("r | bot")));
  r = check_nd(g);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("r"));
}

TEST(ScToNd, Axiom) {
  auto d = sc_to_nd(*prove(seq("p => p")));
  EXPECT_EQ(d->rule, NdRule::Hyp);
  EXPECT_EQ(d->conclusion, f("p"));
}

TEST(ScToNd, ModalAxiom) {
  auto d = sc_to_nd(*prove(seq("=> p | ~#p")));
  auto r = check_nd(d);
  ASSERT_TRUE(r) << r.error;
  EXPECT_EQ(r.conclusion, f("p | ~#p"));
  EXPECT_TRUE(r.open.empty());
}

TEST(ScToNd, Assorted) {
  for (const char* text :
       {"p | q => q | p", "p & q => q & p", "=> #(p | ~#p)", "#p => p", "~#p, p => ~p", "~p & #p =>", "=> #p, ~#p",
        "~(p & q) => ~p, ~q", "~p, ~q => ~(p | q)", "~~p => p", "p => ~~p", "#(p & q) => #p & #q", "~#~#p => ~~#p",
        "~#p => ~#(p & q)", "p, ~#p => ~p, q", "#p => #p | q"})
    expect_translates(seq(text));
}

TEST(ScToNd, RejectsCut) {
  auto ax = make_node(ScRule::Axiom, seq("p => p"), {f("p")});
  auto cut = make_node(ScRule::Cut, seq("p => p"), {f("q")},
                       {make_node(ScRule::WeakR, seq("p => p, q"), {f("q")}, {ax}),
                        make_node(ScRule::WeakL, seq("p, q => p"), {f("q")}, {ax})});
  EXPECT_THROW(sc_to_nd(cut), TransformError);
}

TEST(ScToNd, RandomRoundTrip) {
  std::mt19937 rng(31);
  int done = 0;
  for (int i = 0; i < 5000 && done < 300; ++i) {
    std::vector<Formula> l, r;
    for (int k = rng() % 3; k > 0; --k) l.push_back(random_formula(rng, 3));
    for (int k = rng() % 3; k > 0; --k) r.push_back(random_formula(rng, 3));
    Sequent s{FormulaSet(l), FormulaSet(r)};
    if (!prove(s)) continue;
    ++done;
    expect_translates(s);
    if (HasFatalFailure()) return;
  }
  EXPECT_GE(done, 300);
}

TEST(NdToSc, Leaves) {
  auto h = nd_to_sc(nd_hyp("u", f("p")));
  EXPECT_EQ(h->sequent, seq("p => p"));
  auto ma = nd_to_sc(nd_node(NdRule::MA, f("q | ~#q"), {}));
  EXPECT_EQ(ma->sequent, seq("=> q | ~#q"));
  EXPECT_TRUE(check_sc_proof(ma, true));
}

TEST(NdToSc, BotReadAsDefinableFalsum) {
  auto d = nd_node(NdRule::BotE, f("q"), {nd_hyp("u", bot())});
  auto p = nd_to_sc(d);
  EXPECT_EQ(p->sequent, seq("~p & #p => q"));
  EXPECT_TRUE(check_sc_proof(p, true));
}

TEST(NdToSc, BoxIntroStar) {
  auto d = nd_node(NdRule::BoxIStar, f("q | #p"),
                   {nd_hyp("a", f("q | p")),
                    nd_node(NdRule::OrE, f("q"),
                            {nd_hyp("c", f("q | ~p")), nd_hyp("x", f("q")), nd_hyp("b", f("q"))}, {{"x", f("q")}})});
  ASSERT_TRUE(check_nd(d)) << check_nd(d).error;
  auto p = nd_to_sc(d);
  EXPECT_EQ(p->sequent, seq("q | p, q | ~p, q => q | #p"));
  auto r = check_sc_proof(p, true);
  EXPECT_TRUE(r) << r.error;
}

TEST(NdToSc, RejectsInvalid) {
  EXPECT_THROW(nd_to_sc(nd_node(NdRule::MA, f("p | ~#q"), {})), TransformError);
}
