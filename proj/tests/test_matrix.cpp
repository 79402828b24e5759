#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "tml/algebra.hpp"
#include "tml/matrix.hpp"

using namespace tml;

namespace {

Valuation val(const char* text) { return parse_valuation(text, m4()); }
FormulaSet fs(std::initializer_list<const char*> texts) {
  std::vector<Formula> out;
  for (auto t : texts) out.push_back(parse(t));
  return FormulaSet(out);
}

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

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(M4, TablesAgainstOracle) {
  const auto& m = m4();
  for (int a = 0; a < 4; ++a) {
    TruthValue x(a);
    EXPECT_EQ(m.connective(Op::Neg)->apply(&x, 4).index, oracle::negv(a));
    EXPECT_EQ(m.connective(Op::Box)->apply(&x, 4).index, oracle::boxv(a));
    EXPECT_EQ(m.designated(x), oracle::designated(a));
    for (int b = 0; b < 4; ++b) {
      TruthValue args[2] = {TruthValue(a), TruthValue(b)};
      EXPECT_EQ(m.connective(Op::Or)->apply(args, 4).index, oracle::sup(a, b));
      EXPECT_EQ(m.connective(Op::And)->apply(args, 4).index, oracle::inf(a, b));
      EXPECT_EQ(m.leq(TruthValue(a), TruthValue(b)), oracle::leq(a, b));
    }
  }
  EXPECT_EQ(m.values(), (std::vector<std::string>{"0", "n", "b", "1"}));
}

TEST(M4, BundledFileIsBitExact) {
  std::string file = read_file(std::string(TML_DATA_DIR) + "/m4.json");
  EXPECT_EQ(file, kM4MatrixJson);
  EXPECT_EQ(dump_matrix(parse_matrix(file)), file);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(parse("#p"), val("p=n"), m4()), m4v::zero);
  EXPECT_EQ(eval(parse("~p"), val("p=b"), m4()), m4v::b);
  EXPECT_EQ(eval(parse("p | q"), val("p=n,q=b"), m4()), m4v::one);
  EXPECT_EQ(eval(parse("p | ~#p"), val("p=b"), m4()), m4v::one);
  EXPECT_EQ(eval(bot(), Valuation(), m4()), m4v::zero);
}

TEST(Eval, ModalAxiomEveryValue) {
  for (int a = 0; a < 4; ++a) {
    Valuation v({{"p", TruthValue(a)}});
    EXPECT_EQ(eval(parse("p | ~#p"), v, m4()), m4v::one);
  }
}

TEST(Eval, Errors) {
  try {
    eval(parse("p & q"), val("p=1"), m4());
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_NE(std::string(e.what()).find("'q'"), std::string::npos);
  }
  LogicalMatrix boolean({"0", "1"}, {"1"},
                        {{"or", 2, {TruthValue(0), TruthValue(1), TruthValue(1), TruthValue(1)}}});
  EXPECT_THROW(eval(parse("#p"), Valuation({{"p", TruthValue(1)}}), boolean), EvalError);
  EXPECT_THROW(val("p=x"), MatrixError);
  EXPECT_THROW(val("p"), EvalError);
}

TEST(Eval, AgreesWithOracle) {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        Valuation v({{"p", TruthValue(a)}, {"q", TruthValue(b)}});
        EXPECT_EQ(eval(f, v, m4()).index, oracle::eval(f, {{"p", a}, {"q", b}}));
      }
  }
}

TEST(Valuations, CountsAndOrder) {
  EXPECT_EQ(valuations({"p"}, m4()).size(), 4u);
  auto vs = valuations({"q", "p"}, m4());
  ASSERT_EQ(vs.size(), 16u);
  EXPECT_EQ(render(vs[0], m4()), "p=0,q=0");
  EXPECT_EQ(render(vs[1], m4()), "p=0,q=n");
  EXPECT_EQ(render(vs[4], m4()), "p=n,q=0");
  EXPECT_EQ(render(vs[15], m4()), "p=1,q=1");
  auto empty = valuations({}, m4());
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty[0].empty());
}

TEST(Consequence, Examples) {
  EXPECT_TRUE(matrix_consequence({}, fs({"p | ~#p"}), m4()));
  EXPECT_FALSE(matrix_consequence({}, fs({"p | ~p"}), m4()));
  EXPECT_TRUE(matrix_consequence(fs({"~p & #p"}), {}, m4()));
}

TEST(Degree, Examples) {
  EXPECT_TRUE(degree_consequence(fs({"p & q"}), parse("p"), m4()));
  EXPECT_TRUE(degree_consequence({}, parse("p | ~#p"), m4()));
  EXPECT_FALSE(degree_consequence(fs({"p"}), parse("#p"), m4()));
  EXPECT_FALSE(degree_consequence({}, parse("p | ~p"), m4()));
}

TEST(Countermodel, Examples) {
  auto cm = countermodel({}, fs({"p | ~p"}), m4());
  ASSERT_TRUE(cm);
  EXPECT_EQ(render(*cm, m4()), "p=n");
  EXPECT_FALSE(countermodel(fs({"p"}), fs({"p"}), m4()));
  cm = countermodel(fs({"~#p"}), fs({"p"}), m4());
  ASSERT_TRUE(cm);
  EXPECT_EQ(render(*cm, m4()), "p=0");
}

TEST(Consequence, AgreesWithOracleAndDegree) {
  std::mt19937 rng(5);
  for (int i = 0; i < 400; ++i) {
    FormulaSet g{random_formula(rng, 2), random_formula(rng, 2)};
    Formula phi = random_formula(rng, 3);
    const bool mc = matrix_consequence(g, FormulaSet{phi}, m4());
    EXPECT_EQ(mc, oracle::valid(g, FormulaSet{phi}));
    EXPECT_EQ(mc, degree_consequence(g, phi, m4())) << render(g) << " => " << render(phi);
    auto cm = countermodel(g, FormulaSet{phi}, m4());
    EXPECT_EQ(cm.has_value(), !mc);
    if (cm) EXPECT_FALSE(satisfies(*cm, Sequent{g, FormulaSet{phi}}, m4()));
    // Weakening at the semantic level.
    if (mc) EXPECT_TRUE(matrix_consequence(g.with(random_formula(rng, 2)), FormulaSet{phi, var("q")}, m4()));
  }
}

TEST(Algebra, M4PassesAllLaws) {
  auto report = check_tma_laws(Algebra::from_matrix(m4()));
  EXPECT_TRUE(report.all_passed());
  EXPECT_GE(report.laws.size(), 14u + 2u + 2u + 1u);
}

TEST(Algebra, IdentityBoxFailsAtN) {
  Algebra a = Algebra::from_matrix(m4());
  std::vector<Algebra::Elem> meet, join, negation, ident{0, 1, 2, 3};
  for (Algebra::Elem x = 0; x < 4; ++x) {
    negation.push_back(a.neg(x));
    for (Algebra::Elem y = 0; y < 4; ++y) {
      meet.push_back(a.meet(x, y));
      join.push_back(a.join(x, y));
    }
  }
  Algebra broken({"0", "n", "b", "1"}, meet, join, negation, ident, 0);
  auto report = check_tma_laws(broken);
  const LawResult* law = report.find("box a & ~a = 0");
  ASSERT_NE(law, nullptr);
  EXPECT_FALSE(law->passed);
  EXPECT_EQ(law->witness, "a=n");
}

TEST(Algebra, ProductPassesAllLaws) {
  Algebra a = Algebra::from_matrix(m4());
  Algebra p = product_algebra(a, a);
  EXPECT_EQ(p.size(), 16u);
  EXPECT_EQ(p.name(p.neg(p.element("(1,0)"))), "(0,1)");
  EXPECT_EQ(p.name(p.box(p.element("(1,b)"))), "(1,0)");
  EXPECT_TRUE(check_tma_laws(p).all_passed());
}

TEST(Algebra, PropSquareOnAllTriples) {
  using namespace oracle;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        if (leq(x, sup(y, z)) && leq(inf(x, negv(z)), y)) EXPECT_TRUE(leq(x, sup(y, boxv(z))));
}

TEST(Algebra, Lemma21OnRandomFormulas) {
  std::mt19937 rng(9);
  Algebra A = Algebra::from_matrix(m4());
  for (int i = 0; i < 200; ++i) {
    Formula fa = random_formula(rng, 3), fb = random_formula(rng, 3);
    for (const auto& v : valuations({"p", "q"}, m4())) {
      Assignment h;
      for (const auto& [k, t] : v.entries()) h[k] = t.index;
      auto a = eval(fa, h, A), b = eval(fb, h, A);
      EXPECT_EQ(A.join(A.neg(A.box(a)), a), A.one());
      EXPECT_EQ(A.box(A.join(a, A.box(b))), A.join(A.box(a), A.box(b)));
      EXPECT_EQ(A.meet(a, A.box(A.neg(a))), A.zero());
      EXPECT_EQ(a, eval(fa, v, m4()).index);
    }
  }
}

TEST(MatrixFile, Validation) {
  EXPECT_THROW(parse_matrix("{"), MatrixError);
  EXPECT_THROW(parse_matrix(R"({"values":["0","1"],"designated":[],"connectives":{}})"), MatrixError);
  EXPECT_THROW(parse_matrix(R"({"values":["0","1"],"designated":["1"],"connectives":{"neg":{"arity":1,"table":{"0":"1"}}}})"),
               MatrixError);
  auto b = parse_matrix(R"({"values":["0","1"],"designated":["1"],"connectives":{"neg":{"arity":1,"table":{"0":"1","1":"0"}}}})");
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(eval(parse("~p"), Valuation({{"p", TruthValue(0)}}), b), TruthValue(1));
}
