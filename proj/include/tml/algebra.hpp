#pragma once

// Finite algebras of type (2,2,1,1,0), products, evaluation under
// homomorphisms, and the TMA law checker.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tml/formula.hpp"
#include "tml/matrix.hpp"

namespace tml {

class Algebra {
 public:
  using Elem = std::uint16_t;

  Algebra(std::vector<std::string> names, std::vector<Elem> meet, std::vector<Elem> join, std::vector<Elem> negation,
          std::vector<Elem> box, Elem zero)
      : names_(std::move(names)),
        meet_(std::move(meet)),
        join_(std::move(join)),
        neg_(std::move(negation)),
        box_(std::move(box)),
        zero_(zero) {
    const std::size_t n = names_.size();
    if (n == 0 || meet_.size() != n * n || join_.size() != n * n || neg_.size() != n || box_.size() != n ||
        zero_ >= n)
      throw std::invalid_argument("algebra tables are not total");
  }

  // The algebra reduct of a matrix with or/and/neg/box/bot tables.
  static Algebra from_matrix(const LogicalMatrix& m) {
    auto need = [&](Op op) {
      const Connective* c = m.connective(op);
      if (!c) throw MatrixError("matrix has no table for '" + std::string(connective_name(op)) + "'");
      std::vector<Elem> t;
      for (auto v : c->table) t.push_back(v.index);
      return t;
    };
    auto bot = need(Op::Bot);
    return Algebra(m.values(), need(Op::And), need(Op::Or), need(Op::Neg), need(Op::Box), bot.at(0));
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(Elem a) const { return names_[a]; }
  Elem meet(Elem a, Elem b) const { return meet_[a * size() + b]; }
  Elem join(Elem a, Elem b) const { return join_[a * size() + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem box(Elem a) const { return box_[a]; }
  Elem zero() const { return zero_; }
  Elem one() const { return neg_[zero_]; }
  bool leq(Elem a, Elem b) const { return meet(a, b) == a; }

  Elem element(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<Elem>(i);
    throw std::invalid_argument("unknown element '" + name + "'");
  }

 private:
  std::vector<std::string> names_;
  std::vector<Elem> meet_, join_, neg_, box_;
  Elem zero_;
};

// Componentwise operations on A x B; element (a, b) has index a * |B| + b.
inline Algebra product_algebra(const Algebra& a, const Algebra& b) {
  const std::size_t na = a.size(), nb = b.size(), n = na * nb;
  using E = Algebra::Elem;
  auto pair = [&](std::size_t x, std::size_t y) { return static_cast<E>(x * nb + y); };
  std::vector<std::string> names;
  std::vector<E> meet(n * n), join(n * n), neg(n), box(n);
  for (std::size_t i = 0; i < n; ++i) {
    const E ia = static_cast<E>(i / nb), ib = static_cast<E>(i % nb);
    names.push_back("(" + a.name(ia) + "," + b.name(ib) + ")");
    neg[i] = pair(a.neg(ia), b.neg(ib));
    box[i] = pair(a.box(ia), b.box(ib));
    for (std::size_t j = 0; j < n; ++j) {
      const E ja = static_cast<E>(j / nb), jb = static_cast<E>(j % nb);
      meet[i * n + j] = pair(a.meet(ia, ja), b.meet(ib, jb));
      join[i * n + j] = pair(a.join(ia, ja), b.join(ib, jb));
    }
  }
  return Algebra(std::move(names), std::move(meet), std::move(join), std::move(neg), std::move(box),
                 pair(a.zero(), b.zero()));
}

using Assignment = std::map<std::string, Algebra::Elem>;

// Value of f under the homomorphism extending `h`.
inline Algebra::Elem eval(const Formula& f, const Assignment& h, const Algebra& a) {
  switch (f.op()) {
    case Op::Var: {
      auto it = h.find(f.name());
      if (it == h.end()) throw EvalError("assignment has no value for variable '" + f.name() + "'");
      return it->second;
    }
    case Op::Bot: return a.zero();
    case Op::Neg: return a.neg(eval(f.child(), h, a));
    case Op::Box: return a.box(eval(f.child(), h, a));
    case Op::And: return a.meet(eval(f.left(), h, a), eval(f.right(), h, a));
    case Op::Or: return a.join(eval(f.left(), h, a), eval(f.right(), h, a));
  }
  return a.zero();
}

struct LawResult {
  std::string name;
  bool passed = true;
  std::string witness;  // first failing tuple, "a=n,b=1"
};

struct LawReport {
  std::vector<LawResult> laws;

  bool all_passed() const {
    for (const auto& l : laws)
      if (!l.passed) return false;
    return true;
  }
  const LawResult* find(const std::string& name) const {
    for (const auto& l : laws)
      if (l.name == name) return &l;
    return nullptr;
  }
};

inline LawReport check_tma_laws(const Algebra& A) {
  using E = Algebra::Elem;
  const E n = static_cast<E>(A.size());
  LawReport report;

  auto law1 = [&](std::string name, const std::function<bool(E)>& holds) {
    LawResult r{std::move(name)};
    for (E a = 0; a < n && r.passed; ++a)
      if (!holds(a)) r = {r.name, false, "a=" + A.name(a)};
    report.laws.push_back(r);
  };
  auto law2 = [&](std::string name, const std::function<bool(E, E)>& holds) {
    LawResult r{std::move(name)};
    for (E a = 0; a < n && r.passed; ++a)
      for (E b = 0; b < n && r.passed; ++b)
        if (!holds(a, b)) r = {r.name, false, "a=" + A.name(a) + ",b=" + A.name(b)};
    report.laws.push_back(r);
  };
  auto law3 = [&](std::string name, const std::function<bool(E, E, E)>& holds) {
    LawResult r{std::move(name)};
    for (E a = 0; a < n && r.passed; ++a)
      for (E b = 0; b < n && r.passed; ++b)
        for (E c = 0; c < n && r.passed; ++c)
          if (!holds(a, b, c)) r = {r.name, false, "a=" + A.name(a) + ",b=" + A.name(b) + ",c=" + A.name(c)};
    report.laws.push_back(r);
  };

  auto M = [&](E a, E b) { return A.meet(a, b); };
  auto J = [&](E a, E b) { return A.join(a, b); };
  auto N = [&](E a) { return A.neg(a); };
  auto B = [&](E a) { return A.box(a); };
  const E zero = A.zero(), one = A.one();

  // Bounded distributive lattice.
  law2("meet commutative", [&](E a, E b) { return M(a, b) == M(b, a); });
  law2("join commutative", [&](E a, E b) { return J(a, b) == J(b, a); });
  law3("meet associative", [&](E a, E b, E c) { return M(M(a, b), c) == M(a, M(b, c)); });
  law3("join associative", [&](E a, E b, E c) { return J(J(a, b), c) == J(a, J(b, c)); });
  law2("absorption meet", [&](E a, E b) { return M(a, J(a, b)) == a; });
  law2("absorption join", [&](E a, E b) { return J(a, M(a, b)) == a; });
  law3("distributive", [&](E a, E b, E c) { return M(a, J(b, c)) == J(M(a, b), M(a, c)); });
  law1("bottom", [&](E a) { return J(a, zero) == a && M(a, zero) == zero; });
  law1("top", [&](E a) { return M(a, one) == a && J(a, one) == one; });

  // De Morgan.
  law1("double negation", [&](E a) { return N(N(a)) == a; });
  law2("de morgan join", [&](E a, E b) { return N(J(a, b)) == M(N(a), N(b)); });
  law2("de morgan meet", [&](E a, E b) { return N(M(a, b)) == J(N(a), N(b)); });

  // TMA axioms.
  law1("box a & ~a = 0", [&](E a) { return M(B(a), N(a)) == zero; });
  law1("~box a & a = ~a & a", [&](E a) { return M(N(B(a)), a) == M(N(a), a); });

  // Derived identities.
  law1("(i) ~box a | a = 1", [&](E a) { return J(N(B(a)), a) == one; });
  law1("(ii) box a | ~a = a | ~a", [&](E a) { return J(B(a), N(a)) == J(a, N(a)); });
  law1("(iii) box a | ~box a = 1", [&](E a) { return J(B(a), N(B(a))) == one; });
  law1("(iv) box a & ~box a = 0", [&](E a) { return M(B(a), N(B(a))) == zero; });
  law1("(v) box a <= a", [&](E a) { return A.leq(B(a), a); });
  law1("(vi) box 1 = 1", [&](E) { return B(one) == one; });
  law1("(vii) box 0 = 0", [&](E) { return B(zero) == zero; });
  law1("(viii) box box a = box a", [&](E a) { return B(B(a)) == B(a); });
  law2("(ix) box(a & b) = box a & box b", [&](E a, E b) { return B(M(a, b)) == M(B(a), B(b)); });
  law2("(x) box(a | box b) = box a | box b", [&](E a, E b) { return B(J(a, B(b))) == J(B(a), B(b)); });
  law1("(xi) box ~box a = ~box a", [&](E a) { return B(N(B(a))) == N(B(a)); });
  law1("(xii) a & box ~a = 0", [&](E a) { return M(a, B(N(a))) == zero; });
  law2("(xiii) box(box a & box b) = box a & box b",
       [&](E a, E b) { return B(M(B(a), B(b))) == M(B(a), B(b)); });
  law2("(xiv) box(box a | box b) = box a | box b",
       [&](E a, E b) { return B(J(B(a), B(b))) == J(B(a), B(b)); });

  law3("x <= y | z and x & ~z <= y imply x <= y | box z", [&](E x, E y, E z) {
    const bool premise = A.leq(x, J(y, z)) && A.leq(M(x, N(z)), y);
    return !premise || A.leq(x, J(y, B(z)));
  });

  return report;
}

}  // namespace tml
