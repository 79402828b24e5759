#pragma once

// Independent semantic oracle for the tests: its own M4 tables and a direct
// recursive evaluator, sharing nothing with the library's matrix code except
// the formula type.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tml/formula.hpp"

namespace oracle {

// Values in the order 0, n, b, 1.
enum V { Z = 0, N = 1, B = 2, O = 3 };

inline const char* name(int v) {
  static const char* names[] = {"0", "n", "b", "1"};
  return names[v];
}

// L4 as bit pairs: n = 01, b = 10, 1 = 11; sup/inf are bitwise.
inline int bits(int v) { return v == Z ? 0 : v == N ? 1 : v == B ? 2 : 3; }
inline int unbits(int x) { return x == 0 ? Z : x == 1 ? N : x == 2 ? B : O; }

inline int sup(int a, int b) { return unbits(bits(a) | bits(b)); }
inline int inf(int a, int b) { return unbits(bits(a) & bits(b)); }
inline bool leq(int a, int b) { return (bits(a) & bits(b)) == bits(a); }
inline int negv(int a) { return a == Z ? O : a == O ? Z : a; }
inline int boxv(int a) { return a == O ? O : Z; }
inline bool designated(int a) { return a == B || a == O; }

using Val = std::map<std::string, int>;

inline int eval(const tml::Formula& f, const Val& v) {
  switch (f.op()) {
    case tml::Op::Var: return v.at(f.name());
    case tml::Op::Bot: return Z;
    case tml::Op::Neg: return negv(eval(f.child(), v));
    case tml::Op::Box: return boxv(eval(f.child(), v));
    case tml::Op::And: return inf(eval(f.left(), v), eval(f.right(), v));
    case tml::Op::Or: return sup(eval(f.left(), v), eval(f.right(), v));
  }
  return Z;
}

inline std::vector<Val> all_vals(const std::set<std::string>& vars) {
  std::vector<Val> out{{}};
  for (const auto& x : vars) {
    std::vector<Val> next;
    for (const auto& v : out)
      for (int t = 0; t < 4; ++t) {
        Val w = v;
        w[x] = t;
        next.push_back(w);
      }
    out = next;
  }
  return out;
}

template <typename L, typename R>
std::set<std::string> vars_of(const L& l, const R& r) {
  std::set<std::string> s;
  for (const auto& f : l) tml::collect_variables(f, s);
  for (const auto& f : r) tml::collect_variables(f, s);
  return s;
}

// Every valuation designating all of l designates something in r.
template <typename L, typename R>
bool valid(const L& l, const R& r) {
  for (const auto& v : all_vals(vars_of(l, r))) {
    bool all_left = true, some_right = false;
    for (const auto& f : l) all_left = all_left && designated(eval(f, v));
    for (const auto& f : r) some_right = some_right || designated(eval(f, v));
    if (all_left && !some_right) return false;
  }
  return true;
}

// Meet of l below phi under every valuation; the empty meet is 1.
template <typename L>
bool degree_valid(const L& l, const tml::Formula& phi) {
  std::vector<tml::Formula> r{phi};
  for (const auto& v : all_vals(vars_of(l, r))) {
    int m = O;
    for (const auto& f : l) m = inf(m, eval(f, v));
    if (!leq(m, eval(phi, v))) return false;
  }
  return true;
}

}  // namespace oracle
