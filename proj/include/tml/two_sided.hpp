#pragma once

// Translation of n-sequents and n-sequent rules into ordinary two-sided
// sequents, driven by an expressiveness spec (one list of undesignated-side
// and one list of designated-side templates per truth value).

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "tml/signed.hpp"

namespace tml {

struct ValueSpec {
  std::vector<FormulaTemplate> n_side;  // instances must be undesignated
  std::vector<FormulaTemplate> d_side;  // instances must be designated

  std::size_t slots() const { return n_side.size() + d_side.size(); }
};

struct ExpressivenessSpec {
  std::vector<ValueSpec> values;  // indexed like the matrix values
};

inline ExpressivenessSpec m4_spec() {
  FormulaTemplate p = FormulaTemplate::placeholder();
  FormulaTemplate np(neg(p.body()));
  return {{
      {{p}, {np}},   // 0
      {{p, np}, {}}, // n
      {{}, {p, np}}, // b
      {{np}, {p}},   // 1
  }};
}

// p heads the n-side for undesignated values and the d-side for designated ones.
inline bool spec_condition_i(const ExpressivenessSpec& spec, const LogicalMatrix& m) {
  if (spec.values.size() != m.size()) return false;
  for (auto t : m.all_values()) {
    const auto& vs = spec.values[t.index];
    const auto& side = m.designated(t) ? vs.d_side : vs.n_side;
    if (side.empty() || !side.front().is_placeholder()) return false;
  }
  return true;
}

// v(phi) = t_i iff every n-side instance is undesignated and every d-side
// instance designated. Templates only mention p, so checking phi = p under
// every value of p covers every formula.
inline bool spec_condition_ii(const ExpressivenessSpec& spec, const LogicalMatrix& m) {
  if (spec.values.size() != m.size()) return false;
  const Formula p = var(std::string(FormulaTemplate::kPlaceholder));
  for (auto value : m.all_values()) {
    Valuation v({{p.name(), value}});
    for (auto t : m.all_values()) {
      const auto& vs = spec.values[t.index];
      bool characterised = true;
      for (const auto& a : vs.n_side) characterised = characterised && !m.designated(eval(a.body(), v, m));
      for (const auto& b : vs.d_side) characterised = characterised && m.designated(eval(b.body(), v, m));
      if (characterised != (value == t)) return false;
    }
  }
  return true;
}

inline nlohmann::ordered_json spec_to_json(const ExpressivenessSpec& spec, const LogicalMatrix& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (auto t : m.all_values()) {
    nlohmann::ordered_json n = nlohmann::ordered_json::array(), d = nlohmann::ordered_json::array();
    for (const auto& a : spec.values[t.index].n_side) n.push_back(a.body().text());
    for (const auto& b : spec.values[t.index].d_side) d.push_back(b.body().text());
    j[m.name(t)] = {{"n", n}, {"d", d}};
  }
  return j;
}

// {"0": {"n": ["p"], "d": ["~p"]}, "n": {...}, ...}
inline ExpressivenessSpec spec_from_json(const nlohmann::json& j, const LogicalMatrix& m) {
  ExpressivenessSpec spec;
  try {
    for (auto t : m.all_values()) {
      const auto& entry = j.at(m.name(t));
      ValueSpec vs;
      for (const auto& s : entry.at("n")) vs.n_side.emplace_back(parse(s.get<std::string>()));
      for (const auto& s : entry.at("d")) vs.d_side.emplace_back(parse(s.get<std::string>()));
      spec.values.push_back(std::move(vs));
    }
  } catch (const nlohmann::json::exception& e) {
    throw MatrixError(std::string("malformed spec file: ") + e.what());
  }
  return spec;
}

// slot[i][k] is the slot of the k-th formula (canonical order) of component
// i: indices below l_i are n-slots, the rest d-slots.
struct Partition {
  std::vector<std::vector<std::size_t>> slot;
};

// All prod_i (l_i + m_i)^|Gamma_i| partitions; the first formula of the
// first component varies slowest.
inline std::vector<Partition> partitions(const NSequent& s, const ExpressivenessSpec& spec) {
  if (s.arity() != spec.values.size()) throw MatrixError("n-sequent arity does not match the spec");
  std::vector<std::pair<std::size_t, std::size_t>> positions;  // (component, formula)
  std::vector<std::size_t> radix;
  for (std::size_t i = 0; i < s.arity(); ++i)
    for (std::size_t k = 0; k < s.components[i].size(); ++k) {
      positions.emplace_back(i, k);
      radix.push_back(spec.values[i].slots());
    }
  for (auto r : radix)
    if (r == 0) return {};
  std::vector<Partition> out;
  std::vector<std::size_t> digits(positions.size(), 0);
  for (;;) {
    Partition p;
    p.slot.resize(s.arity());
    for (std::size_t i = 0; i < s.arity(); ++i) p.slot[i].resize(s.components[i].size());
    for (std::size_t x = 0; x < positions.size(); ++x) p.slot[positions[x].first][positions[x].second] = digits[x];
    out.push_back(std::move(p));
    std::size_t x = positions.size();
    while (x > 0) {
      --x;
      if (++digits[x] < radix[x]) break;
      digits[x] = 0;
      if (x == 0) return out;
    }
    if (positions.empty()) return out;
  }
}

inline Sequent apply_partition(const NSequent& s, const ExpressivenessSpec& spec, const Partition& p) {
  Sequent out;
  for (std::size_t i = 0; i < s.arity(); ++i) {
    const auto& vs = spec.values[i];
    for (std::size_t k = 0; k < s.components[i].size(); ++k) {
      const std::size_t slot = p.slot[i][k];
      const Formula& phi = s.components[i][k];
      if (slot < vs.n_side.size()) out.left.insert(substitute(vs.n_side[slot], phi));
      else out.right.insert(substitute(vs.d_side[slot - vs.n_side.size()], phi));
    }
  }
  return out;
}

// Distinct sequents in partition order.
inline std::vector<Sequent> two_of_nsequent(const NSequent& s, const ExpressivenessSpec& spec) {
  std::vector<Sequent> out;
  for (const auto& p : partitions(s, spec)) {
    Sequent seq = apply_partition(s, spec, p);
    if (std::find(out.begin(), out.end(), seq) == out.end()) out.push_back(std::move(seq));
  }
  return out;
}

inline bool verify_two_equivalence(const NSequent& s, const ExpressivenessSpec& spec, const LogicalMatrix& m) {
  const auto two = two_of_nsequent(s, spec);
  std::set<std::string> vars;
  for (const auto& c : s.components)
    for (const auto& f : c) collect_variables(f, vars);
  for (const auto& v : valuations(vars, m)) {
    bool all = true;
    for (const auto& seq : two) all = all && satisfies(v, seq, m);
    if (nsequent_satisfied(v, s, m) != all) return false;
  }
  return true;
}

// --- rule translation ----------------------------------------------------

// Two-sided schema; every schema carries the context slots G (left) and D (right).
struct SequentSchema {
  Sequent body;

  friend bool operator==(const SequentSchema& a, const SequentSchema& b) { return a.body == b.body; }
};

inline std::string render(const SequentSchema& s, Style style = Style::Ascii) {
  std::string left = "G", right = "D";
  if (!s.body.left.empty()) left += ", " + render(s.body.left, style);
  if (!s.body.right.empty()) right += ", " + render(s.body.right, style);
  return left + (style == Style::Ascii ? " => " : " \xE2\x87\x92 ") + right;
}

// One rule per conclusion alternative, all sharing the premise list.
struct TwoSidedRule {
  std::string name;
  std::vector<SequentSchema> premises;
  std::vector<SequentSchema> conclusions;
};

inline const Formula& metavariable(std::size_t i) {
  static const Formula names[] = {var("alpha"), var("beta"), var("gamma")};
  return names[i];
}

inline NSequent single_slot(TruthValue t, const Formula& f, std::size_t arity) {
  NSequent s{std::vector<FormulaSet>(arity)};
  s.components[t.index].insert(f);
  return s;
}

// Axiom and constant rules become premise-free rules; logical rules get the
// union of the premises' translations. Conclusion alternatives equal to a
// premise are trivial and dropped; a rule left without conclusions is dropped.
inline std::vector<TwoSidedRule> two_of_calculus(const std::vector<SignedRule>& rules, const ExpressivenessSpec& spec,
                                                 const LogicalMatrix& m) {
  const std::size_t n = m.size();
  std::vector<TwoSidedRule> out;
  auto schemas = [](const std::vector<Sequent>& seqs) {
    std::vector<SequentSchema> r;
    for (const auto& s : seqs) r.push_back({s});
    return r;
  };
  for (const auto& rule : rules) {
    switch (rule.kind) {
      case SignedRuleKind::Weakening: break;
      case SignedRuleKind::Axiom: {
        NSequent ax{std::vector<FormulaSet>(n, FormulaSet{metavariable(0)})};
        out.push_back({rule.name, {}, schemas(two_of_nsequent(ax, spec))});
        break;
      }
      case SignedRuleKind::Constant: {
        auto op = connective_op(rule.connective);
        if (!op || op_arity(*op) != 0) break;
        out.push_back({rule.name, {}, schemas(two_of_nsequent(single_slot(rule.result, bot(), n), spec))});
        break;
      }
      case SignedRuleKind::Logical: {
        auto op = connective_op(rule.connective);
        if (!op) break;
        std::vector<Formula> args;
        for (std::size_t i = 0; i < rule.arity(); ++i) args.push_back(metavariable(i));
        Formula principal = *op == Op::Neg   ? neg(args[0])
                            : *op == Op::Box ? box(args[0])
                            : *op == Op::And ? conj(args[0], args[1])
                                             : disj(args[0], args[1]);
        TwoSidedRule r{rule.name, {}, {}};
        for (std::size_t i = 0; i < rule.arity(); ++i)
          for (const auto& s : two_of_nsequent(single_slot(rule.args[i], args[i], n), spec))
            if (std::find(r.premises.begin(), r.premises.end(), SequentSchema{s}) == r.premises.end())
              r.premises.push_back({s});
        for (const auto& c : two_of_nsequent(single_slot(rule.result, principal, n), spec))
          if (std::find(r.premises.begin(), r.premises.end(), SequentSchema{c}) == r.premises.end())
            r.conclusions.push_back({c});
        if (!r.conclusions.empty()) out.push_back(std::move(r));
        break;
      }
    }
  }
  return out;
}

inline nlohmann::ordered_json schema_to_json(const SequentSchema& s) {
  nlohmann::ordered_json left = nlohmann::ordered_json::array({"G"}), right = nlohmann::ordered_json::array({"D"});
  for (const auto& f : s.body.left) left.push_back(f.text());
  for (const auto& f : s.body.right) right.push_back(f.text());
  return {{"left", left}, {"right", right}};
}

inline nlohmann::ordered_json rules_to_json(const std::vector<TwoSidedRule>& rules) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json prem = nlohmann::ordered_json::array(), concl = nlohmann::ordered_json::array();
    for (const auto& p : r.premises) prem.push_back(schema_to_json(p));
    for (const auto& c : r.conclusions) concl.push_back(schema_to_json(c));
    out.push_back({{"name", r.name}, {"premises", prem}, {"conclusions", concl}});
  }
  return out;
}

// Premises on one line, a rule line, then the alternatives separated by ";".
inline std::string render_rule_sheet(const std::vector<TwoSidedRule>& rules, Style style = Style::Ascii) {
  std::string out;
  for (const auto& r : rules) {
    std::string top, bottom;
    for (const auto& p : r.premises) top += (top.empty() ? "" : "    ") + render(p, style);
    for (const auto& c : r.conclusions) bottom += (bottom.empty() ? "" : "  ;  ") + render(c, style);
    std::size_t width = std::max<std::size_t>({top.size(), bottom.size(), 4});
    out += "(" + r.name + ")\n";
    out += "  " + top + "\n";
    out += "  " + std::string(width, '-') + "\n";
    out += "  " + bottom + "\n\n";
  }
  return out;
}

inline nlohmann::ordered_json sf_rules_to_json(const std::vector<SignedRule>& rules, const LogicalMatrix& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    switch (r.kind) {
      case SignedRuleKind::Axiom: j["kind"] = "axiom"; break;
      case SignedRuleKind::Weakening: j["kind"] = "weakening"; break;
      case SignedRuleKind::Constant: j["kind"] = "constant"; break;
      case SignedRuleKind::Logical: j["kind"] = "logical"; break;
    }
    if (r.kind == SignedRuleKind::Logical || r.kind == SignedRuleKind::Constant) {
      j["connective"] = r.connective;
      nlohmann::ordered_json prem = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < r.arity(); ++i)
        prem.push_back("Omega, " + m.name(r.args[i]) + ":" + metavariable(i).text());
      j["premises"] = prem;
      std::vector<Formula> args;
      for (std::size_t i = 0; i < r.arity(); ++i) args.push_back(metavariable(i));
      std::string principal = r.connective;
      if (r.arity() == 1) principal = (r.connective == "neg" ? neg(args[0]) : box(args[0])).text();
      if (r.arity() == 2) principal = (r.connective == "and" ? conj(args[0], args[1]) : disj(args[0], args[1])).text();
      if (r.arity() == 0) principal = bot().text();
      j["conclusion"] = "Omega, " + m.name(r.result) + ":" + principal;
    }
    out.push_back(j);
  }
  return out;
}

inline std::string render_sf_rules(const std::vector<SignedRule>& rules, const LogicalMatrix& m) {
  std::string out;
  for (const auto& j : sf_rules_to_json(rules, m)) {
    out += "(" + j["name"].get<std::string>() + ")";
    if (j.contains("conclusion")) {
      std::string top;
      for (const auto& p : j["premises"]) top += (top.empty() ? "" : "    ") + p.get<std::string>();
      out += "  " + (top.empty() ? std::string("") : top + "  /  ") + j["conclusion"].get<std::string>();
    } else if (j["kind"] == "axiom") {
      out += "  T:alpha";
    } else {
      out += "  Omega / Omega' when Omega is a subset of Omega'";
    }
    out += "\n";
  }
  return out;
}

}  // namespace tml
