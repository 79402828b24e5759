#pragma once

// Finite logical matrices: evaluation, valuation enumeration, the matrix and
// degree-preserving consequence relations, and countermodel search. M4 (the
// four-element matrix over {0, n, b, 1} with designated {b, 1}) is the
// canonical instance.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tml/formula.hpp"
#include "tml/parse.hpp"
#include "tml/sequent.hpp"

namespace tml {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index into the value list of the governing matrix.
struct TruthValue {
  std::uint8_t index = 0;

  constexpr TruthValue() = default;
  constexpr explicit TruthValue(int i) : index(static_cast<std::uint8_t>(i)) {}

  friend constexpr bool operator==(TruthValue a, TruthValue b) { return a.index == b.index; }
  friend constexpr bool operator!=(TruthValue a, TruthValue b) { return a.index != b.index; }
  friend constexpr bool operator<(TruthValue a, TruthValue b) { return a.index < b.index; }
};

namespace m4v {
inline constexpr TruthValue zero{0};
inline constexpr TruthValue n{1};
inline constexpr TruthValue b{2};
inline constexpr TruthValue one{3};
inline constexpr std::array<TruthValue, 4> all{zero, n, b, one};
}  // namespace m4v

// Connective names used in matrix files and rule names.
inline std::string_view connective_name(Op op) {
  switch (op) {
    case Op::Or: return "or";
    case Op::And: return "and";
    case Op::Neg: return "neg";
    case Op::Box: return "box";
    case Op::Bot: return "bot";
    case Op::Var: break;
  }
  return "";
}

inline std::optional<Op> connective_op(std::string_view name) {
  for (Op op : {Op::Or, Op::And, Op::Neg, Op::Box, Op::Bot})
    if (connective_name(op) == name) return op;
  return std::nullopt;
}

inline int op_arity(Op op) {
  switch (op) {
    case Op::Or:
    case Op::And: return 2;
    case Op::Neg:
    case Op::Box: return 1;
    default: return 0;
  }
}

struct Connective {
  std::string name;
  int arity = 0;
  // Row-major over values^arity, first argument most significant.
  std::vector<TruthValue> table;

  TruthValue apply(const TruthValue* args, std::size_t n_values) const {
    std::size_t idx = 0;
    for (int i = 0; i < arity; ++i) idx = idx * n_values + args[i].index;
    return table[idx];
  }
};

class LogicalMatrix {
 public:
  LogicalMatrix(std::vector<std::string> values, std::vector<std::string> designated,
                std::vector<Connective> connectives,
                std::optional<std::vector<std::pair<std::string, std::string>>> order = std::nullopt)
      : values_(std::move(values)) {
    if (values_.empty()) throw MatrixError("matrix has no truth values");
    if (values_.size() > 64) throw MatrixError("matrix has too many truth values");
    std::set<std::string> seen;
    for (const auto& v : values_)
      if (!seen.insert(v).second) throw MatrixError("duplicate truth value '" + v + "'");
    designated_.assign(values_.size(), false);
    for (const auto& d : designated) designated_[value(d).index] = true;
    std::size_t nd = 0;
    for (bool d : designated_) nd += d;
    if (nd == 0 || nd == values_.size())
      throw MatrixError("designated values must form a non-empty proper subset");
    for (auto& c : connectives) {
      std::size_t expect = 1;
      for (int i = 0; i < c.arity; ++i) expect *= values_.size();
      if (c.table.size() != expect)
        throw MatrixError("table for '" + c.name + "' is not total");
      for (auto t : c.table)
        if (t.index >= values_.size()) throw MatrixError("table for '" + c.name + "' has a bad entry");
      if (auto op = connective_op(c.name)) {
        if (op_arity(*op) != c.arity)
          throw MatrixError("connective '" + c.name + "' has arity " + std::to_string(c.arity));
        by_op_[static_cast<int>(*op)] = connectives_.size();
      }
      connectives_.push_back(std::move(c));
    }
    if (order) {
      const std::size_t n = values_.size();
      leq_.assign(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
      for (const auto& [lo, hi] : *order) leq_[value(lo).index][value(hi).index] = true;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            if (leq_[i][k] && leq_[k][j]) leq_[i][j] = true;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j && leq_[i][j] && leq_[j][i]) throw MatrixError("order is not antisymmetric");
      order_pairs_ = *order;
    }
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& values() const { return values_; }
  const std::string& name(TruthValue v) const { return values_.at(v.index); }
  TruthValue value(std::string_view name) const {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] == name) return TruthValue(static_cast<int>(i));
    throw MatrixError("unknown truth value '" + std::string(name) + "'");
  }
  std::vector<TruthValue> all_values() const {
    std::vector<TruthValue> out;
    for (std::size_t i = 0; i < values_.size(); ++i) out.emplace_back(static_cast<int>(i));
    return out;
  }

  bool designated(TruthValue v) const { return designated_[v.index]; }
  std::vector<TruthValue> designated_values() const {
    std::vector<TruthValue> out;
    for (auto v : all_values())
      if (designated(v)) out.push_back(v);
    return out;
  }

  const std::vector<Connective>& connectives() const { return connectives_; }
  const Connective* connective(Op op) const {
    auto idx = by_op_[static_cast<int>(op)];
    return idx == kNone ? nullptr : &connectives_[idx];
  }
  const Connective* connective(std::string_view name) const {
    for (const auto& c : connectives_)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool has_order() const { return !leq_.empty(); }
  bool leq(TruthValue a, TruthValue b) const {
    if (leq_.empty()) throw MatrixError("matrix has no order");
    return leq_[a.index][b.index];
  }
  const std::vector<std::pair<std::string, std::string>>& order_pairs() const { return order_pairs_; }

  // Greatest lower bound of `vs` under the order; the empty meet is the top.
  TruthValue meet(const std::vector<TruthValue>& vs) const {
    std::vector<TruthValue> lower;
    for (auto c : all_values()) {
      bool below = true;
      for (auto v : vs) below = below && leq(c, v);
      if (below) lower.push_back(c);
    }
    for (auto c : lower) {
      bool greatest = true;
      for (auto d : lower) greatest = greatest && leq(d, c);
      if (greatest) return c;
    }
    throw MatrixError("order has no greatest lower bound for the given values");
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<std::string> values_;
  std::vector<bool> designated_;
  std::vector<Connective> connectives_;
  std::array<std::size_t, 6> by_op_{kNone, kNone, kNone, kNone, kNone, kNone};
  std::vector<std::vector<bool>> leq_;
  std::vector<std::pair<std::string, std::string>> order_pairs_;
};

// Finite assignment of truth values to variable names, sorted by name.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::vector<std::pair<std::string, TruthValue>> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i].first == entries_[i - 1].first)
        throw EvalError("variable '" + entries_[i].first + "' assigned twice");
  }

  std::optional<TruthValue> get(const std::string& name) const {
    for (const auto& [k, v] : entries_)
      if (k == name) return v;
    return std::nullopt;
  }
  void set(const std::string& name, TruthValue v) {
    for (auto& [k, val] : entries_)
      if (k == name) {
        val = v;
        return;
      }
    entries_.emplace_back(name, v);
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  const std::vector<std::pair<std::string, TruthValue>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const Valuation& a, const Valuation& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::pair<std::string, TruthValue>> entries_;
};

inline std::string render(const Valuation& v, const LogicalMatrix& m) {
  std::string out;
  for (const auto& [k, val] : v.entries()) {
    if (!out.empty()) out += ',';
    out += k + "=" + m.name(val);
  }
  return out;
}

// "p=n,q=b"; the empty string is the empty valuation.
inline Valuation parse_valuation(std::string_view text, const LogicalMatrix& m) {
  std::vector<std::pair<std::string, TruthValue>> entries;
  std::size_t pos = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw EvalError("expected name=value in '" + std::string(item) + "'");
      auto key = trim(item.substr(0, eq));
      auto val = trim(item.substr(eq + 1));
      if (!is_identifier(key)) throw EvalError("invalid variable name '" + std::string(key) + "'");
      entries.emplace_back(std::string(key), m.value(val));
    }
    pos = comma + 1;
  }
  return Valuation(std::move(entries));
}

inline TruthValue eval(const Formula& f, const Valuation& v, const LogicalMatrix& m) {
  if (f.is_var()) {
    auto val = v.get(f.name());
    if (!val) throw EvalError("valuation has no value for variable '" + f.name() + "'");
    return *val;
  }
  const Connective* c = m.connective(f.op());
  if (!c) throw EvalError("matrix has no table for connective '" + std::string(connective_name(f.op())) + "'");
  std::array<TruthValue, 2> args{};
  for (std::size_t i = 0; i < f.arity(); ++i) args[i] = eval(f.children()[i], v, m);
  return c->apply(args.data(), m.size());
}

inline bool satisfies(const Valuation& v, const Formula& f, const LogicalMatrix& m) {
  return m.designated(eval(f, v, m));
}

// v satisfies G => D when some member of G is undesignated or some member of D is designated.
inline bool satisfies(const Valuation& v, const Sequent& s, const LogicalMatrix& m) {
  for (const auto& g : s.left)
    if (!satisfies(v, g, m)) return true;
  for (const auto& d : s.right)
    if (satisfies(v, d, m)) return true;
  return false;
}

// All |values|^|vars| valuations, lexicographic by variable name then value index.
inline std::vector<Valuation> valuations(const std::set<std::string>& vars, const LogicalMatrix& m) {
  std::vector<std::string> names(vars.begin(), vars.end());
  const std::size_t k = names.size(), n = m.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= n;
  std::vector<Valuation> out;
  out.reserve(total);
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t count = 0; count < total; ++count) {
    std::vector<std::pair<std::string, TruthValue>> entries;
    entries.reserve(k);
    for (std::size_t i = 0; i < k; ++i) entries.emplace_back(names[i], TruthValue(static_cast<int>(digits[i])));
    out.emplace_back(std::move(entries));
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < n) break;
      digits[i] = 0;
    }
  }
  return out;
}

inline std::optional<Valuation> countermodel(const FormulaSet& gamma, const FormulaSet& delta,
                                             const LogicalMatrix& m) {
  auto vars = variables_of(gamma);
  for (const auto& v : variables_of(delta)) vars.insert(v);
  Sequent s{gamma, delta};
  for (auto& v : valuations(vars, m))
    if (!satisfies(v, s, m)) return v;
  return std::nullopt;
}

inline bool matrix_consequence(const FormulaSet& gamma, const FormulaSet& delta, const LogicalMatrix& m) {
  return !countermodel(gamma, delta, m).has_value();
}

inline bool valid(const Sequent& s, const LogicalMatrix& m) { return matrix_consequence(s.left, s.right, m); }

// Every valuation sends the meet of the premises below the conclusion.
inline bool degree_consequence(const FormulaSet& gamma, const Formula& phi, const LogicalMatrix& m) {
  auto vars = variables_of(gamma);
  for (const auto& v : variables(phi)) vars.insert(v);
  std::vector<TruthValue> vals;
  for (auto& v : valuations(vars, m)) {
    vals.clear();
    for (const auto& g : gamma) vals.push_back(eval(g, v, m));
    if (!m.leq(m.meet(vals), eval(phi, v, m))) return false;
  }
  return true;
}

// --- JSON matrix files ----------------------------------------------------

inline std::string table_key(const std::vector<TruthValue>& args, const LogicalMatrix& m) {
  std::string key;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) key += ',';
    key += m.name(args[i]);
  }
  return key;
}

// All argument tuples of the given arity in table order.
inline std::vector<std::vector<TruthValue>> argument_tuples(int arity, std::size_t n_values) {
  std::vector<std::vector<TruthValue>> out{{}};
  for (int i = 0; i < arity; ++i) {
    std::vector<std::vector<TruthValue>> next;
    for (const auto& prefix : out)
      for (std::size_t v = 0; v < n_values; ++v) {
        auto t = prefix;
        t.emplace_back(static_cast<int>(v));
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

inline nlohmann::ordered_json matrix_to_json(const LogicalMatrix& m) {
  nlohmann::ordered_json j;
  j["values"] = m.values();
  nlohmann::ordered_json des = nlohmann::ordered_json::array();
  for (auto v : m.designated_values()) des.push_back(m.name(v));
  j["designated"] = des;
  if (m.has_order()) {
    nlohmann::ordered_json ord = nlohmann::ordered_json::array();
    for (const auto& [a, b] : m.order_pairs()) ord.push_back({a, b});
    j["order"] = ord;
  }
  nlohmann::ordered_json conns = nlohmann::ordered_json::object();
  for (const auto& c : m.connectives()) {
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (const auto& args : argument_tuples(c.arity, m.size()))
      table[table_key(args, m)] = m.name(c.apply(args.data(), m.size()));
    conns[c.name] = {{"arity", c.arity}, {"table", table}};
  }
  j["connectives"] = conns;
  return j;
}

inline LogicalMatrix matrix_from_json(const nlohmann::ordered_json& j) {
  try {
    std::vector<std::string> values = j.at("values").get<std::vector<std::string>>();
    std::vector<std::string> designated = j.at("designated").get<std::vector<std::string>>();
    std::optional<std::vector<std::pair<std::string, std::string>>> order;
    if (j.contains("order")) {
      order.emplace();
      for (const auto& p : j.at("order")) order->emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    auto index_of = [&](const std::string& name) {
      for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == name) return static_cast<int>(i);
      throw MatrixError("unknown truth value '" + name + "'");
    };
    std::vector<Connective> conns;
    for (const auto& [name, spec] : j.at("connectives").items()) {
      Connective c;
      c.name = name;
      c.arity = spec.at("arity").get<int>();
      if (c.arity < 0 || c.arity > 2) throw MatrixError("connective '" + name + "' has unsupported arity");
      for (const auto& args : argument_tuples(c.arity, values.size())) {
        std::string key;
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (i) key += ',';
          key += values[args[i].index];
        }
        const auto& table = spec.at("table");
        if (!table.contains(key)) throw MatrixError("table for '" + name + "' misses entry '" + key + "'");
        c.table.emplace_back(index_of(table.at(key).get<std::string>()));
      }
      conns.push_back(std::move(c));
    }
    return LogicalMatrix(std::move(values), std::move(designated), std::move(conns), std::move(order));
  } catch (const nlohmann::json::exception& e) {
    throw MatrixError(std::string("malformed matrix file: ") + e.what());
  }
}

inline LogicalMatrix parse_matrix(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MatrixError(std::string("malformed matrix file: ") + e.what());
  }
  return matrix_from_json(j);
}

// The bundled M4 matrix file, byte for byte as shipped in data/m4.json.
inline constexpr std::string_view kM4MatrixJson = R"({
  "values": [
    "0",
    "n",
    "b",
    "1"
  ],
  "designated": [
    "b",
    "1"
  ],
  "order": [
    [
      "0",
      "n"
    ],
    [
      "0",
      "b"
    ],
    [
      "n",
      "1"
    ],
    [
      "b",
      "1"
    ]
  ],
  "connectives": {
    "or": {
      "arity": 2,
      "table": {
        "0,0": "0",
        "0,n": "n",
        "0,b": "b",
        "0,1": "1",
        "n,0": "n",
        "n,n": "n",
        "n,b": "1",
        "n,1": "1",
        "b,0": "b",
        "b,n": "1",
        "b,b": "b",
        "b,1": "1",
        "1,0": "1",
        "1,n": "1",
        "1,b": "1",
        "1,1": "1"
      }
    },
    "and": {
      "arity": 2,
      "table": {
        "0,0": "0",
        "0,n": "0",
        "0,b": "0",
        "0,1": "0",
        "n,0": "0",
        "n,n": "n",
        "n,b": "0",
        "n,1": "n",
        "b,0": "0",
        "b,n": "0",
        "b,b": "b",
        "b,1": "b",
        "1,0": "0",
        "1,n": "n",
        "1,b": "b",
        "1,1": "1"
      }
    },
    "neg": {
      "arity": 1,
      "table": {
        "0": "1",
        "n": "n",
        "b": "b",
        "1": "0"
      }
    },
    "box": {
      "arity": 1,
      "table": {
        "0": "0",
        "n": "0",
        "b": "0",
        "1": "1"
      }
    },
    "bot": {
      "arity": 0,
      "table": {
        "": "0"
      }
    }
  }
})";

inline const LogicalMatrix& m4() {
  static const LogicalMatrix m = parse_matrix(kM4MatrixJson);
  return m;
}

inline std::string dump_matrix(const LogicalMatrix& m) { return matrix_to_json(m).dump(2); }

}  // namespace tml
