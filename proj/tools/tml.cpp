// Command-line front end. Exit codes: 0 affirmative, 1 negative, 2 usage
// or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tml/tml.hpp"

using namespace tml;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("'" + path + "' is not JSON: " + e.what());
  }
}

// Either one "G => D" argument or two comma-separated lists.
Sequent sequent_arg(const std::vector<std::string>& args) {
  if (args.size() == 1) return parse_sequent(args[0]);
  if (args.size() == 2) return {FormulaSet(parse_list(args[0])), FormulaSet(parse_list(args[1]))};
  throw UsageError("expected \"G => D\" or two formula lists");
}

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

struct Options {
  std::string formula;
  std::string valuation;
  std::vector<std::string> sequent;
  std::string relation = "matrix";
  std::string calculus = "sc";
  int depth = 12;
  std::string format;  // empty: json for translate, text elsewhere
  bool allow_cut = false;
  std::string file;
  std::string direction;
  std::string matrix_file;
  std::string spec_file;
  std::string stage = "two";
  std::string alpha;
};

int cmd_parse(const Options& o) {
  Formula f = parse(o.formula);
  if (o.format == "json")
    emit({{"formula", f.text()}, {"unicode", render(f, Style::Unicode)}, {"size", f.size()}});
  else
    std::cout << f.text() << "\n";
  return kYes;
}

int cmd_eval(const Options& o) {
  Formula f = parse(o.formula);
  auto v = parse_valuation(o.valuation, m4());
  auto t = eval(f, v, m4());
  if (o.format == "json")
    emit({{"formula", f.text()}, {"value", m4().name(t)}, {"designated", m4().designated(t)}});
  else
    std::cout << m4().name(t) << "\n";
  return kYes;
}

int report_countermodel(const Sequent& s, bool json, const char* yes_word) {
  auto cm = countermodel(s.left, s.right, m4());
  if (json) {
    ojson j{{"sequent", render(s)}, {"valid", !cm}};
    if (cm) j["countermodel"] = render(*cm, m4());
    emit(j);
  } else if (cm) {
    std::cout << render(*cm, m4()) << "\n";
  } else {
    std::cout << yes_word << "\n";
  }
  return cm ? kNo : kYes;
}

int cmd_valid(const Options& o) {
  Formula f = parse(o.formula);
  return report_countermodel(Sequent{{}, {f}}, o.format == "json", "valid");
}

int cmd_countermodel(const Options& o) {
  return report_countermodel(sequent_arg(o.sequent), o.format == "json", "none");
}

int cmd_consequence(const Options& o) {
  Sequent s = sequent_arg(o.sequent);
  bool holds;
  if (o.relation == "degree") {
    if (s.right.size() != 1) throw UsageError("degree consequence needs exactly one conclusion");
    holds = degree_consequence(s.left, s.right[0], m4());
  } else {
    holds = matrix_consequence(s.left, s.right, m4());
  }
  if (o.format == "json")
    emit({{"sequent", render(s)}, {"relation", o.relation}, {"holds", holds}});
  else
    std::cout << (holds ? "holds" : "fails") << "\n";
  return holds ? kYes : kNo;
}

int cmd_prove(const Options& o) {
  const bool json = o.format == "json";
  if (o.sequent.size() != 1) throw UsageError("expected one sequent argument");
  if (o.calculus == "sc") {
    Sequent s = parse_sequent(o.sequent[0]);
    std::optional<ScProof> p;
    try {
      p = prove(s);
    } catch (const ScLanguageError& e) {
      throw UsageError(e.what());
    }
    if (!p) {
      if (json) emit({{"sequent", render(s)}, {"provable", false}});
      else std::cout << "not provable: " << render(s) << "\n";
      return kNo;
    }
    if (json) emit(sc_to_json(*p));
    else std::cout << render_proof(*p);
    return kYes;
  }
  if (o.calculus == "g") {
    GSequent s = parse_gsequent(o.sequent[0]);
    auto p = g_search_cutfree(s, o.depth);
    if (!p) {
      if (json) emit({{"sequent", render(s)}, {"depth", o.depth}, {"found", false}});
      else std::cout << "no cut-free proof within depth " << o.depth << ": " << render(s) << "\n";
      return kNo;
    }
    if (json) emit(g_to_json(*p));
    else std::cout << render_proof(*p);
    return kYes;
  }
  if (o.calculus == "sf4") {
    Sequent s = parse_sequent(o.sequent[0]);
    auto goal = to_signed(embed_two_sided(s.left, s.right, m4()));
    auto d = sf_prove(goal, m4());
    if (!d) {
      if (json) emit({{"sequent", render(s)}, {"provable", false}});
      else std::cout << "not provable: " << render(s) << "\n";
      return kNo;
    }
    if (json) emit(sf_to_json(*d, m4()));
    else std::cout << render_tree(*d, m4());
    return kYes;
  }
  throw UsageError("prove supports --calculus sc, g or sf4");
}

int verdict(bool ok, const std::string& what, const std::string& error) {
  if (ok) std::cout << "ok: " << what << "\n";
  else std::cout << "invalid: " << error << "\n";
  return ok ? kYes : kNo;
}

int cmd_check(const Options& o) {
  auto j = read_json(o.file);
  if (o.calculus == "sc") {
    auto p = sc_from_json(j);
    auto r = check_sc_proof(p, o.allow_cut);
    return verdict(r.ok, render(p->sequent), r.error);
  }
  if (o.calculus == "g") {
    auto p = g_from_json(j);
    auto r = check_g_proof(p, o.allow_cut);
    return verdict(r.ok, render(p->sequent), r.error);
  }
  if (o.calculus == "sf4") {
    auto d = sf_from_json(j, m4());
    auto r = check_sf_derivation(d, m4());
    return verdict(r.ok, render(d->signed_set, m4()), r.error);
  }
  if (o.calculus == "nd") {
    auto d = nd_from_json(j);
    auto r = check_nd(d);
    return verdict(r.ok, render(r.open) + (r.open.empty() ? "|- " : " |- ") + r.conclusion.text(), r.error);
  }
  throw UsageError("check supports --calculus sc, g, sf4 or nd");
}

int cmd_translate(const Options& o) {
  const bool json = o.format != "text";
  auto j = read_json(o.file);
  auto sc_out = [&](const ScProof& p) {
    if (json) emit(sc_to_json(p));
    else std::cout << render_proof(p);
    return kYes;
  };
  if (o.direction == "nd2sc") return sc_out(nd_to_sc(nd_from_json(j)));
  auto p = sc_from_json(j);
  if (o.direction == "contrapose") return sc_out(contrapose(p));
  if (o.direction == "necessitate") return sc_out(necessitate(p));
  if (o.direction == "sc2nd") {
    auto d = sc_to_nd(p);
    if (json) emit(nd_to_json(d));
    else std::cout << render_deduction(d);
    return kYes;
  }
  throw UsageError("unknown translation '" + o.direction + "'");
}

int cmd_gen_rules(const Options& o) {
  LogicalMatrix m = o.matrix_file.empty() ? m4() : parse_matrix(read_file(o.matrix_file));
  auto rules = generate_sf_rules(m);
  const bool json = o.format == "json";
  if (o.stage == "sf") {
    if (json) emit(sf_rules_to_json(rules, m));
    else std::cout << render_sf_rules(rules, m);
    return kYes;
  }
  if (o.stage != "two") throw UsageError("--stage is sf or two");
  ExpressivenessSpec spec;
  if (!o.spec_file.empty()) spec = spec_from_json(read_json(o.spec_file), m);
  else if (o.matrix_file.empty()) spec = m4_spec();
  else throw UsageError("--stage two with a custom matrix needs --spec");
  if (!spec_condition_i(spec, m) || !spec_condition_ii(spec, m))
    throw UsageError("the spec does not characterise the matrix values");
  auto two = two_of_calculus(rules, spec, m);
  if (json) emit(rules_to_json(two));
  else std::cout << render_rule_sheet(two);
  return kYes;
}

int cmd_probe_cut(const Options& o) {
  auto r = cut_necessity_probe(parse(o.alpha), o.depth);
  if (o.format == "json") {
    emit(probe_to_json(r));
  } else {
    std::cout << render(r.sequent) << " at depth " << r.depth << ": valid=" << (r.valid ? "yes" : "no")
              << ", G cut-free=" << (r.g_cutfree_found ? "found" : "none")
              << ", SC cut-free=" << (r.sc_cutfree_found ? "found" : "none") << (r.vacuous ? " (vacuous)" : "")
              << "\n";
  }
  // Affirmative when the run is evidence that G needs cut here.
  return r.valid && r.sc_cutfree_found && !r.g_cutfree_found && !r.vacuous ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tetravalent modal logic toolkit"};
  app.require_subcommand(1);
  Options o;
  auto fmt = [&](CLI::App* c) {
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };

  auto* parse_c = app.add_subcommand("parse", "Parse and print a formula in canonical form");
  parse_c->add_option("formula", o.formula)->required();
  fmt(parse_c);

  auto* eval_c = app.add_subcommand("eval", "Evaluate a formula in M4");
  eval_c->add_option("--valuation", o.valuation, "e.g. p=n,q=1")->required();
  eval_c->add_option("formula", o.formula)->required();
  fmt(eval_c);

  auto* valid_c = app.add_subcommand("valid", "Decide validity in M4");
  valid_c->add_option("formula", o.formula)->required();
  fmt(valid_c);

  auto* cons_c = app.add_subcommand("consequence", "Decide a consequence G => D");
  cons_c->add_option("sequent", o.sequent)->required()->expected(1, 2);
  cons_c->add_option("--relation", o.relation)->check(CLI::IsMember({"matrix", "degree"}));
  fmt(cons_c);

  auto* cm_c = app.add_subcommand("countermodel", "Print the first falsifying valuation");
  cm_c->add_option("sequent", o.sequent)->required()->expected(1, 2);
  fmt(cm_c);

  auto* prove_c = app.add_subcommand("prove", "Search for a proof");
  prove_c->add_option("--calculus", o.calculus)->check(CLI::IsMember({"sc", "g", "sf4"}));
  prove_c->add_option("--depth", o.depth, "G search depth")->check(CLI::NonNegativeNumber);
  prove_c->add_option("sequent", o.sequent)->required()->expected(1);
  fmt(prove_c);

  auto* check_c = app.add_subcommand("check", "Check a proof file");
  check_c->add_option("--calculus", o.calculus)->check(CLI::IsMember({"sc", "g", "sf4", "nd"}));
  check_c->add_flag("--allow-cut", o.allow_cut);
  check_c->add_option("file", o.file)->required();

  auto* tr_c = app.add_subcommand("translate", "Transform a proof file");
  tr_c->add_option("direction", o.direction)
      ->required()
      ->check(CLI::IsMember({"contrapose", "sc2nd", "nd2sc", "necessitate"}));
  tr_c->add_option("file", o.file)->required();
  tr_c->add_option("--format", o.format, "json (default) or text")->check(CLI::IsMember({"text", "json"}));

  auto* gen_c = app.add_subcommand("gen-rules", "Generate SF or two-sided rules from a matrix");
  gen_c->add_option("--matrix", o.matrix_file);
  gen_c->add_option("--spec", o.spec_file);
  gen_c->add_option("--stage", o.stage)->check(CLI::IsMember({"sf", "two"}));
  fmt(gen_c);

  auto* probe_c = app.add_subcommand("probe-cut", "Look for a cut-free G proof of => #(a | ~#a)");
  probe_c->add_option("--alpha", o.alpha)->required();
  probe_c->add_option("--depth", o.depth)->required()->check(CLI::NonNegativeNumber);
  fmt(probe_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (o.format.empty()) o.format = tr_c->parsed() ? "json" : "text";

  try {
    if (parse_c->parsed()) return cmd_parse(o);
    if (eval_c->parsed()) return cmd_eval(o);
    if (valid_c->parsed()) return cmd_valid(o);
    if (cons_c->parsed()) return cmd_consequence(o);
    if (cm_c->parsed()) return cmd_countermodel(o);
    if (prove_c->parsed()) return cmd_prove(o);
    if (check_c->parsed()) return cmd_check(o);
    if (tr_c->parsed()) return cmd_translate(o);
    if (gen_c->parsed()) return cmd_gen_rules(o);
    if (probe_c->parsed()) return cmd_probe_cut(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ProofFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TransformError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
