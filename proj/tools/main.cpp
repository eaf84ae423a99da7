#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csets/calculi.hpp"
#include "csets/harness.hpp"
#include "csets/json_io.hpp"
#include "csets/syntax.hpp"

namespace {

using namespace csets;

struct Options {
  std::string poset_path;
  std::uint64_t seed = 42;
  std::size_t trials = 100;
  std::size_t fuel = kDefaultFuel;
  std::size_t cap = kDefaultEnumerationCap;
  std::string format = "text";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("ParseError", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Program headers. A `--` line whose first word is one of the directive
// keywords configures the judgement; any other `--` line is a comment.
//
//   -- var y : Bool          ordinary context entry
//   -- modal u : Bool        second-zone entry (dual-context calculus)
//   -- hole x : T Bool       the secret input of a noninterference run
//   -- observers L, H        the observer levels of a sealing judgement
//   -- result : Bool         the type the program is checked against
struct Directives {
  std::vector<std::pair<std::string, Type>> vars;
  std::vector<std::pair<std::string, Type>> modals;
  std::optional<std::pair<std::string, Type>> hole;
  std::vector<Label> observers;
  bool observers_given = false;
  std::optional<Type> result;
};

std::pair<std::string, Type> parse_binding(const std::string& rest, const std::string& kind) {
  std::size_t colon = rest.find(':');
  if (colon == std::string::npos) {
    fail("ParseError", "a '-- " + kind + "' directive needs the form 'name : type'");
  }
  std::string name = trim(rest.substr(0, colon));
  std::string ty = trim(rest.substr(colon + 1));
  if (name.empty() || ty.empty()) {
    fail("ParseError", "a '-- " + kind + "' directive needs the form 'name : type'");
  }
  return {name, parse_type(ty)};
}

Directives scan_directives(const std::string& text) {
  Directives d;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::string body = trim(line);
    if (body.rfind("--", 0) != 0) continue;
    body = trim(body.substr(2));
    std::size_t space = body.find_first_of(" \t");
    std::string word = space == std::string::npos ? body : body.substr(0, space);
    std::string rest = space == std::string::npos ? "" : trim(body.substr(space + 1));
    if (word == "var") {
      d.vars.push_back(parse_binding(rest, "var"));
    } else if (word == "modal") {
      d.modals.push_back(parse_binding(rest, "modal"));
    } else if (word == "hole") {
      if (d.hole) fail("ParseError", "a program may declare at most one hole");
      d.hole = parse_binding(rest, "hole");
    } else if (word == "observers") {
      d.observers_given = true;
      std::istringstream parts(rest);
      std::string piece;
      while (std::getline(parts, piece, ',')) {
        std::string name = trim(piece);
        if (name.empty()) fail("ParseError", "empty label in '-- observers'");
        d.observers.push_back(Label(name));
      }
    } else if (word == "result") {
      if (d.result) fail("ParseError", "a program may declare at most one result type");
      if (rest.rfind(':', 0) != 0) {
        fail("ParseError", "a '-- result' directive needs the form ': type'");
      }
      d.result = parse_type(trim(rest.substr(1)));
    }
    // anything else after `--` is a comment
  }
  return d;
}

SecurityPoset load_the_poset(const Options& opt) {
  if (opt.poset_path.empty()) {
    return SecurityPoset({Label("L"), Label("H")}, {{Label("L"), Label("H")}});
  }
  return poset_from_json(read_file(opt.poset_path));
}

void check_observers_known(const SecurityPoset& poset, const std::vector<Label>& observers) {
  for (const Label& l : observers) {
    if (!poset.labels().contains(l)) {
      fail("UnknownLabel", "observer '" + l.name() + "' is not in the poset");
    }
  }
}

TypingContext context_for(Calculus calculus, const Directives& d, bool include_hole) {
  TypingContext ctx;
  ctx.calculus = calculus;
  if (include_hole && d.hole) ctx.ordinary.push_back(*d.hole);
  for (const auto& v : d.vars) ctx.ordinary.push_back(v);
  for (const auto& m : d.modals) ctx.modal.push_back(m);
  ctx.observers = d.observers;
  return ctx;
}

void emit_line(const Options& opt, const nlohmann::json& j, const std::string& text) {
  if (opt.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

void emit_report(const Options& opt, const CheckReport& r) {
  if (opt.format == "json") {
    std::cout << report_to_json(r);
  } else {
    std::cout << report_to_text(r);
  }
}

int report_exit(const CheckReport& r) { return r.verdict() == Verdict::Pass ? 0 : 1; }

void emit_error(const Options& opt, const Error& e) {
  if (opt.format == "json") {
    nlohmann::json j;
    j["error"] = e.kind();
    j["message"] = std::string(e.what());
    std::cout << j.dump(2) << "\n";
  } else {
    std::cerr << "error: " << e.what() << "\n";
  }
}

// Runs the check itself; errors here mean the check rejected its input, except
// for the two kinds that signal a configuration problem.
template <typename F>
int checked(const Options& opt, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    emit_error(opt, e);
    return (e.kind() == "UnknownSuite" || e.kind() == "ShapeMismatch") ? 2 : 1;
  }
}

Calculus parse_calculus_or_die(const std::string& token) {
  std::optional<Calculus> c = parse_calculus(token);
  if (!c) fail("ParseError", "unknown calculus '" + token + "'");
  return *c;
}

nlohmann::json morphism_json(const CSetMorphism& f, const Type& a) {
  nlohmann::json j;
  j["type"] = print_type(a);
  j["source"] = f.source().str();
  j["target"] = f.target().str();
  nlohmann::json g = nlohmann::json::array();
  for (const auto& [x, y] : f.graph()) g.push_back({x.str(), y.str()});
  j["graph"] = g;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite classified sets: law suites, four modal calculi, noninterference"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--poset", opt.poset_path, "poset description file (default: L <= H)");
    sub->add_option("--seed", opt.seed, "generator seed (default 42)");
    sub->add_option("--trials", opt.trials, "suite trials (default 100)");
    sub->add_option("--fuel", opt.fuel, "normalization step budget");
    sub->add_option("--cap", opt.cap, "enumeration size cap");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };

  std::string group, calc_token, file_a, file_b;
  CLI::App* laws = app.add_subcommand("laws", "run a law suite over seeded random sets");
  laws->add_option("group", group,
                   "bcc | adjunction | corollary | levelled | strength | ideal | "
                   "contractibility")
      ->required();
  add_common(laws);

  CLI::App* tc = app.add_subcommand("typecheck", "infer the type of a program");
  tc->add_option("calculus", calc_token, "monadic | dual | levelled | sealing")->required();
  tc->add_option("file", file_a, "program file")->required();
  add_common(tc);

  CLI::App* norm = app.add_subcommand("normalize", "reduce a program to normal form");
  norm->add_option("file", file_a, "program file")->required();
  add_common(norm);

  CLI::App* den = app.add_subcommand("denote", "interpret a program as a morphism");
  den->add_option("calculus", calc_token, "monadic | dual | levelled | sealing")->required();
  den->add_option("file", file_a, "program file")->required();
  add_common(den);

  CLI::App* ni = app.add_subcommand("nonint", "check noninterference for a program's hole");
  ni->add_option("calculus", calc_token, "monadic | dual | levelled | sealing")->required();
  ni->add_option("file", file_a, "program file with a '-- hole' directive")->required();
  add_common(ni);

  CLI::App* hom = app.add_subcommand("hom", "enumerate all morphisms between two sets");
  hom->add_option("setA", file_a, "source set file")->required();
  hom->add_option("setB", file_b, "target set file")->required();
  add_common(hom);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (laws->parsed()) {
      return checked(opt, [&] {
        CheckReport r = run_law_suite(group, opt.seed, opt.trials, opt.cap);
        emit_report(opt, r);
        return report_exit(r);
      });
    }

    if (tc->parsed()) {
      Calculus calculus = parse_calculus_or_die(calc_token);
      SecurityPoset poset = load_the_poset(opt);
      std::string text = read_file(file_a);
      Directives d = scan_directives(text);
      check_observers_known(poset, d.observers);
      Term term = parse_term(text);
      TypingContext ctx = context_for(calculus, d, true);
      return checked(opt, [&] {
        Type t = d.result ? *d.result : typecheck(poset, ctx, term);
        if (d.result) check_type(poset, ctx, term, *d.result);
        emit_line(opt, {{"type", print_type(t)}}, print_type(t) + "\n");
        return 0;
      });
    }

    if (norm->parsed()) {
      std::string text = read_file(file_a);
      Term term = parse_term(text);
      return checked(opt, [&] {
        Term nf = normalize(term, opt.fuel);
        emit_line(opt, {{"normal_form", print_term(nf)}}, print_term(nf) + "\n");
        return 0;
      });
    }

    if (den->parsed()) {
      Calculus calculus = parse_calculus_or_die(calc_token);
      SecurityPoset poset = load_the_poset(opt);
      std::string text = read_file(file_a);
      Directives d = scan_directives(text);
      check_observers_known(poset, d.observers);
      Term term = parse_term(text);
      TypingContext ctx = context_for(calculus, d, true);
      return checked(opt, [&] {
        DenEnv env{poset};
        Type a = d.result ? *d.result : typecheck(poset, ctx, term);
        CSetMorphism f = denote_term(env, ctx, term, a);
        std::ostringstream os;
        os << "type   " << print_type(a) << "\n"
           << "source " << f.source().str() << "\n"
           << "target " << f.target().str() << "\n";
        for (const auto& [x, y] : f.graph()) {
          os << "  " << x.str() << " |-> " << y.str() << "\n";
        }
        emit_line(opt, morphism_json(f, a), os.str());
        return 0;
      });
    }

    if (ni->parsed()) {
      Calculus calculus = parse_calculus_or_die(calc_token);
      SecurityPoset poset = load_the_poset(opt);
      std::string text = read_file(file_a);
      Directives d = scan_directives(text);
      check_observers_known(poset, d.observers);
      if (!d.hole) fail("ParseError", "nonint needs a '-- hole name : type' directive");
      if (!d.result) fail("ParseError", "nonint needs a '-- result : type' directive");
      NoninterferenceSpec spec;
      spec.calculus = calculus;
      spec.hole_name = d.hole->first;
      spec.hole_type = d.hole->second;
      spec.program = parse_term(text);
      spec.result_type = *d.result;
      spec.observers = d.observers;
      spec.seed = opt.seed;
      spec.fuel = opt.fuel;
      spec.cap = opt.cap;
      return checked(opt, [&] {
        CheckReport r = check_noninterference(poset, spec);
        emit_report(opt, r);
        return report_exit(r);
      });
    }

    if (hom->parsed()) {
      ClassifiedSet a = set_from_json(read_file(file_a));
      ClassifiedSet b = set_from_json(read_file(file_b));
      return checked(opt, [&] {
        std::vector<CSetMorphism> homs = enumerate_hom(a, b, opt.cap);
        if (opt.format == "json") {
          std::cout << hom_to_json(homs);
        } else {
          std::cout << hom_to_text(homs);
        }
        return 0;
      });
    }
  } catch (const Error& e) {
    emit_error(opt, e);
    return 2;
  }
  return 2;
}
