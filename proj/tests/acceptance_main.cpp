// End-to-end acceptance gate. Each numbered criterion prints one line:
//   [PASS] criterion N: <what was established>   or
//   [FAIL] criterion N: <what went wrong>
// The process exits with the number of failed criteria. Criteria with a time
// budget fail when the budget is exceeded, even if every check inside passed.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "csets/harness.hpp"
#include "csets/json_io.hpp"

using namespace csets;

namespace {

int failed_criteria = 0;

double run_timed(const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  body();
  auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count();
}

// Runs one criterion; `body` throws (Error or std::runtime_error) to fail.
void criterion(int number, const std::string& label, double budget_ms,
               const std::function<void()>& body) {
  try {
    double ms = run_timed(body);
    if (budget_ms > 0 && ms > budget_ms) {
      std::printf("[FAIL] criterion %d: %s — took %.0f ms, budget %.0f ms\n", number,
                  label.c_str(), ms, budget_ms);
      ++failed_criteria;
      return;
    }
    std::printf("[PASS] criterion %d: %s (%.0f ms)\n", number, label.c_str(), ms);
  } catch (const std::exception& e) {
    std::printf("[FAIL] criterion %d: %s — %s\n", number, label.c_str(), e.what());
    ++failed_criteria;
  }
}

[[noreturn]] void bail(const std::string& message) { throw std::runtime_error(message); }

void expect(bool ok, const std::string& message) {
  if (!ok) bail(message);
}

void expect_suite_pass(const CheckReport& r) {
  if (r.verdict() == Verdict::Pass) return;
  std::ostringstream os;
  os << "suite " << r.suite << " verdict " << verdict_name(r.verdict());
  if (!r.failures.empty()) {
    os << "; first failure [" << r.failures.front().law << "] on "
       << r.failures.front().inputs << " with " << r.failures.front().witness;
  }
  if (!r.skipped.empty()) os << "; first skip: " << r.skipped.front();
  bail(os.str());
}

std::string expect_error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

// --- CLI process driver (criterion 11) --------------------------------------

std::string run_cli(const std::string& args, int& exit_code) {
  std::string command = std::string("\"") + CSETS_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) bail("cannot spawn " + command);
  std::string out;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

// Drop the wall-clock line; everything else in a report must be reproducible.
std::string erase_timing(const std::string& report) {
  std::istringstream in(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"elapsed_ms\"") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

std::filesystem::path write_temp_program(const std::string& name, const std::string& text) {
  std::filesystem::path path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  return path;
}

// --- noninterference corpus (criterion 9) -----------------------------------

struct NiProgram {
  const char* source;
  const char* hole_type;
  const char* result_type;
};

void run_ni_corpus(const SecurityPoset& poset, Calculus calculus,
                   const std::vector<NiProgram>& programs, const std::vector<Label>& observers) {
  for (const NiProgram& p : programs) {
    NoninterferenceSpec spec;
    spec.calculus = calculus;
    spec.hole_name = "h";
    spec.hole_type = parse_type(p.hole_type);
    spec.program = parse_term(p.source);
    spec.result_type = parse_type(p.result_type);
    spec.observers = observers;
    CheckReport r = check_noninterference(poset, spec);
    if (r.verdict() != Verdict::Pass) {
      bail(std::string(calculus_name(calculus)) + " program `" + p.source + "`: verdict " +
           verdict_name(r.verdict()) +
           (r.failures.empty() ? "" : "; " + r.failures.front().law + " with " +
                                          r.failures.front().witness));
    }
  }
}

}  // namespace

int main() {
  Label L("L"), H("H");
  LabelUniverse u({L, H});
  SecurityPoset poset({L, H}, {{L, H}});

  criterion(1, "fixed hom counts between the boolean objects", 1000, [&] {
    expect(enumerate_hom(codiscrete_booleans(u), discrete_booleans(u)).size() == 2,
           "opaque-to-transparent count is not 2");
    expect(enumerate_hom(discrete_booleans(u), discrete_booleans(u)).size() == 4,
           "transparent-to-transparent count is not 4");
    expect(enumerate_hom(discrete_booleans(u), codiscrete_booleans(u)).size() == 4,
           "transparent-to-opaque count is not 4");
    expect(enumerate_hom(terminal(u), discrete_booleans(u)).size() == 2,
           "point count of the transparent booleans is not 2");
  });

  criterion(2, "universal properties on 50 seeded instances", 60'000, [&] {
    CheckReport r = run_law_suite("bcc", 42, 50);
    expect_suite_pass(r);
    expect(r.cases > 0, "no cases ran");
  });

  criterion(3, "structural corollaries of the adjoint string on 100 seeded sets", 30'000, [&] {
    expect_suite_pass(run_law_suite("corollary", 42, 100));
    expect_suite_pass(run_law_suite("adjunction", 42, 100));
  });

  criterion(4, "redaction forces constancy on 200 seeded sources, every mask", 60'000, [&] {
    Rng rng(2025);
    std::vector<LevelMask> masks = {LevelMask(u, {L}), LevelMask(u, {H}), LevelMask::all(u)};
    std::size_t passes = 0, dual_skips = 0;
    for (int i = 0; i < 200; ++i) {
      ClassifiedSet a = random_classified_set(rng, u, 3);
      while (a.empty()) a = random_classified_set(rng, u, 3);
      for (const LevelMask& mask : masks) {
        ClassifiedSet b = random_classified_set(rng, mask.residual(), 3);
        CheckReport r = check_constancy(a, b, mask);
        if (r.verdict() == Verdict::Fail) {
          bail("constancy failed: " + r.failures.front().law + " on " +
               r.failures.front().inputs + " with " + r.failures.front().witness);
        }
        expect(r.cases > 0, "a constancy report ran no cases");
        if (r.verdict() == Verdict::Pass) {
          ++passes;
        } else {
          // the only legitimate vacuity: the dual point-count needs points
          for (const std::string& s : r.skipped) {
            expect(s.find("empty dual source") != std::string::npos,
                   "unexpected skip: " + s);
          }
          ++dual_skips;
        }
      }
    }
    expect(passes + dual_skips == 600, "report count mismatch");
    expect(passes >= 500, "too few outright passes: " + std::to_string(passes));
  });

  criterion(5, "the mask-indexed law catalogue over 100 seeded trials", 120'000, [&] {
    CheckReport r = run_law_suite("levelled", 42, 100);
    expect_suite_pass(r);
    expect(r.cases == 100 * 1509, "case census drifted: " + std::to_string(r.cases));
  });

  criterion(6, "strength coherence diagrams on 50 seeded instances", 0, [&] {
    expect_suite_pass(run_law_suite("strength", 42, 50));
  });

  criterion(7, "exponential ideal and contractibility on 100 seeded trials", 0, [&] {
    expect_suite_pass(run_law_suite("ideal", 42, 100));
    expect_suite_pass(run_law_suite("contractibility", 42, 100));
  });

  criterion(8, "typechecker verdicts on the five flagship judgements", 0, [&] {
    TypingContext dual;
    dual.calculus = Calculus::Dual;
    dual.ordinary.emplace_back("b", parse_type("Bool"));
    expect(typecheck(poset, dual, parse_term("if b then box tt else box ff")) ==
               parse_type("Box Bool"),
           "the conditional between boxed constants should be accepted at Box Bool");

    TypingContext dual_f;
    dual_f.calculus = Calculus::Dual;
    dual_f.ordinary.emplace_back("f", parse_type("Bool -> Bool"));
    expect(expect_error_kind([&] { typecheck(poset, dual_f, parse_term("box f")); }) ==
               "ModalViolation",
           "boxing an ordinary function should be a ModalViolation");

    TypingContext lev;
    lev.calculus = Calculus::Levelled;
    lev.ordinary.emplace_back("x", parse_type("T[L] Bool"));
    expect(typecheck(poset, lev, parse_term("let y = x in ret[H] y")) == parse_type("T[H] Bool"),
           "an upward flow along the order should be accepted");

    TypingContext lev_down;
    lev_down.calculus = Calculus::Levelled;
    lev_down.ordinary.emplace_back("x", parse_type("T[H] Bool"));
    expect(expect_error_kind(
               [&] { typecheck(poset, lev_down, parse_term("let y = x in ret[L] y")); }) ==
               "NotProtected",
           "eliminating a high computation into a low one should be NotProtected");

    TypingContext sealing;
    sealing.calculus = Calculus::Sealing;
    sealing.observers = {L};
    sealing.ordinary.emplace_back("x", parse_type("Seal[H] Bool"));
    expect(expect_error_kind([&] { typecheck(poset, sealing, parse_term("unseal[H] x")); }) ==
               "UnsealNotPermitted",
           "unsealing above the observer set should be UnsealNotPermitted");
  });

  criterion(9, "noninterference, five programs per calculus, both checks agreeing", 60'000, [&] {
    run_ni_corpus(poset, Calculus::Monadic,
                  {{"tt", "T Bool", "Bool"},
                   {"fst (tt, h)", "T Bool", "Bool"},
                   {"(\\x : T Bool. ff) h", "T Bool", "Bool"},
                   {"if tt then tt else fst (ff, h)", "T Bool", "Bool"},
                   {"snd (h, if ff then tt else ff)", "T Bool", "Bool"}},
                  {});
    run_ni_corpus(poset, Calculus::Dual,
                  {{"box tt", "BoolCo", "Box Bool"},
                   {"(\\x : BoolCo. box ff) h", "BoolCo", "Box Bool"},
                   {"snd (h, box tt)", "BoolCo", "Box Bool"},
                   {"let box y = box tt in box y", "BoolCo", "Box Bool"},
                   {"(\\x : BoolCo * BoolCo. box tt) (h, h)", "BoolCo", "Box Bool"}},
                  {});
    run_ni_corpus(poset, Calculus::Levelled,
                  {{"ret[L] tt", "T[H] Bool", "T[L] Bool"},
                   {"snd (h, ret[L] tt)", "T[H] Bool", "T[L] Bool"},
                   {"(\\x : T[H] Bool. ret[L] ff) h", "T[H] Bool", "T[L] Bool"},
                   {"if tt then ret[L] tt else ret[L] ff", "T[H] Bool", "T[L] Bool"},
                   {"fst (ret[L] ff, h)", "T[H] Bool", "T[L] Bool"}},
                  {});
    run_ni_corpus(poset, Calculus::Sealing,
                  {{"tt", "Seal[H] Bool", "Bool"},
                   {"fst (tt, h)", "Seal[H] Bool", "Bool"},
                   {"(\\x : Seal[H] Bool. ff) h", "Seal[H] Bool", "Bool"},
                   {"(\\x : Seal[H] Bool. tt) (seal[H] (unseal[H] h))", "Seal[H] Bool", "Bool"},
                   {"snd (h, if tt then ff else tt)", "Seal[H] Bool", "Bool"}},
                  {L});
  });

  criterion(10, "the interpretation is invariant under normalization, 21-term corpus", 0, [&] {
    auto parse_all = [](std::vector<const char*> sources) {
      std::vector<Term> out;
      for (const char* s : sources) out.push_back(parse_term(s));
      return out;
    };
    std::vector<Term> monadic = parse_all({
        "tt",
        "if tt then ff else tt",
        "(\\x : Bool. x) ff",
        "ret (if ff then tt else ff)",
        "let x = ret tt in ret x",
        "fst (tt, unit)",
    });
    std::vector<Term> dual = parse_all({
        "box tt",
        "let box x = box tt in box x",
        "if tt then box tt else box ff",
        "(\\x : Box Bool. let box y = x in y) (box ff)",
        "unit",
    });
    std::vector<Term> levelled = parse_all({
        "ret[H] tt",
        "let x = ret[L] tt in ret[H] x",
        "(\\x : Bool. ret[L] x) ff",
        "if ff then ret[H] tt else ret[H] ff",
        "fst (ret[L] tt, tt)",
    });
    std::vector<Term> sealing = parse_all({
        "seal[H] tt",
        "unseal[L] (seal[L] ff)",
        "(\\x : Seal[H] Bool. x) (seal[H] ff)",
        "if tt then seal[L] tt else seal[L] ff",
        "unseal[H] (seal[H] (if tt then tt else ff))",
    });
    expect(monadic.size() + dual.size() + levelled.size() + sealing.size() >= 20,
           "corpus shrank below twenty terms");
    expect_suite_pass(check_soundness(poset, Calculus::Monadic, monadic));
    expect_suite_pass(check_soundness(poset, Calculus::Dual, dual));
    expect_suite_pass(check_soundness(poset, Calculus::Levelled, levelled));
    expect_suite_pass(check_soundness(poset, Calculus::Sealing, sealing, {L, H}));
  });

  criterion(11, "the command line reproduces reports byte-for-byte and keeps its exit contract",
            0, [&] {
    int first_code = 0, second_code = 0;
    std::string first = run_cli("laws levelled --seed 42 --format json", first_code);
    std::string second = run_cli("laws levelled --seed 42 --format json", second_code);
    expect(first_code == 0, "first run exited " + std::to_string(first_code));
    expect(second_code == 0, "second run exited " + std::to_string(second_code));
    expect(!first.empty(), "first run produced no report");
    expect(erase_timing(first) == erase_timing(second),
           "reports differ beyond the wall-clock line");

    int code = 0;
    run_cli("laws bogus", code);
    expect(code == 2, "an unknown suite should exit 2, got " + std::to_string(code));

    std::filesystem::path boxfun = write_temp_program(
        "csets-acceptance-boxfun.mml",
        "-- a function from the ordinary zone cannot be boxed\n"
        "-- var f : Bool -> Bool\n"
        "box f\n");
    std::string out = run_cli("typecheck dp \"" + boxfun.string() + "\" --format json", code);
    expect(code == 1, "the rejected program should exit 1, got " + std::to_string(code));
    expect(out.find("ModalViolation") != std::string::npos,
           "the report should name the ModalViolation");

    std::filesystem::path good = write_temp_program(
        "csets-acceptance-id.mml", "\\x : Bool. x\n");
    out = run_cli("typecheck monadic \"" + good.string() + "\"", code);
    expect(code == 0, "a well-typed program should exit 0, got " + std::to_string(code));
    expect(out.find("Bool -> Bool") != std::string::npos, "unexpected inferred type: " + out);
  });

  if (failed_criteria == 0) {
    std::printf("acceptance: all 11 criteria hold\n");
  } else {
    std::printf("acceptance: %d criteria failed\n", failed_criteria);
  }
  return failed_criteria;
}
