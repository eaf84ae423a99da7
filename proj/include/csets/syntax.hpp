#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "csets/cset.hpp"

namespace csets {

struct Pos {
  int line = 0;
  int col = 0;
};

// Types of the shared term language. Each of the four calculi uses a subset:
//   Monad      T A         (global possibility monad)
//   BoxT       Box A       (global necessity comonad)
//   LevMonad   T[l] A      (level-indexed monad)
//   SealT      Seal[l] A   (sealing at a level)
class Type {
 public:
  enum class Kind { Bool, BoolCo, Unit, Prod, Sum, Arrow, Monad, BoxT, LevMonad, SealT };

  static Type boolean();
  static Type boolean_co();
  static Type unit();
  static Type prod(Type left, Type right);
  static Type sum(Type left, Type right);
  static Type arrow(Type domain, Type codomain);
  static Type monad(Type inner);
  static Type box(Type inner);
  static Type lev_monad(Label level, Type inner);
  static Type seal(Label level, Type inner);

  Kind kind() const { return rep_->kind; }
  const Type& left() const;    // Prod / Sum / Arrow
  const Type& right() const;   // Prod / Sum / Arrow
  const Type& inner() const;   // Monad / BoxT / LevMonad / SealT
  const Label& level() const;  // LevMonad / SealT

  std::string str() const;

  friend int compare(const Type& a, const Type& b);
  friend bool operator==(const Type& a, const Type& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Type& a, const Type& b) { return compare(a, b) != 0; }
  friend bool operator<(const Type& a, const Type& b) { return compare(a, b) < 0; }

 private:
  struct Rep {
    Kind kind;
    std::vector<Type> kids;
    std::optional<Label> level;
  };
  explicit Type(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Terms of the shared language. `LetRet` is the monadic let of both Moggi's calculus and
// the level-indexed one — the surface syntax is identical and the level is recovered from
// the scrutinee's type, so a single node serves both and the checker dispatches.
class Term {
 public:
  enum class Kind {
    Var, Lam, App, Pair, Fst, Snd, Inl, Inr, Case, Unit, TT, FF, If,
    Ret, LetRet, BoxI, LetBox, RetLev, SealI, Unseal
  };

  static Term var(std::string name);
  static Term lam(std::string name, Type annotation, Term body);
  static Term app(Term fn, Term arg);
  static Term pair(Term first, Term second);
  static Term fst(Term t);
  static Term snd(Term t);
  static Term inl(Term t);
  static Term inr(Term t);
  static Term case_of(Term scrutinee, std::string left_name, Term left, std::string right_name,
                      Term right);
  static Term unit();
  static Term tt();
  static Term ff();
  static Term if_then_else(Term cond, Term then_branch, Term else_branch);
  static Term ret(Term t);
  static Term let_ret(std::string name, Term bound, Term body);
  static Term box(Term t);
  static Term let_box(std::string name, Term bound, Term body);
  static Term ret_lev(Label level, Term t);
  static Term seal(Label level, Term t);
  static Term unseal(Label level, Term t);

  Kind kind() const { return rep_->kind; }
  const std::string& name() const;        // Var / Lam / LetRet / LetBox binder
  const std::string& left_name() const;   // Case left binder
  const std::string& right_name() const;  // Case right binder
  const Type& annotation() const;         // Lam
  const Label& level() const;             // RetLev / SealI / Unseal
  const Term& child(std::size_t i) const;
  std::size_t child_count() const;

  Pos pos() const { return rep_->pos; }
  Term with_pos(Pos p) const;

  std::string str() const;

 private:
  struct Rep {
    Kind kind;
    std::string name;
    std::string name2;
    std::optional<Type> annotation;
    std::optional<Label> level;
    std::vector<Term> kids;
    Pos pos;
  };
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& expected)
      : Error("ParseError", "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                ": expected " + expected),
        line_(line), col_(col), expected_(expected) {}
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int col_;
  std::string expected_;
};

class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(std::size_t steps)
      : Error("FuelExhausted", "no normal form after " + std::to_string(steps) + " steps"),
        steps_(steps) {}
  std::size_t steps() const { return steps_; }

 private:
  std::size_t steps_;
};

// Parsing freshens binders that collide with free names, so substitution instances built
// from parsed programs never capture. `--` starts a comment running to end of line.
Term parse_term(std::string_view text);
Type parse_type(std::string_view text);

std::string print_term(const Term& t);
std::string print_type(const Type& t);

// Capture-avoiding substitution of `replacement` for free occurrences of `name`.
Term substitute(const Term& body, const std::string& name, const Term& replacement);

// One leftmost-outermost reduction step, or nullopt for a normal form. Reduction is
// full (under binders) and untyped.
std::optional<Term> reduce_step(const Term& t);

inline constexpr std::size_t kDefaultFuel = 100'000;

// Iterated reduce_step; throws FuelExhausted when the budget runs out with a redex left.
Term normalize(const Term& t, std::size_t fuel = kDefaultFuel);

bool alpha_equal(const Term& a, const Term& b);
std::set<std::string> free_vars(const Term& t);
std::size_t term_size(const Term& t);  // number of term nodes

}  // namespace csets
