#include "csets/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace csets {

// ---------------------------------------------------------------------------
// Types

Type Type::boolean() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Bool;
  return Type(std::move(rep));
}

Type Type::boolean_co() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::BoolCo;
  return Type(std::move(rep));
}

Type Type::unit() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Unit;
  return Type(std::move(rep));
}

Type Type::prod(Type left, Type right) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Prod;
  rep->kids = {std::move(left), std::move(right)};
  return Type(std::move(rep));
}

Type Type::sum(Type left, Type right) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Sum;
  rep->kids = {std::move(left), std::move(right)};
  return Type(std::move(rep));
}

Type Type::arrow(Type domain, Type codomain) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Arrow;
  rep->kids = {std::move(domain), std::move(codomain)};
  return Type(std::move(rep));
}

Type Type::monad(Type inner) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Monad;
  rep->kids = {std::move(inner)};
  return Type(std::move(rep));
}

Type Type::box(Type inner) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::BoxT;
  rep->kids = {std::move(inner)};
  return Type(std::move(rep));
}

Type Type::lev_monad(Label level, Type inner) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::LevMonad;
  rep->kids = {std::move(inner)};
  rep->level = std::move(level);
  return Type(std::move(rep));
}

Type Type::seal(Label level, Type inner) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::SealT;
  rep->kids = {std::move(inner)};
  rep->level = std::move(level);
  return Type(std::move(rep));
}

const Type& Type::left() const { return rep_->kids[0]; }
const Type& Type::right() const { return rep_->kids[1]; }
const Type& Type::inner() const { return rep_->kids[0]; }
const Label& Type::level() const { return *rep_->level; }

int compare(const Type& a, const Type& b) {
  if (a.rep_ == b.rep_) return 0;
  if (int d = static_cast<int>(a.kind()) - static_cast<int>(b.kind()); d != 0) {
    return d < 0 ? -1 : 1;
  }
  if (a.rep_->level.has_value()) {
    const std::string& la = a.rep_->level->name();
    const std::string& lb = b.rep_->level->name();
    if (int d = la.compare(lb); d != 0) return d < 0 ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.rep_->kids.size(); ++i) {
    if (int d = compare(a.rep_->kids[i], b.rep_->kids[i]); d != 0) return d;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Terms

Term Term::var(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Var;
  rep->name = std::move(name);
  return Term(std::move(rep));
}

Term Term::lam(std::string name, Type annotation, Term body) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Lam;
  rep->name = std::move(name);
  rep->annotation = std::move(annotation);
  rep->kids = {std::move(body)};
  return Term(std::move(rep));
}

Term Term::app(Term fn, Term arg) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::App;
  rep->kids = {std::move(fn), std::move(arg)};
  return Term(std::move(rep));
}

Term Term::pair(Term first, Term second) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Pair;
  rep->kids = {std::move(first), std::move(second)};
  return Term(std::move(rep));
}

Term Term::fst(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Fst;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::snd(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Snd;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::inl(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Inl;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::inr(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Inr;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::case_of(Term scrutinee, std::string left_name, Term left, std::string right_name,
                   Term right) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Case;
  rep->name = std::move(left_name);
  rep->name2 = std::move(right_name);
  rep->kids = {std::move(scrutinee), std::move(left), std::move(right)};
  return Term(std::move(rep));
}

Term Term::unit() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Unit;
  return Term(std::move(rep));
}

Term Term::tt() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::TT;
  return Term(std::move(rep));
}

Term Term::ff() {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::FF;
  return Term(std::move(rep));
}

Term Term::if_then_else(Term cond, Term then_branch, Term else_branch) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::If;
  rep->kids = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return Term(std::move(rep));
}

Term Term::ret(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Ret;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::let_ret(std::string name, Term bound, Term body) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::LetRet;
  rep->name = std::move(name);
  rep->kids = {std::move(bound), std::move(body)};
  return Term(std::move(rep));
}

Term Term::box(Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::BoxI;
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::let_box(std::string name, Term bound, Term body) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::LetBox;
  rep->name = std::move(name);
  rep->kids = {std::move(bound), std::move(body)};
  return Term(std::move(rep));
}

Term Term::ret_lev(Label level, Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::RetLev;
  rep->level = std::move(level);
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::seal(Label level, Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::SealI;
  rep->level = std::move(level);
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

Term Term::unseal(Label level, Term t) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Unseal;
  rep->level = std::move(level);
  rep->kids = {std::move(t)};
  return Term(std::move(rep));
}

const std::string& Term::name() const { return rep_->name; }
const std::string& Term::left_name() const { return rep_->name; }
const std::string& Term::right_name() const { return rep_->name2; }
const Type& Term::annotation() const { return *rep_->annotation; }
const Label& Term::level() const { return *rep_->level; }
const Term& Term::child(std::size_t i) const { return rep_->kids[i]; }
std::size_t Term::child_count() const { return rep_->kids.size(); }

Term Term::with_pos(Pos p) const {
  auto rep = std::make_shared<Rep>(*rep_);
  rep->pos = p;
  return Term(std::move(rep));
}

// ---------------------------------------------------------------------------
// Free variables, sizes, substitution

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  struct Walk {
    std::set<std::string>& out;
    void go(const Term& t, std::vector<std::string>& bound) {
      switch (t.kind()) {
        case Term::Kind::Var:
          if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) out.insert(t.name());
          return;
        case Term::Kind::Lam:
          bound.push_back(t.name());
          go(t.child(0), bound);
          bound.pop_back();
          return;
        case Term::Kind::LetRet:
        case Term::Kind::LetBox:
          go(t.child(0), bound);
          bound.push_back(t.name());
          go(t.child(1), bound);
          bound.pop_back();
          return;
        case Term::Kind::Case:
          go(t.child(0), bound);
          bound.push_back(t.left_name());
          go(t.child(1), bound);
          bound.pop_back();
          bound.push_back(t.right_name());
          go(t.child(2), bound);
          bound.pop_back();
          return;
        default:
          for (std::size_t i = 0; i < t.child_count(); ++i) go(t.child(i), bound);
          return;
      }
    }
  } walk{out};
  std::vector<std::string> bound;
  walk.go(t, bound);
  return out;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < t.child_count(); ++i) n += term_size(t.child(i));
  return n;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

// Substitution under one binder scope: returns the (possibly renamed) binder and the
// substituted scope body.
std::pair<std::string, Term> subst_scope(const std::string& binder, const Term& scope,
                                         const std::string& name, const Term& repl) {
  if (binder == name) return {binder, scope};
  std::set<std::string> scope_free = free_vars(scope);
  if (!scope_free.count(name)) return {binder, scope};
  std::set<std::string> repl_free = free_vars(repl);
  if (repl_free.count(binder)) {
    std::set<std::string> avoid = repl_free;
    avoid.insert(scope_free.begin(), scope_free.end());
    avoid.insert(name);
    std::string renamed = fresh_name(binder, avoid);
    Term new_scope = substitute(scope, binder, Term::var(renamed));
    return {renamed, substitute(new_scope, name, repl)};
  }
  return {binder, substitute(scope, name, repl)};
}

}  // namespace

Term substitute(const Term& t, const std::string& name, const Term& repl) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == name ? repl : t;
    case Term::Kind::Lam: {
      auto [binder, body] = subst_scope(t.name(), t.child(0), name, repl);
      return Term::lam(binder, t.annotation(), body);
    }
    case Term::Kind::LetRet: {
      Term bound = substitute(t.child(0), name, repl);
      auto [binder, body] = subst_scope(t.name(), t.child(1), name, repl);
      return Term::let_ret(binder, bound, body);
    }
    case Term::Kind::LetBox: {
      Term bound = substitute(t.child(0), name, repl);
      auto [binder, body] = subst_scope(t.name(), t.child(1), name, repl);
      return Term::let_box(binder, bound, body);
    }
    case Term::Kind::Case: {
      Term scrut = substitute(t.child(0), name, repl);
      auto [lb, left] = subst_scope(t.left_name(), t.child(1), name, repl);
      auto [rb, right] = subst_scope(t.right_name(), t.child(2), name, repl);
      return Term::case_of(scrut, lb, left, rb, right);
    }
    case Term::Kind::App:
      return Term::app(substitute(t.child(0), name, repl), substitute(t.child(1), name, repl));
    case Term::Kind::Pair:
      return Term::pair(substitute(t.child(0), name, repl), substitute(t.child(1), name, repl));
    case Term::Kind::Fst:
      return Term::fst(substitute(t.child(0), name, repl));
    case Term::Kind::Snd:
      return Term::snd(substitute(t.child(0), name, repl));
    case Term::Kind::Inl:
      return Term::inl(substitute(t.child(0), name, repl));
    case Term::Kind::Inr:
      return Term::inr(substitute(t.child(0), name, repl));
    case Term::Kind::If:
      return Term::if_then_else(substitute(t.child(0), name, repl),
                                substitute(t.child(1), name, repl),
                                substitute(t.child(2), name, repl));
    case Term::Kind::Ret:
      return Term::ret(substitute(t.child(0), name, repl));
    case Term::Kind::BoxI:
      return Term::box(substitute(t.child(0), name, repl));
    case Term::Kind::RetLev:
      return Term::ret_lev(t.level(), substitute(t.child(0), name, repl));
    case Term::Kind::SealI:
      return Term::seal(t.level(), substitute(t.child(0), name, repl));
    case Term::Kind::Unseal:
      return Term::unseal(t.level(), substitute(t.child(0), name, repl));
    case Term::Kind::Unit:
    case Term::Kind::TT:
    case Term::Kind::FF:
      return t;
  }
  fail("ShapeMismatch", "unreachable term kind in substitute");
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

Term rebuild(const Term& t, std::vector<Term> kids) {
  switch (t.kind()) {
    case Term::Kind::Lam:
      return Term::lam(t.name(), t.annotation(), std::move(kids[0]));
    case Term::Kind::App:
      return Term::app(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::Pair:
      return Term::pair(std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::Fst:
      return Term::fst(std::move(kids[0]));
    case Term::Kind::Snd:
      return Term::snd(std::move(kids[0]));
    case Term::Kind::Inl:
      return Term::inl(std::move(kids[0]));
    case Term::Kind::Inr:
      return Term::inr(std::move(kids[0]));
    case Term::Kind::Case:
      return Term::case_of(std::move(kids[0]), t.left_name(), std::move(kids[1]), t.right_name(),
                           std::move(kids[2]));
    case Term::Kind::If:
      return Term::if_then_else(std::move(kids[0]), std::move(kids[1]), std::move(kids[2]));
    case Term::Kind::Ret:
      return Term::ret(std::move(kids[0]));
    case Term::Kind::LetRet:
      return Term::let_ret(t.name(), std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::BoxI:
      return Term::box(std::move(kids[0]));
    case Term::Kind::LetBox:
      return Term::let_box(t.name(), std::move(kids[0]), std::move(kids[1]));
    case Term::Kind::RetLev:
      return Term::ret_lev(t.level(), std::move(kids[0]));
    case Term::Kind::SealI:
      return Term::seal(t.level(), std::move(kids[0]));
    case Term::Kind::Unseal:
      return Term::unseal(t.level(), std::move(kids[0]));
    default:
      fail("ShapeMismatch", "unreachable rebuild");
  }
}

std::optional<Term> root_redex(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::App:
      if (t.child(0).kind() == Term::Kind::Lam) {
        return substitute(t.child(0).child(0), t.child(0).name(), t.child(1));
      }
      return std::nullopt;
    case Term::Kind::Fst:
      if (t.child(0).kind() == Term::Kind::Pair) return t.child(0).child(0);
      return std::nullopt;
    case Term::Kind::Snd:
      if (t.child(0).kind() == Term::Kind::Pair) return t.child(0).child(1);
      return std::nullopt;
    case Term::Kind::Case:
      if (t.child(0).kind() == Term::Kind::Inl) {
        return substitute(t.child(1), t.left_name(), t.child(0).child(0));
      }
      if (t.child(0).kind() == Term::Kind::Inr) {
        return substitute(t.child(2), t.right_name(), t.child(0).child(0));
      }
      return std::nullopt;
    case Term::Kind::If:
      if (t.child(0).kind() == Term::Kind::TT) return t.child(1);
      if (t.child(0).kind() == Term::Kind::FF) return t.child(2);
      return std::nullopt;
    case Term::Kind::LetRet:
      if (t.child(0).kind() == Term::Kind::Ret || t.child(0).kind() == Term::Kind::RetLev) {
        return substitute(t.child(1), t.name(), t.child(0).child(0));
      }
      return std::nullopt;
    case Term::Kind::LetBox:
      if (t.child(0).kind() == Term::Kind::BoxI) {
        return substitute(t.child(1), t.name(), t.child(0).child(0));
      }
      return std::nullopt;
    case Term::Kind::Unseal:
      if (t.child(0).kind() == Term::Kind::SealI && t.child(0).level() == t.level()) {
        return t.child(0).child(0);
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<Term> reduce_step(const Term& t) {
  if (auto contractum = root_redex(t)) return contractum;
  for (std::size_t i = 0; i < t.child_count(); ++i) {
    if (auto stepped = reduce_step(t.child(i))) {
      std::vector<Term> kids;
      kids.reserve(t.child_count());
      for (std::size_t j = 0; j < t.child_count(); ++j) {
        kids.push_back(j == i ? *stepped : t.child(j));
      }
      return rebuild(t, std::move(kids));
    }
  }
  return std::nullopt;
}

Term normalize(const Term& t, std::size_t fuel) {
  Term current = t;
  std::size_t steps = 0;
  while (auto next = reduce_step(current)) {
    if (steps == fuel) throw FuelExhausted(steps);
    current = *next;
    ++steps;
  }
  return current;
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

bool alpha_eq(const Term& a, const Term& b, std::vector<std::string>& ba,
              std::vector<std::string>& bb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: {
      auto ia = std::find(ba.rbegin(), ba.rend(), a.name());
      auto ib = std::find(bb.rbegin(), bb.rend(), b.name());
      if ((ia == ba.rend()) != (ib == bb.rend())) return false;
      if (ia == ba.rend()) return a.name() == b.name();
      return (ia - ba.rbegin()) == (ib - bb.rbegin());
    }
    case Term::Kind::Lam: {
      if (a.annotation() != b.annotation()) return false;
      ba.push_back(a.name());
      bb.push_back(b.name());
      bool ok = alpha_eq(a.child(0), b.child(0), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return ok;
    }
    case Term::Kind::LetRet:
    case Term::Kind::LetBox: {
      if (!alpha_eq(a.child(0), b.child(0), ba, bb)) return false;
      ba.push_back(a.name());
      bb.push_back(b.name());
      bool ok = alpha_eq(a.child(1), b.child(1), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return ok;
    }
    case Term::Kind::Case: {
      if (!alpha_eq(a.child(0), b.child(0), ba, bb)) return false;
      ba.push_back(a.left_name());
      bb.push_back(b.left_name());
      bool ok = alpha_eq(a.child(1), b.child(1), ba, bb);
      ba.pop_back();
      bb.pop_back();
      if (!ok) return false;
      ba.push_back(a.right_name());
      bb.push_back(b.right_name());
      ok = alpha_eq(a.child(2), b.child(2), ba, bb);
      ba.pop_back();
      bb.pop_back();
      return ok;
    }
    case Term::Kind::RetLev:
    case Term::Kind::SealI:
    case Term::Kind::Unseal:
      if (a.level() != b.level()) return false;
      return alpha_eq(a.child(0), b.child(0), ba, bb);
    default: {
      if (a.child_count() != b.child_count()) return false;
      for (std::size_t i = 0; i < a.child_count(); ++i) {
        if (!alpha_eq(a.child(i), b.child(i), ba, bb)) return false;
      }
      return true;
    }
  }
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  std::vector<std::string> ba, bb;
  return alpha_eq(a, b, ba, bb);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Term precedence levels: structured forms (lambda, if, let, case) bind loosest,
// application and the keyword prefix forms sit in the middle, atoms are tightest.
constexpr int kLow = 0;
constexpr int kApp = 1;
constexpr int kAtom = 2;

void print_term_at(std::ostream& os, const Term& t, int context);

void print_prefix(std::ostream& os, const std::string& keyword, const Term& arg, int context) {
  if (kApp < context) os << "(";
  os << keyword << " ";
  print_term_at(os, arg, kAtom);
  if (kApp < context) os << ")";
}

void print_term_at(std::ostream& os, const Term& t, int context) {
  switch (t.kind()) {
    case Term::Kind::Var:
      os << t.name();
      return;
    case Term::Kind::TT:
      os << "tt";
      return;
    case Term::Kind::FF:
      os << "ff";
      return;
    case Term::Kind::Unit:
      os << "unit";
      return;
    case Term::Kind::Pair:
      os << "(";
      print_term_at(os, t.child(0), kLow);
      os << ", ";
      print_term_at(os, t.child(1), kLow);
      os << ")";
      return;
    case Term::Kind::Lam:
      if (kLow < context) os << "(";
      os << "\\" << t.name() << ":" << print_type(t.annotation()) << ". ";
      print_term_at(os, t.child(0), kLow);
      if (kLow < context) os << ")";
      return;
    case Term::Kind::App:
      if (kApp < context) os << "(";
      print_term_at(os, t.child(0), kApp);
      os << " ";
      print_term_at(os, t.child(1), kAtom);
      if (kApp < context) os << ")";
      return;
    case Term::Kind::Fst:
      print_prefix(os, "fst", t.child(0), context);
      return;
    case Term::Kind::Snd:
      print_prefix(os, "snd", t.child(0), context);
      return;
    case Term::Kind::Inl:
      print_prefix(os, "inl", t.child(0), context);
      return;
    case Term::Kind::Inr:
      print_prefix(os, "inr", t.child(0), context);
      return;
    case Term::Kind::Ret:
      print_prefix(os, "ret", t.child(0), context);
      return;
    case Term::Kind::BoxI:
      print_prefix(os, "box", t.child(0), context);
      return;
    case Term::Kind::RetLev:
      print_prefix(os, "ret[" + t.level().name() + "]", t.child(0), context);
      return;
    case Term::Kind::SealI:
      print_prefix(os, "seal[" + t.level().name() + "]", t.child(0), context);
      return;
    case Term::Kind::Unseal:
      print_prefix(os, "unseal[" + t.level().name() + "]", t.child(0), context);
      return;
    case Term::Kind::If:
      if (kLow < context) os << "(";
      os << "if ";
      print_term_at(os, t.child(0), kLow);
      os << " then ";
      print_term_at(os, t.child(1), kLow);
      os << " else ";
      print_term_at(os, t.child(2), kLow);
      if (kLow < context) os << ")";
      return;
    case Term::Kind::LetRet:
      if (kLow < context) os << "(";
      os << "let " << t.name() << " = ";
      print_term_at(os, t.child(0), kLow);
      os << " in ";
      print_term_at(os, t.child(1), kLow);
      if (kLow < context) os << ")";
      return;
    case Term::Kind::LetBox:
      if (kLow < context) os << "(";
      os << "let box " << t.name() << " = ";
      print_term_at(os, t.child(0), kLow);
      os << " in ";
      print_term_at(os, t.child(1), kLow);
      if (kLow < context) os << ")";
      return;
    case Term::Kind::Case:
      if (kLow < context) os << "(";
      os << "case ";
      print_term_at(os, t.child(0), kLow);
      os << " of inl " << t.left_name() << " => ";
      print_term_at(os, t.child(1), kLow);
      os << " | inr " << t.right_name() << " => ";
      print_term_at(os, t.child(2), kLow);
      if (kLow < context) os << ")";
      return;
  }
}

// Type precedence: arrow (right-assoc) < sum < product < modal prefixes < atoms.
constexpr int kTArrow = 0;
constexpr int kTSum = 1;
constexpr int kTProd = 2;
constexpr int kTModal = 3;

void print_type_at(std::ostream& os, const Type& t, int context) {
  switch (t.kind()) {
    case Type::Kind::Bool:
      os << "Bool";
      return;
    case Type::Kind::BoolCo:
      os << "BoolCo";
      return;
    case Type::Kind::Unit:
      os << "Unit";
      return;
    case Type::Kind::Arrow:
      if (kTArrow < context) os << "(";
      print_type_at(os, t.left(), kTSum);
      os << " -> ";
      print_type_at(os, t.right(), kTArrow);
      if (kTArrow < context) os << ")";
      return;
    case Type::Kind::Sum:
      if (kTSum < context) os << "(";
      print_type_at(os, t.left(), kTSum);
      os << " + ";
      print_type_at(os, t.right(), kTProd);
      if (kTSum < context) os << ")";
      return;
    case Type::Kind::Prod:
      if (kTProd < context) os << "(";
      print_type_at(os, t.left(), kTProd);
      os << " * ";
      print_type_at(os, t.right(), kTModal);
      if (kTProd < context) os << ")";
      return;
    case Type::Kind::Monad:
      if (kTModal < context) os << "(";
      os << "T ";
      print_type_at(os, t.inner(), kTModal);
      if (kTModal < context) os << ")";
      return;
    case Type::Kind::BoxT:
      if (kTModal < context) os << "(";
      os << "Box ";
      print_type_at(os, t.inner(), kTModal);
      if (kTModal < context) os << ")";
      return;
    case Type::Kind::LevMonad:
      if (kTModal < context) os << "(";
      os << "T[" << t.level().name() << "] ";
      print_type_at(os, t.inner(), kTModal);
      if (kTModal < context) os << ")";
      return;
    case Type::Kind::SealT:
      if (kTModal < context) os << "(";
      os << "Seal[" << t.level().name() << "] ";
      print_type_at(os, t.inner(), kTModal);
      if (kTModal < context) os << ")";
      return;
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::ostringstream os;
  print_term_at(os, t, kLow);
  return os.str();
}

std::string print_type(const Type& t) {
  std::ostringstream os;
  print_type_at(os, t, kTArrow);
  return os.str();
}

std::string Type::str() const { return print_type(*this); }
std::string Term::str() const { return print_term(*this); }

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Kind { Ident, Symbol, End };
  Kind kind;
  std::string text;
  int line;
  int col;
};

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      // terms
      "tt", "ff", "unit", "if", "then", "else", "let", "in", "case", "of",
      "fst", "snd", "inl", "inr", "ret", "box", "seal", "unseal",
      // types
      "Bool", "BoolCo", "Unit", "T", "Box", "Seal"};
  return words;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_' || text[j] == '\'')) {
        ++j;
      }
      out.push_back({Token::Kind::Ident, std::string(text.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Kind::Symbol, "->", tl, tc});
      advance(2);
      continue;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Kind::Symbol, "=>", tl, tc});
      advance(2);
      continue;
    }
    if (std::string("\\.:(),*+|=[]").find(c) != std::string::npos) {
      out.push_back({Token::Kind::Symbol, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw ParseError(tl, tc, "a token (found '" + std::string(1, c) + "')");
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Term parse_term_all() {
    Term t = term();
    expect_end();
    return t;
  }

  Type parse_type_all() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t j = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[j];
  }
  Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at_symbol(const std::string& s) const {
    return peek().kind == Token::Kind::Symbol && peek().text == s;
  }
  bool at_word(const std::string& w) const {
    return peek().kind == Token::Kind::Ident && peek().text == w;
  }
  void expect_symbol(const std::string& s) {
    if (!at_symbol(s)) throw ParseError(peek().line, peek().col, "'" + s + "'");
    next();
  }
  void expect_word(const std::string& w) {
    if (!at_word(w)) throw ParseError(peek().line, peek().col, "'" + w + "'");
    next();
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) {
      throw ParseError(peek().line, peek().col, "end of input");
    }
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Token::Kind::Ident || reserved_words().count(peek().text)) {
      throw ParseError(peek().line, peek().col, what);
    }
    return next().text;
  }
  Label bracket_label() {
    expect_symbol("[");
    if (peek().kind != Token::Kind::Ident) {
      throw ParseError(peek().line, peek().col, "a level name");
    }
    Label l{next().text};
    expect_symbol("]");
    return l;
  }
  Pos here() const { return Pos{peek().line, peek().col}; }

  // --- types ---

  Type type() {
    Type left = sum_type();
    if (at_symbol("->")) {
      next();
      return Type::arrow(left, type());
    }
    return left;
  }

  Type sum_type() {
    Type t = prod_type();
    while (at_symbol("+")) {
      next();
      t = Type::sum(t, prod_type());
    }
    return t;
  }

  Type prod_type() {
    Type t = modal_type();
    while (at_symbol("*")) {
      next();
      t = Type::prod(t, modal_type());
    }
    return t;
  }

  Type modal_type() {
    if (at_word("T")) {
      next();
      if (at_symbol("[")) {
        Label l = bracket_label();
        return Type::lev_monad(l, modal_type());
      }
      return Type::monad(modal_type());
    }
    if (at_word("Box")) {
      next();
      return Type::box(modal_type());
    }
    if (at_word("Seal")) {
      next();
      Label l = bracket_label();
      return Type::seal(l, modal_type());
    }
    return type_atom();
  }

  Type type_atom() {
    if (at_word("Bool")) {
      next();
      return Type::boolean();
    }
    if (at_word("BoolCo")) {
      next();
      return Type::boolean_co();
    }
    if (at_word("Unit")) {
      next();
      return Type::unit();
    }
    if (at_symbol("(")) {
      next();
      Type t = type();
      expect_symbol(")");
      return t;
    }
    throw ParseError(peek().line, peek().col, "a type");
  }

  // --- terms ---

  Term term() {
    Pos p = here();
    if (at_symbol("\\")) {
      next();
      std::string name = ident("a variable to bind");
      expect_symbol(":");
      Type annot = type();
      expect_symbol(".");
      return Term::lam(name, annot, term()).with_pos(p);
    }
    if (at_word("if")) {
      next();
      Term cond = term();
      expect_word("then");
      Term then_branch = term();
      expect_word("else");
      return Term::if_then_else(cond, then_branch, term()).with_pos(p);
    }
    if (at_word("let")) {
      next();
      if (at_word("box")) {
        next();
        std::string name = ident("a variable to bind");
        expect_symbol("=");
        Term bound = term();
        expect_word("in");
        return Term::let_box(name, bound, term()).with_pos(p);
      }
      std::string name = ident("a variable to bind");
      expect_symbol("=");
      Term bound = term();
      expect_word("in");
      return Term::let_ret(name, bound, term()).with_pos(p);
    }
    if (at_word("case")) {
      next();
      Term scrut = term();
      expect_word("of");
      expect_word("inl");
      std::string lname = ident("a variable to bind");
      expect_symbol("=>");
      Term left = term();
      expect_symbol("|");
      expect_word("inr");
      std::string rname = ident("a variable to bind");
      expect_symbol("=>");
      return Term::case_of(scrut, lname, left, rname, term()).with_pos(p);
    }
    return app_term();
  }

  bool starts_atom() const {
    if (at_symbol("(")) return true;
    if (peek().kind != Token::Kind::Ident) return false;
    const std::string& w = peek().text;
    if (w == "tt" || w == "ff" || w == "unit") return true;
    return !reserved_words().count(w);
  }

  Term app_term() {
    Pos p = here();
    Term head = prefix_or_atom();
    while (starts_atom()) {
      head = Term::app(head, atom()).with_pos(p);
    }
    return head;
  }

  Term prefix_or_atom() {
    Pos p = here();
    auto prefix1 = [&](Term (*make)(Term)) {
      next();
      return make(atom()).with_pos(p);
    };
    if (at_word("fst")) return prefix1(&Term::fst);
    if (at_word("snd")) return prefix1(&Term::snd);
    if (at_word("inl")) return prefix1(&Term::inl);
    if (at_word("inr")) return prefix1(&Term::inr);
    if (at_word("box")) return prefix1(&Term::box);
    if (at_word("ret")) {
      next();
      if (at_symbol("[")) {
        Label l = bracket_label();
        return Term::ret_lev(l, atom()).with_pos(p);
      }
      return Term::ret(atom()).with_pos(p);
    }
    if (at_word("seal")) {
      next();
      Label l = bracket_label();
      return Term::seal(l, atom()).with_pos(p);
    }
    if (at_word("unseal")) {
      next();
      Label l = bracket_label();
      return Term::unseal(l, atom()).with_pos(p);
    }
    return atom();
  }

  Term atom() {
    Pos p = here();
    if (at_word("tt")) {
      next();
      return Term::tt().with_pos(p);
    }
    if (at_word("ff")) {
      next();
      return Term::ff().with_pos(p);
    }
    if (at_word("unit")) {
      next();
      return Term::unit().with_pos(p);
    }
    if (at_symbol("(")) {
      next();
      Term t = term();
      if (at_symbol(",")) {
        next();
        Term s = term();
        expect_symbol(")");
        return Term::pair(t, s).with_pos(p);
      }
      expect_symbol(")");
      return t;
    }
    if (peek().kind == Token::Kind::Ident && !reserved_words().count(peek().text)) {
      return Term::var(next().text).with_pos(p);
    }
    throw ParseError(peek().line, peek().col, "a term");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Rename every binder that collides with a free name of the whole program, so that the
// parsed term's bound names are disjoint from its free names.
Term freshen_binders(const Term& t, const std::set<std::string>& free_names,
                     std::set<std::string>& used) {
  auto freshen_scope = [&](const std::string& binder, const Term& scope)
      -> std::pair<std::string, Term> {
    used.insert(binder);
    if (!free_names.count(binder)) return {binder, scope};
    std::set<std::string> avoid = free_names;
    avoid.insert(used.begin(), used.end());
    std::string renamed = fresh_name(binder, avoid);
    used.insert(renamed);
    return {renamed, substitute(scope, binder, Term::var(renamed))};
  };
  switch (t.kind()) {
    case Term::Kind::Lam: {
      auto [binder, body] = freshen_scope(t.name(), t.child(0));
      return Term::lam(binder, t.annotation(), freshen_binders(body, free_names, used))
          .with_pos(t.pos());
    }
    case Term::Kind::LetRet: {
      Term bound = freshen_binders(t.child(0), free_names, used);
      auto [binder, body] = freshen_scope(t.name(), t.child(1));
      return Term::let_ret(binder, bound, freshen_binders(body, free_names, used))
          .with_pos(t.pos());
    }
    case Term::Kind::LetBox: {
      Term bound = freshen_binders(t.child(0), free_names, used);
      auto [binder, body] = freshen_scope(t.name(), t.child(1));
      return Term::let_box(binder, bound, freshen_binders(body, free_names, used))
          .with_pos(t.pos());
    }
    case Term::Kind::Case: {
      Term scrut = freshen_binders(t.child(0), free_names, used);
      auto [lb, left] = freshen_scope(t.left_name(), t.child(1));
      left = freshen_binders(left, free_names, used);
      auto [rb, right] = freshen_scope(t.right_name(), t.child(2));
      right = freshen_binders(right, free_names, used);
      return Term::case_of(scrut, lb, left, rb, right).with_pos(t.pos());
    }
    default: {
      if (t.child_count() == 0) return t;
      std::vector<Term> kids;
      kids.reserve(t.child_count());
      for (std::size_t i = 0; i < t.child_count(); ++i) {
        kids.push_back(freshen_binders(t.child(i), free_names, used));
      }
      return rebuild(t, std::move(kids)).with_pos(t.pos());
    }
  }
}

}  // namespace

Term parse_term(std::string_view text) {
  Parser parser(lex(text));
  Term t = parser.parse_term_all();
  std::set<std::string> free_names = free_vars(t);
  std::set<std::string> used;
  return freshen_binders(t, free_names, used);
}

Type parse_type(std::string_view text) {
  Parser parser(lex(text));
  return parser.parse_type_all();
}

}  // namespace csets
