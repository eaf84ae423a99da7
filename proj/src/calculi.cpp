#include "csets/calculi.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace csets {

// ---------------------------------------------------------------------------
// Calculus names

std::string calculus_name(Calculus c) {
  switch (c) {
    case Calculus::Monadic: return "monadic";
    case Calculus::Dual: return "dual";
    case Calculus::Levelled: return "levelled";
    case Calculus::Sealing: return "sealing";
  }
  fail("ShapeMismatch", "unreachable calculus");
}

std::optional<Calculus> parse_calculus(std::string_view name) {
  if (name == "monadic" || name == "mon") return Calculus::Monadic;
  if (name == "dual" || name == "dp") return Calculus::Dual;
  if (name == "levelled" || name == "dcc") return Calculus::Levelled;
  if (name == "sealing" || name == "seal") return Calculus::Sealing;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SecurityPoset

SecurityPoset::SecurityPoset(std::vector<Label> labels,
                             std::vector<std::pair<Label, Label>> generators)
    : labels_(std::move(labels)) {
  if (labels_.size() == 0) fail("EmptyPoset", "a security poset needs at least one label");
  std::size_t n = labels_.size();
  leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
  for (const auto& [lo, hi] : generators) {
    auto i = labels_.index_of(lo);
    auto j = labels_.index_of(hi);
    if (!i) fail("UnknownLabel", "'" + lo.name() + "' is not in the poset");
    if (!j) fail("UnknownLabel", "'" + hi.name() + "' is not in the poset");
    leq_[*i][*j] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!leq_[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (leq_[k][j]) leq_[i][j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (leq_[i][j] && leq_[j][i]) {
        fail("CycleViolatesAntisymmetry", "'" + labels_.labels()[i].name() + "' and '" +
                                              labels_.labels()[j].name() +
                                              "' are below each other");
      }
    }
  }
}

bool SecurityPoset::leq(const Label& a, const Label& b) const {
  auto i = labels_.index_of(a);
  auto j = labels_.index_of(b);
  if (!i) fail("UnknownLabel", "'" + a.name() + "' is not in the poset");
  if (!j) fail("UnknownLabel", "'" + b.name() + "' is not in the poset");
  return leq_[*i][*j];
}

std::vector<Label> SecurityPoset::down_set(const Label& l) const {
  auto j = labels_.index_of(l);
  if (!j) fail("UnknownLabel", "'" + l.name() + "' is not in the poset");
  std::vector<Label> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (leq_[i][*j]) out.push_back(labels_.labels()[i]);
  }
  return out;
}

std::vector<Label> SecurityPoset::down_set_of(const std::vector<Label>& ls) const {
  std::set<Label> acc;
  for (const Label& l : ls) {
    for (Label& m : down_set(l)) acc.insert(std::move(m));
  }
  return std::vector<Label>(acc.begin(), acc.end());
}

std::string SecurityPoset::str() const {
  std::ostringstream os;
  os << labels_.str() << " with";
  bool any = false;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = 0; j < labels_.size(); ++j) {
      if (i != j && leq_[i][j]) {
        os << (any ? ", " : " ") << labels_.labels()[i].name() << " <= "
           << labels_.labels()[j].name();
        any = true;
      }
    }
  }
  if (!any) os << " no order";
  return os.str();
}

SecurityPoset load_poset(std::vector<Label> labels,
                         std::vector<std::pair<Label, Label>> generators) {
  return SecurityPoset(std::move(labels), std::move(generators));
}

std::vector<Label> down_set(const SecurityPoset& poset, const Label& l) {
  return poset.down_set(l);
}

// ---------------------------------------------------------------------------
// Type fragments

void validate_type(Calculus calculus, const SecurityPoset& poset, const Type& a) {
  auto require_label = [&](const Label& l) {
    if (!poset.labels().index_of(l)) {
      fail("UnknownLabel", "'" + l.name() + "' is not in the poset");
    }
  };
  switch (a.kind()) {
    case Type::Kind::Bool:
    case Type::Kind::Unit:
      return;
    case Type::Kind::BoolCo:
      if (calculus != Calculus::Dual) {
        fail("ForeignConstruct", "BoolCo belongs to the dual-context calculus");
      }
      return;
    case Type::Kind::Prod:
    case Type::Kind::Sum:
    case Type::Kind::Arrow:
      validate_type(calculus, poset, a.left());
      validate_type(calculus, poset, a.right());
      return;
    case Type::Kind::Monad:
      if (calculus != Calculus::Monadic) {
        fail("ForeignConstruct", "T belongs to the monadic calculus");
      }
      validate_type(calculus, poset, a.inner());
      return;
    case Type::Kind::BoxT:
      if (calculus != Calculus::Dual) {
        fail("ForeignConstruct", "Box belongs to the dual-context calculus");
      }
      validate_type(calculus, poset, a.inner());
      return;
    case Type::Kind::LevMonad:
      if (calculus != Calculus::Levelled) {
        fail("ForeignConstruct", "T[l] belongs to the levelled calculus");
      }
      require_label(a.level());
      validate_type(calculus, poset, a.inner());
      return;
    case Type::Kind::SealT:
      if (calculus != Calculus::Sealing) {
        fail("ForeignConstruct", "Seal[l] belongs to the sealing calculus");
      }
      require_label(a.level());
      validate_type(calculus, poset, a.inner());
      return;
  }
}

bool is_protected_type(const Type& a, const Label& at, const SecurityPoset& poset) {
  switch (a.kind()) {
    case Type::Kind::LevMonad:
      return poset.leq(at, a.level()) || is_protected_type(a.inner(), at, poset);
    case Type::Kind::Prod:
      return is_protected_type(a.left(), at, poset) && is_protected_type(a.right(), at, poset);
    case Type::Kind::Arrow:
      return is_protected_type(a.right(), at, poset);
    default:
      return false;
  }
}

bool is_codiscrete_type(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::BoolCo:
      return true;
    case Type::Kind::Prod:
      return is_codiscrete_type(a.left()) && is_codiscrete_type(a.right());
    case Type::Kind::Arrow:
      return is_codiscrete_type(a.right());
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Typechecking

namespace {

std::string at(const Term& m) {
  Pos p = m.pos();
  if (p.line <= 0) return "";
  return " (line " + std::to_string(p.line) + ", column " + std::to_string(p.col) + ")";
}

struct Binding {
  std::string name;
  Type type;
  bool modal_zone;
  bool hidden;
};

class Checker {
 public:
  Checker(const SecurityPoset& poset, const TypingContext& ctx)
      : poset_(poset), calculus_(ctx.calculus), observers_(ctx.observers) {
    if (calculus_ != Calculus::Dual && !ctx.modal.empty()) {
      fail("MalformedContext", "a modal zone only appears in dual-context judgements");
    }
    if (calculus_ != Calculus::Sealing && !ctx.observers.empty()) {
      fail("MalformedContext", "an observer set only appears in sealing judgements");
    }
    std::set<std::string> seen;
    auto admit = [&](const std::pair<std::string, Type>& entry, bool modal_zone) {
      if (!seen.insert(entry.first).second) {
        fail("MalformedContext", "duplicate context name '" + entry.first + "'");
      }
      validate_type(calculus_, poset_, entry.second);
      env_.push_back({entry.first, entry.second, modal_zone, false});
    };
    for (const auto& entry : ctx.modal) admit(entry, true);
    for (const auto& entry : ctx.ordinary) admit(entry, false);
    for (const Label& l : observers_) {
      if (!poset_.labels().index_of(l)) {
        fail("UnknownLabel", "observer '" + l.name() + "' is not in the poset");
      }
    }
  }

  Type infer(const Term& m) {
    switch (m.kind()) {
      case Term::Kind::Var: {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
          if (it->name == m.name()) {
            if (it->hidden) {
              fail("ModalViolation",
                   "ordinary variable '" + m.name() + "' used under box" + at(m));
            }
            return it->type;
          }
        }
        fail("UnboundVariable", "'" + m.name() + "'" + at(m));
      }
      case Term::Kind::Lam: {
        validate_type(calculus_, poset_, m.annotation());
        push(m.name(), m.annotation(), false);
        Type body = infer(m.child(0));
        pop();
        return Type::arrow(m.annotation(), body);
      }
      case Term::Kind::App: {
        Type fn = infer(m.child(0));
        if (fn.kind() != Type::Kind::Arrow) {
          fail("TypeMismatch", "expected a function type, got " + fn.str() + at(m.child(0)));
        }
        check(m.child(1), fn.left());
        return fn.right();
      }
      case Term::Kind::Pair:
        return Type::prod(infer(m.child(0)), infer(m.child(1)));
      case Term::Kind::Fst: {
        Type p = infer(m.child(0));
        if (p.kind() != Type::Kind::Prod) {
          fail("TypeMismatch", "expected a product type, got " + p.str() + at(m.child(0)));
        }
        return p.left();
      }
      case Term::Kind::Snd: {
        Type p = infer(m.child(0));
        if (p.kind() != Type::Kind::Prod) {
          fail("TypeMismatch", "expected a product type, got " + p.str() + at(m.child(0)));
        }
        return p.right();
      }
      case Term::Kind::Inl:
      case Term::Kind::Inr:
        fail("NotInferable", "a sum injection needs an expected type" + at(m));
      case Term::Kind::Case: {
        Type s = infer(m.child(0));
        if (s.kind() != Type::Kind::Sum) {
          fail("TypeMismatch", "expected a sum type, got " + s.str() + at(m.child(0)));
        }
        std::optional<Type> result = infer_under(m.left_name(), s.left(), m.child(1));
        if (result) {
          check_under(m.right_name(), s.right(), m.child(2), *result);
          return *result;
        }
        push(m.right_name(), s.right(), false);
        Type from_right = infer(m.child(2));
        pop();
        check_under(m.left_name(), s.left(), m.child(1), from_right);
        return from_right;
      }
      case Term::Kind::Unit:
        return Type::unit();
      case Term::Kind::TT:
      case Term::Kind::FF:
        return Type::boolean();
      case Term::Kind::If: {
        bool codiscrete_scrutinee = infer_condition(m.child(0));
        std::optional<Type> result;
        try {
          result = infer(m.child(1));
        } catch (const Error& e) {
          if (e.kind() != "NotInferable") throw;
        }
        if (result) {
          check(m.child(2), *result);
        } else {
          result = infer(m.child(2));
          check(m.child(1), *result);
        }
        if (codiscrete_scrutinee && !is_codiscrete_type(*result)) {
          fail("NotCodiscrete",
               "conditional on BoolCo at non-codiscrete type " + result->str() + at(m));
        }
        return *result;
      }
      case Term::Kind::Ret: {
        if (calculus_ != Calculus::Monadic) {
          fail("ForeignConstruct", "'ret' belongs to the monadic calculus" + at(m));
        }
        return Type::monad(infer(m.child(0)));
      }
      case Term::Kind::RetLev: {
        if (calculus_ != Calculus::Levelled) {
          fail("ForeignConstruct", "'ret[l]' belongs to the levelled calculus" + at(m));
        }
        require_label(m.level());
        return Type::lev_monad(m.level(), infer(m.child(0)));
      }
      case Term::Kind::LetRet: {
        if (calculus_ == Calculus::Monadic) {
          Type s = infer(m.child(0));
          if (s.kind() != Type::Kind::Monad) {
            fail("TypeMismatch",
                 "expected a computation type T A, got " + s.str() + at(m.child(0)));
          }
          push(m.name(), s.inner(), false);
          Type body = infer(m.child(1));
          pop();
          if (body.kind() != Type::Kind::Monad) {
            fail("TypeMismatch", "the body of a monadic let must be a computation, got " +
                                     body.str() + at(m.child(1)));
          }
          return body;
        }
        if (calculus_ == Calculus::Levelled) {
          Type s = infer(m.child(0));
          if (s.kind() != Type::Kind::LevMonad) {
            fail("TypeMismatch",
                 "expected a computation type T[l] A, got " + s.str() + at(m.child(0)));
          }
          push(m.name(), s.inner(), false);
          Type body = infer(m.child(1));
          pop();
          if (!is_protected_type(body, s.level(), poset_)) {
            fail("NotProtected",
                 body.str() + " is not protected at " + s.level().name() + at(m));
          }
          return body;
        }
        fail("ForeignConstruct",
             "computation 'let' belongs to the monadic or levelled calculus" + at(m));
      }
      case Term::Kind::BoxI: {
        if (calculus_ != Calculus::Dual) {
          fail("ForeignConstruct", "'box' belongs to the dual-context calculus" + at(m));
        }
        auto hidden = hide_ordinary();
        Type a = infer(m.child(0));
        restore(hidden);
        return Type::box(a);
      }
      case Term::Kind::LetBox: {
        if (calculus_ != Calculus::Dual) {
          fail("ForeignConstruct", "'let box' belongs to the dual-context calculus" + at(m));
        }
        Type s = infer(m.child(0));
        if (s.kind() != Type::Kind::BoxT) {
          fail("TypeMismatch", "expected a boxed type, got " + s.str() + at(m.child(0)));
        }
        push(m.name(), s.inner(), true);
        Type body = infer(m.child(1));
        pop();
        return body;
      }
      case Term::Kind::SealI: {
        if (calculus_ != Calculus::Sealing) {
          fail("ForeignConstruct", "'seal' belongs to the sealing calculus" + at(m));
        }
        require_label(m.level());
        bool added = push_observer(m.level());
        Type a = infer(m.child(0));
        pop_observer(added);
        return Type::seal(m.level(), a);
      }
      case Term::Kind::Unseal: {
        if (calculus_ != Calculus::Sealing) {
          fail("ForeignConstruct", "'unseal' belongs to the sealing calculus" + at(m));
        }
        require_label(m.level());
        if (!unseal_permitted(m.level())) {
          fail("UnsealNotPermitted",
               "level " + m.level().name() + " is below no observer" + at(m));
        }
        Type s = infer(m.child(0));
        if (s.kind() != Type::Kind::SealT) {
          fail("TypeMismatch", "expected a sealed type, got " + s.str() + at(m.child(0)));
        }
        if (s.level() != m.level()) {
          fail("TypeMismatch", "unseal[" + m.level().name() + "] applied to " + s.str() + at(m));
        }
        return s.inner();
      }
    }
    fail("ShapeMismatch", "unreachable term kind");
  }

  void check(const Term& m, const Type& expected) {
    switch (m.kind()) {
      case Term::Kind::Inl: {
        if (expected.kind() != Type::Kind::Sum) {
          fail("TypeMismatch", "injection at non-sum type " + expected.str() + at(m));
        }
        check(m.child(0), expected.left());
        return;
      }
      case Term::Kind::Inr: {
        if (expected.kind() != Type::Kind::Sum) {
          fail("TypeMismatch", "injection at non-sum type " + expected.str() + at(m));
        }
        check(m.child(0), expected.right());
        return;
      }
      case Term::Kind::TT:
      case Term::Kind::FF:
        if (calculus_ == Calculus::Dual && expected.kind() == Type::Kind::BoolCo) return;
        break;
      case Term::Kind::Lam: {
        if (expected.kind() != Type::Kind::Arrow) break;
        validate_type(calculus_, poset_, m.annotation());
        if (m.annotation() != expected.left()) {
          fail("TypeMismatch", "lambda argument annotated " + m.annotation().str() +
                                   " where " + expected.left().str() + " is expected" + at(m));
        }
        push(m.name(), m.annotation(), false);
        check(m.child(0), expected.right());
        pop();
        return;
      }
      case Term::Kind::Pair: {
        if (expected.kind() != Type::Kind::Prod) break;
        check(m.child(0), expected.left());
        check(m.child(1), expected.right());
        return;
      }
      case Term::Kind::If: {
        bool codiscrete_scrutinee = infer_condition(m.child(0));
        if (codiscrete_scrutinee && !is_codiscrete_type(expected)) {
          fail("NotCodiscrete",
               "conditional on BoolCo at non-codiscrete type " + expected.str() + at(m));
        }
        check(m.child(1), expected);
        check(m.child(2), expected);
        return;
      }
      case Term::Kind::Case: {
        Type s = infer(m.child(0));
        if (s.kind() != Type::Kind::Sum) {
          fail("TypeMismatch", "expected a sum type, got " + s.str() + at(m.child(0)));
        }
        check_under(m.left_name(), s.left(), m.child(1), expected);
        check_under(m.right_name(), s.right(), m.child(2), expected);
        return;
      }
      case Term::Kind::Ret:
        if (calculus_ == Calculus::Monadic && expected.kind() == Type::Kind::Monad) {
          check(m.child(0), expected.inner());
          return;
        }
        break;
      case Term::Kind::RetLev:
        if (calculus_ == Calculus::Levelled && expected.kind() == Type::Kind::LevMonad &&
            expected.level() == m.level()) {
          check(m.child(0), expected.inner());
          return;
        }
        break;
      case Term::Kind::LetRet: {
        if (calculus_ == Calculus::Monadic) {
          Type s = infer(m.child(0));
          if (s.kind() != Type::Kind::Monad) {
            fail("TypeMismatch",
                 "expected a computation type T A, got " + s.str() + at(m.child(0)));
          }
          if (expected.kind() != Type::Kind::Monad) {
            fail("TypeMismatch", "the body of a monadic let must be a computation, got " +
                                     expected.str() + at(m));
          }
          check_under(m.name(), s.inner(), m.child(1), expected);
          return;
        }
        if (calculus_ == Calculus::Levelled) {
          Type s = infer(m.child(0));
          if (s.kind() != Type::Kind::LevMonad) {
            fail("TypeMismatch",
                 "expected a computation type T[l] A, got " + s.str() + at(m.child(0)));
          }
          if (!is_protected_type(expected, s.level(), poset_)) {
            fail("NotProtected",
                 expected.str() + " is not protected at " + s.level().name() + at(m));
          }
          check_under(m.name(), s.inner(), m.child(1), expected);
          return;
        }
        fail("ForeignConstruct",
             "computation 'let' belongs to the monadic or levelled calculus" + at(m));
      }
      case Term::Kind::BoxI:
        if (calculus_ == Calculus::Dual && expected.kind() == Type::Kind::BoxT) {
          auto hidden = hide_ordinary();
          check(m.child(0), expected.inner());
          restore(hidden);
          return;
        }
        break;
      case Term::Kind::LetBox: {
        if (calculus_ != Calculus::Dual) {
          fail("ForeignConstruct", "'let box' belongs to the dual-context calculus" + at(m));
        }
        Type s = infer(m.child(0));
        if (s.kind() != Type::Kind::BoxT) {
          fail("TypeMismatch", "expected a boxed type, got " + s.str() + at(m.child(0)));
        }
        push(m.name(), s.inner(), true);
        check(m.child(1), expected);
        pop();
        return;
      }
      case Term::Kind::SealI:
        if (calculus_ == Calculus::Sealing && expected.kind() == Type::Kind::SealT &&
            expected.level() == m.level()) {
          require_label(m.level());
          bool added = push_observer(m.level());
          check(m.child(0), expected.inner());
          pop_observer(added);
          return;
        }
        break;
      default:
        break;
    }
    Type got = infer(m);
    if (got != expected) {
      fail("TypeMismatch", "expected " + expected.str() + ", got " + got.str() + at(m));
    }
  }

 private:
  void push(const std::string& name, const Type& type, bool modal_zone) {
    env_.push_back({name, type, modal_zone, false});
  }
  void pop() { env_.pop_back(); }

  std::optional<Type> infer_under(const std::string& name, const Type& type, const Term& body) {
    push(name, type, false);
    std::optional<Type> result;
    try {
      result = infer(body);
    } catch (const Error& e) {
      pop();
      if (e.kind() != "NotInferable") throw;
      return std::nullopt;
    }
    pop();
    return result;
  }

  void check_under(const std::string& name, const Type& type, const Term& body,
                   const Type& expected) {
    push(name, type, false);
    try {
      check(body, expected);
    } catch (...) {
      pop();
      throw;
    }
    pop();
  }

  // Scrutinee of a conditional; true when it is the codiscrete booleans.
  bool infer_condition(const Term& cond) {
    Type c = infer(cond);
    if (c.kind() == Type::Kind::Bool) return false;
    if (c.kind() == Type::Kind::BoolCo && calculus_ == Calculus::Dual) return true;
    std::string wanted =
        calculus_ == Calculus::Dual ? "Bool or BoolCo" : std::string("Bool");
    fail("TypeMismatch", "expected " + wanted + ", got " + c.str() + at(cond));
  }

  std::vector<bool> hide_ordinary() {
    std::vector<bool> saved(env_.size());
    for (std::size_t i = 0; i < env_.size(); ++i) {
      saved[i] = env_[i].hidden;
      if (!env_[i].modal_zone) env_[i].hidden = true;
    }
    return saved;
  }
  void restore(const std::vector<bool>& saved) {
    for (std::size_t i = 0; i < saved.size(); ++i) env_[i].hidden = saved[i];
  }

  bool push_observer(const Label& l) {
    if (std::find(observers_.begin(), observers_.end(), l) != observers_.end()) return false;
    observers_.push_back(l);
    return true;
  }
  void pop_observer(bool added) {
    if (added) observers_.pop_back();
  }
  bool unseal_permitted(const Label& l) const {
    return std::any_of(observers_.begin(), observers_.end(),
                       [&](const Label& o) { return poset_.leq(l, o); });
  }

  void require_label(const Label& l) const {
    if (!poset_.labels().index_of(l)) {
      fail("UnknownLabel", "'" + l.name() + "' is not in the poset");
    }
  }

  const SecurityPoset& poset_;
  Calculus calculus_;
  std::vector<Label> observers_;
  std::vector<Binding> env_;
};

}  // namespace

Type typecheck(const SecurityPoset& poset, const TypingContext& ctx, const Term& m) {
  Checker checker(poset, ctx);
  return checker.infer(m);
}

void check_type(const SecurityPoset& poset, const TypingContext& ctx, const Term& m,
                const Type& expected) {
  validate_type(ctx.calculus, poset, expected);
  Checker checker(poset, ctx);
  checker.check(m, expected);
}

// ---------------------------------------------------------------------------
// Denotation

ClassifiedSet denote_type(const DenEnv& env, Calculus calculus, const Type& a) {
  validate_type(calculus, env.poset, a);
  const LabelUniverse& u = env.poset.labels();
  switch (a.kind()) {
    case Type::Kind::Bool:
      return discrete_booleans(u);
    case Type::Kind::BoolCo:
      return codiscrete_booleans(u);
    case Type::Kind::Unit:
      return terminal(u);
    case Type::Kind::Prod:
      return product(denote_type(env, calculus, a.left()), denote_type(env, calculus, a.right()))
          .object;
    case Type::Kind::Sum:
      return coproduct(denote_type(env, calculus, a.left()),
                       denote_type(env, calculus, a.right()))
          .object;
    case Type::Kind::Arrow:
      return exponential(denote_type(env, calculus, a.left()),
                         denote_type(env, calculus, a.right()))
          .object;
    case Type::Kind::Monad:
      return modality_object(ModalityKind::Diamond, LevelMask::all(u),
                             denote_type(env, calculus, a.inner()));
    case Type::Kind::BoxT:
      return modality_object(ModalityKind::Box, LevelMask::all(u),
                             denote_type(env, calculus, a.inner()));
    case Type::Kind::LevMonad:
    case Type::Kind::SealT: {
      LevelMask mask(u, env.poset.down_set(a.level()));
      return modality_object(ModalityKind::Diamond, mask, denote_type(env, calculus, a.inner()));
    }
  }
  fail("ShapeMismatch", "unreachable type kind");
}

namespace {

ClassifiedSet denote_zone(const DenEnv& env, Calculus calculus,
                          const std::vector<std::pair<std::string, Type>>& entries,
                          const std::optional<LevelMask>& entry_mask) {
  const LabelUniverse& u = env.poset.labels();
  ClassifiedSet acc = terminal(u);
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    ClassifiedSet component = denote_type(env, calculus, it->second);
    if (entry_mask) component = modality_object(ModalityKind::Box, *entry_mask, component);
    acc = product(component, acc).object;
  }
  return acc;
}

}  // namespace

ClassifiedSet denote_context(const DenEnv& env, const TypingContext& ctx) {
  const LabelUniverse& u = env.poset.labels();
  switch (ctx.calculus) {
    case Calculus::Monadic:
    case Calculus::Levelled:
      return denote_zone(env, ctx.calculus, ctx.ordinary, std::nullopt);
    case Calculus::Dual: {
      ClassifiedSet modal_part = modality_object(
          ModalityKind::Box, LevelMask::all(u),
          denote_zone(env, ctx.calculus, ctx.modal, std::nullopt));
      ClassifiedSet ordinary_part = denote_zone(env, ctx.calculus, ctx.ordinary, std::nullopt);
      return product(modal_part, ordinary_part).object;
    }
    case Calculus::Sealing: {
      LevelMask mask(u, env.poset.down_set_of(ctx.observers));
      return denote_zone(env, ctx.calculus, ctx.ordinary, mask);
    }
  }
  fail("ShapeMismatch", "unreachable calculus");
}

namespace {

using Bindings = std::map<std::string, Elem>;

void bind_zone(const std::vector<std::pair<std::string, Type>>& entries, const Elem& e,
               Bindings& out) {
  const Elem* cur = &e;
  for (const auto& [name, type] : entries) {
    (void)type;
    out.insert_or_assign(name, cur->first());
    cur = &cur->second();
  }
}

Elem eval_term(const DenEnv& env, Calculus calc, const Term& m, const Bindings& binding) {
  switch (m.kind()) {
    case Term::Kind::Var: {
      auto it = binding.find(m.name());
      if (it == binding.end()) {
        fail("UnboundVariable", "'" + m.name() + "' during evaluation");
      }
      return it->second;
    }
    case Term::Kind::Lam: {
      ClassifiedSet dom = denote_type(env, calc, m.annotation());
      std::vector<std::pair<Elem, Elem>> rows;
      rows.reserve(dom.size());
      for (const Elem& a : dom.carrier()) {
        Bindings inner = binding;
        inner.insert_or_assign(m.name(), a);
        rows.emplace_back(a, eval_term(env, calc, m.child(0), inner));
      }
      return Elem::fun(std::move(rows));
    }
    case Term::Kind::App:
      return eval_term(env, calc, m.child(0), binding)
          .apply(eval_term(env, calc, m.child(1), binding));
    case Term::Kind::Pair:
      return Elem::pair(eval_term(env, calc, m.child(0), binding),
                        eval_term(env, calc, m.child(1), binding));
    case Term::Kind::Fst:
      return eval_term(env, calc, m.child(0), binding).first();
    case Term::Kind::Snd:
      return eval_term(env, calc, m.child(0), binding).second();
    case Term::Kind::Inl:
      return Elem::inl(eval_term(env, calc, m.child(0), binding));
    case Term::Kind::Inr:
      return Elem::inr(eval_term(env, calc, m.child(0), binding));
    case Term::Kind::Case: {
      Elem s = eval_term(env, calc, m.child(0), binding);
      Bindings inner = binding;
      if (s.kind() == Elem::Kind::Inl) {
        inner.insert_or_assign(m.left_name(), s.inner());
        return eval_term(env, calc, m.child(1), inner);
      }
      if (s.kind() == Elem::Kind::Inr) {
        inner.insert_or_assign(m.right_name(), s.inner());
        return eval_term(env, calc, m.child(2), inner);
      }
      fail("ShapeMismatch", "case scrutinee evaluated to a non-sum element " + s.str());
    }
    case Term::Kind::Unit:
      return Elem::star();
    case Term::Kind::TT:
      return bool_tt();
    case Term::Kind::FF:
      return bool_ff();
    case Term::Kind::If: {
      Elem c = eval_term(env, calc, m.child(0), binding);
      if (c == bool_tt()) return eval_term(env, calc, m.child(1), binding);
      if (c == bool_ff()) return eval_term(env, calc, m.child(2), binding);
      fail("ShapeMismatch", "conditional scrutinee evaluated to a non-boolean " + c.str());
    }
    // Modal constructors are identities on elements: the modalities are
    // carrier-preserving, so only the typed endpoints change.
    case Term::Kind::Ret:
    case Term::Kind::RetLev:
    case Term::Kind::BoxI:
    case Term::Kind::SealI:
    case Term::Kind::Unseal:
      return eval_term(env, calc, m.child(0), binding);
    case Term::Kind::LetRet:
    case Term::Kind::LetBox: {
      Elem bound = eval_term(env, calc, m.child(0), binding);
      Bindings inner = binding;
      inner.insert_or_assign(m.name(), bound);
      return eval_term(env, calc, m.child(1), inner);
    }
  }
  fail("ShapeMismatch", "unreachable term kind in evaluation");
}

}  // namespace

CSetMorphism denote_term(const DenEnv& env, const TypingContext& ctx, const Term& m,
                         const Type& a) {
  try {
    check_type(env.poset, ctx, m, a);
  } catch (const Error& e) {
    fail("IllTyped", e.what());
  }
  ClassifiedSet dom = denote_context(env, ctx);
  ClassifiedSet cod = denote_type(env, ctx.calculus, a);
  std::vector<ElemPair> graph;
  graph.reserve(dom.size());
  for (const Elem& d : dom.carrier()) {
    Bindings binding;
    if (ctx.calculus == Calculus::Dual) {
      bind_zone(ctx.modal, d.first(), binding);
      bind_zone(ctx.ordinary, d.second(), binding);
    } else {
      bind_zone(ctx.ordinary, d, binding);
    }
    graph.emplace_back(d, eval_term(env, ctx.calculus, m, binding));
  }
  try {
    return construct_morphism(dom, cod, std::move(graph));
  } catch (const Error& e) {
    if (e.kind() == "NotAMorphism" || e.kind() == "NotInTarget") {
      fail("SemanticSoundnessViolation", e.what());
    }
    throw;
  }
}

}  // namespace csets
