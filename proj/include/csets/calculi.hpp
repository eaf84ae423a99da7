#pragma once

// Typing judgements for the four object calculi and their interpretation into
// classified sets.
//
// The four calculi share one term/type syntax (see syntax.hpp) but admit different
// fragments of it:
//
//   monadic   T A,       ret / let          (a single global computation monad)
//   dual      Box A,     box / let box      (dual-context necessity; BoolCo)
//   levelled  T[l] A,    ret[l] / let       (one monad per security level)
//   sealing   Seal[l] A, seal[l] / unseal[l] (observer-indexed judgements)

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csets/cohesion.hpp"
#include "csets/syntax.hpp"

namespace csets {

enum class Calculus { Monadic, Dual, Levelled, Sealing };

std::string calculus_name(Calculus c);
std::optional<Calculus> parse_calculus(std::string_view name);

// A finite set of security levels with a partial order, stored as its
// reflexive-transitive closure. Construction rejects cycles between distinct
// labels (CycleViolatesAntisymmetry) and generator endpoints outside the label
// set (UnknownLabel).
class SecurityPoset {
 public:
  SecurityPoset(std::vector<Label> labels, std::vector<std::pair<Label, Label>> generators);

  const LabelUniverse& labels() const { return labels_; }
  bool leq(const Label& a, const Label& b) const;  // UnknownLabel on foreign labels

  // {l' | l' <= l}, sorted.
  std::vector<Label> down_set(const Label& l) const;
  // Union of down sets of `ls` — the part of the universe some member of `ls` can read.
  std::vector<Label> down_set_of(const std::vector<Label>& ls) const;

  std::string str() const;

 private:
  LabelUniverse labels_;
  std::vector<std::vector<bool>> leq_;
};

SecurityPoset load_poset(std::vector<Label> labels,
                         std::vector<std::pair<Label, Label>> generators);
std::vector<Label> down_set(const SecurityPoset& poset, const Label& l);

// A typing judgement's left-hand side. `modal` is the second zone of the dual-context
// calculus; `observers` is the level set indexing a sealing judgement. Names must be
// unique across both zones.
struct TypingContext {
  Calculus calculus = Calculus::Monadic;
  std::vector<std::pair<std::string, Type>> ordinary;
  std::vector<std::pair<std::string, Type>> modal;
  std::vector<Label> observers;
};

// Rejects type formers outside the calculus fragment (ForeignConstruct) and levels
// outside the poset (UnknownLabel).
void validate_type(Calculus calculus, const SecurityPoset& poset, const Type& a);

// Infers the unique type of `m`, or throws:
//   UnboundVariable, TypeMismatch, ForeignConstruct, UnknownLabel,
//   NotInferable        (a bare injection needs an expected type),
//   ModalViolation      (dual: ordinary-zone variable used under box),
//   NotCodiscrete       (dual: BoolCo conditional at a non-codiscrete result type),
//   NotProtected        (levelled: let eliminating T[l] at an unprotected type),
//   UnsealNotPermitted  (sealing: unseal[l] where l is below no observer).
Type typecheck(const SecurityPoset& poset, const TypingContext& ctx, const Term& m);

// Checking mode: like typecheck but against an expected type, which also accepts
// terms that only check (injections, and tt/ff at BoolCo in the dual calculus).
void check_type(const SecurityPoset& poset, const TypingContext& ctx, const Term& m,
                const Type& expected);

// Protection of a levelled type at a level: T[l'] A is protected at l when l <= l'
// or A is already protected; products of protected types and arrows into protected
// types are protected; nothing else is.
bool is_protected_type(const Type& a, const Label& at, const SecurityPoset& poset);

// Codiscreteness of a dual-calculus type: Unit and BoolCo are codiscrete; products
// of codiscrete types and arrows into codiscrete types are codiscrete; nothing else is.
bool is_codiscrete_type(const Type& a);

// Interpretation environment: all denotations are classified sets over the poset's
// label universe.
struct DenEnv {
  SecurityPoset poset;
};

// Bool -> discrete booleans; BoolCo -> codiscrete booleans; Unit -> terminal;
// * + -> carry the categorical structure; T / Box -> full-universe redaction /
// discretization; T[l] and Seal[l] -> redaction at the down set of l.
ClassifiedSet denote_type(const DenEnv& env, Calculus calculus, const Type& a);

// The domain object of a judgement in `ctx`: a right-nested product of the entry
// denotations ending in the terminal object. The dual calculus discretizes its modal
// zone as a whole; sealing discretizes each entry at the observers' down set.
ClassifiedSet denote_context(const DenEnv& env, const TypingContext& ctx);

// The morphism denoted by ctx |- m : a. The mapping is computed by structural
// evaluation of the erasure of m (modal constructors are identities on elements);
// the result is validated as a morphism at the classified types, so a violation
// there (SemanticSoundnessViolation) means the interpretation broke soundness.
// Throws IllTyped when m does not check at `a` in `ctx`.
CSetMorphism denote_term(const DenEnv& env, const TypingContext& ctx, const Term& m,
                         const Type& a);

}  // namespace csets
