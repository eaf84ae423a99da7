#pragma once

// Seeded random generators, exhaustive law suites over small classified sets,
// closed-normal-form enumeration, and end-to-end noninterference checks. Every
// check here is exact on its instances: a suite passes only when every generated
// case satisfies the law on the nose.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csets/calculi.hpp"
#include "csets/cohesion.hpp"
#include "csets/cset.hpp"
#include "csets/syntax.hpp"

namespace csets {

// splitmix64 — deterministic across platforms, so a seed pins down every report.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::size_t below(std::size_t bound);  // uniform in [0, bound); bound > 0
  bool coin();

 private:
  std::uint64_t state_;
};

struct CheckFailure {
  std::string law;      // which law was violated
  std::string inputs;   // the generated instance, serialized
  std::string witness;  // the object or value witnessing the violation
};

enum class Verdict { Pass, Fail, Vacuous };

std::string verdict_name(Verdict v);

// Outcome of one suite run. Failures keep the first witness per law, in case
// order. A run that skipped work (enumeration cap) or ran zero cases is never
// a pass; it is vacuous at best.
struct CheckReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::string> skipped;
  double elapsed_ms = 0.0;

  Verdict verdict() const;
};

// Random set over the universe: carrier size uniform in [0, max_carrier], each
// non-diagonal ordered pair present per label with probability 1/2, then closed
// under reflexivity. Same Rng state ⟹ same set.
ClassifiedSet random_classified_set(Rng& rng, const LabelUniverse& universe,
                                    std::size_t max_carrier);

// Law suite groups:
//   bcc             universal properties of products, coproducts, equalizers,
//                   coequalizers, exponentials, terminal and initial objects
//   adjunction      the four hom-set bijections of the adjoint string
//   corollary       the structural consequences: forget . discretize = id,
//                   forget . codiscretize = id, strict idempotence, shape
//                   idempotence up to class collapse, visibility preserves
//                   products strictly, components distribute over products,
//                   injective counit / surjective shape unit
//   levelled        the mask-indexed law catalogue: commuting squares of
//                   forget/discretize/codiscretize, absorption, and the nine
//                   switch laws, over every mask pair of a 3-label universe
//   strength        the four coherence diagrams of the protection monad's
//                   strength
//   ideal           protected sets are closed under exponentiation from anywhere
//   contractibility codiscrete non-empty sets have exactly one component
CheckReport run_law_suite(const std::string& group, std::uint64_t seed, std::size_t trials,
                          std::size_t cap = kDefaultEnumerationCap);

// Constancy of cross-modality morphisms. Without `primed`: A lives over the
// mask's universe, B over its residual; every morphism Diamond A -> discretize B
// must be constant, and for non-empty A the hom-count equals |carrier(B)|. When
// the mask selects every label the dual direction (codiscretize B -> Box A) is
// checked too. With `primed`: A and B live over the full universe and every
// morphism Diamond_mask A -> Diamond_primed B must be constant, provided the
// side conditions hold (mask minus primed non-empty, A non-empty, B visible on
// the difference) — SideConditionUnmet otherwise.
CheckReport check_constancy(const ClassifiedSet& a, const ClassifiedSet& b,
                            const LevelMask& mask,
                            const std::optional<LevelMask>& primed = std::nullopt,
                            std::size_t cap = kDefaultEnumerationCap);

// All closed normal forms of AST size <= size_bound that typecheck at `a`,
// in a deterministic order (by size, then by construction rule). Complete
// within the bound: every closed normal inhabitant of that size appears.
// `observers` feeds the sealing judgement; other calculi ignore it.
std::vector<Term> enumerate_inhabitants(const SecurityPoset& poset, Calculus calculus,
                                        const Type& a, std::size_t size_bound,
                                        const std::vector<Label>& observers = {});

// One noninterference run: a program with a single secret hole, checked both
// syntactically (every inhabitant of the hole type yields the same normal form)
// and semantically (the denotation against the hole is a constant function),
// plus the agreement of the two checks. The theorem shape is validated first:
//   monadic   hole T A,        result Bool
//   dual      hole BoolCo,     result Box G
//   levelled  hole T[l] A,     result T[l'] Bool with l not below l'
//   sealing   hole Seal[l] A,  result Bool with l below no observer
// SideConditionUnmet rejects a run whose shape does not match.
struct NoninterferenceSpec {
  Calculus calculus = Calculus::Monadic;
  std::string hole_name = "h";
  Type hole_type = Type::boolean();
  Term program = Term::tt();
  Type result_type = Type::boolean();
  std::vector<Label> observers;  // sealing only
  std::size_t size_bound = 7;
  std::uint64_t seed = 42;  // recorded in the report; the checks are exhaustive
  std::size_t fuel = kDefaultFuel;
  std::size_t cap = kDefaultEnumerationCap;
};

CheckReport check_noninterference(const SecurityPoset& poset, const NoninterferenceSpec& spec);

// Soundness of the semantics on a corpus of closed, inferable terms: the
// denotation is invariant under normalization, normal forms at (modal) ground
// types are constants or modal wrappings of constants, and tt, ff denote
// distinct points.
CheckReport check_soundness(const SecurityPoset& poset, Calculus calculus,
                            const std::vector<Term>& corpus,
                            const std::vector<Label>& observers = {},
                            std::size_t fuel = kDefaultFuel);

}  // namespace csets
