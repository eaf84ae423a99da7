#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csets/elem.hpp"
#include "csets/errors.hpp"

namespace csets {

// A security level. Names are restricted to identifier tokens so that labels round-trip
// through the surface syntax and JSON formats unchanged.
class Label {
 public:
  explicit Label(std::string name);
  const std::string& name() const { return name_; }

  friend bool operator==(const Label& a, const Label& b) { return a.name_ == b.name_; }
  friend bool operator!=(const Label& a, const Label& b) { return a.name_ != b.name_; }
  friend bool operator<(const Label& a, const Label& b) { return a.name_ < b.name_; }

 private:
  std::string name_;
};

// The (finite) set of levels a classified set is indexed by. Stored sorted — the
// lexicographic order of names is the canonical order used for every per-label loop.
class LabelUniverse {
 public:
  LabelUniverse() = default;
  explicit LabelUniverse(std::vector<Label> labels);

  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  bool contains(const Label& l) const;
  std::optional<std::size_t> index_of(const Label& l) const;

  // The sub-universe with `removed` taken out. Every removed label must be present.
  LabelUniverse without(const std::vector<Label>& removed) const;

  friend bool operator==(const LabelUniverse& a, const LabelUniverse& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const LabelUniverse& a, const LabelUniverse& b) {
    return !(a == b);
  }

  std::string str() const;

 private:
  std::vector<Label> labels_;
};

using ElemPair = std::pair<Elem, Elem>;
// A relation is kept as a sorted, duplicate-free pair list; reflexivity is an invariant.
using Relation = std::vector<ElemPair>;

// A finite set equipped with one reflexive relation per label. Immutable value type
// with shared storage; equality is structural (universe, carrier, all relations).
class ClassifiedSet {
 public:
  const LabelUniverse& universe() const;
  const std::vector<Elem>& carrier() const;
  std::size_t size() const { return carrier().size(); }
  bool empty() const { return carrier().empty(); }
  bool contains(const Elem& e) const;

  const Relation& relation(const Label& l) const;       // throws UnknownLabel
  const Relation& relation_at(std::size_t index) const; // index into universe order
  bool related(std::size_t label_index, const Elem& x, const Elem& y) const;
  bool related(const Label& l, const Elem& x, const Elem& y) const;

  friend bool operator==(const ClassifiedSet& a, const ClassifiedSet& b);
  friend bool operator!=(const ClassifiedSet& a, const ClassifiedSet& b) { return !(a == b); }

  std::string str() const;

 private:
  struct Rep {
    LabelUniverse universe;
    std::vector<Elem> carrier;            // sorted, duplicate-free
    std::vector<Relation> relations;      // one per label, universe order
  };
  std::shared_ptr<const Rep> rep_;

  explicit ClassifiedSet(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  friend ClassifiedSet construct_set(const LabelUniverse&, std::vector<Elem>,
                                     const std::map<Label, Relation>&);
};

// The one gate through which every set is built. Sorts and validates the carrier
// (DuplicateElement), validates relation labels (UnknownLabel) and endpoints
// (RelationOutOfCarrier), and silently closes each relation under reflexivity.
ClassifiedSet construct_set(const LabelUniverse& universe, std::vector<Elem> carrier,
                            const std::map<Label, Relation>& relations = {});

// A relation-preserving function between two classified sets over the same universe.
// The graph is the canonical representation: sorted by source element, total.
class CSetMorphism {
 public:
  CSetMorphism() = delete;

  const ClassifiedSet& source() const { return source_; }
  const ClassifiedSet& target() const { return target_; }
  const std::vector<ElemPair>& graph() const { return graph_; }
  const Elem& apply(const Elem& x) const;

  friend bool operator==(const CSetMorphism& a, const CSetMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.graph_ == b.graph_;
  }
  friend bool operator!=(const CSetMorphism& a, const CSetMorphism& b) { return !(a == b); }

  std::string str() const;

 private:
  CSetMorphism(ClassifiedSet source, ClassifiedSet target, std::vector<ElemPair> graph)
      : source_(std::move(source)), target_(std::move(target)), graph_(std::move(graph)) {}

  ClassifiedSet source_;
  ClassifiedSet target_;
  std::vector<ElemPair> graph_;

  friend CSetMorphism construct_morphism(const ClassifiedSet&, const ClassifiedSet&,
                                         std::vector<ElemPair>);
};

// Validates totality (NotTotal), codomain membership (NotInTarget), matching universes
// (UniverseMismatch) and relation preservation at every label. A preservation failure
// reports the first violated pair in canonical order via NotAMorphism.
CSetMorphism construct_morphism(const ClassifiedSet& source, const ClassifiedSet& target,
                                std::vector<ElemPair> mapping);

// g after f. EndpointMismatch unless target(f) and source(g) agree structurally.
CSetMorphism compose(const CSetMorphism& g, const CSetMorphism& f);
CSetMorphism identity(const ClassifiedSet& x);
// True when the image has at most one element (every empty-source map is constant).
bool is_constant(const CSetMorphism& f);

ClassifiedSet terminal(const LabelUniverse& universe);
CSetMorphism bang(const ClassifiedSet& x);          // the unique map X -> 1
ClassifiedSet initial(const LabelUniverse& universe);
CSetMorphism from_initial(const ClassifiedSet& x);  // the unique map 0 -> X

struct Product {
  ClassifiedSet object;
  CSetMorphism proj1;
  CSetMorphism proj2;
  // The unique mediating map <f, g> : C -> A x B for f : C -> A, g : C -> B.
  CSetMorphism tuple(const CSetMorphism& f, const CSetMorphism& g) const;
};
Product product(const ClassifiedSet& a, const ClassifiedSet& b);

struct Coproduct {
  ClassifiedSet object;
  CSetMorphism inj1;
  CSetMorphism inj2;
  // The unique mediating map [f, g] : A + B -> C for f : A -> C, g : B -> C.
  CSetMorphism cotuple(const CSetMorphism& f, const CSetMorphism& g) const;
};
Coproduct coproduct(const ClassifiedSet& a, const ClassifiedSet& b);

struct Equalizer {
  ClassifiedSet object;    // the subset where the parallel pair agrees, relations restricted
  CSetMorphism include;
  // Factor h : C -> A through the inclusion; NotEqualized unless f . h = g . h.
  CSetMorphism factor(const CSetMorphism& h) const;

  CSetMorphism f, g;       // the parallel pair, kept for factoring checks
};
Equalizer equalizer(const CSetMorphism& f, const CSetMorphism& g);

struct Coequalizer {
  ClassifiedSet object;    // classes of the least equivalence identifying f(a) with g(a)
  CSetMorphism quotient;
  // Factor h : B -> C through the quotient; NotCoequalized unless h . f = h . g.
  CSetMorphism factor(const CSetMorphism& h) const;

  CSetMorphism f, g;
};
Coequalizer coequalizer(const CSetMorphism& f, const CSetMorphism& g);

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

struct Exponential {
  ClassifiedSet object;    // carrier: one Fun table per morphism A -> B
  ClassifiedSet base;      // A
  ClassifiedSet codomain;  // B
  CSetMorphism eval;       // B^A x A -> B

  // Transpose f : C x A -> B to C -> B^A. The pairing factor C is explicit because it
  // is not recoverable from the product object when carriers are degenerate.
  CSetMorphism curry(const CSetMorphism& f, const ClassifiedSet& c) const;
  // Transpose g : C -> B^A back to C x A -> B.
  CSetMorphism uncurry(const CSetMorphism& g) const;
};
Exponential exponential(const ClassifiedSet& a, const ClassifiedSet& b,
                        std::size_t cap = kDefaultEnumerationCap);

// All morphisms A -> B in a deterministic order (candidate tables enumerated
// odometer-style over the canonical carriers, filtered by relation preservation).
// Throws EnumerationCapExceeded when |B|^|A| candidate tables exceed `cap`.
std::vector<CSetMorphism> enumerate_hom(const ClassifiedSet& a, const ClassifiedSet& b,
                                        std::size_t cap = kDefaultEnumerationCap);
// Points are morphisms from the terminal object.
std::vector<CSetMorphism> enumerate_points(const ClassifiedSet& x,
                                           std::size_t cap = kDefaultEnumerationCap);

// The two standard boolean objects: carrier {ff, tt} with the diagonal (discrete)
// or the complete (codiscrete) relation at every label.
ClassifiedSet discrete_booleans(const LabelUniverse& universe);
ClassifiedSet codiscrete_booleans(const LabelUniverse& universe);
Elem bool_tt();
Elem bool_ff();

}  // namespace csets
