#pragma once

#include <vector>

#include "csets/cset.hpp"

namespace csets {

// A selection pi of levels inside a universe L. The four level-indexed functors are all
// parameterised by such a mask:
//
//   forget       L-sets  -> (L-pi)-sets   drop the relations at pi
//   discretize   (L-pi)-sets -> L-sets    add the diagonal relation at each level of pi
//   codiscretize (L-pi)-sets -> L-sets    add the complete relation at each level of pi
//   components   L-sets  -> (L-pi)-sets   quotient by the zigzag closure of the pi-relations
//
// discretize -| forget -| codiscretize, and components -| discretize.
class LevelMask {
 public:
  LevelMask(LabelUniverse universe, std::vector<Label> selected);

  static LevelMask all(const LabelUniverse& universe);   // pi = L
  static LevelMask none(const LabelUniverse& universe);  // pi = {}

  const LabelUniverse& universe() const { return universe_; }
  const std::vector<Label>& selected() const { return selected_; }
  bool selects(const Label& l) const;
  bool empty() const { return selected_.empty(); }
  LabelUniverse residual() const;  // L - pi

  std::string str() const;

 private:
  LabelUniverse universe_;
  std::vector<Label> selected_;  // sorted, duplicate-free, subset of universe
};

ClassifiedSet forget(const LevelMask& mask, const ClassifiedSet& x);
CSetMorphism forget_map(const LevelMask& mask, const CSetMorphism& f);

ClassifiedSet discretize(const LevelMask& mask, const ClassifiedSet& x);
CSetMorphism discretize_map(const LevelMask& mask, const CSetMorphism& f);

ClassifiedSet codiscretize(const LevelMask& mask, const ClassifiedSet& x);
CSetMorphism codiscretize_map(const LevelMask& mask, const CSetMorphism& f);

struct Components {
  ClassifiedSet object;             // over L - pi; carrier: one Class per zigzag class
  std::vector<ElemPair> quotient;   // carrier(X) -> class, sorted by source element

  const Elem& class_of(const Elem& x) const;
  // Factor f : X -> Y through the quotient, for Y discrete at pi (i.e. f cannot
  // distinguish connected elements). Returns the mediating map object -> forget(Y).
  CSetMorphism factor(const CSetMorphism& f) const;

  LevelMask mask;
  ClassifiedSet domain;             // X itself, kept for factoring checks
};
Components components(const LevelMask& mask, const ClassifiedSet& x);

// The three modal endofunctors on L-sets induced by the adjoint string:
//   Box     discretize . forget       (visibility comonad)
//   Diamond codiscretize . forget     (protection monad)
//   Shape   discretize . components   (connectedness monad)
// Box and Diamond are strict (identity on carriers) and idempotent; Shape is idempotent
// up to the canonical singleton-class collapse.
enum class ModalityKind { Box, Diamond, Shape };

ClassifiedSet modality_object(ModalityKind kind, const LevelMask& mask, const ClassifiedSet& x);
CSetMorphism modality_morphism(ModalityKind kind, const LevelMask& mask, const CSetMorphism& f);

// Box: the counit Box X -> X (identity on the carrier, injective — the concreteness
// half of the nullstellensatz). Diamond: the unit X -> Diamond X (identity on the
// carrier). Shape: the unit X -> Shape X sending each element to its class (surjective).
CSetMorphism structural_map(ModalityKind kind, const LevelMask& mask, const ClassifiedSet& x);

// The hom-set bijection for Box -| Diamond. Forward turns f : Box A -> B into
// A -> Diamond B; backward inverts. Both are the identity on graphs; the object
// parameters pin down the endpoints (Box is not injective on objects, so A is not
// recoverable from Box A). ShapeMismatch when f's endpoints are not of the stated form.
enum class TransposeDirection { Forward, Backward };
CSetMorphism adjoint_transpose(TransposeDirection direction, const LevelMask& mask,
                               const ClassifiedSet& a, const ClassifiedSet& b,
                               const CSetMorphism& f);

// The canonical strength t : A x Diamond B -> Diamond (A x B); identity on carriers.
CSetMorphism strength(const LevelMask& mask, const ClassifiedSet& a, const ClassifiedSet& b);

// Protected at pi: complete relation at every level of pi (fixed point of Diamond).
// Visible at pi: diagonal relation at every level of pi (fixed point of Box).
bool is_protected_at(const ClassifiedSet& x, const std::vector<Label>& pi);
bool is_visible_at(const ClassifiedSet& x, const std::vector<Label>& pi);

}  // namespace csets
