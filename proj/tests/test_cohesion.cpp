#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "csets/cohesion.hpp"
#include "csets/harness.hpp"

using namespace csets;

namespace {

Label L("L"), M("M"), H("H");

LabelUniverse lh() { return LabelUniverse({L, H}); }

ClassifiedSet make(const LabelUniverse& u, std::vector<std::string> names,
                   std::map<Label, std::vector<std::pair<std::string, std::string>>> rels = {}) {
  std::vector<Elem> carrier;
  for (const std::string& n : names) carrier.push_back(Elem::atom(n));
  std::map<Label, Relation> relations;
  for (auto& [l, pairs] : rels) {
    Relation r;
    for (auto& [a, b] : pairs) r.emplace_back(Elem::atom(a), Elem::atom(b));
    relations[l] = std::move(r);
  }
  return construct_set(u, std::move(carrier), relations);
}

// Reference partition for the zigzag closure: union-find over the symmetrised
// masked relations, ignoring direction entirely.
std::vector<std::set<Elem>> classes_by_hand(const LevelMask& mask, const ClassifiedSet& x) {
  const auto& carrier = x.carrier();
  std::vector<std::size_t> parent(carrier.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index_of = [&](const Elem& e) {
    return static_cast<std::size_t>(
        std::find(carrier.begin(), carrier.end(), e) - carrier.begin());
  };
  for (const Label& l : mask.selected()) {
    for (const ElemPair& p : x.relation(l)) {
      std::size_t a = find(index_of(p.first)), b = find(index_of(p.second));
      if (a != b) parent[a] = b;
    }
  }
  std::map<std::size_t, std::set<Elem>> buckets;
  for (std::size_t i = 0; i < carrier.size(); ++i) buckets[find(i)].insert(carrier[i]);
  std::vector<std::set<Elem>> out;
  for (auto& [root, members] : buckets) out.push_back(std::move(members));
  return out;
}

std::set<std::set<Elem>> partition_of(const Components& comp) {
  std::map<Elem, std::set<Elem>> by_class;
  for (const ElemPair& p : comp.quotient) by_class[p.second].insert(p.first);
  std::set<std::set<Elem>> out;
  for (auto& [cls, members] : by_class) out.insert(members);
  return out;
}

}  // namespace

TEST_CASE("masks validate, dedupe, and report residuals") {
  LabelUniverse u({L, M, H});
  LevelMask m(u, {H, L, H});
  CHECK(m.selected() == std::vector<Label>({H, L}));  // sorted by name, deduped
  CHECK(m.selects(L));
  CHECK_FALSE(m.selects(M));
  CHECK(m.residual() == LabelUniverse({M}));
  CHECK(LevelMask::all(u).residual().empty());
  CHECK(LevelMask::none(u).selected().empty());
  CHECK_THROWS_WITH_AS(LevelMask(u, {Label("X")}), doctest::Contains("UnknownLabel"), Error);
}

TEST_CASE("forget drops the masked relations and moves to the residual universe") {
  LabelUniverse u = lh();
  ClassifiedSet x = make(u, {"a", "b"}, {{L, {{"a", "b"}}}, {H, {{"b", "a"}}}});
  LevelMask at_l(u, {L});
  ClassifiedSet fx = forget(at_l, x);
  CHECK(fx.universe() == LabelUniverse({H}));
  CHECK(fx.carrier() == x.carrier());
  CHECK(fx.relation(H) == x.relation(H));
  CHECK_THROWS_WITH_AS(fx.relation(L), doctest::Contains("UnknownLabel"), Error);
  // operands over the wrong universe are rejected
  CHECK_THROWS_WITH_AS(forget(at_l, fx), doctest::Contains("UniverseMismatch"), Error);
  CHECK_THROWS_WITH_AS(discretize(at_l, x), doctest::Contains("UniverseMismatch"), Error);
}

TEST_CASE("discretize adds diagonals, codiscretize adds complete relations") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  ClassifiedSet base = make(LabelUniverse({L}), {"a", "b"}, {{L, {{"a", "b"}}}});
  ClassifiedSet disc = discretize(at_h, base);
  ClassifiedSet codisc = codiscretize(at_h, base);
  CHECK(disc.universe() == u);
  CHECK(disc.relation(L) == base.relation(L));
  CHECK(disc.relation(H).size() == 2);  // diagonal only
  CHECK(codisc.relation(H).size() == 4);
  CHECK(codisc.related(H, Elem::atom("b"), Elem::atom("a")));
  CHECK_FALSE(disc.related(H, Elem::atom("a"), Elem::atom("b")));
  // mapping lifts act on graphs unchanged
  CSetMorphism id = identity(base);
  CHECK(discretize_map(at_h, id).graph() == id.graph());
  CHECK(codiscretize_map(at_h, id).source() == codisc);
}

TEST_CASE("components matches the union-find oracle on random sets") {
  LabelUniverse u({L, M, H});
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    ClassifiedSet x = random_classified_set(rng, u, 4);
    for (const std::vector<Label>& sel :
         {std::vector<Label>{L}, std::vector<Label>{L, H}, std::vector<Label>{L, M, H}}) {
      LevelMask mask(u, sel);
      Components comp = components(mask, x);
      auto expect = classes_by_hand(mask, x);
      CHECK(comp.object.size() == expect.size());
      std::set<std::set<Elem>> got = partition_of(comp);
      CHECK(got == std::set<std::set<Elem>>(expect.begin(), expect.end()));
    }
  }
}

TEST_CASE("components classes respect zigzags and the factoring property") {
  LabelUniverse u = lh();
  // a ~L b and c ~L b: a and c are joined through b by a zigzag even though
  // neither relates to the other directly.
  ClassifiedSet x = make(u, {"a", "b", "c", "d"}, {{L, {{"a", "b"}, {"c", "b"}}}});
  LevelMask at_l(u, {L});
  Components comp = components(at_l, x);
  CHECK(comp.object.size() == 2);  // {a,b,c} and {d}
  CHECK(comp.class_of(Elem::atom("a")) == comp.class_of(Elem::atom("c")));
  CHECK(comp.class_of(Elem::atom("a")) != comp.class_of(Elem::atom("d")));

  // a map that cannot separate connected elements factors through the quotient
  ClassifiedSet target = discretize(at_l, make(LabelUniverse({H}), {"p", "q"}));
  CSetMorphism f = construct_morphism(x, target,
                                      {{Elem::atom("a"), Elem::atom("p")},
                                       {Elem::atom("b"), Elem::atom("p")},
                                       {Elem::atom("c"), Elem::atom("p")},
                                       {Elem::atom("d"), Elem::atom("q")}});
  CSetMorphism mediating = comp.factor(f);
  CHECK(mediating.source() == comp.object);
  CHECK(mediating.apply(comp.class_of(Elem::atom("a"))) == Elem::atom("p"));
  CHECK(mediating.apply(comp.class_of(Elem::atom("d"))) == Elem::atom("q"));
}

TEST_CASE("visibility and protection modalities are strict and idempotent") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    ClassifiedSet x = random_classified_set(rng, u, 4);
    ClassifiedSet bx = modality_object(ModalityKind::Box, at_h, x);
    ClassifiedSet dx = modality_object(ModalityKind::Diamond, at_h, x);
    CHECK(bx.carrier() == x.carrier());
    CHECK(dx.carrier() == x.carrier());
    CHECK(modality_object(ModalityKind::Box, at_h, bx) == bx);
    CHECK(modality_object(ModalityKind::Diamond, at_h, dx) == dx);
    CHECK(is_visible_at(bx, at_h.selected()));
    CHECK(is_protected_at(dx, at_h.selected()));
  }
}

TEST_CASE("shape collapses to singleton classes on a second pass") {
  LabelUniverse u = lh();
  LevelMask at_l(u, {L});
  ClassifiedSet x = make(u, {"a", "b", "c"}, {{L, {{"a", "b"}}}});
  ClassifiedSet sx = modality_object(ModalityKind::Shape, at_l, x);
  CHECK(sx.size() == 2);
  // after one pass the masked relations are diagonal, so every class is a singleton
  ClassifiedSet ssx = modality_object(ModalityKind::Shape, at_l, sx);
  CHECK(ssx.size() == sx.size());
  CHECK(is_visible_at(sx, at_l.selected()));
}

TEST_CASE("structural maps have the advertised endpoints and directions") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  ClassifiedSet x = make(u, {"a", "b"}, {{H, {{"a", "b"}}}});

  CSetMorphism counit = structural_map(ModalityKind::Box, at_h, x);
  CHECK(counit.source() == modality_object(ModalityKind::Box, at_h, x));
  CHECK(counit.target() == x);
  CHECK(counit.apply(Elem::atom("a")) == Elem::atom("a"));

  CSetMorphism unit = structural_map(ModalityKind::Diamond, at_h, x);
  CHECK(unit.source() == x);
  CHECK(unit.target() == modality_object(ModalityKind::Diamond, at_h, x));

  CSetMorphism collapse = structural_map(ModalityKind::Shape, at_h, x);
  CHECK(collapse.source() == x);
  CHECK(collapse.target() == modality_object(ModalityKind::Shape, at_h, x));
  // surjective: every class is hit
  std::set<Elem> images;
  for (const Elem& e : x.carrier()) images.insert(collapse.apply(e));
  CHECK(images.size() == collapse.target().size());
}

TEST_CASE("modality lifts are functorial on a sample") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  ClassifiedSet x = make(u, {"a", "b"}, {{H, {{"a", "b"}}}});
  ClassifiedSet b2 = codiscrete_booleans(u);
  CSetMorphism f = construct_morphism(x, b2, {{Elem::atom("a"), bool_tt()},
                                              {Elem::atom("b"), bool_ff()}});
  CSetMorphism g = construct_morphism(b2, b2, {{bool_tt(), bool_ff()}, {bool_ff(), bool_tt()}});
  for (ModalityKind kind : {ModalityKind::Box, ModalityKind::Diamond}) {
    CSetMorphism lifted = modality_morphism(kind, at_h, compose(g, f));
    CHECK(lifted == compose(modality_morphism(kind, at_h, g), modality_morphism(kind, at_h, f)));
    CHECK(modality_morphism(kind, at_h, identity(x)) ==
          identity(modality_object(kind, at_h, x)));
  }
}

TEST_CASE("transposing across the visibility-protection adjunction round-trips") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  ClassifiedSet a = make(u, {"a", "b"}, {{H, {{"a", "b"}}}});
  ClassifiedSet b = discrete_booleans(u);
  ClassifiedSet box_a = modality_object(ModalityKind::Box, at_h, a);
  // f : Box A -> B may use the visibility structure freely
  CSetMorphism f = construct_morphism(box_a, b, {{Elem::atom("a"), bool_tt()},
                                                 {Elem::atom("b"), bool_ff()}});
  CSetMorphism across = adjoint_transpose(TransposeDirection::Forward, at_h, a, b, f);
  CHECK(across.source() == a);
  CHECK(across.target() == modality_object(ModalityKind::Diamond, at_h, b));
  CHECK(across.graph() == f.graph());
  CSetMorphism back = adjoint_transpose(TransposeDirection::Backward, at_h, a, b, across);
  CHECK(back == f);
  // endpoints that are not of the stated form are rejected
  CHECK_THROWS_WITH_AS(adjoint_transpose(TransposeDirection::Forward, at_h, a, b, across),
                       doctest::Contains("ShapeMismatch"), Error);
  CHECK_THROWS_WITH_AS(adjoint_transpose(TransposeDirection::Backward, at_h, a, b, f),
                       doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("strength reshuffles protection across a product without moving points") {
  LabelUniverse u = lh();
  LevelMask at_h(u, {H});
  ClassifiedSet a = make(u, {"x", "y"}, {{L, {{"x", "y"}}}});
  ClassifiedSet b = discrete_booleans(u);
  CSetMorphism t = strength(at_h, a, b);
  ClassifiedSet diamond_b = modality_object(ModalityKind::Diamond, at_h, b);
  CHECK(t.source() == product(a, diamond_b).object);
  CHECK(t.target() == modality_object(ModalityKind::Diamond, at_h, product(a, b).object));
  for (const Elem& e : t.source().carrier()) CHECK(t.apply(e) == e);
}

TEST_CASE("protection and visibility predicates read the relations directly") {
  LabelUniverse u = lh();
  ClassifiedSet disc = discrete_booleans(u);
  ClassifiedSet codisc = codiscrete_booleans(u);
  CHECK(is_visible_at(disc, {L, H}));
  CHECK(is_protected_at(codisc, {L, H}));
  CHECK_FALSE(is_protected_at(disc, {H}));
  CHECK_FALSE(is_visible_at(codisc, {H}));
  // empty selection is vacuously both
  CHECK(is_visible_at(codisc, {}));
  CHECK(is_protected_at(disc, {}));
  // the one-point set is both at every level
  CHECK(is_visible_at(terminal(u), {L, H}));
  CHECK(is_protected_at(terminal(u), {L, H}));
}
