#include "csets/cohesion.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>

namespace csets {

LevelMask::LevelMask(LabelUniverse universe, std::vector<Label> selected)
    : universe_(std::move(universe)), selected_(std::move(selected)) {
  std::sort(selected_.begin(), selected_.end());
  selected_.erase(std::unique(selected_.begin(), selected_.end()), selected_.end());
  for (const Label& l : selected_) {
    if (!universe_.contains(l)) {
      fail("UnknownLabel", "mask selects '" + l.name() + "' outside its universe");
    }
  }
}

LevelMask LevelMask::all(const LabelUniverse& universe) {
  return LevelMask(universe, universe.labels());
}

LevelMask LevelMask::none(const LabelUniverse& universe) { return LevelMask(universe, {}); }

bool LevelMask::selects(const Label& l) const {
  return std::binary_search(selected_.begin(), selected_.end(), l);
}

LabelUniverse LevelMask::residual() const { return universe_.without(selected_); }

std::string LevelMask::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < selected_.size(); ++i) {
    if (i) out += ", ";
    out += selected_[i].name();
  }
  return out + "} of " + universe_.str();
}

namespace {

void require_over(const LevelMask& mask, const ClassifiedSet& x, bool over_full) {
  const LabelUniverse expected = over_full ? mask.universe() : mask.residual();
  if (x.universe() != expected) {
    fail("UniverseMismatch", "operand lives over " + x.universe().str() + ", expected " +
                                 expected.str());
  }
}

Relation complete_relation(const std::vector<Elem>& carrier) {
  Relation r;
  r.reserve(carrier.size() * carrier.size());
  for (const Elem& x : carrier) {
    for (const Elem& y : carrier) r.emplace_back(x, y);
  }
  return r;
}

// Rebuild f's graph between transformed endpoints. All four level functors act as the
// identity on underlying functions, so the graph carries over unchanged.
CSetMorphism retype(const ClassifiedSet& source, const ClassifiedSet& target,
                    const CSetMorphism& f) {
  std::vector<ElemPair> graph = f.graph();
  return construct_morphism(source, target, std::move(graph));
}

}  // namespace

ClassifiedSet forget(const LevelMask& mask, const ClassifiedSet& x) {
  require_over(mask, x, /*over_full=*/true);
  LabelUniverse residual = mask.residual();
  std::map<Label, Relation> rels;
  for (const Label& l : residual.labels()) rels[l] = x.relation(l);
  return construct_set(residual, x.carrier(), rels);
}

CSetMorphism forget_map(const LevelMask& mask, const CSetMorphism& f) {
  return retype(forget(mask, f.source()), forget(mask, f.target()), f);
}

ClassifiedSet discretize(const LevelMask& mask, const ClassifiedSet& x) {
  require_over(mask, x, /*over_full=*/false);
  std::map<Label, Relation> rels;
  for (const Label& l : x.universe().labels()) rels[l] = x.relation(l);
  // The selected levels get only the diagonal, which construct_set adds on its own.
  return construct_set(mask.universe(), x.carrier(), rels);
}

CSetMorphism discretize_map(const LevelMask& mask, const CSetMorphism& f) {
  return retype(discretize(mask, f.source()), discretize(mask, f.target()), f);
}

ClassifiedSet codiscretize(const LevelMask& mask, const ClassifiedSet& x) {
  require_over(mask, x, /*over_full=*/false);
  std::map<Label, Relation> rels;
  for (const Label& l : x.universe().labels()) rels[l] = x.relation(l);
  for (const Label& l : mask.selected()) rels[l] = complete_relation(x.carrier());
  return construct_set(mask.universe(), x.carrier(), rels);
}

CSetMorphism codiscretize_map(const LevelMask& mask, const CSetMorphism& f) {
  return retype(codiscretize(mask, f.source()), codiscretize(mask, f.target()), f);
}

Components components(const LevelMask& mask, const ClassifiedSet& x) {
  require_over(mask, x, /*over_full=*/true);
  const std::vector<Elem>& carrier = x.carrier();
  auto index_of = [&](const Elem& e) {
    return static_cast<std::size_t>(
        std::lower_bound(carrier.begin(), carrier.end(), e) - carrier.begin());
  };

  // Union-find computes the reflexive-symmetric-transitive closure of the union of the
  // selected relations; the classes are the zigzag components.
  std::vector<std::size_t> parent(carrier.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  auto merge = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  for (const Label& l : mask.selected()) {
    for (const auto& [a, b] : x.relation(l)) merge(index_of(a), index_of(b));
  }

  std::vector<std::vector<Elem>> groups(carrier.size());
  for (std::size_t i = 0; i < carrier.size(); ++i) groups[find(i)].push_back(carrier[i]);
  std::vector<Elem> class_elem(carrier.size(), Elem::star());
  std::vector<Elem> classes;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    if (!groups[i].empty()) classes.push_back(Elem::cls(groups[i]));
  }
  for (std::size_t i = 0; i < carrier.size(); ++i) class_elem[i] = Elem::cls(groups[find(i)]);

  LabelUniverse residual = mask.residual();
  std::map<Label, Relation> rels;
  for (const Label& l : residual.labels()) {
    Relation r;
    for (const auto& [a, b] : x.relation(l)) {
      r.emplace_back(class_elem[index_of(a)], class_elem[index_of(b)]);
    }
    rels[l] = std::move(r);
  }
  ClassifiedSet object = construct_set(residual, classes, rels);

  std::vector<ElemPair> quotient;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    quotient.emplace_back(carrier[i], class_elem[i]);
  }
  return Components{object, std::move(quotient), mask, x};
}

const Elem& Components::class_of(const Elem& x) const {
  auto it = std::lower_bound(quotient.begin(), quotient.end(), x,
                             [](const ElemPair& row, const Elem& e) { return row.first < e; });
  if (it == quotient.end() || it->first != x) {
    fail("NotTotal", "element " + x.str() + " is not in the quotiented carrier");
  }
  return it->second;
}

CSetMorphism Components::factor(const CSetMorphism& f) const {
  if (f.source() != domain) {
    fail("EndpointMismatch", "factor candidate does not start at the quotiented set");
  }
  if (!is_visible_at(f.target(), mask.selected())) {
    fail("ShapeMismatch", "factor target is not discrete at the masked levels");
  }
  std::vector<ElemPair> graph;
  for (const Elem& c : object.carrier()) {
    const Elem& value = f.apply(c.members().front());
    for (const Elem& m : c.members()) {
      if (f.apply(m) != value) {
        fail("NotConstantOnClasses", "candidate separates the connected elements " +
                                         c.members().front().str() + " and " + m.str());
      }
    }
    graph.emplace_back(c, value);
  }
  return construct_morphism(object, forget(mask, f.target()), std::move(graph));
}

ClassifiedSet modality_object(ModalityKind kind, const LevelMask& mask, const ClassifiedSet& x) {
  switch (kind) {
    case ModalityKind::Box:
      return discretize(mask, forget(mask, x));
    case ModalityKind::Diamond:
      return codiscretize(mask, forget(mask, x));
    case ModalityKind::Shape:
      return discretize(mask, components(mask, x).object);
  }
  fail("ShapeMismatch", "unreachable modality kind");
}

CSetMorphism modality_morphism(ModalityKind kind, const LevelMask& mask, const CSetMorphism& f) {
  if (kind != ModalityKind::Shape) {
    return retype(modality_object(kind, mask, f.source()), modality_object(kind, mask, f.target()),
                  f);
  }
  Components src = components(mask, f.source());
  Components tgt = components(mask, f.target());
  std::vector<ElemPair> graph;
  for (const Elem& c : src.object.carrier()) {
    // A morphism maps connected elements to connected elements, so the image class is
    // independent of the chosen member.
    graph.emplace_back(c, tgt.class_of(f.apply(c.members().front())));
  }
  return construct_morphism(discretize(mask, src.object), discretize(mask, tgt.object),
                            std::move(graph));
}

CSetMorphism structural_map(ModalityKind kind, const LevelMask& mask, const ClassifiedSet& x) {
  switch (kind) {
    case ModalityKind::Box:
      return retype(modality_object(ModalityKind::Box, mask, x), x, identity(x));
    case ModalityKind::Diamond:
      return retype(x, modality_object(ModalityKind::Diamond, mask, x), identity(x));
    case ModalityKind::Shape: {
      Components parts = components(mask, x);
      std::vector<ElemPair> graph = parts.quotient;
      return construct_morphism(x, discretize(mask, parts.object), std::move(graph));
    }
  }
  fail("ShapeMismatch", "unreachable modality kind");
}

CSetMorphism adjoint_transpose(TransposeDirection direction, const LevelMask& mask,
                               const ClassifiedSet& a, const ClassifiedSet& b,
                               const CSetMorphism& f) {
  ClassifiedSet box_a = modality_object(ModalityKind::Box, mask, a);
  ClassifiedSet dia_b = modality_object(ModalityKind::Diamond, mask, b);
  if (direction == TransposeDirection::Forward) {
    if (f.source() != box_a || f.target() != b) {
      fail("ShapeMismatch", "forward transpose expects a morphism Box A -> B");
    }
    return retype(a, dia_b, f);
  }
  if (f.source() != a || f.target() != dia_b) {
    fail("ShapeMismatch", "backward transpose expects a morphism A -> Diamond B");
  }
  return retype(box_a, b, f);
}

CSetMorphism strength(const LevelMask& mask, const ClassifiedSet& a, const ClassifiedSet& b) {
  ClassifiedSet source = product(a, modality_object(ModalityKind::Diamond, mask, b)).object;
  ClassifiedSet target =
      modality_object(ModalityKind::Diamond, mask, product(a, b).object);
  // Both carriers are the same pair set; the strength is the identity on points.
  std::vector<ElemPair> graph;
  for (const Elem& p : source.carrier()) graph.emplace_back(p, p);
  return construct_morphism(source, target, std::move(graph));
}

bool is_protected_at(const ClassifiedSet& x, const std::vector<Label>& pi) {
  for (const Label& l : pi) {
    if (x.relation(l).size() != x.size() * x.size()) return false;
  }
  return true;
}

bool is_visible_at(const ClassifiedSet& x, const std::vector<Label>& pi) {
  // Relations are reflexive, so diagonal size means diagonal content.
  for (const Label& l : pi) {
    if (x.relation(l).size() != x.size()) return false;
  }
  return true;
}

}  // namespace csets
