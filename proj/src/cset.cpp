#include "csets/cset.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <numeric>
#include <sstream>

namespace csets {

namespace {

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

void sort_unique(Relation& r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
}

bool relation_contains(const Relation& r, const Elem& x, const Elem& y) {
  return std::binary_search(r.begin(), r.end(), ElemPair{x, y});
}

// |b|^|a| clamped so the cap comparison never overflows.
std::size_t pow_clamped(std::size_t base, std::size_t exp, std::size_t clamp) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && result > clamp / base) return clamp + 1;
    result *= base;
    if (result > clamp) return clamp + 1;
  }
  return result;
}

}  // namespace

Label::Label(std::string name) : name_(std::move(name)) {
  if (!valid_token(name_)) {
    fail("UnknownLabel", "'" + name_ + "' is not a valid label token");
  }
}

LabelUniverse::LabelUniverse(std::vector<Label> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i - 1] == labels_[i]) {
      fail("DuplicateElement", "label '" + labels_[i].name() + "' appears twice in a universe");
    }
  }
}

bool LabelUniverse::contains(const Label& l) const {
  return std::binary_search(labels_.begin(), labels_.end(), l);
}

std::optional<std::size_t> LabelUniverse::index_of(const Label& l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it == labels_.end() || *it != l) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

LabelUniverse LabelUniverse::without(const std::vector<Label>& removed) const {
  for (const Label& l : removed) {
    if (!contains(l)) fail("UnknownLabel", "label '" + l.name() + "' is not in the universe");
  }
  std::vector<Label> rest;
  for (const Label& l : labels_) {
    if (std::find(removed.begin(), removed.end(), l) == removed.end()) rest.push_back(l);
  }
  return LabelUniverse(std::move(rest));
}

std::string LabelUniverse::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ", ";
    out += labels_[i].name();
  }
  return out + "}";
}

const LabelUniverse& ClassifiedSet::universe() const { return rep_->universe; }
const std::vector<Elem>& ClassifiedSet::carrier() const { return rep_->carrier; }

bool ClassifiedSet::contains(const Elem& e) const {
  return std::binary_search(rep_->carrier.begin(), rep_->carrier.end(), e);
}

const Relation& ClassifiedSet::relation(const Label& l) const {
  auto idx = rep_->universe.index_of(l);
  if (!idx) fail("UnknownLabel", "label '" + l.name() + "' is not in the universe");
  return rep_->relations[*idx];
}

const Relation& ClassifiedSet::relation_at(std::size_t index) const {
  assert(index < rep_->relations.size());
  return rep_->relations[index];
}

bool ClassifiedSet::related(std::size_t label_index, const Elem& x, const Elem& y) const {
  return relation_contains(rep_->relations[label_index], x, y);
}

bool ClassifiedSet::related(const Label& l, const Elem& x, const Elem& y) const {
  return relation_contains(relation(l), x, y);
}

bool operator==(const ClassifiedSet& a, const ClassifiedSet& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->universe == b.rep_->universe && a.rep_->carrier == b.rep_->carrier &&
         a.rep_->relations == b.rep_->relations;
}

std::string ClassifiedSet::str() const {
  std::ostringstream os;
  os << "{carrier: [";
  for (std::size_t i = 0; i < carrier().size(); ++i) {
    if (i) os << ", ";
    os << carrier()[i];
  }
  os << "]";
  for (std::size_t li = 0; li < universe().size(); ++li) {
    os << "; " << universe().labels()[li].name() << ": [";
    bool first = true;
    for (const auto& [x, y] : relation_at(li)) {
      if (x == y) continue;  // the diagonal is implied; print only the informative pairs
      if (!first) os << ", ";
      first = false;
      os << "(" << x << ", " << y << ")";
    }
    os << "]";
  }
  os << "}";
  return os.str();
}

ClassifiedSet construct_set(const LabelUniverse& universe, std::vector<Elem> carrier,
                            const std::map<Label, Relation>& relations) {
  std::sort(carrier.begin(), carrier.end());
  for (std::size_t i = 1; i < carrier.size(); ++i) {
    if (carrier[i - 1] == carrier[i]) {
      fail("DuplicateElement", "carrier element " + carrier[i].str() + " appears twice");
    }
  }

  auto in_carrier = [&](const Elem& e) {
    return std::binary_search(carrier.begin(), carrier.end(), e);
  };

  std::vector<Relation> rels(universe.size());
  for (const auto& [label, pairs] : relations) {
    auto idx = universe.index_of(label);
    if (!idx) fail("UnknownLabel", "relation given at label '" + label.name() + "' outside the universe");
    for (const auto& [x, y] : pairs) {
      if (!in_carrier(x) || !in_carrier(y)) {
        fail("RelationOutOfCarrier", "pair (" + x.str() + ", " + y.str() + ") at label '" +
                                         label.name() + "' mentions elements outside the carrier");
      }
    }
    rels[*idx] = pairs;
  }
  for (Relation& r : rels) {
    for (const Elem& e : carrier) r.emplace_back(e, e);  // silent reflexive closure
    sort_unique(r);
  }

  auto rep = std::make_shared<ClassifiedSet::Rep>();
  rep->universe = universe;
  rep->carrier = std::move(carrier);
  rep->relations = std::move(rels);
  return ClassifiedSet(std::move(rep));
}

const Elem& CSetMorphism::apply(const Elem& x) const {
  auto it = std::lower_bound(graph_.begin(), graph_.end(), x,
                             [](const ElemPair& row, const Elem& e) { return row.first < e; });
  if (it == graph_.end() || it->first != x) {
    fail("NotTotal", "morphism has no value at " + x.str());
  }
  return it->second;
}

std::string CSetMorphism::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    if (i) os << ", ";
    os << graph_[i].first << " => " << graph_[i].second;
  }
  os << "]";
  return os.str();
}

CSetMorphism construct_morphism(const ClassifiedSet& source, const ClassifiedSet& target,
                                std::vector<ElemPair> mapping) {
  if (source.universe() != target.universe()) {
    fail("UniverseMismatch", "morphism endpoints live over different universes " +
                                 source.universe().str() + " and " + target.universe().str());
  }
  std::sort(mapping.begin(), mapping.end(),
            [](const ElemPair& a, const ElemPair& b) { return a.first < b.first; });
  if (mapping.size() != source.size()) {
    fail("NotTotal", "mapping has " + std::to_string(mapping.size()) + " rows for a carrier of " +
                         std::to_string(source.size()));
  }
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (mapping[i].first != source.carrier()[i]) {
      fail("NotTotal", "mapping is not a total function on the source carrier (row " +
                           mapping[i].first.str() + ")");
    }
    if (!target.contains(mapping[i].second)) {
      fail("NotInTarget", "value " + mapping[i].second.str() + " is not in the target carrier");
    }
  }
  auto value_of = [&](const Elem& x) -> const Elem& {
    auto it = std::lower_bound(mapping.begin(), mapping.end(), x,
                               [](const ElemPair& row, const Elem& e) { return row.first < e; });
    return it->second;
  };
  for (std::size_t li = 0; li < source.universe().size(); ++li) {
    for (const auto& [x, y] : source.relation_at(li)) {
      if (!target.related(li, value_of(x), value_of(y))) {
        const Label& l = source.universe().labels()[li];
        fail("NotAMorphism", "relation at '" + l.name() + "' is not preserved: " + x.str() +
                                 " ~ " + y.str() + " but " + value_of(x).str() + " !~ " +
                                 value_of(y).str());
      }
    }
  }
  return CSetMorphism(source, target, std::move(mapping));
}

CSetMorphism compose(const CSetMorphism& g, const CSetMorphism& f) {
  if (f.target() != g.source()) {
    fail("EndpointMismatch", "cannot compose: middle objects differ");
  }
  std::vector<ElemPair> graph;
  graph.reserve(f.graph().size());
  for (const auto& [x, y] : f.graph()) graph.emplace_back(x, g.apply(y));
  // Routing through construct_morphism revalidates the composite; composites of valid
  // morphisms are always valid, so this is a safety net, not a requirement.
  return construct_morphism(f.source(), g.target(), std::move(graph));
}

CSetMorphism identity(const ClassifiedSet& x) {
  std::vector<ElemPair> graph;
  graph.reserve(x.size());
  for (const Elem& e : x.carrier()) graph.emplace_back(e, e);
  return construct_morphism(x, x, std::move(graph));
}

bool is_constant(const CSetMorphism& f) {
  const auto& g = f.graph();
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (g[i].second != g[0].second) return false;
  }
  return true;
}

ClassifiedSet terminal(const LabelUniverse& universe) {
  return construct_set(universe, {Elem::star()});
}

CSetMorphism bang(const ClassifiedSet& x) {
  std::vector<ElemPair> graph;
  for (const Elem& e : x.carrier()) graph.emplace_back(e, Elem::star());
  return construct_morphism(x, terminal(x.universe()), std::move(graph));
}

ClassifiedSet initial(const LabelUniverse& universe) { return construct_set(universe, {}); }

CSetMorphism from_initial(const ClassifiedSet& x) {
  return construct_morphism(initial(x.universe()), x, {});
}

Product product(const ClassifiedSet& a, const ClassifiedSet& b) {
  if (a.universe() != b.universe()) {
    fail("UniverseMismatch", "product factors live over different universes");
  }
  std::vector<Elem> carrier;
  carrier.reserve(a.size() * b.size());
  for (const Elem& x : a.carrier()) {
    for (const Elem& y : b.carrier()) carrier.push_back(Elem::pair(x, y));
  }
  std::map<Label, Relation> rels;
  for (std::size_t li = 0; li < a.universe().size(); ++li) {
    Relation r;
    for (const auto& [x1, x2] : a.relation_at(li)) {
      for (const auto& [y1, y2] : b.relation_at(li)) {
        r.emplace_back(Elem::pair(x1, y1), Elem::pair(x2, y2));
      }
    }
    rels[a.universe().labels()[li]] = std::move(r);
  }
  ClassifiedSet object = construct_set(a.universe(), std::move(carrier), rels);

  std::vector<ElemPair> g1, g2;
  for (const Elem& p : object.carrier()) {
    g1.emplace_back(p, p.first());
    g2.emplace_back(p, p.second());
  }
  return Product{object, construct_morphism(object, a, std::move(g1)),
                 construct_morphism(object, b, std::move(g2))};
}

CSetMorphism Product::tuple(const CSetMorphism& f, const CSetMorphism& g) const {
  if (f.source() != g.source()) fail("EndpointMismatch", "tuple components have different sources");
  if (f.target() != proj1.target() || g.target() != proj2.target()) {
    fail("EndpointMismatch", "tuple components do not target the product factors");
  }
  std::vector<ElemPair> graph;
  for (const auto& [c, fc] : f.graph()) {
    graph.emplace_back(c, Elem::pair(fc, g.apply(c)));
  }
  return construct_morphism(f.source(), object, std::move(graph));
}

Coproduct coproduct(const ClassifiedSet& a, const ClassifiedSet& b) {
  if (a.universe() != b.universe()) {
    fail("UniverseMismatch", "coproduct summands live over different universes");
  }
  std::vector<Elem> carrier;
  for (const Elem& x : a.carrier()) carrier.push_back(Elem::inl(x));
  for (const Elem& y : b.carrier()) carrier.push_back(Elem::inr(y));
  std::map<Label, Relation> rels;
  for (std::size_t li = 0; li < a.universe().size(); ++li) {
    Relation r;
    for (const auto& [x1, x2] : a.relation_at(li)) r.emplace_back(Elem::inl(x1), Elem::inl(x2));
    for (const auto& [y1, y2] : b.relation_at(li)) r.emplace_back(Elem::inr(y1), Elem::inr(y2));
    rels[a.universe().labels()[li]] = std::move(r);
  }
  ClassifiedSet object = construct_set(a.universe(), std::move(carrier), rels);

  std::vector<ElemPair> g1, g2;
  for (const Elem& x : a.carrier()) g1.emplace_back(x, Elem::inl(x));
  for (const Elem& y : b.carrier()) g2.emplace_back(y, Elem::inr(y));
  return Coproduct{object, construct_morphism(a, object, std::move(g1)),
                   construct_morphism(b, object, std::move(g2))};
}

CSetMorphism Coproduct::cotuple(const CSetMorphism& f, const CSetMorphism& g) const {
  if (f.target() != g.target()) fail("EndpointMismatch", "cotuple components have different targets");
  if (f.source() != inj1.source() || g.source() != inj2.source()) {
    fail("EndpointMismatch", "cotuple components do not start at the coproduct summands");
  }
  std::vector<ElemPair> graph;
  for (const Elem& e : object.carrier()) {
    graph.emplace_back(e, e.kind() == Elem::Kind::Inl ? f.apply(e.inner()) : g.apply(e.inner()));
  }
  return construct_morphism(object, f.target(), std::move(graph));
}

namespace {

void require_parallel(const CSetMorphism& f, const CSetMorphism& g) {
  if (f.source() != g.source() || f.target() != g.target()) {
    fail("NotParallel", "the two morphisms do not form a parallel pair");
  }
}

}  // namespace

Equalizer equalizer(const CSetMorphism& f, const CSetMorphism& g) {
  require_parallel(f, g);
  const ClassifiedSet& a = f.source();
  std::vector<Elem> carrier;
  for (const Elem& x : a.carrier()) {
    if (f.apply(x) == g.apply(x)) carrier.push_back(x);
  }
  auto kept = [&](const Elem& e) {
    return std::binary_search(carrier.begin(), carrier.end(), e);
  };
  std::map<Label, Relation> rels;
  for (std::size_t li = 0; li < a.universe().size(); ++li) {
    Relation r;
    for (const auto& [x, y] : a.relation_at(li)) {
      if (kept(x) && kept(y)) r.emplace_back(x, y);
    }
    rels[a.universe().labels()[li]] = std::move(r);
  }
  ClassifiedSet object = construct_set(a.universe(), carrier, rels);
  std::vector<ElemPair> inc;
  for (const Elem& e : object.carrier()) inc.emplace_back(e, e);
  return Equalizer{object, construct_morphism(object, a, std::move(inc)), f, g};
}

CSetMorphism Equalizer::factor(const CSetMorphism& h) const {
  if (h.target() != f.source()) fail("EndpointMismatch", "factor candidate does not target the domain");
  if (compose(f, h) != compose(g, h)) {
    fail("NotEqualized", "the candidate does not equalize the parallel pair");
  }
  std::vector<ElemPair> graph = h.graph();
  return construct_morphism(h.source(), object, std::move(graph));
}

namespace {

// Small union-find over carrier indices; path compression + union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

Coequalizer coequalizer(const CSetMorphism& f, const CSetMorphism& g) {
  require_parallel(f, g);
  const ClassifiedSet& b = f.target();
  auto index_of = [&](const Elem& e) {
    return static_cast<std::size_t>(
        std::lower_bound(b.carrier().begin(), b.carrier().end(), e) - b.carrier().begin());
  };

  DisjointSet uf(b.size());
  for (const Elem& x : f.source().carrier()) uf.merge(index_of(f.apply(x)), index_of(g.apply(x)));

  std::vector<std::vector<Elem>> groups(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) groups[uf.find(i)].push_back(b.carrier()[i]);
  std::vector<Elem> class_of(b.size(), Elem::star());
  std::vector<Elem> carrier;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!groups[i].empty()) carrier.push_back(Elem::cls(groups[i]));
  }
  for (std::size_t i = 0; i < b.size(); ++i) class_of[i] = Elem::cls(groups[uf.find(i)]);

  // [x] ~ [y] at l iff some members are related at l; reflexive pairs project to the diagonal.
  std::map<Label, Relation> rels;
  for (std::size_t li = 0; li < b.universe().size(); ++li) {
    Relation r;
    for (const auto& [x, y] : b.relation_at(li)) {
      r.emplace_back(class_of[index_of(x)], class_of[index_of(y)]);
    }
    rels[b.universe().labels()[li]] = std::move(r);
  }
  ClassifiedSet object = construct_set(b.universe(), carrier, rels);

  std::vector<ElemPair> q;
  for (std::size_t i = 0; i < b.size(); ++i) q.emplace_back(b.carrier()[i], class_of[i]);
  return Coequalizer{object, construct_morphism(b, object, std::move(q)), f, g};
}

CSetMorphism Coequalizer::factor(const CSetMorphism& h) const {
  if (h.source() != f.target()) fail("EndpointMismatch", "factor candidate does not start at the codomain");
  if (compose(h, f) != compose(h, g)) {
    fail("NotCoequalized", "the candidate does not coequalize the parallel pair");
  }
  std::vector<ElemPair> graph;
  for (const Elem& c : object.carrier()) {
    const Elem& value = h.apply(c.members().front());
    for (const Elem& m : c.members()) {
      assert(h.apply(m) == value);  // guaranteed by the coequalizing check above
    }
    graph.emplace_back(c, value);
  }
  return construct_morphism(object, h.target(), std::move(graph));
}

std::vector<CSetMorphism> enumerate_hom(const ClassifiedSet& a, const ClassifiedSet& b,
                                        std::size_t cap) {
  if (a.universe() != b.universe()) {
    fail("UniverseMismatch", "hom-set endpoints live over different universes");
  }
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<CSetMorphism> out;

  if (m == 0) {
    out.push_back(construct_morphism(a, b, {}));
    return out;
  }
  if (n == 0) return out;

  std::size_t candidates = pow_clamped(n, m, cap);
  if (candidates > cap) {
    fail("EnumerationCapExceeded", "candidate count " + std::to_string(n) + "^" +
                                       std::to_string(m) + " exceeds the cap of " +
                                       std::to_string(cap));
  }

  std::vector<std::size_t> idx(m, 0);
  while (true) {
    bool ok = true;
    for (std::size_t li = 0; ok && li < a.universe().size(); ++li) {
      for (const auto& [x, y] : a.relation_at(li)) {
        std::size_t xi = static_cast<std::size_t>(
            std::lower_bound(a.carrier().begin(), a.carrier().end(), x) - a.carrier().begin());
        std::size_t yi = static_cast<std::size_t>(
            std::lower_bound(a.carrier().begin(), a.carrier().end(), y) - a.carrier().begin());
        if (!b.related(li, b.carrier()[idx[xi]], b.carrier()[idx[yi]])) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      std::vector<ElemPair> graph;
      graph.reserve(m);
      for (std::size_t i = 0; i < m; ++i) graph.emplace_back(a.carrier()[i], b.carrier()[idx[i]]);
      out.push_back(construct_morphism(a, b, std::move(graph)));
    }
    // Odometer step, last position fastest: candidates appear in lexicographic order.
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < n) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

std::vector<CSetMorphism> enumerate_points(const ClassifiedSet& x, std::size_t cap) {
  return enumerate_hom(terminal(x.universe()), x, cap);
}

Exponential exponential(const ClassifiedSet& a, const ClassifiedSet& b, std::size_t cap) {
  std::vector<CSetMorphism> homs = enumerate_hom(a, b, cap);
  std::vector<Elem> carrier;
  carrier.reserve(homs.size());
  for (const CSetMorphism& h : homs) {
    std::vector<std::pair<Elem, Elem>> rows(h.graph().begin(), h.graph().end());
    carrier.push_back(Elem::fun(std::move(rows)));
  }
  std::sort(carrier.begin(), carrier.end());

  // f ~ g at l iff related arguments go to related results; reflexivity holds because
  // the carrier contains exactly the relation-preserving tables.
  std::map<Label, Relation> rels;
  for (std::size_t li = 0; li < a.universe().size(); ++li) {
    Relation r;
    for (const Elem& f : carrier) {
      for (const Elem& g : carrier) {
        bool related = true;
        for (const auto& [x, y] : a.relation_at(li)) {
          if (!b.related(li, f.apply(x), g.apply(y))) {
            related = false;
            break;
          }
        }
        if (related) r.emplace_back(f, g);
      }
    }
    rels[a.universe().labels()[li]] = std::move(r);
  }
  ClassifiedSet object = construct_set(a.universe(), carrier, rels);

  Product pairing = product(object, a);
  std::vector<ElemPair> ev;
  for (const Elem& p : pairing.object.carrier()) {
    ev.emplace_back(p, p.first().apply(p.second()));
  }
  CSetMorphism eval = construct_morphism(pairing.object, b, std::move(ev));
  return Exponential{object, a, b, std::move(eval)};
}

CSetMorphism Exponential::curry(const CSetMorphism& f, const ClassifiedSet& c) const {
  Product pairing = product(c, base);
  if (f.source() != pairing.object || f.target() != codomain) {
    fail("EndpointMismatch", "curry expects a morphism C x A -> B over the given C");
  }
  std::vector<ElemPair> graph;
  for (const Elem& x : c.carrier()) {
    std::vector<std::pair<Elem, Elem>> rows;
    rows.reserve(base.size());
    for (const Elem& y : base.carrier()) {
      rows.emplace_back(y, f.apply(Elem::pair(x, y)));
    }
    graph.emplace_back(x, Elem::fun(std::move(rows)));
  }
  return construct_morphism(c, object, std::move(graph));
}

CSetMorphism Exponential::uncurry(const CSetMorphism& g) const {
  if (g.target() != object) {
    fail("EndpointMismatch", "uncurry expects a morphism into the exponential object");
  }
  Product pairing = product(g.source(), base);
  std::vector<ElemPair> graph;
  for (const Elem& p : pairing.object.carrier()) {
    graph.emplace_back(p, g.apply(p.first()).apply(p.second()));
  }
  return construct_morphism(pairing.object, codomain, std::move(graph));
}

ClassifiedSet discrete_booleans(const LabelUniverse& universe) {
  return construct_set(universe, {bool_ff(), bool_tt()});
}

ClassifiedSet codiscrete_booleans(const LabelUniverse& universe) {
  std::map<Label, Relation> rels;
  for (const Label& l : universe.labels()) {
    rels[l] = {{bool_ff(), bool_tt()}, {bool_tt(), bool_ff()}};
  }
  return construct_set(universe, {bool_ff(), bool_tt()}, rels);
}

Elem bool_tt() { return Elem::atom("tt"); }
Elem bool_ff() { return Elem::atom("ff"); }

}  // namespace csets
