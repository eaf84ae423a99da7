#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "csets/cset.hpp"
#include "csets/harness.hpp"

using namespace csets;

namespace {

Label L("L"), H("H");

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

// Brute-force reference enumerator, deliberately written against the raw
// relation lists rather than through the library's search: generate every
// function by an explicit odometer and keep the relation-preserving ones.
std::vector<std::vector<ElemPair>> all_homs_by_hand(const ClassifiedSet& a,
                                                    const ClassifiedSet& b) {
  std::vector<std::vector<ElemPair>> out;
  const auto& dom = a.carrier();
  const auto& cod = b.carrier();
  if (dom.empty()) {
    out.push_back({});
    return out;
  }
  if (cod.empty()) return out;
  std::vector<std::size_t> pick(dom.size(), 0);
  auto related_in = [](const Relation& r, const Elem& x, const Elem& y) {
    return std::find(r.begin(), r.end(), ElemPair(x, y)) != r.end();
  };
  while (true) {
    bool ok = true;
    for (const Label& l : a.universe().labels()) {
      const Relation& ra = a.relation(l);
      const Relation& rb = b.relation(l);
      for (std::size_t i = 0; ok && i < dom.size(); ++i) {
        for (std::size_t j = 0; ok && j < dom.size(); ++j) {
          if (related_in(ra, dom[i], dom[j]) && !related_in(rb, cod[pick[i]], cod[pick[j]])) {
            ok = false;
          }
        }
      }
      if (!ok) break;
    }
    if (ok) {
      std::vector<ElemPair> graph;
      for (std::size_t i = 0; i < dom.size(); ++i) graph.emplace_back(dom[i], cod[pick[i]]);
      out.push_back(std::move(graph));
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == cod.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return out;
}

std::set<std::vector<ElemPair>> graph_set(const std::vector<CSetMorphism>& homs) {
  std::set<std::vector<ElemPair>> out;
  for (const CSetMorphism& f : homs) out.insert(f.graph());
  return out;
}

std::set<std::vector<ElemPair>> graph_set(const std::vector<std::vector<ElemPair>>& graphs) {
  return {graphs.begin(), graphs.end()};
}

}  // namespace

TEST_CASE("construction closes reflexivity and validates input") {
  ClassifiedSet x = make(lh(), {"a", "b"}, {{L, {{"a", "b"}}}});
  CHECK(x.size() == 2);
  const Relation& rl = x.relation(L);
  CHECK(rl.size() == 3);  // (a,a) (a,b) (b,b)
  CHECK(x.related(L, Elem::atom("a"), Elem::atom("b")));
  CHECK(x.related(L, Elem::atom("a"), Elem::atom("a")));
  CHECK_FALSE(x.related(L, Elem::atom("b"), Elem::atom("a")));
  CHECK(x.relation(H).size() == 2);  // diagonal only

  CHECK_THROWS_WITH_AS(make(lh(), {"a", "a"}), doctest::Contains("DuplicateElement"), Error);
  CHECK_THROWS_WITH_AS(make(lh(), {"a"}, {{Label("X"), {{"a", "a"}}}}),
                       doctest::Contains("UnknownLabel"), Error);
  CHECK_THROWS_WITH_AS(make(lh(), {"a"}, {{L, {{"a", "zzz"}}}}),
                       doctest::Contains("RelationOutOfCarrier"), Error);
  CHECK_THROWS_WITH_AS(x.relation(Label("X")), doctest::Contains("UnknownLabel"), Error);
}

TEST_CASE("morphism construction validates totality, target membership, preservation") {
  ClassifiedSet x = make(lh(), {"a", "b"}, {{L, {{"a", "b"}}}});
  ClassifiedSet y = make(lh(), {"p", "q"});

  CSetMorphism id = identity(x);
  CHECK(id.apply(Elem::atom("a")) == Elem::atom("a"));
  CHECK(compose(id, id) == id);

  // a |-> p, b |-> q breaks the L-edge a ~ b since p, q are unrelated in y
  CHECK_THROWS_WITH_AS(
      construct_morphism(x, y, {{Elem::atom("a"), Elem::atom("p")}, {Elem::atom("b"), Elem::atom("q")}}),
      doctest::Contains("NotAMorphism"), Error);
  // constant maps always work
  CSetMorphism c = construct_morphism(
      x, y, {{Elem::atom("a"), Elem::atom("p")}, {Elem::atom("b"), Elem::atom("p")}});
  CHECK(is_constant(c));
  CHECK_FALSE(is_constant(identity(x)));
  // values outside the target carrier
  CHECK_THROWS_WITH_AS(
      construct_morphism(x, y, {{Elem::atom("a"), Elem::atom("zzz")}, {Elem::atom("b"), Elem::atom("p")}}),
      doctest::Contains("NotInTarget"), Error);
  // composing with mismatched endpoints
  ClassifiedSet z = make(LabelUniverse({L}), {"a"});
  CHECK_THROWS_WITH_AS(compose(identity(z), id), doctest::Contains("EndpointMismatch"), Error);
}

TEST_CASE("hom enumeration agrees with the by-hand odometer") {
  LabelUniverse u = lh();
  ClassifiedSet disc = discrete_booleans(u);
  ClassifiedSet codisc = codiscrete_booleans(u);
  CHECK(graph_set(enumerate_hom(disc, codisc)) == graph_set(all_homs_by_hand(disc, codisc)));
  CHECK(graph_set(enumerate_hom(codisc, disc)) == graph_set(all_homs_by_hand(codisc, disc)));

  Rng rng(2024);
  for (int i = 0; i < 6; ++i) {
    ClassifiedSet a = random_classified_set(rng, u, 3);
    ClassifiedSet b = random_classified_set(rng, u, 3);
    CHECK(graph_set(enumerate_hom(a, b)) == graph_set(all_homs_by_hand(a, b)));
  }

  ClassifiedSet none = make(u, {});
  CHECK(enumerate_hom(none, disc).size() == 1);   // the empty map
  CHECK(enumerate_hom(disc, none).empty());       // nowhere to send anything
}

TEST_CASE("fixed hom counts over {L, H}") {
  LabelUniverse u = lh();
  ClassifiedSet disc = discrete_booleans(u);
  ClassifiedSet codisc = codiscrete_booleans(u);
  CHECK(enumerate_hom(codisc, disc).size() == 2);
  CHECK(enumerate_hom(disc, disc).size() == 4);
  CHECK(enumerate_hom(disc, codisc).size() == 4);
  CHECK(enumerate_hom(terminal(u), disc).size() == 2);
}

TEST_CASE("terminal and initial objects") {
  LabelUniverse u = lh();
  ClassifiedSet one = terminal(u);
  ClassifiedSet zero = initial(u);
  CHECK(one.size() == 1);
  CHECK(zero.empty());
  ClassifiedSet x = make(u, {"a", "b", "c"}, {{H, {{"a", "c"}}}});
  CHECK(bang(x).target() == one);
  CHECK(from_initial(x).source() == zero);
  CHECK(enumerate_hom(x, one).size() == 1);
  CHECK(enumerate_hom(zero, x).size() == 1);
}

TEST_CASE("product carries componentwise relations") {
  LabelUniverse u = lh();
  ClassifiedSet x = make(u, {"a", "b"}, {{L, {{"a", "b"}}}});
  ClassifiedSet y = make(u, {"p", "q"}, {{L, {{"p", "q"}}}, {H, {{"p", "q"}}}});
  Product p = product(x, y);
  CHECK(p.object.size() == 4);
  Elem ap = Elem::pair(Elem::atom("a"), Elem::atom("p"));
  Elem bq = Elem::pair(Elem::atom("b"), Elem::atom("q"));
  CHECK(p.object.related(L, ap, bq));        // both coordinates step at L
  CHECK_FALSE(p.object.related(H, ap, bq));  // a !~H b
  CHECK(p.proj1.apply(ap) == Elem::atom("a"));
  CHECK(p.proj2.apply(ap) == Elem::atom("p"));
  // mediating map of (id, constant p)
  CSetMorphism cp = construct_morphism(
      x, y, {{Elem::atom("a"), Elem::atom("p")}, {Elem::atom("b"), Elem::atom("p")}});
  CSetMorphism m = p.tuple(identity(x), cp);
  CHECK(compose(p.proj1, m) == identity(x));
  CHECK(compose(p.proj2, m) == cp);
}

TEST_CASE("coproduct tags elements and copairs") {
  LabelUniverse u = lh();
  ClassifiedSet x = make(u, {"a"});
  ClassifiedSet y = make(u, {"p", "q"}, {{H, {{"p", "q"}}}});
  Coproduct c = coproduct(x, y);
  CHECK(c.object.size() == 3);
  CHECK(c.inj1.apply(Elem::atom("a")) == Elem::inl(Elem::atom("a")));
  CHECK(c.inj2.apply(Elem::atom("p")) == Elem::inr(Elem::atom("p")));
  CHECK(c.object.related(H, Elem::inr(Elem::atom("p")), Elem::inr(Elem::atom("q"))));
  CHECK_FALSE(c.object.related(H, Elem::inl(Elem::atom("a")), Elem::inr(Elem::atom("p"))));
  CSetMorphism f = bang(x);
  CSetMorphism g = bang(y);
  CSetMorphism m = c.cotuple(f, g);
  CHECK(compose(m, c.inj1) == f);
  CHECK(compose(m, c.inj2) == g);
}

TEST_CASE("equalizer restricts to the agreement subset") {
  LabelUniverse u = lh();
  ClassifiedSet b2 = discrete_booleans(u);
  CSetMorphism ident = identity(b2);
  // the swap is a morphism of the discrete booleans
  CSetMorphism swap = construct_morphism(
      b2, b2, {{bool_tt(), bool_ff()}, {bool_ff(), bool_tt()}});
  Equalizer e1 = equalizer(ident, swap);
  CHECK(e1.object.empty());
  CSetMorphism ctt = construct_morphism(b2, b2, {{bool_tt(), bool_tt()}, {bool_ff(), bool_tt()}});
  Equalizer e2 = equalizer(ident, ctt);
  CHECK(e2.object.size() == 1);
  CHECK(e2.object.contains(bool_tt()));
  CHECK(compose(ident, e2.include) == compose(ctt, e2.include));
  // factoring: the constant-tt point from 1 equalizes, and factors uniquely
  ClassifiedSet one = terminal(u);
  CSetMorphism pt = construct_morphism(one, b2, {{Elem::star(), bool_tt()}});
  CSetMorphism k = e2.factor(pt);
  CHECK(compose(e2.include, k) == pt);
}

TEST_CASE("coequalizer quotients by the least equivalence") {
  LabelUniverse u = lh();
  ClassifiedSet one = terminal(u);
  ClassifiedSet b2 = discrete_booleans(u);
  CSetMorphism pt = construct_morphism(one, b2, {{Elem::star(), bool_tt()}});
  CSetMorphism pf = construct_morphism(one, b2, {{Elem::star(), bool_ff()}});
  Coequalizer q = coequalizer(pt, pf);
  CHECK(q.object.size() == 1);  // tt and ff identified
  CHECK(q.quotient.apply(bool_tt()) == q.quotient.apply(bool_ff()));
  // a morphism that cannot tell tt from ff factors through
  CSetMorphism collapse = bang(b2);
  CSetMorphism k = q.factor(collapse);
  CHECK(compose(k, q.quotient) == collapse);
}

TEST_CASE("exponential carrier is the hom-set with the pointwise-on-related-pairs relation") {
  LabelUniverse u = lh();
  ClassifiedSet disc = discrete_booleans(u);
  ClassifiedSet codisc = codiscrete_booleans(u);
  Exponential e = exponential(disc, disc);
  CHECK(e.object.size() == 4);
  Exponential e2 = exponential(codisc, disc);
  CHECK(e2.object.size() == 2);  // only the constants survive
  // evaluation computes application
  Product pa = product(e.object, disc);
  for (const Elem& f : e.object.carrier()) {
    for (const Elem& x : disc.carrier()) {
      Elem applied = e.eval.apply(Elem::pair(f, x));
      // the table rows of f record exactly this application
      bool found = false;
      for (const ElemPair& row : f.rows()) {
        if (row.first == x) {
          CHECK(row.second == applied);
          found = true;
        }
      }
      CHECK(found);
    }
  }
  (void)pa;
  // curry / uncurry are mutually inverse on a sample
  ClassifiedSet one = terminal(u);
  Product oa = product(one, disc);
  CSetMorphism first = construct_morphism(
      oa.object, disc,
      {{Elem::pair(Elem::star(), bool_tt()), bool_tt()},
       {Elem::pair(Elem::star(), bool_ff()), bool_ff()}});
  CSetMorphism curried = e.curry(first, one);
  CHECK(e.uncurry(curried) == first);
}

TEST_CASE("enumeration caps surface as a distinct error") {
  LabelUniverse u = lh();
  ClassifiedSet codisc = codiscrete_booleans(u);
  CHECK_THROWS_WITH_AS(enumerate_hom(codisc, codisc, 2), doctest::Contains("EnumerationCapExceeded"),
                       Error);
  CHECK(enumerate_points(codisc).size() == 2);
  CHECK_THROWS_WITH_AS(enumerate_points(codisc, 1), doctest::Contains("EnumerationCapExceeded"),
                       Error);
}
