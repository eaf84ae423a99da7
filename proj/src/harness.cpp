#include "csets/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace csets {

// ---------------------------------------------------------------------------
// Rng

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t bound) {
  if (bound == 0) fail("ShapeMismatch", "Rng::below needs a positive bound");
  return static_cast<std::size_t>(next() % bound);
}

bool Rng::coin() { return (next() & 1) != 0; }

// ---------------------------------------------------------------------------
// Reports

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Vacuous: return "vacuous";
  }
  fail("ShapeMismatch", "unreachable verdict");
}

Verdict CheckReport::verdict() const {
  if (!failures.empty()) return Verdict::Fail;
  if (cases == 0 || !skipped.empty()) return Verdict::Vacuous;
  return Verdict::Pass;
}

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates one report. Failures keep the first witness per law id so a
// broken law cannot flood the report; cases count every instance checked.
class Suite {
 public:
  Suite(std::string name, std::uint64_t seed) : start_(Clock::now()) {
    report_.suite = std::move(name);
    report_.seed = seed;
  }

  void pass_case() { ++report_.cases; }

  void fail_case(const std::string& law, const std::string& inputs, const std::string& witness) {
    ++report_.cases;
    if (seen_.insert(law).second) report_.failures.push_back({law, inputs, witness});
  }

  void check(bool ok, const std::string& law, const std::string& inputs,
             const std::string& witness) {
    if (ok) {
      pass_case();
    } else {
      fail_case(law, inputs, witness);
    }
  }

  void skip(const std::string& note) { report_.skipped.push_back(note); }

  CheckReport finish() {
    report_.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return report_;
  }

 private:
  CheckReport report_;
  std::set<std::string> seen_;
  Clock::time_point start_;
};

using Graph = std::vector<ElemPair>;

std::vector<Graph> graph_set(const std::vector<CSetMorphism>& homs) {
  std::vector<Graph> out;
  out.reserve(homs.size());
  for (const CSetMorphism& f : homs) out.push_back(f.graph());
  std::sort(out.begin(), out.end());
  return out;
}

std::string count_witness(std::size_t got, std::size_t want) {
  return "count " + std::to_string(got) + ", expected " + std::to_string(want);
}

// f x g on products: the mediating map <f . proj1, g . proj2>.
CSetMorphism cross(const Product& dom, const Product& cod, const CSetMorphism& f,
                   const CSetMorphism& g) {
  return cod.tuple(compose(f, dom.proj1), compose(g, dom.proj2));
}

// The canonical associator (A x B) x C -> A x (B x C).
CSetMorphism associator(const ClassifiedSet& a, const ClassifiedSet& b, const ClassifiedSet& c) {
  ClassifiedSet ab = product(a, b).object;
  ClassifiedSet bc = product(b, c).object;
  ClassifiedSet source = product(ab, c).object;
  ClassifiedSet target = product(a, bc).object;
  Graph graph;
  graph.reserve(source.size());
  for (const Elem& e : source.carrier()) {
    graph.emplace_back(
        e, Elem::pair(e.first().first(), Elem::pair(e.first().second(), e.second())));
  }
  return construct_morphism(source, target, std::move(graph));
}

// Identity-graph morphism between two structurally equal objects stated with
// different constructions (e.g. Diamond Diamond B -> Diamond B).
CSetMorphism retag_identity(const ClassifiedSet& source, const ClassifiedSet& target) {
  Graph graph;
  graph.reserve(source.size());
  for (const Elem& e : source.carrier()) graph.emplace_back(e, e);
  return construct_morphism(source, target, std::move(graph));
}

// ---------------------------------------------------------------------------
// Suite: bcc

void bcc_product(Suite& suite, const ClassifiedSet& a, const ClassifiedSet& b,
                 const ClassifiedSet& x, const std::string& inputs, std::size_t cap) {
  Product p = product(a, b);
  auto hom_xa = enumerate_hom(x, a, cap);
  auto hom_xb = enumerate_hom(x, b, cap);
  auto hom_xp = enumerate_hom(x, p.object, cap);
  std::map<std::pair<Graph, Graph>, std::size_t> buckets;
  for (const CSetMorphism& m : hom_xp) {
    buckets[{compose(p.proj1, m).graph(), compose(p.proj2, m).graph()}]++;
  }
  suite.check(hom_xp.size() == hom_xa.size() * hom_xb.size(), "product-pairing-bijective",
              inputs, count_witness(hom_xp.size(), hom_xa.size() * hom_xb.size()));
  for (const CSetMorphism& f : hom_xa) {
    for (const CSetMorphism& g : hom_xb) {
      CSetMorphism m = p.tuple(f, g);
      suite.check(compose(p.proj1, m) == f && compose(p.proj2, m) == g,
                  "product-projections-recover", inputs, m.str());
      auto it = buckets.find({f.graph(), g.graph()});
      suite.check(it != buckets.end() && it->second == 1, "product-mediator-unique", inputs,
                  "pairing <" + f.str() + ", " + g.str() + ">");
    }
  }
}

void bcc_coproduct(Suite& suite, const ClassifiedSet& a, const ClassifiedSet& b,
                   const ClassifiedSet& x, const std::string& inputs, std::size_t cap) {
  Coproduct q = coproduct(a, b);
  auto hom_ax = enumerate_hom(a, x, cap);
  auto hom_bx = enumerate_hom(b, x, cap);
  auto hom_qx = enumerate_hom(q.object, x, cap);
  std::map<std::pair<Graph, Graph>, std::size_t> buckets;
  for (const CSetMorphism& m : hom_qx) {
    buckets[{compose(m, q.inj1).graph(), compose(m, q.inj2).graph()}]++;
  }
  suite.check(hom_qx.size() == hom_ax.size() * hom_bx.size(), "coproduct-copairing-bijective",
              inputs, count_witness(hom_qx.size(), hom_ax.size() * hom_bx.size()));
  for (const CSetMorphism& f : hom_ax) {
    for (const CSetMorphism& g : hom_bx) {
      CSetMorphism m = q.cotuple(f, g);
      suite.check(compose(m, q.inj1) == f && compose(m, q.inj2) == g,
                  "coproduct-injections-recover", inputs, m.str());
      auto it = buckets.find({f.graph(), g.graph()});
      suite.check(it != buckets.end() && it->second == 1, "coproduct-mediator-unique", inputs,
                  "copairing [" + f.str() + ", " + g.str() + "]");
    }
  }
}

void bcc_equalizer(Suite& suite, const ClassifiedSet& a, const ClassifiedSet& b,
                   const ClassifiedSet& x, const std::string& inputs, std::size_t cap) {
  auto hom_ab = enumerate_hom(a, b, cap);
  auto hom_xa = enumerate_hom(x, a, cap);
  for (const CSetMorphism& f : hom_ab) {
    for (const CSetMorphism& g : hom_ab) {
      Equalizer e = equalizer(f, g);
      suite.check(compose(f, e.include) == compose(g, e.include), "equalizer-fork", inputs,
                  e.include.str());
      std::map<Graph, std::size_t> buckets;
      for (const CSetMorphism& k : enumerate_hom(x, e.object, cap)) {
        buckets[compose(e.include, k).graph()]++;
      }
      for (const CSetMorphism& h : hom_xa) {
        if (compose(f, h) != compose(g, h)) continue;
        CSetMorphism k = e.factor(h);
        suite.check(compose(e.include, k) == h, "equalizer-factorization", inputs, k.str());
        auto it = buckets.find(h.graph());
        suite.check(it != buckets.end() && it->second == 1, "equalizer-mediator-unique", inputs,
                    h.str());
      }
    }
  }
}

void bcc_coequalizer(Suite& suite, const ClassifiedSet& a, const ClassifiedSet& b,
                     const ClassifiedSet& x, const std::string& inputs, std::size_t cap) {
  auto hom_ab = enumerate_hom(a, b, cap);
  auto hom_bx = enumerate_hom(b, x, cap);
  for (const CSetMorphism& f : hom_ab) {
    for (const CSetMorphism& g : hom_ab) {
      Coequalizer q = coequalizer(f, g);
      suite.check(compose(q.quotient, f) == compose(q.quotient, g), "coequalizer-fork", inputs,
                  q.quotient.str());
      std::map<Graph, std::size_t> buckets;
      for (const CSetMorphism& k : enumerate_hom(q.object, x, cap)) {
        buckets[compose(k, q.quotient).graph()]++;
      }
      for (const CSetMorphism& h : hom_bx) {
        if (compose(h, f) != compose(h, g)) continue;
        CSetMorphism k = q.factor(h);
        suite.check(compose(k, q.quotient) == h, "coequalizer-factorization", inputs, k.str());
        auto it = buckets.find(h.graph());
        suite.check(it != buckets.end() && it->second == 1, "coequalizer-mediator-unique",
                    inputs, h.str());
      }
    }
  }
}

void bcc_exponential(Suite& suite, const ClassifiedSet& a, const ClassifiedSet& b,
                     const ClassifiedSet& x, const std::string& inputs, std::size_t cap) {
  Exponential e = exponential(a, b, cap);
  Product xa = product(x, a);
  Product ea = product(e.object, a);
  auto hom_xab = enumerate_hom(xa.object, b, cap);
  auto hom_xe = enumerate_hom(x, e.object, cap);
  std::map<Graph, std::size_t> buckets;
  for (const CSetMorphism& m : hom_xe) {
    buckets[compose(e.eval, cross(xa, ea, m, identity(a))).graph()]++;
  }
  suite.check(hom_xe.size() == hom_xab.size(), "currying-bijective", inputs,
              count_witness(hom_xe.size(), hom_xab.size()));
  for (const CSetMorphism& f : hom_xab) {
    CSetMorphism m = e.curry(f, x);
    suite.check(e.uncurry(m) == f, "curry-uncurry-roundtrip", inputs, m.str());
    suite.check(compose(e.eval, cross(xa, ea, m, identity(a))) == f, "evaluation-recovers",
                inputs, m.str());
    auto it = buckets.find(f.graph());
    suite.check(it != buckets.end() && it->second == 1, "curry-unique", inputs, f.str());
  }
}

CheckReport suite_bcc(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  Suite suite("bcc", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet a = random_classified_set(rng, u, 3);
    ClassifiedSet b = random_classified_set(rng, u, 3);
    ClassifiedSet x = random_classified_set(rng, u, 3);
    std::string inputs = "trial " + std::to_string(t) + ": A = " + a.str() +
                         ", B = " + b.str() + ", X = " + x.str();
    try {
      suite.check(enumerate_hom(x, terminal(u), cap).size() == 1, "terminal-unique", inputs,
                  bang(x).str());
      suite.check(enumerate_hom(initial(u), x, cap).size() == 1, "initial-unique", inputs,
                  from_initial(x).str());
      bcc_product(suite, a, b, x, inputs, cap);
      bcc_coproduct(suite, a, b, x, inputs, cap);
      bcc_equalizer(suite, a, b, x, inputs, cap);
      bcc_coequalizer(suite, a, b, x, inputs, cap);
      bcc_exponential(suite, a, b, x, inputs, cap);
    } catch (const Error& e) {
      if (e.kind() != "EnumerationCapExceeded") throw;
      suite.skip(inputs + ": " + e.what());
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: adjunction

CheckReport suite_adjunction(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  Suite suite("adjunction", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  std::vector<LevelMask> masks = {
      LevelMask(u, {}), LevelMask(u, {Label("L")}), LevelMask(u, {Label("H")}),
      LevelMask::all(u)};
  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet x = random_classified_set(rng, u, 3);
    ClassifiedSet y = random_classified_set(rng, u, 3);
    for (const LevelMask& mask : masks) {
      ClassifiedSet s = random_classified_set(rng, mask.residual(), 3);
      std::string inputs = "trial " + std::to_string(t) + ": pi = " + mask.str() +
                           ", X = " + x.str() + ", Y = " + y.str() + ", S = " + s.str();
      try {
        // discretize -| forget: both functors are the identity on carriers, so
        // the two hom-sets are literally the same set of graphs.
        suite.check(graph_set(enumerate_hom(discretize(mask, s), x, cap)) ==
                        graph_set(enumerate_hom(s, forget(mask, x), cap)),
                    "discretize-forget-transpose", inputs, "hom-sets differ as graph sets");
        // forget -| codiscretize
        suite.check(graph_set(enumerate_hom(forget(mask, x), s, cap)) ==
                        graph_set(enumerate_hom(x, codiscretize(mask, s), cap)),
                    "forget-codiscretize-transpose", inputs, "hom-sets differ as graph sets");
        // components -| discretize, via precomposition with the quotient unit
        Components comp = components(mask, x);
        auto hom_cx_s = enumerate_hom(comp.object, s, cap);
        auto hom_x_ds = enumerate_hom(x, discretize(mask, s), cap);
        CSetMorphism unit =
            construct_morphism(x, discretize(mask, comp.object), comp.quotient);
        std::set<Graph> transposed;
        for (const CSetMorphism& g : hom_cx_s) {
          transposed.insert(compose(discretize_map(mask, g), unit).graph());
        }
        suite.check(transposed.size() == hom_cx_s.size() &&
                        hom_cx_s.size() == hom_x_ds.size(),
                    "components-discretize-bijective", inputs,
                    count_witness(hom_cx_s.size(), hom_x_ds.size()));
        // the derived adjunction between the two modalities
        auto hom_box = enumerate_hom(modality_object(ModalityKind::Box, mask, x), y, cap);
        auto hom_diamond =
            enumerate_hom(x, modality_object(ModalityKind::Diamond, mask, y), cap);
        suite.check(hom_box.size() == hom_diamond.size(), "box-diamond-count", inputs,
                    count_witness(hom_box.size(), hom_diamond.size()));
        for (const CSetMorphism& f : hom_box) {
          CSetMorphism fwd = adjoint_transpose(TransposeDirection::Forward, mask, x, y, f);
          CSetMorphism back = adjoint_transpose(TransposeDirection::Backward, mask, x, y, fwd);
          suite.check(back == f, "box-diamond-roundtrip", inputs, f.str());
        }
      } catch (const Error& e) {
        if (e.kind() != "EnumerationCapExceeded") throw;
        suite.skip(inputs + ": " + e.what());
      }
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: corollary

CheckReport suite_corollary(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  (void)cap;
  Suite suite("corollary", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  std::vector<LevelMask> masks = {
      LevelMask(u, {}), LevelMask(u, {Label("L")}), LevelMask(u, {Label("H")}),
      LevelMask::all(u)};
  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet x = random_classified_set(rng, u, 4);
    ClassifiedSet y = random_classified_set(rng, u, 4);
    for (const LevelMask& mask : masks) {
      ClassifiedSet s = random_classified_set(rng, mask.residual(), 4);
      std::string inputs = "trial " + std::to_string(t) + ": pi = " + mask.str() +
                           ", X = " + x.str() + ", Y = " + y.str() + ", S = " + s.str();
      suite.check(forget(mask, discretize(mask, s)) == s, "forget-discretize-identity", inputs,
                  forget(mask, discretize(mask, s)).str());
      suite.check(forget(mask, codiscretize(mask, s)) == s, "forget-codiscretize-identity",
                  inputs, forget(mask, codiscretize(mask, s)).str());
      ClassifiedSet bx = modality_object(ModalityKind::Box, mask, x);
      ClassifiedSet dx = modality_object(ModalityKind::Diamond, mask, x);
      suite.check(modality_object(ModalityKind::Box, mask, bx) == bx, "visibility-idempotent",
                  inputs, bx.str());
      suite.check(modality_object(ModalityKind::Diamond, mask, dx) == dx,
                  "protection-idempotent", inputs, dx.str());
      // shape is idempotent up to collapsing singleton classes of classes
      ClassifiedSet sh = modality_object(ModalityKind::Shape, mask, x);
      ClassifiedSet shsh = modality_object(ModalityKind::Shape, mask, sh);
      bool collapse_ok = shsh.size() == sh.size();
      Graph collapse;
      for (const Elem& e : shsh.carrier()) {
        if (e.kind() != Elem::Kind::Class || e.members().size() != 1) {
          collapse_ok = false;
          break;
        }
        collapse.emplace_back(e, e.members().front());
      }
      if (collapse_ok) {
        try {
          CSetMorphism down = construct_morphism(shsh, sh, collapse);
          Graph up;
          for (const auto& [from, to] : down.graph()) up.emplace_back(to, from);
          std::sort(up.begin(), up.end());
          construct_morphism(sh, shsh, up);
        } catch (const Error&) {
          collapse_ok = false;
        }
      }
      suite.check(collapse_ok, "shape-idempotent-iso", inputs, shsh.str());
      // visibility preserves binary products on the nose
      suite.check(modality_object(ModalityKind::Box, mask, product(x, y).object) ==
                      product(modality_object(ModalityKind::Box, mask, x),
                              modality_object(ModalityKind::Box, mask, y))
                          .object,
                  "visibility-preserves-products", inputs, "");
      // components distribute over products: [(x,y)] -> ([x],[y]) is a bijection
      Components cx = components(mask, x);
      Components cy = components(mask, y);
      Components cxy = components(mask, product(x, y).object);
      bool split_ok = cxy.object.size() == cx.object.size() * cy.object.size() ||
                      (x.empty() || y.empty());
      if (x.empty() || y.empty()) {
        split_ok = cxy.object.empty();
      }
      std::set<Elem> images;
      for (const Elem& cls : cxy.object.carrier()) {
        std::set<Elem> member_images;
        for (const Elem& member : cls.members()) {
          member_images.insert(
              Elem::pair(cx.class_of(member.first()), cy.class_of(member.second())));
        }
        if (member_images.size() != 1) {
          split_ok = false;
          break;
        }
        images.insert(*member_images.begin());
      }
      if (split_ok) split_ok = images.size() == cxy.object.size();
      suite.check(split_ok, "components-preserve-products", inputs, cxy.object.str());
      // concreteness: the counit Box X -> X is injective, the unit X -> Shape X
      // is surjective
      CSetMorphism counit = structural_map(ModalityKind::Box, mask, x);
      std::set<Elem> counit_values;
      for (const auto& [from, to] : counit.graph()) counit_values.insert(to);
      suite.check(counit_values.size() == counit.graph().size(), "counit-injective", inputs,
                  counit.str());
      CSetMorphism unit = structural_map(ModalityKind::Shape, mask, x);
      std::set<Elem> unit_values;
      for (const auto& [from, to] : unit.graph()) unit_values.insert(to);
      suite.check(unit_values.size() == unit.target().size(), "shape-unit-surjective", inputs,
                  unit.str());
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: levelled

std::vector<Label> bits_to_labels(const std::vector<Label>& base, unsigned bits) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (bits & (1u << i)) out.push_back(base[i]);
  }
  return out;
}

CheckReport suite_levelled(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  (void)cap;
  Suite suite("levelled", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("M"), Label("H")});
  const std::vector<Label>& base = u.labels();
  const unsigned full = (1u << base.size()) - 1;

  auto mask_of = [&](unsigned pi) {  // modality mask over the full universe
    return LevelMask(u, bits_to_labels(base, pi));
  };
  auto box = [&](unsigned pi, const ClassifiedSet& w) {
    return modality_object(ModalityKind::Box, mask_of(pi), w);
  };
  auto diamond = [&](unsigned pi, const ClassifiedSet& w) {
    return modality_object(ModalityKind::Diamond, mask_of(pi), w);
  };

  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet x = random_classified_set(rng, u, 4);
    std::string base_inputs = "trial " + std::to_string(t) + ": X = " + x.str();

    // the restriction of X to each sub-universe, reused across squares
    std::vector<ClassifiedSet> restricted;
    std::vector<LabelUniverse> universes;
    for (unsigned pi = 0; pi <= full; ++pi) {
      universes.push_back(LabelUniverse(bits_to_labels(base, pi)));
      restricted.push_back(forget(LevelMask(u, bits_to_labels(base, full & ~pi)), x));
    }
    // mask for an inclusion sub <= pi, acting on pi-sets
    auto incl = [&](unsigned sub, unsigned pi) {
      return LevelMask(universes[pi], bits_to_labels(base, pi & ~sub));
    };

    // nine switch laws, one per (pi, pi') pair
    for (unsigned pi = 0; pi <= full; ++pi) {
      for (unsigned pj = 0; pj <= full; ++pj) {
        std::string inputs = base_inputs + ", pi = " + mask_of(pi).str() +
                             ", pi' = " + mask_of(pj).str();
        if ((pi & pj) == 0) {
          suite.check(box(pi, box(pj, x)) == box(pi | pj, x), "switch-1-disjoint-box-box",
                      inputs, box(pi, box(pj, x)).str());
          suite.check(diamond(pi, diamond(pj, x)) == diamond(pi | pj, x),
                      "switch-2-disjoint-diamond-diamond", inputs,
                      diamond(pi, diamond(pj, x)).str());
          suite.check(box(pi, diamond(pj, x)) == diamond(pj, box(pi, x)),
                      "switch-7-disjoint-commute", inputs, box(pi, diamond(pj, x)).str());
        }
        suite.check(box(pi, box(pj, x)) == box(pi | pj, x), "switch-3-box-box", inputs,
                    box(pi, box(pj, x)).str());
        suite.check(diamond(pi, diamond(pj, x)) == diamond(pi | pj, x),
                    "switch-4-diamond-diamond", inputs, diamond(pi, diamond(pj, x)).str());
        if ((pi & pj) == pi) {  // pi subset of pj
          suite.check(box(pj, diamond(pi, x)) == box(pj, x), "switch-5-box-absorbs-diamond",
                      inputs, box(pj, diamond(pi, x)).str());
          suite.check(diamond(pj, box(pi, x)) == diamond(pj, x),
                      "switch-6-diamond-absorbs-box", inputs, diamond(pj, box(pi, x)).str());
        }
        suite.check(box(pi, diamond(pj, x)) == diamond(pj & ~pi, box(pi, x)),
                    "switch-8-box-past-diamond", inputs, box(pi, diamond(pj, x)).str());
        suite.check(diamond(pi, box(pj, x)) == box(pj & ~pi, diamond(pi, x)),
                    "switch-9-diamond-past-box", inputs, diamond(pi, box(pj, x)).str());
      }
    }

    // absorption along nested inclusions pi'' <= pi' <= L
    for (unsigned p1 = 0; p1 <= full; ++p1) {
      for (unsigned p2 = p1;; p2 = (p2 + 1) | p1) {  // all supersets of p1
        if (p2 > full) break;
        std::string inputs = base_inputs + ", pi'' = " + mask_of(p1).str() +
                             ", pi' = " + mask_of(p2).str();
        // the modality at the composite inclusion masks L - pi''
        ClassifiedSet dc = diamond(full & ~p1, x);
        ClassifiedSet bc = box(full & ~p1, x);
        suite.check(diamond(full & ~p1, box(full & ~p2, x)) == dc,
                    "absorption-diamond-swallows-box", inputs,
                    diamond(full & ~p1, box(full & ~p2, x)).str());
        suite.check(box(full & ~p1, diamond(full & ~p2, x)) == bc,
                    "absorption-box-swallows-diamond", inputs,
                    box(full & ~p1, diamond(full & ~p2, x)).str());
        if (p2 == full) break;
      }
    }

    // commuting squares over every (pi, pi1 <= pi, pi2 <= pi)
    for (unsigned pi = 0; pi <= full; ++pi) {
      for (unsigned p1 = pi;; p1 = (p1 - 1) & pi) {  // all subsets of pi
        for (unsigned p2 = pi;; p2 = (p2 - 1) & pi) {
          unsigned meet = p1 & p2;
          std::string inputs = base_inputs + ", pi = " + mask_of(pi).str() +
                               ", pi1 = " + mask_of(p1).str() +
                               ", pi2 = " + mask_of(p2).str();
          const ClassifiedSet& w = restricted[pi];    // over pi
          const ClassifiedSet& v = restricted[p2];    // over pi2
          LevelMask alpha = incl(p1, pi);
          LevelMask beta = incl(p2, pi);
          LevelMask gamma = incl(meet, p1);
          LevelMask delta = incl(meet, p2);
          // forget then discretize commute around the square
          suite.check(forget(alpha, discretize(beta, v)) ==
                          discretize(gamma, forget(delta, v)),
                      "square-forget-discretize", inputs,
                      forget(alpha, discretize(beta, v)).str());
          suite.check(forget(alpha, codiscretize(beta, v)) ==
                          codiscretize(gamma, forget(delta, v)),
                      "square-forget-codiscretize", inputs,
                      forget(alpha, codiscretize(beta, v)).str());
          // discretize and codiscretize swap when the square's top is the union
          if ((p1 | p2) == pi) {
            const ClassifiedSet& w0 = restricted[meet];
            suite.check(discretize(alpha, codiscretize(gamma, w0)) ==
                            codiscretize(beta, discretize(delta, w0)),
                        "square-discretize-codiscretize", inputs,
                        discretize(alpha, codiscretize(gamma, w0)).str());
          }
          // the mask-indexed comonad and monad against the forgetful functor
          suite.check(modality_object(ModalityKind::Box, gamma, forget(alpha, w)) ==
                          forget(alpha, modality_object(ModalityKind::Box, beta, w)),
                      "square-box-forget", inputs, "");
          suite.check(modality_object(ModalityKind::Diamond, gamma, forget(alpha, w)) ==
                          forget(alpha, modality_object(ModalityKind::Diamond, beta, w)),
                      "square-diamond-forget", inputs, "");
          // composite inclusions split through either leg, and legs commute
          LevelMask through_meet(universes[pi], bits_to_labels(base, pi & ~meet));
          suite.check(modality_object(ModalityKind::Box, through_meet, w) ==
                          modality_object(ModalityKind::Box, alpha,
                                          modality_object(ModalityKind::Box, beta, w)),
                      "square-box-composite", inputs, "");
          suite.check(modality_object(ModalityKind::Diamond, through_meet, w) ==
                          modality_object(ModalityKind::Diamond, alpha,
                                          modality_object(ModalityKind::Diamond, beta, w)),
                      "square-diamond-composite", inputs, "");
          suite.check(modality_object(ModalityKind::Box, alpha,
                                      modality_object(ModalityKind::Box, beta, w)) ==
                          modality_object(ModalityKind::Box, beta,
                                          modality_object(ModalityKind::Box, alpha, w)),
                      "square-box-commute", inputs, "");
          suite.check(modality_object(ModalityKind::Diamond, alpha,
                                      modality_object(ModalityKind::Diamond, beta, w)) ==
                          modality_object(ModalityKind::Diamond, beta,
                                          modality_object(ModalityKind::Diamond, alpha, w)),
                      "square-diamond-commute", inputs, "");
          if (p2 == 0) break;
        }
        if (p1 == 0) break;
      }
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: strength

CheckReport suite_strength(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  (void)cap;
  Suite suite("strength", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  std::vector<LevelMask> masks = {
      LevelMask(u, {}), LevelMask(u, {Label("L")}), LevelMask(u, {Label("H")}),
      LevelMask::all(u)};
  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet a = random_classified_set(rng, u, 3);
    ClassifiedSet b = random_classified_set(rng, u, 3);
    ClassifiedSet c = random_classified_set(rng, u, 3);
    for (const LevelMask& mask : masks) {
      std::string inputs = "trial " + std::to_string(t) + ": pi = " + mask.str() +
                           ", A = " + a.str() + ", B = " + b.str() + ", C = " + c.str();
      auto diamond = [&](const ClassifiedSet& w) {
        return modality_object(ModalityKind::Diamond, mask, w);
      };
      auto diamond_map = [&](const CSetMorphism& f) {
        return modality_morphism(ModalityKind::Diamond, mask, f);
      };
      ClassifiedSet one = terminal(u);

      // unit law: protecting the second projection commutes with the strength
      Product one_db = product(one, diamond(b));
      Product one_b = product(one, b);
      suite.check(compose(diamond_map(one_b.proj2), strength(mask, one, b)) == one_db.proj2,
                  "strength-unit-projection", inputs,
                  compose(diamond_map(one_b.proj2), strength(mask, one, b)).str());

      // associativity pentagon
      ClassifiedSet ab = product(a, b).object;
      ClassifiedSet bc = product(b, c).object;
      CSetMorphism lhs2 =
          compose(diamond_map(associator(a, b, c)), strength(mask, ab, c));
      Product a_bdc = product(a, product(b, diamond(c)).object);
      Product a_dbc = product(a, diamond(bc));
      CSetMorphism rhs2 = compose(
          strength(mask, a, bc),
          compose(cross(a_bdc, a_dbc, identity(a), strength(mask, b, c)),
                  associator(a, b, diamond(c))));
      suite.check(lhs2 == rhs2, "strength-associativity", inputs, lhs2.str());

      // the unit of the monad slides through
      Product ab_p = product(a, b);
      Product a_db = product(a, diamond(b));
      CSetMorphism lhs3 =
          compose(strength(mask, a, b),
                  cross(ab_p, a_db, identity(a),
                        structural_map(ModalityKind::Diamond, mask, b)));
      suite.check(lhs3 == structural_map(ModalityKind::Diamond, mask, ab_p.object),
                  "strength-monad-unit", inputs, lhs3.str());

      // the multiplication slides through; both multiplications are identity
      // graphs because protection is strictly idempotent
      ClassifiedSet db = diamond(b);
      ClassifiedSet ddb = diamond(db);
      Product a_ddb = product(a, ddb);
      CSetMorphism mu_b = retag_identity(ddb, db);
      CSetMorphism lhs4 = compose(strength(mask, a, b),
                                  cross(a_ddb, a_db, identity(a), mu_b));
      CSetMorphism mu_ab = retag_identity(diamond(diamond(ab_p.object)), diamond(ab_p.object));
      CSetMorphism rhs4 = compose(
          mu_ab, compose(diamond_map(strength(mask, a, b)), strength(mask, a, db)));
      suite.check(lhs4 == rhs4, "strength-monad-multiplication", inputs, lhs4.str());
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: ideal

CheckReport suite_ideal(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  Suite suite("ideal", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  std::vector<LevelMask> masks = {LevelMask(u, {Label("L")}), LevelMask(u, {Label("H")}),
                                  LevelMask::all(u)};
  for (std::size_t t = 0; t < trials; ++t) {
    ClassifiedSet a = random_classified_set(rng, u, 3);
    ClassifiedSet b = random_classified_set(rng, u, 3);
    for (const LevelMask& mask : masks) {
      ClassifiedSet bp = modality_object(ModalityKind::Diamond, mask, b);
      std::string inputs = "trial " + std::to_string(t) + ": pi = " + mask.str() +
                           ", A = " + a.str() + ", B = " + bp.str();
      try {
        suite.check(is_protected_at(bp, mask.selected()), "protection-fixed-point", inputs,
                    bp.str());
        ClassifiedSet exp = exponential(a, bp, cap).object;
        suite.check(is_protected_at(exp, mask.selected()), "protected-exponential-ideal",
                    inputs, exp.str());
      } catch (const Error& e) {
        if (e.kind() != "EnumerationCapExceeded") throw;
        suite.skip(inputs + ": " + e.what());
      }
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite: contractibility

CheckReport suite_contractibility(std::uint64_t seed, std::size_t trials, std::size_t cap) {
  (void)cap;
  Suite suite("contractibility", seed);
  Rng rng(seed);
  LabelUniverse u({Label("L"), Label("H")});
  std::vector<LevelMask> masks = {LevelMask(u, {Label("L")}), LevelMask(u, {Label("H")}),
                                  LevelMask::all(u)};
  for (std::size_t t = 0; t < trials; ++t) {
    for (const LevelMask& mask : masks) {
      ClassifiedSet s = random_classified_set(rng, mask.residual(), 3);
      std::string inputs =
          "trial " + std::to_string(t) + ": pi = " + mask.str() + ", S = " + s.str();
      ClassifiedSet co = codiscretize(mask, s);
      std::size_t classes = components(mask, co).object.size();
      if (s.empty()) {
        suite.check(classes == 0, "empty-codiscrete-no-components", inputs,
                    count_witness(classes, 0));
      } else {
        suite.check(classes == 1, "codiscrete-single-component", inputs,
                    count_witness(classes, 1));
      }
    }
  }
  return suite.finish();
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator and suite dispatch

ClassifiedSet random_classified_set(Rng& rng, const LabelUniverse& universe,
                                    std::size_t max_carrier) {
  std::size_t n = rng.below(max_carrier + 1);
  std::vector<Elem> carrier;
  carrier.reserve(n);
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(Elem::atom("a" + std::to_string(i)));
  std::map<Label, Relation> relations;
  for (const Label& l : universe.labels()) {
    Relation r;
    for (const Elem& x : carrier) {
      for (const Elem& y : carrier) {
        if (x == y) continue;
        if (rng.coin()) r.emplace_back(x, y);
      }
    }
    relations[l] = std::move(r);
  }
  return construct_set(universe, std::move(carrier), relations);
}

CheckReport run_law_suite(const std::string& group, std::uint64_t seed, std::size_t trials,
                          std::size_t cap) {
  if (trials == 0) fail("ShapeMismatch", "a law suite needs at least one trial");
  if (group == "bcc") return suite_bcc(seed, trials, cap);
  if (group == "adjunction") return suite_adjunction(seed, trials, cap);
  if (group == "corollary") return suite_corollary(seed, trials, cap);
  if (group == "levelled") return suite_levelled(seed, trials, cap);
  if (group == "strength") return suite_strength(seed, trials, cap);
  if (group == "ideal") return suite_ideal(seed, trials, cap);
  if (group == "contractibility") return suite_contractibility(seed, trials, cap);
  fail("UnknownSuite", "no law suite named '" + group + "'");
}

// ---------------------------------------------------------------------------
// Constancy

CheckReport check_constancy(const ClassifiedSet& a, const ClassifiedSet& b,
                            const LevelMask& mask, const std::optional<LevelMask>& primed,
                            std::size_t cap) {
  Suite suite("constancy", 0);
  if (primed) {
    // both objects over the full universe; the morphisms compared are
    // Diamond_mask A -> Diamond_primed B
    std::vector<Label> difference;
    for (const Label& l : mask.selected()) {
      if (!primed->selects(l)) difference.push_back(l);
    }
    if (difference.empty()) {
      fail("SideConditionUnmet", "the outer mask must redact a label the inner one does not");
    }
    if (a.empty()) fail("SideConditionUnmet", "the source set must be non-empty");
    if (!is_visible_at(b, difference)) {
      fail("SideConditionUnmet", "the target set must be visible on the redaction difference");
    }
    std::string inputs = "A = " + a.str() + ", B = " + b.str() + ", pi = " + mask.str() +
                         ", pi' = " + primed->str();
    try {
      ClassifiedSet da = modality_object(ModalityKind::Diamond, mask, a);
      ClassifiedSet db = modality_object(ModalityKind::Diamond, *primed, b);
      for (const CSetMorphism& h : enumerate_hom(da, db, cap)) {
        suite.check(is_constant(h), "redacted-to-redacted-constant", inputs, h.str());
      }
    } catch (const Error& e) {
      if (e.kind() != "EnumerationCapExceeded") throw;
      suite.skip(inputs + ": " + e.what());
    }
    return suite.finish();
  }

  std::string inputs = "A = " + a.str() + ", B = " + b.str() + ", pi = " + mask.str();
  if (mask.empty()) {
    suite.skip(inputs + ": empty mask leaves nothing redacted; the claim is vacuous");
    return suite.finish();
  }
  try {
    ClassifiedSet da = modality_object(ModalityKind::Diamond, mask, a);
    ClassifiedSet db = discretize(mask, b);
    auto homs = enumerate_hom(da, db, cap);
    for (const CSetMorphism& h : homs) {
      suite.check(is_constant(h), "redacted-to-discrete-constant", inputs, h.str());
    }
    if (a.empty()) {
      suite.skip(inputs + ": empty source, point-count comparison skipped");
    } else {
      suite.check(homs.size() == b.size(), "hom-count-equals-points", inputs,
                  count_witness(homs.size(), b.size()));
    }
    if (mask.residual().empty()) {
      // every label is redacted: dually, maps out of an opaque set into a
      // fully visible one are the points of the visible one
      ClassifiedSet nb = codiscretize(mask, b);
      ClassifiedSet ba = modality_object(ModalityKind::Box, mask, a);
      auto dual = enumerate_hom(nb, ba, cap);
      for (const CSetMorphism& h : dual) {
        suite.check(is_constant(h), "opaque-to-visible-constant", inputs, h.str());
      }
      if (b.empty()) {
        suite.skip(inputs + ": empty dual source, point-count comparison skipped");
      } else {
        suite.check(dual.size() == a.size(), "dual-hom-count-equals-points", inputs,
                    count_witness(dual.size(), a.size()));
      }
    }
  } catch (const Error& e) {
    if (e.kind() != "EnumerationCapExceeded") throw;
    suite.skip(inputs + ": " + e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Inhabitant enumeration

namespace {

// Closed normal forms, generated type-directed: introduction forms by the shape
// of the goal, elimination spines rooted in bound variables or stuck
// eliminators. Types that may appear in annotations and spines are drawn from
// the subformula closure of the goal, which is exactly the set of types that
// can occur in a normal derivation.
class InhabitantGen {
 public:
  InhabitantGen(const SecurityPoset& poset, Calculus calculus, const Type& goal,
                const std::vector<Label>& observers)
      : poset_(poset), calculus_(calculus), base_observers_(observers) {
    collect(goal);
  }

  std::vector<Term> generate(const Type& goal, std::size_t bound) {
    std::vector<Term> out;
    Ctx empty;
    for (std::size_t s = 1; s <= bound; ++s) {
      for (const Term& t : normals(empty, base_observers_, goal, s)) {
        if (reduce_step(t)) continue;  // the grammar should only emit normal forms
        try {
          TypingContext ctx;
          ctx.calculus = calculus_;
          if (calculus_ == Calculus::Sealing) ctx.observers = base_observers_;
          check_type(poset_, ctx, t, goal);
        } catch (const Error&) {
          continue;
        }
        out.push_back(t);
      }
    }
    return out;
  }

 private:
  struct Entry {
    std::string name;
    Type type;
    bool modal;
    bool hidden;
  };
  using Ctx = std::vector<Entry>;

  void collect(const Type& a) {
    if (!candidates_.insert(a).second) return;
    switch (a.kind()) {
      case Type::Kind::Prod:
      case Type::Kind::Sum:
      case Type::Kind::Arrow:
        collect(a.left());
        collect(a.right());
        return;
      case Type::Kind::Monad:
      case Type::Kind::BoxT:
      case Type::Kind::LevMonad:
      case Type::Kind::SealT:
        collect(a.inner());
        return;
      default:
        return;
    }
  }

  static std::string key(char mode, const Ctx& ctx, const std::vector<Label>& obs,
                         const Type& a, std::size_t size) {
    std::ostringstream os;
    os << mode << '|' << a.str() << '|' << size << '|';
    for (const Label& l : obs) os << l.name() << ',';
    os << '|';
    for (const Entry& e : ctx) {
      os << e.name << ':' << e.type.str() << ':' << e.modal << e.hidden << ';';
    }
    return os.str();
  }

  std::string fresh(const Ctx& ctx) const { return "v" + std::to_string(ctx.size() + 1); }

  bool unseal_allowed(const Label& l, const std::vector<Label>& obs) const {
    return std::any_of(obs.begin(), obs.end(),
                       [&](const Label& m) { return poset_.leq(l, m); });
  }

  const std::vector<Term>& normals(const Ctx& ctx, const std::vector<Label>& obs,
                                   const Type& a, std::size_t size) {
    std::string k = key('N', ctx, obs, a, size);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size >= 1) {
      switch (a.kind()) {
        case Type::Kind::Bool:
          if (size == 1) {
            out.push_back(Term::tt());
            out.push_back(Term::ff());
          }
          break;
        case Type::Kind::BoolCo:
          if (size == 1 && calculus_ == Calculus::Dual) {
            out.push_back(Term::tt());
            out.push_back(Term::ff());
          }
          break;
        case Type::Kind::Unit:
          if (size == 1) out.push_back(Term::unit());
          break;
        case Type::Kind::Prod:
          for (std::size_t s1 = 1; s1 + 2 <= size; ++s1) {
            for (const Term& l : normals(ctx, obs, a.left(), s1)) {
              for (const Term& r : normals(ctx, obs, a.right(), size - 1 - s1)) {
                out.push_back(Term::pair(l, r));
              }
            }
          }
          break;
        case Type::Kind::Sum:
          if (size >= 2) {
            for (const Term& l : normals(ctx, obs, a.left(), size - 1)) {
              out.push_back(Term::inl(l));
            }
            for (const Term& r : normals(ctx, obs, a.right(), size - 1)) {
              out.push_back(Term::inr(r));
            }
          }
          break;
        case Type::Kind::Arrow:
          if (size >= 2) {
            Ctx inner = ctx;
            inner.push_back({fresh(ctx), a.left(), false, false});
            for (const Term& body : normals(inner, obs, a.right(), size - 1)) {
              out.push_back(Term::lam(inner.back().name, a.left(), body));
            }
          }
          break;
        case Type::Kind::Monad:
          if (size >= 2 && calculus_ == Calculus::Monadic) {
            for (const Term& m : normals(ctx, obs, a.inner(), size - 1)) {
              out.push_back(Term::ret(m));
            }
          }
          break;
        case Type::Kind::LevMonad:
          if (size >= 2 && calculus_ == Calculus::Levelled) {
            for (const Term& m : normals(ctx, obs, a.inner(), size - 1)) {
              out.push_back(Term::ret_lev(a.level(), m));
            }
          }
          break;
        case Type::Kind::BoxT:
          if (size >= 2 && calculus_ == Calculus::Dual) {
            Ctx inner = ctx;
            for (Entry& e : inner) {
              if (!e.modal) e.hidden = true;
            }
            for (const Term& m : normals(inner, obs, a.inner(), size - 1)) {
              out.push_back(Term::box(m));
            }
          }
          break;
        case Type::Kind::SealT:
          if (size >= 2 && calculus_ == Calculus::Sealing) {
            std::vector<Label> inner_obs = obs;
            if (std::find(inner_obs.begin(), inner_obs.end(), a.level()) == inner_obs.end()) {
              inner_obs.push_back(a.level());
            }
            for (const Term& m : normals(ctx, inner_obs, a.inner(), size - 1)) {
              out.push_back(Term::seal(a.level(), m));
            }
          }
          break;
      }
      for (const Term& n : spines(ctx, obs, a, size)) out.push_back(n);
    }
    return memo_.emplace(std::move(k), std::move(out)).first->second;
  }

  // Elimination-rooted normal forms: variables, applications, projections,
  // unsealings, and eliminators stuck on such a spine.
  const std::vector<Term>& spines(const Ctx& ctx, const std::vector<Label>& obs, const Type& a,
                                  std::size_t size) {
    std::string k = key('E', ctx, obs, a, size);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1) {
      for (const Entry& e : ctx) {
        if (!e.hidden && e.type == a) out.push_back(Term::var(e.name));
      }
    }
    if (size >= 3) {
      for (const Type& fn : candidates_) {
        if (fn.kind() != Type::Kind::Arrow || fn.right() != a) continue;
        for (std::size_t s1 = 1; s1 + 2 <= size; ++s1) {
          for (const Term& head : spines(ctx, obs, fn, s1)) {
            for (const Term& arg : normals(ctx, obs, fn.left(), size - 1 - s1)) {
              out.push_back(Term::app(head, arg));
            }
          }
        }
      }
    }
    if (size >= 2) {
      for (const Type& p : candidates_) {
        if (p.kind() != Type::Kind::Prod) continue;
        if (p.left() == a) {
          for (const Term& head : spines(ctx, obs, p, size - 1)) {
            out.push_back(Term::fst(head));
          }
        }
        if (p.right() == a) {
          for (const Term& head : spines(ctx, obs, p, size - 1)) {
            out.push_back(Term::snd(head));
          }
        }
      }
      if (calculus_ == Calculus::Sealing) {
        for (const Type& s : candidates_) {
          if (s.kind() != Type::Kind::SealT || s.inner() != a) continue;
          if (!unseal_allowed(s.level(), obs)) continue;
          for (const Term& head : spines(ctx, obs, s, size - 1)) {
            out.push_back(Term::unseal(s.level(), head));
          }
        }
      }
    }
    if (size >= 4) {
      // conditionals stuck on a neutral boolean
      std::vector<Type> scrutinees;
      if (candidates_.count(Type::boolean())) scrutinees.push_back(Type::boolean());
      if (calculus_ == Calculus::Dual && candidates_.count(Type::boolean_co()) &&
          is_codiscrete_type(a)) {
        scrutinees.push_back(Type::boolean_co());
      }
      for (const Type& sc : scrutinees) {
        for (std::size_t s1 = 1; s1 + 3 <= size; ++s1) {
          for (const Term& head : spines(ctx, obs, sc, s1)) {
            for (std::size_t s2 = 1; s1 + s2 + 2 <= size; ++s2) {
              for (const Term& then_branch : normals(ctx, obs, a, s2)) {
                for (const Term& else_branch :
                     normals(ctx, obs, a, size - 1 - s1 - s2)) {
                  out.push_back(Term::if_then_else(head, then_branch, else_branch));
                }
              }
            }
          }
        }
      }
      // case analysis stuck on a neutral sum
      for (const Type& sum : candidates_) {
        if (sum.kind() != Type::Kind::Sum) continue;
        for (std::size_t s1 = 1; s1 + 3 <= size; ++s1) {
          for (const Term& head : spines(ctx, obs, sum, s1)) {
            Ctx left_ctx = ctx;
            left_ctx.push_back({fresh(ctx), sum.left(), false, false});
            for (std::size_t s2 = 1; s1 + s2 + 2 <= size; ++s2) {
              for (const Term& left : normals(left_ctx, obs, a, s2)) {
                Ctx right_ctx = ctx;
                right_ctx.push_back({fresh(ctx), sum.right(), false, false});
                for (const Term& right :
                     normals(right_ctx, obs, a, size - 1 - s1 - s2)) {
                  out.push_back(Term::case_of(head, left_ctx.back().name, left,
                                              right_ctx.back().name, right));
                }
              }
            }
          }
        }
      }
    }
    if (size >= 3) {
      // computation lets stuck on a neutral scrutinee
      if (calculus_ == Calculus::Monadic && a.kind() == Type::Kind::Monad) {
        for (const Type& m : candidates_) {
          if (m.kind() != Type::Kind::Monad) continue;
          for (std::size_t s1 = 1; s1 + 2 <= size; ++s1) {
            for (const Term& head : spines(ctx, obs, m, s1)) {
              Ctx inner = ctx;
              inner.push_back({fresh(ctx), m.inner(), false, false});
              for (const Term& body : normals(inner, obs, a, size - 1 - s1)) {
                out.push_back(Term::let_ret(inner.back().name, head, body));
              }
            }
          }
        }
      }
      if (calculus_ == Calculus::Levelled) {
        for (const Type& m : candidates_) {
          if (m.kind() != Type::Kind::LevMonad) continue;
          if (!is_protected_type(a, m.level(), poset_)) continue;
          for (std::size_t s1 = 1; s1 + 2 <= size; ++s1) {
            for (const Term& head : spines(ctx, obs, m, s1)) {
              Ctx inner = ctx;
              inner.push_back({fresh(ctx), m.inner(), false, false});
              for (const Term& body : normals(inner, obs, a, size - 1 - s1)) {
                out.push_back(Term::let_ret(inner.back().name, head, body));
              }
            }
          }
        }
      }
      if (calculus_ == Calculus::Dual) {
        for (const Type& bx : candidates_) {
          if (bx.kind() != Type::Kind::BoxT) continue;
          for (std::size_t s1 = 1; s1 + 2 <= size; ++s1) {
            for (const Term& head : spines(ctx, obs, bx, s1)) {
              Ctx inner = ctx;
              inner.push_back({fresh(ctx), bx.inner(), true, false});
              for (const Term& body : normals(inner, obs, a, size - 1 - s1)) {
                out.push_back(Term::let_box(inner.back().name, head, body));
              }
            }
          }
        }
      }
    }
    return memo_.emplace(std::move(k), std::move(out)).first->second;
  }

  const SecurityPoset& poset_;
  Calculus calculus_;
  std::vector<Label> base_observers_;
  std::set<Type> candidates_;
  std::map<std::string, std::vector<Term>> memo_;
};

}  // namespace

std::vector<Term> enumerate_inhabitants(const SecurityPoset& poset, Calculus calculus,
                                        const Type& a, std::size_t size_bound,
                                        const std::vector<Label>& observers) {
  if (size_bound == 0) fail("ShapeMismatch", "the inhabitant size bound must be positive");
  validate_type(calculus, poset, a);
  InhabitantGen gen(poset, calculus, a, observers);
  return gen.generate(a, size_bound);
}

// ---------------------------------------------------------------------------
// Noninterference

namespace {

void validate_theorem_shape(const SecurityPoset& poset, const NoninterferenceSpec& spec) {
  switch (spec.calculus) {
    case Calculus::Monadic:
      if (spec.hole_type.kind() != Type::Kind::Monad) {
        fail("SideConditionUnmet", "the hole of a monadic run must have a computation type");
      }
      if (spec.result_type != Type::boolean()) {
        fail("SideConditionUnmet", "the result of a monadic run must be Bool");
      }
      return;
    case Calculus::Dual:
      if (spec.hole_type != Type::boolean_co()) {
        fail("SideConditionUnmet", "the hole of a dual-context run must be BoolCo");
      }
      if (spec.result_type.kind() != Type::Kind::BoxT) {
        fail("SideConditionUnmet", "the result of a dual-context run must be a boxed type");
      }
      return;
    case Calculus::Levelled: {
      if (spec.hole_type.kind() != Type::Kind::LevMonad) {
        fail("SideConditionUnmet", "the hole of a levelled run must have type T[l] A");
      }
      if (spec.result_type.kind() != Type::Kind::LevMonad ||
          spec.result_type.inner() != Type::boolean()) {
        fail("SideConditionUnmet", "the result of a levelled run must have type T[l'] Bool");
      }
      if (poset.leq(spec.hole_type.level(), spec.result_type.level())) {
        fail("SideConditionUnmet", "the hole level must not flow to the result level");
      }
      return;
    }
    case Calculus::Sealing: {
      if (spec.hole_type.kind() != Type::Kind::SealT) {
        fail("SideConditionUnmet", "the hole of a sealing run must have a sealed type");
      }
      if (spec.result_type != Type::boolean()) {
        fail("SideConditionUnmet", "the result of a sealing run must be Bool");
      }
      for (const Label& m : spec.observers) {
        if (poset.leq(spec.hole_type.level(), m)) {
          fail("SideConditionUnmet", "the seal level must lie below no observer");
        }
      }
      return;
    }
  }
  fail("ShapeMismatch", "unreachable calculus");
}

}  // namespace

CheckReport check_noninterference(const SecurityPoset& poset, const NoninterferenceSpec& spec) {
  validate_theorem_shape(poset, spec);
  TypingContext ctx;
  ctx.calculus = spec.calculus;
  ctx.ordinary.emplace_back(spec.hole_name, spec.hole_type);
  if (spec.calculus == Calculus::Sealing) ctx.observers = spec.observers;
  check_type(poset, ctx, spec.program, spec.result_type);

  Suite suite("noninterference", spec.seed);
  std::string inputs = "hole " + spec.hole_name + " : " + spec.hole_type.str() +
                       ", program " + print_term(spec.program) + " : " +
                       spec.result_type.str();

  std::vector<Term> secrets = enumerate_inhabitants(poset, spec.calculus, spec.hole_type,
                                                    spec.size_bound, spec.observers);
  bool syntactic_ok = true;
  std::optional<Term> first_nf;
  for (const Term& secret : secrets) {
    Term instance = substitute(spec.program, spec.hole_name, secret);
    Term nf = normalize(instance, spec.fuel);
    if (!first_nf) {
      first_nf = nf;
      suite.pass_case();
      continue;
    }
    bool same = alpha_equal(*first_nf, nf);
    if (!same) syntactic_ok = false;
    suite.check(same, "substitution-instances-agree",
                inputs + ", secret " + print_term(secret),
                print_term(nf) + " vs " + print_term(*first_nf));
  }

  DenEnv env{poset};
  CSetMorphism den = denote_term(env, ctx, spec.program, spec.result_type);
  bool semantic_ok = is_constant(den);
  suite.check(semantic_ok, "hole-denotation-constant", inputs, den.str());

  if (!secrets.empty()) {
    suite.check(syntactic_ok == semantic_ok, "syntactic-semantic-agreement", inputs,
                std::string("syntactic ") + (syntactic_ok ? "pass" : "fail") + ", semantic " +
                    (semantic_ok ? "pass" : "fail"));
  }
  if (secrets.empty()) {
    suite.skip(inputs + ": no closed inhabitants of the hole type within the size bound");
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Soundness

namespace {

bool is_ground_type(const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Bool:
    case Type::Kind::BoolCo:
    case Type::Kind::Unit:
      return true;
    case Type::Kind::Monad:
    case Type::Kind::BoxT:
    case Type::Kind::LevMonad:
    case Type::Kind::SealT:
      return is_ground_type(a.inner());
    default:
      return false;
  }
}

bool is_canonical_form(const Term& t, const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Bool:
    case Type::Kind::BoolCo:
      return t.kind() == Term::Kind::TT || t.kind() == Term::Kind::FF;
    case Type::Kind::Unit:
      return t.kind() == Term::Kind::Unit;
    case Type::Kind::Monad:
      return t.kind() == Term::Kind::Ret && is_canonical_form(t.child(0), a.inner());
    case Type::Kind::BoxT:
      return t.kind() == Term::Kind::BoxI && is_canonical_form(t.child(0), a.inner());
    case Type::Kind::LevMonad:
      return t.kind() == Term::Kind::RetLev && t.level() == a.level() &&
             is_canonical_form(t.child(0), a.inner());
    case Type::Kind::SealT:
      return t.kind() == Term::Kind::SealI && t.level() == a.level() &&
             is_canonical_form(t.child(0), a.inner());
    default:
      return false;
  }
}

}  // namespace

CheckReport check_soundness(const SecurityPoset& poset, Calculus calculus,
                            const std::vector<Term>& corpus,
                            const std::vector<Label>& observers, std::size_t fuel) {
  Suite suite("soundness", 0);
  DenEnv env{poset};
  TypingContext ctx;
  ctx.calculus = calculus;
  if (calculus == Calculus::Sealing) ctx.observers = observers;

  CSetMorphism den_tt = denote_term(env, ctx, Term::tt(), Type::boolean());
  CSetMorphism den_ff = denote_term(env, ctx, Term::ff(), Type::boolean());
  suite.check(den_tt != den_ff, "boolean-denotations-distinct", "tt vs ff", den_tt.str());

  for (const Term& m : corpus) {
    std::string inputs = print_term(m);
    Type a = typecheck(poset, ctx, m);
    Term nf = normalize(m, fuel);
    CSetMorphism before = denote_term(env, ctx, m, a);
    CSetMorphism after = denote_term(env, ctx, nf, a);
    suite.check(before == after, "normalization-preserves-denotation", inputs,
                before.str() + " vs " + after.str());
    if (is_ground_type(a)) {
      suite.check(is_canonical_form(nf, a), "ground-normal-forms-canonical", inputs,
                  print_term(nf));
    }
  }
  return suite.finish();
}

}  // namespace csets
