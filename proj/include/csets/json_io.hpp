#pragma once

// JSON and text rendering of check reports, plus the JSON input formats the
// command-line driver accepts for posets and classified sets.

#include <string>
#include <vector>

#include "csets/calculi.hpp"
#include "csets/cset.hpp"
#include "csets/harness.hpp"

namespace csets {

// Stable-keyed serialization: {cases, elapsed_ms, failures, seed, skipped, suite},
// failures as [{inputs, law, witness}] in report order. Two runs with the same
// seed differ only in elapsed_ms.
std::string report_to_json(const CheckReport& report);

// Human-readable rendering: a verdict line followed by failures and skips.
std::string report_to_text(const CheckReport& report);

// {"labels": ["L", "H"], "order": [["L", "H"]]} — each order pair is an edge
// lo <= hi; the transitive closure is taken. ParseError on malformed input.
SecurityPoset poset_from_json(const std::string& text);

// {"labels": ["L", "H"], "carrier": ["a", "b"], "relations": {"L": [["a", "b"]]}}.
// "labels" may be omitted when "relations" names every label. Elements are atoms
// named by their strings; reflexive pairs are implicit. ParseError on malformed
// input.
ClassifiedSet set_from_json(const std::string& text);

// The morphism count and each graph, as {"count": n, "morphisms": [[[x, y], ...]]}.
std::string hom_to_json(const std::vector<CSetMorphism>& homs);
std::string hom_to_text(const std::vector<CSetMorphism>& homs);

}  // namespace csets
