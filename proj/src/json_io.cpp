#include "csets/json_io.hpp"

#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace csets {

namespace {

using nlohmann::json;

json parse_or_fail(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail("ParseError", std::string("invalid JSON in ") + what);
  return j;
}

std::vector<std::string> string_array(const json& j, const char* what) {
  if (!j.is_array()) fail("ParseError", std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const json& e : j) {
    if (!e.is_string()) fail("ParseError", std::string(what) + " must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

std::string report_to_json(const CheckReport& report) {
  json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["cases"] = report.cases;
  json fs = json::array();
  for (const CheckFailure& f : report.failures) {
    fs.push_back({{"law", f.law}, {"inputs", f.inputs}, {"witness", f.witness}});
  }
  j["failures"] = fs;
  j["skipped"] = report.skipped;
  j["elapsed_ms"] = report.elapsed_ms;
  return j.dump(2) + "\n";
}

std::string report_to_text(const CheckReport& report) {
  std::ostringstream os;
  os << "suite " << report.suite << ": " << verdict_name(report.verdict()) << " (seed "
     << report.seed << ", " << report.cases << " cases, " << report.failures.size()
     << " failures, " << report.elapsed_ms << " ms)\n";
  for (const CheckFailure& f : report.failures) {
    os << "  FAIL " << f.law << "\n    inputs  " << f.inputs << "\n    witness "
       << f.witness << "\n";
  }
  for (const std::string& s : report.skipped) os << "  SKIP " << s << "\n";
  return os.str();
}

SecurityPoset poset_from_json(const std::string& text) {
  json j = parse_or_fail(text, "poset");
  if (!j.is_object() || !j.contains("labels")) {
    fail("ParseError", "a poset needs a \"labels\" array");
  }
  std::vector<Label> labels;
  for (const std::string& s : string_array(j["labels"], "\"labels\"")) {
    labels.push_back(Label(s));
  }
  std::vector<std::pair<Label, Label>> order;
  if (j.contains("order")) {
    if (!j["order"].is_array()) fail("ParseError", "\"order\" must be an array of pairs");
    for (const json& e : j["order"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        fail("ParseError", "each \"order\" entry must be a [lo, hi] pair of strings");
      }
      order.emplace_back(Label(e[0].get<std::string>()), Label(e[1].get<std::string>()));
    }
  }
  return load_poset(std::move(labels), std::move(order));
}

ClassifiedSet set_from_json(const std::string& text) {
  json j = parse_or_fail(text, "classified set");
  if (!j.is_object() || !j.contains("carrier")) {
    fail("ParseError", "a classified set needs a \"carrier\" array");
  }
  std::vector<Elem> carrier;
  for (const std::string& s : string_array(j["carrier"], "\"carrier\"")) {
    carrier.push_back(Elem::atom(s));
  }
  std::vector<Label> labels;
  if (j.contains("labels")) {
    for (const std::string& s : string_array(j["labels"], "\"labels\"")) {
      labels.push_back(Label(s));
    }
  } else if (j.contains("relations")) {
    if (!j["relations"].is_object()) fail("ParseError", "\"relations\" must be an object");
    for (const auto& [key, value] : j["relations"].items()) {
      (void)value;
      labels.push_back(Label(key));
    }
  }
  std::map<Label, Relation> relations;
  if (j.contains("relations")) {
    if (!j["relations"].is_object()) fail("ParseError", "\"relations\" must be an object");
    for (const auto& [key, pairs] : j["relations"].items()) {
      if (!pairs.is_array()) fail("ParseError", "each relation must be an array of pairs");
      Relation r;
      for (const json& e : pairs) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
          fail("ParseError", "each relation entry must be an [x, y] pair of strings");
        }
        r.emplace_back(Elem::atom(e[0].get<std::string>()),
                       Elem::atom(e[1].get<std::string>()));
      }
      relations[Label(key)] = std::move(r);
    }
  }
  return construct_set(LabelUniverse(std::move(labels)), std::move(carrier), relations);
}

std::string hom_to_json(const std::vector<CSetMorphism>& homs) {
  json j;
  j["count"] = homs.size();
  json ms = json::array();
  for (const CSetMorphism& f : homs) {
    json g = json::array();
    for (const auto& [x, y] : f.graph()) g.push_back({x.str(), y.str()});
    ms.push_back(g);
  }
  j["morphisms"] = ms;
  return j.dump(2) + "\n";
}

std::string hom_to_text(const std::vector<CSetMorphism>& homs) {
  std::ostringstream os;
  os << homs.size() << " morphism" << (homs.size() == 1 ? "" : "s") << "\n";
  for (const CSetMorphism& f : homs) os << "  " << f.str() << "\n";
  return os.str();
}

}  // namespace csets
