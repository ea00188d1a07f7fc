#include "json.hpp"
#include "pbdr/error.hpp"
#include "pbdr/separators.hpp"

namespace pbdr {

namespace {

using nlohmann::ordered_json;

ordered_json plane_json(const Hyperplane& plane) {
  return {{"normal", plane.normal()}, {"offset", plane.offset()}, {"text", to_text(plane)}};
}

ordered_json rule_json(const DecisionRule& rule) {
  ordered_json clauses = ordered_json::array();
  for (const auto& c : rule.clauses()) clauses.push_back({{"plane", plane_json(c.plane)}, {"label", c.label}});
  return {{"clauses", clauses}, {"fallback", rule.fallback()}};
}

}  // namespace

std::string to_json(const Hyperplane& plane) { return plane_json(plane).dump(2); }

std::string to_json(const DecisionRule& rule) { return rule_json(rule).dump(2); }

std::string to_json(const ClassificationReport& report) {
  ordered_json doc;
  doc["correct"] = report.correct;
  doc["total"] = report.total;
  doc["accuracy"] = report.accuracy;
  ordered_json confusion = ordered_json::array();
  for (const auto& [key, count] : report.confusion) {
    confusion.push_back({{"truth", key.first}, {"predicted", key.second}, {"count", count}});
  }
  doc["confusion"] = confusion;
  ordered_json predictions = ordered_json::array();
  for (const auto& p : report.predictions) {
    predictions.push_back(
        {{"id", p.id}, {"truth", p.truth}, {"predicted", p.predicted}, {"signed_distance", p.signed_distance}});
  }
  doc["predictions"] = predictions;
  return doc.dump(2);
}

DecisionRule rule_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<Clause> clauses;
    for (const auto& c : doc.at("clauses")) {
      const auto& p = c.at("plane");
      clauses.push_back(
          {Hyperplane(p.at("normal").get<std::vector<double>>(), p.at("offset").get<double>()), c.at("label")});
    }
    return DecisionRule(std::move(clauses), doc.at("fallback").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed rule JSON: ") + e.what());
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("invalid rule: ") + e.what());
  }
}

}  // namespace pbdr
