#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chronokg {

/// Instantiation rule over timestamp-free edges.
struct Rule {
  enum class Kind { Domain, RangeConcept, RangeDatatype, Functional };

  Kind kind;
  std::string relation;
  std::string target;  // concept or datatype; empty for Functional

  static Rule domain(std::string rel, std::string concept_id) {
    return {Kind::Domain, std::move(rel), std::move(concept_id)};
  }
  static Rule range_concept(std::string rel, std::string concept_id) {
    return {Kind::RangeConcept, std::move(rel), std::move(concept_id)};
  }
  static Rule range_datatype(std::string rel, std::string datatype_id) {
    return {Kind::RangeDatatype, std::move(rel), std::move(datatype_id)};
  }
  static Rule functional(std::string rel) {
    return {Kind::Functional, std::move(rel), std::string()};
  }

  friend auto operator<=>(const Rule&, const Rule&) = default;
};

/// Rule over validity intervals. Order is built in and always enforced.
struct TemporalRule {
  enum class Kind { Order, NoOverlap, FunctionalAtInstant, WithinTimeDomain };

  Kind kind;
  std::string relation;  // empty for Order / WithinTimeDomain

  static TemporalRule order() { return {Kind::Order, std::string()}; }
  static TemporalRule no_overlap(std::string rel) {
    return {Kind::NoOverlap, std::move(rel)};
  }
  static TemporalRule functional_at_instant(std::string rel) {
    return {Kind::FunctionalAtInstant, std::move(rel)};
  }
  static TemporalRule within_time_domain() {
    return {Kind::WithinTimeDomain, std::string()};
  }

  friend auto operator<=>(const TemporalRule&, const TemporalRule&) = default;
};

/// Closed range of finite ticks a graph may mention.
struct TimeDomain {
  std::int64_t lo;
  std::int64_t hi;

  friend auto operator<=>(const TimeDomain&, const TimeDomain&) = default;
};

/// Vocabulary plus rules for timestamp-free graphs.
///
/// `closed_vocabulary` controls whether edges may mention undeclared
/// relations or datatypes. Ontologies loaded from files are closed; a
/// default-constructed ontology is open so that rule-free replay needs no
/// declarations.
struct StaticOntology {
  std::set<std::string> concepts;
  std::set<std::string> datatypes;
  std::set<std::string> relations;
  std::optional<std::string> typing_relation;
  std::vector<Rule> rules;
  bool closed_vocabulary = false;

  /// Declaration-consistency problems, empty when well-formed.
  std::vector<std::string> wellformedness_errors() const {
    std::vector<std::string> errs;
    if (typing_relation && !relations.count(*typing_relation)) {
      errs.push_back("typing relation '" + *typing_relation + "' is not a declared relation");
    }
    for (const auto& r : rules) {
      if (!relations.count(r.relation)) {
        errs.push_back("rule references undeclared relation '" + r.relation + "'");
      }
      switch (r.kind) {
        case Rule::Kind::Domain:
        case Rule::Kind::RangeConcept:
          if (!concepts.count(r.target)) {
            errs.push_back("rule references undeclared concept '" + r.target + "'");
          }
          if (!typing_relation) {
            errs.push_back("rule on relation '" + r.relation + "' needs a typing relation declaration");
          }
          break;
        case Rule::Kind::RangeDatatype:
          if (!datatypes.count(r.target)) {
            errs.push_back("rule references undeclared datatype '" + r.target + "'");
          }
          break;
        case Rule::Kind::Functional:
          break;
      }
    }
    return errs;
  }

  friend bool operator==(const StaticOntology&, const StaticOntology&) = default;
};

/// Static ontology extended with a tick domain and interval rules.
struct TemporalOntology {
  StaticOntology base;
  std::optional<TimeDomain> time_domain;
  // The built-in order rule is always present and survives any edit.
  std::vector<TemporalRule> temporal_rules{TemporalRule::order()};

  std::vector<std::string> wellformedness_errors() const {
    std::vector<std::string> errs = base.wellformedness_errors();
    if (time_domain && time_domain->lo > time_domain->hi) {
      errs.push_back("time domain is empty");
    }
    for (const auto& r : temporal_rules) {
      if (r.kind == TemporalRule::Kind::NoOverlap ||
          r.kind == TemporalRule::Kind::FunctionalAtInstant) {
        if (!base.relations.count(r.relation)) {
          errs.push_back("temporal rule references undeclared relation '" + r.relation + "'");
        }
      }
      if (r.kind == TemporalRule::Kind::WithinTimeDomain && !time_domain) {
        errs.push_back("within_time_domain rule without a declared time domain");
      }
    }
    return errs;
  }

  friend bool operator==(const TemporalOntology&, const TemporalOntology&) = default;
};

}  // namespace chronokg
