#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "chronokg/format.hpp"
#include "chronokg/graph.hpp"
#include "chronokg/ontology.hpp"

namespace chronokg {

/// Structural checks that apply without any declared rule.
enum class BuiltinCheck { UnknownRelation, UnknownDatatype };

using ViolationSource = std::variant<BuiltinCheck, Rule, TemporalRule>;
using Offender = std::variant<Triple, Quintuple>;

/// One broken rule instance. Validation collects these instead of aborting,
/// so a single run reports every problem in a graph.
struct Violation {
  ViolationSource source;
  std::vector<Offender> offenders;  // never empty
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string describe(const ViolationSource& src) {
  struct Visitor {
    std::string operator()(BuiltinCheck c) const {
      return c == BuiltinCheck::UnknownRelation ? "unknown_relation" : "unknown_datatype";
    }
    std::string operator()(const Rule& r) const {
      switch (r.kind) {
        case Rule::Kind::Domain: return "domain(" + r.relation + "," + r.target + ")";
        case Rule::Kind::RangeConcept: return "range(" + r.relation + "," + r.target + ")";
        case Rule::Kind::RangeDatatype: return "range(" + r.relation + "," + r.target + ")";
        case Rule::Kind::Functional: return "functional(" + r.relation + ")";
      }
      return "rule";
    }
    std::string operator()(const TemporalRule& r) const {
      switch (r.kind) {
        case TemporalRule::Kind::Order: return "order";
        case TemporalRule::Kind::NoOverlap: return "no_overlap(" + r.relation + ")";
        case TemporalRule::Kind::FunctionalAtInstant:
          return "functional_instant(" + r.relation + ")";
        case TemporalRule::Kind::WithinTimeDomain: return "within_time_domain";
      }
      return "trule";
    }
  };
  return std::visit(Visitor{}, src);
}

inline std::string format_offender(const Offender& o) {
  if (const auto* t = std::get_if<Triple>(&o)) return format_triple(*t);
  return format_quintuple(std::get<Quintuple>(o));
}

/// Stable one-line rendering: `desc: message [edge; edge]`.
inline std::string to_string(const Violation& v) {
  std::string line = describe(v.source) + ": " + v.message + " [";
  for (std::size_t i = 0; i < v.offenders.size(); ++i) {
    if (i) line += "; ";
    line += format_offender(v.offenders[i]);
  }
  line += "]";
  return line;
}

namespace detail {

inline bool typed_as(const StandardKG& g, const StaticOntology& o,
                     const std::string& entity, const std::string& concept_id) {
  if (!o.typing_relation) return false;
  return g.contains(Triple(entity, *o.typing_relation, Term::entity(concept_id)));
}

// Closed-interval intersection; total over reversed intervals as well.
inline bool intervals_intersect(const Quintuple& a, const Quintuple& b) {
  return a.valid_from <= b.valid_until && b.valid_from <= a.valid_until;
}

inline bool outside_domain(const TimePoint& t, const TimeDomain& d) {
  return t.finite() && (t.tick() < d.lo || t.tick() > d.hi);
}

}  // namespace detail

/// Checks every edge of a triple store against the static rule set. Returns
/// all violations: undeclared vocabulary first in edge order, then each rule
/// in declaration order with offenders in canonical edge order.
inline std::vector<Violation> validate_standard(const StandardKG& g,
                                                const StaticOntology& o) {
  std::vector<Violation> out;

  if (o.closed_vocabulary) {
    for (const Triple& t : g.edges()) {
      if (!o.relations.count(t.relation)) {
        out.push_back({BuiltinCheck::UnknownRelation, {t},
                       "relation '" + t.relation + "' is not declared"});
      }
      if (t.tail.is_literal() && !o.datatypes.count(t.tail.datatype())) {
        out.push_back({BuiltinCheck::UnknownDatatype, {t},
                       "datatype '" + t.tail.datatype() + "' is not declared"});
      }
    }
  }

  for (const Rule& rule : o.rules) {
    switch (rule.kind) {
      case Rule::Kind::Domain:
        for (const Triple& t : g.edges()) {
          if (t.relation != rule.relation) continue;
          if (!detail::typed_as(g, o, t.head, rule.target)) {
            out.push_back({rule, {t},
                           "head '" + t.head + "' is not typed '" + rule.target + "'"});
          }
        }
        break;
      case Rule::Kind::RangeConcept:
        for (const Triple& t : g.edges()) {
          if (t.relation != rule.relation) continue;
          if (!t.tail.is_entity()) {
            out.push_back({rule, {t}, "tail is a literal, expected an entity typed '" +
                                          rule.target + "'"});
          } else if (!detail::typed_as(g, o, t.tail.iri(), rule.target)) {
            out.push_back({rule, {t},
                           "tail '" + t.tail.iri() + "' is not typed '" + rule.target + "'"});
          }
        }
        break;
      case Rule::Kind::RangeDatatype:
        for (const Triple& t : g.edges()) {
          if (t.relation != rule.relation) continue;
          if (!t.tail.is_literal()) {
            out.push_back({rule, {t},
                           "tail is an entity, expected a literal of '" + rule.target + "'"});
          } else if (t.tail.datatype() != rule.target) {
            out.push_back({rule, {t}, "tail datatype '" + t.tail.datatype() +
                                          "' differs from '" + rule.target + "'"});
          }
        }
        break;
      case Rule::Kind::Functional: {
        // One violation per head with more than one distinct tail.
        std::map<std::string, std::vector<Triple>> by_head;
        for (const Triple& t : g.edges()) {
          if (t.relation == rule.relation) by_head[t.head].push_back(t);
        }
        for (const auto& [head, group] : by_head) {
          if (group.size() > 1) {
            std::vector<Offender> offenders(group.begin(), group.end());
            out.push_back({rule, std::move(offenders),
                           "head '" + head + "' has " + std::to_string(group.size()) +
                               " tails via functional relation"});
          }
        }
        break;
      }
    }
  }
  return out;
}

/// Checks a quintuple store: static rules run on the projected triples, then
/// interval rules run on the quintuples. The built-in order rule always
/// applies; the time-domain rule applies whenever a domain is declared.
inline std::vector<Violation> validate_reminiscent(const ReminiscentKG& g,
                                                   const TemporalOntology& o) {
  std::vector<Violation> out = validate_standard(g.project(), o.base);

  // Effective interval rules: order once, declared rules in order, the
  // time-domain check once at the end.
  const TemporalRule order_rule = TemporalRule::order();
  for (const Quintuple& q : g.edges()) {
    if (q.valid_from > q.valid_until) {
      out.push_back({order_rule, {q}, "valid_from exceeds valid_until"});
    }
  }

  for (const TemporalRule& rule : o.temporal_rules) {
    switch (rule.kind) {
      case TemporalRule::Kind::Order:
      case TemporalRule::Kind::WithinTimeDomain:
        break;  // built in, handled outside the declared list
      case TemporalRule::Kind::NoOverlap: {
        std::map<Triple, std::vector<Quintuple>> by_key;
        for (const Quintuple& q : g.edges()) {
          if (q.relation == rule.relation) by_key[q.project()].push_back(q);
        }
        for (const auto& [key, group] : by_key) {
          for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
              if (detail::intervals_intersect(group[i], group[j])) {
                out.push_back({rule, {group[i], group[j]},
                               "validity intervals of '" + format_triple(key) + "' overlap"});
              }
            }
          }
        }
        break;
      }
      case TemporalRule::Kind::FunctionalAtInstant: {
        std::map<std::string, std::vector<Quintuple>> by_head;
        for (const Quintuple& q : g.edges()) {
          if (q.relation == rule.relation) by_head[q.head].push_back(q);
        }
        for (const auto& [head, group] : by_head) {
          for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
              if (group[i].tail != group[j].tail &&
                  detail::intervals_intersect(group[i], group[j])) {
                out.push_back({rule, {group[i], group[j]},
                               "head '" + head + "' has two valid tails at some instant"});
              }
            }
          }
        }
        break;
      }
    }
  }

  if (o.time_domain) {
    const TemporalRule domain_rule = TemporalRule::within_time_domain();
    for (const Quintuple& q : g.edges()) {
      if (detail::outside_domain(q.valid_from, *o.time_domain) ||
          detail::outside_domain(q.valid_until, *o.time_domain)) {
        out.push_back({domain_rule, {q},
                       "validity endpoint outside time domain [" +
                           std::to_string(o.time_domain->lo) + ", " +
                           std::to_string(o.time_domain->hi) + "]"});
      }
    }
  }

  return out;
}

}  // namespace chronokg
