#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "chronokg/format.hpp"
#include "chronokg/graph.hpp"
#include "chronokg/ontology.hpp"
#include "chronokg/validate.hpp"

namespace chronokg {

struct AssertAction {
  Quintuple edge;
  friend bool operator==(const AssertAction&, const AssertAction&) = default;
};

/// Ends the validity of every active edge with this key: their valid_until
/// is rewritten to the given finite tick. The facts stay historical.
struct CloseAction {
  Triple key;
  std::int64_t new_valid_until;
  friend bool operator==(const CloseAction&, const CloseAction&) = default;
};

/// Ends the accessibility of every active edge with this key: the edges are
/// removed outright, as if never true.
struct RetractAction {
  Triple key;
  friend bool operator==(const RetractAction&, const RetractAction&) = default;
};

using Action = std::variant<AssertAction, CloseAction, RetractAction>;

struct ChangeEvent {
  std::int64_t commit;
  Action action;

  Triple key() const {
    if (const auto* a = std::get_if<AssertAction>(&action)) return a->edge.project();
    if (const auto* c = std::get_if<CloseAction>(&action)) return c->key;
    return std::get<RetractAction>(action).key;
  }

  friend bool operator==(const ChangeEvent&, const ChangeEvent&) = default;
};

inline ChangeEvent make_assert(std::int64_t commit, Quintuple q) {
  return {commit, AssertAction{std::move(q)}};
}
inline ChangeEvent make_close(std::int64_t commit, Triple key, std::int64_t until) {
  return {commit, CloseAction{std::move(key), until}};
}
inline ChangeEvent make_retract(std::int64_t commit, Triple key) {
  return {commit, RetractAction{std::move(key)}};
}

enum class AppendErrorKind {
  OutOfOrderCommit,   // commit earlier than the log tail, or same tick twice on one triple
  NoActiveEdge,       // close/retract without an active edge for the key
  RuleViolation,      // the event would break the ontology's rules
  DuplicateAssert,    // exact five-way duplicate of a stored edge
  DuplicateClose,     // rewrite would collide with an identical stored edge
};

struct AppendError {
  AppendErrorKind kind;
  std::string message;
  std::vector<Violation> violations;  // filled for RuleViolation
};

namespace detail {

struct HeadRelKey {
  const std::string& head;
  const std::string& relation;
};

struct TripleLess {
  using is_transparent = void;
  bool operator()(const Triple& a, const Triple& b) const { return a < b; }
  bool operator()(const Triple& a, const HeadRelKey& k) const {
    return std::tie(a.head, a.relation) < std::tie(k.head, k.relation);
  }
  bool operator()(const HeadRelKey& k, const Triple& a) const {
    return std::tie(k.head, k.relation) < std::tie(a.head, a.relation);
  }
};

struct QuintLess {
  using is_transparent = void;
  bool operator()(const Quintuple& a, const Quintuple& b) const { return a < b; }
  bool operator()(const Quintuple& a, const Triple& k) const {
    return std::tie(a.head, a.relation, a.tail) < std::tie(k.head, k.relation, k.tail);
  }
  bool operator()(const Triple& k, const Quintuple& a) const {
    return std::tie(k.head, k.relation, k.tail) < std::tie(a.head, a.relation, a.tail);
  }
  bool operator()(const Quintuple& a, const HeadRelKey& k) const {
    return std::tie(a.head, a.relation) < std::tie(k.head, k.relation);
  }
  bool operator()(const HeadRelKey& k, const Quintuple& a) const {
    return std::tie(k.head, k.relation) < std::tie(a.head, a.relation);
  }
};

/// The folded incremental image of an event prefix, with a projection index.
/// Keeps per-event application cheap; all lookups are prefix scans on the
/// ordered containers.
struct ReplayState {
  std::set<Quintuple, QuintLess> edges;
  std::map<Triple, int, TripleLess> projected;  // triple -> quintuple count

  void insert(const Quintuple& q) {
    if (edges.insert(q).second) ++projected[q.project()];
  }

  void erase(const Quintuple& q) {
    if (edges.erase(q)) {
      auto it = projected.find(q.project());
      if (--it->second == 0) projected.erase(it);
    }
  }

  bool has_triple(const Triple& t) const { return projected.count(t) > 0; }

  std::vector<Quintuple> with_key(const Triple& key) const {
    std::vector<Quintuple> out;
    auto [lo, hi] = edges.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(*it);
    return out;
  }

  std::vector<Quintuple> active_with_key(const Triple& key) const {
    std::vector<Quintuple> out;
    auto [lo, hi] = edges.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->active()) out.push_back(*it);
    }
    return out;
  }

  bool any_active_with_key(const Triple& key) const {
    auto [lo, hi] = edges.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      if (it->active()) return true;
    }
    return false;
  }

  /// Applies an already validated event.
  void apply(const ChangeEvent& e) {
    if (const auto* a = std::get_if<AssertAction>(&e.action)) {
      insert(a->edge);
    } else if (const auto* c = std::get_if<CloseAction>(&e.action)) {
      for (const Quintuple& q : active_with_key(c->key)) {
        erase(q);
        insert(Quintuple::unchecked(q.head, q.relation, q.tail, q.valid_from,
                                    TimePoint::at(c->new_valid_until)));
      }
    } else {
      const auto& r = std::get<RetractAction>(e.action);
      for (const Quintuple& q : active_with_key(r.key)) erase(q);
    }
  }

  ReminiscentKG incremental_graph() const {
    ReminiscentKG g;
    for (const Quintuple& q : edges) g.add(q);
    return g;
  }

  ReminiscentKG semi_graph() const {
    ReminiscentKG g(true);
    for (const Quintuple& q : edges) {
      if (q.active()) g.add(q);
    }
    return g;
  }

  StandardKG mutable_graph() const {
    StandardKG g;
    for (const Quintuple& q : edges) {
      if (q.active()) g.add(q.project());
    }
    return g;
  }
};

}  // namespace detail

/// Strictly commit-ordered change history; the single source of truth every
/// view is derived from. Append validates each event against the ontology so
/// that, by induction, the incremental image is rule-clean after every
/// accepted event. Validation touches only the state the event can affect,
/// which keeps appends cheap on long logs.
class ChangeLog {
 public:
  ChangeLog() = default;
  explicit ChangeLog(TemporalOntology ontology) : ontology_(std::move(ontology)) {}

  const TemporalOntology& ontology() const { return ontology_; }
  const std::vector<ChangeEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  /// Distinct commit times in ascending order.
  std::vector<std::int64_t> commit_times() const {
    std::vector<std::int64_t> out;
    for (const ChangeEvent& e : events_) {
      if (out.empty() || out.back() != e.commit) out.push_back(e.commit);
    }
    return out;
  }

  /// Appends one event; returns the reason on rejection, nothing on success.
  /// A rejected append leaves the log untouched.
  std::optional<AppendError> append(const ChangeEvent& e) {
    if (!events_.empty() && e.commit < events_.back().commit) {
      return AppendError{AppendErrorKind::OutOfOrderCommit,
                         "commit " + std::to_string(e.commit) + " precedes log tail " +
                             std::to_string(events_.back().commit),
                         {}};
    }
    const Triple key = e.key();
    if (auto it = last_commit_.find(key); it != last_commit_.end() && it->second == e.commit) {
      return AppendError{AppendErrorKind::OutOfOrderCommit,
                         "commit " + std::to_string(e.commit) +
                             " touches the same triple twice: " + format_triple(key),
                         {}};
    }

    if (const auto* assert_action = std::get_if<AssertAction>(&e.action)) {
      if (auto err = check_assert(assert_action->edge)) return err;
    } else if (const auto* close_action = std::get_if<CloseAction>(&e.action)) {
      if (auto err = check_close(*close_action)) return err;
    } else {
      if (auto err = check_retract(std::get<RetractAction>(e.action))) return err;
    }

    state_.apply(e);
    events_.push_back(e);
    last_commit_[key] = e.commit;
    return std::nullopt;
  }

  friend bool operator==(const ChangeLog& a, const ChangeLog& b) {
    return a.ontology_ == b.ontology_ && a.events_ == b.events_;
  }

 private:
  std::optional<AppendError> rule_error(std::vector<Violation> violations) const {
    std::string msg = "event breaks " + std::to_string(violations.size()) + " rule(s): ";
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) msg += "; ";
      msg += describe(violations[i].source);
    }
    return AppendError{AppendErrorKind::RuleViolation, std::move(msg), std::move(violations)};
  }

  bool typed_as(const std::string& entity, const std::string& concept_id) const {
    if (!ontology_.base.typing_relation) return false;
    return state_.has_triple(
        Triple(entity, *ontology_.base.typing_relation, Term::entity(concept_id)));
  }

  void check_interval_rules(const Quintuple& q, std::vector<Violation>* out) const {
    if (q.valid_from > q.valid_until) {
      out->push_back({TemporalRule::order(), {q}, "valid_from exceeds valid_until"});
    }
    if (ontology_.time_domain) {
      const TimeDomain& d = *ontology_.time_domain;
      if (detail::outside_domain(q.valid_from, d) || detail::outside_domain(q.valid_until, d)) {
        out->push_back({TemporalRule::within_time_domain(), {q},
                        "validity endpoint outside time domain [" + std::to_string(d.lo) +
                            ", " + std::to_string(d.hi) + "]"});
      }
    }
  }

  std::optional<AppendError> check_assert(const Quintuple& q) {
    if (state_.edges.count(q)) {
      return AppendError{AppendErrorKind::DuplicateAssert,
                         "edge already present: " + format_quintuple(q),
                         {}};
    }

    std::vector<Violation> violations;
    check_interval_rules(q, &violations);

    const StaticOntology& base = ontology_.base;
    if (base.closed_vocabulary) {
      if (!base.relations.count(q.relation)) {
        violations.push_back({BuiltinCheck::UnknownRelation, {q.project()},
                              "relation '" + q.relation + "' is not declared"});
      }
      if (q.tail.is_literal() && !base.datatypes.count(q.tail.datatype())) {
        violations.push_back({BuiltinCheck::UnknownDatatype, {q.project()},
                              "datatype '" + q.tail.datatype() + "' is not declared"});
      }
    }

    const Triple t = q.project();
    for (const Rule& rule : base.rules) {
      if (rule.relation != q.relation) continue;
      switch (rule.kind) {
        case Rule::Kind::Domain:
          if (!typed_as(t.head, rule.target)) {
            violations.push_back({rule, {t},
                                  "head '" + t.head + "' is not typed '" + rule.target + "'"});
          }
          break;
        case Rule::Kind::RangeConcept:
          if (!t.tail.is_entity()) {
            violations.push_back({rule, {t}, "tail is a literal, expected an entity typed '" +
                                                 rule.target + "'"});
          } else if (!typed_as(t.tail.iri(), rule.target)) {
            violations.push_back({rule, {t},
                                  "tail '" + t.tail.iri() + "' is not typed '" + rule.target + "'"});
          }
          break;
        case Rule::Kind::RangeDatatype:
          if (!t.tail.is_literal()) {
            violations.push_back({rule, {t}, "tail is an entity, expected a literal of '" +
                                                 rule.target + "'"});
          } else if (t.tail.datatype() != rule.target) {
            violations.push_back({rule, {t}, "tail datatype '" + t.tail.datatype() +
                                                 "' differs from '" + rule.target + "'"});
          }
          break;
        case Rule::Kind::Functional: {
          // Another distinct tail already present for this head?
          auto [lo, hi] = state_.projected.equal_range(detail::HeadRelKey{t.head, t.relation});
          for (auto it = lo; it != hi; ++it) {
            if (it->first.tail != t.tail) {
              violations.push_back({rule, {it->first, t},
                                    "head '" + t.head + "' would gain a second tail via "
                                    "functional relation"});
              break;
            }
          }
          break;
        }
      }
    }

    for (const TemporalRule& rule : ontology_.temporal_rules) {
      if (rule.kind == TemporalRule::Kind::NoOverlap && rule.relation == q.relation) {
        for (const Quintuple& other : state_.with_key(t)) {
          if (detail::intervals_intersect(other, q)) {
            violations.push_back({rule, {other, q},
                                  "validity intervals of '" + format_triple(t) + "' overlap"});
          }
        }
      } else if (rule.kind == TemporalRule::Kind::FunctionalAtInstant &&
                 rule.relation == q.relation) {
        auto [lo, hi] = state_.edges.equal_range(detail::HeadRelKey{q.head, q.relation});
        for (auto it = lo; it != hi; ++it) {
          if (it->tail != q.tail && detail::intervals_intersect(*it, q)) {
            violations.push_back({rule, {*it, q},
                                  "head '" + q.head + "' has two valid tails at some instant"});
          }
        }
      }
    }

    if (!violations.empty()) return rule_error(std::move(violations));
    return std::nullopt;
  }

  std::optional<AppendError> check_close(const CloseAction& c) {
    const std::vector<Quintuple> actives = state_.active_with_key(c.key);
    if (actives.empty()) {
      return AppendError{AppendErrorKind::NoActiveEdge,
                         "no active edge to close: " + format_triple(c.key),
                         {}};
    }
    std::vector<Violation> violations;
    for (const Quintuple& a : actives) {
      const Quintuple rewritten = Quintuple::unchecked(
          a.head, a.relation, a.tail, a.valid_from, TimePoint::at(c.new_valid_until));
      if (state_.edges.count(rewritten)) {
        return AppendError{AppendErrorKind::DuplicateClose,
                           "close would duplicate stored edge: " + format_quintuple(rewritten),
                           {}};
      }
      check_interval_rules(rewritten, &violations);
    }
    if (!violations.empty()) return rule_error(std::move(violations));
    return std::nullopt;
  }

  std::optional<AppendError> check_retract(const RetractAction& r) {
    const std::vector<Quintuple> actives = state_.active_with_key(r.key);
    if (actives.empty()) {
      return AppendError{AppendErrorKind::NoActiveEdge,
                         "no active edge to retract: " + format_triple(r.key),
                         {}};
    }

    // The projected triple survives unless every stored quintuple with this
    // key is active; only a disappearing typing edge can break other edges.
    auto count_it = state_.projected.find(r.key);
    const bool triple_disappears =
        count_it != state_.projected.end() &&
        count_it->second == static_cast<int>(actives.size());

    std::vector<Violation> violations;
    const StaticOntology& base = ontology_.base;
    if (triple_disappears && base.typing_relation &&
        r.key.relation == *base.typing_relation && r.key.tail.is_entity()) {
      const std::string& concept_id = r.key.tail.iri();
      for (const Rule& rule : base.rules) {
        if (rule.kind == Rule::Kind::Domain && rule.target == concept_id) {
          auto [lo, hi] =
              state_.projected.equal_range(detail::HeadRelKey{r.key.head, rule.relation});
          for (auto it = lo; it != hi; ++it) {
            if (it->first == r.key) continue;
            violations.push_back({rule, {it->first},
                                  "head '" + it->first.head + "' would lose its typing '" +
                                      concept_id + "'"});
          }
        } else if (rule.kind == Rule::Kind::RangeConcept && rule.target == concept_id) {
          for (const auto& [triple, count] : state_.projected) {
            if (triple.relation != rule.relation || triple == r.key) continue;
            if (triple.tail.is_entity() && triple.tail.iri() == r.key.head) {
              violations.push_back({rule, {triple},
                                    "tail '" + r.key.head + "' would lose its typing '" +
                                        concept_id + "'"});
            }
          }
        }
      }
    }

    if (!violations.empty()) return rule_error(std::move(violations));
    return std::nullopt;
  }

  TemporalOntology ontology_;
  std::vector<ChangeEvent> events_;
  detail::ReplayState state_;
  std::map<Triple, std::int64_t> last_commit_;
};

}  // namespace chronokg
