#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "chronokg/time_point.hpp"

namespace chronokg {

namespace detail {

inline bool valid_identifier(const std::string& id) {
  if (id.empty()) return false;
  for (unsigned char c : id) {
    if (std::isspace(c) || c == '<' || c == '>') return false;
  }
  return true;
}

inline void require_identifier(const std::string& id, const char* what) {
  if (!valid_identifier(id)) {
    throw std::invalid_argument(std::string(what) + " must be non-empty and contain no whitespace: '" + id + "'");
  }
}

}  // namespace detail

/// A node endpoint: either an entity reference or a typed literal.
class Term {
 public:
  enum class Kind { Entity, Literal };

  static Term entity(std::string iri) {
    detail::require_identifier(iri, "entity identifier");
    return Term(Kind::Entity, std::move(iri), std::string());
  }

  static Term literal(std::string lexical, std::string datatype) {
    detail::require_identifier(datatype, "datatype identifier");
    return Term(Kind::Literal, std::move(lexical), std::move(datatype));
  }

  Kind kind() const { return kind_; }
  bool is_entity() const { return kind_ == Kind::Entity; }
  bool is_literal() const { return kind_ == Kind::Literal; }

  const std::string& iri() const {
    if (!is_entity()) throw std::logic_error("Term::iri on a literal");
    return value_;
  }
  const std::string& lexical() const {
    if (!is_literal()) throw std::logic_error("Term::lexical on an entity");
    return value_;
  }
  const std::string& datatype() const {
    if (!is_literal()) throw std::logic_error("Term::datatype on an entity");
    return datatype_;
  }

  // Entities sort before literals; within a kind, by value then datatype.
  friend auto operator<=>(const Term&, const Term&) = default;

 private:
  Term(Kind kind, std::string value, std::string datatype)
      : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)) {}

  Kind kind_;
  std::string value_;
  std::string datatype_;
};

/// Timestamp-free edge (head, relation, tail).
struct Triple {
  std::string head;
  std::string relation;
  Term tail;

  Triple(std::string h, std::string r, Term t)
      : head(std::move(h)), relation(std::move(r)), tail(std::move(t)) {
    detail::require_identifier(head, "head entity");
    detail::require_identifier(relation, "relation");
  }

  // Member order doubles as the canonical sort order.
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Edge with a closed validity interval [valid_from, valid_until]. Both ends
/// may be sentinels; a degenerate single-instant interval is legal.
struct Quintuple {
  std::string head;
  std::string relation;
  Term tail;
  TimePoint valid_from;
  TimePoint valid_until;

  Quintuple(std::string h, std::string r, Term t, TimePoint from, TimePoint until)
      : Quintuple(Unchecked{}, std::move(h), std::move(r), std::move(t), from, until) {
    if (valid_from > valid_until) {
      throw std::invalid_argument("Quintuple: valid_from exceeds valid_until");
    }
  }

  /// Builds without the interval-order check. Parsers use this so that a
  /// reversed interval reaches rule validation instead of being dropped at
  /// construction.
  static Quintuple unchecked(std::string h, std::string r, Term t,
                             TimePoint from, TimePoint until) {
    return Quintuple(Unchecked{}, std::move(h), std::move(r), std::move(t), from, until);
  }

  Triple project() const { return Triple(head, relation, tail); }

  /// True iff `at` lies within the validity interval. `at` must be finite.
  bool contains(TimePoint at) const {
    if (!at.finite()) {
      throw std::invalid_argument("Quintuple::contains: query instant must be finite");
    }
    return valid_from <= at && at <= valid_until;
  }

  bool active() const { return valid_until.is_pos_inf(); }

  friend auto operator<=>(const Quintuple&, const Quintuple&) = default;

 private:
  struct Unchecked {};
  Quintuple(Unchecked, std::string h, std::string r, Term t, TimePoint from,
            TimePoint until)
      : head(std::move(h)), relation(std::move(r)), tail(std::move(t)),
        valid_from(from), valid_until(until) {
    detail::require_identifier(head, "head entity");
    detail::require_identifier(relation, "relation");
  }
};

}  // namespace chronokg
