#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "chronokg/model.hpp"

namespace chronokg {

/// Stationary triple store. The entity set is derived: inserting an edge
/// registers its head and any entity tail.
class StandardKG {
 public:
  /// Inserts an edge; returns false if it was already present.
  bool add(const Triple& edge) {
    auto [it, inserted] = edges_.insert(edge);
    if (inserted) {
      entities_.insert(edge.head);
      if (edge.tail.is_entity()) entities_.insert(edge.tail.iri());
    }
    return inserted;
  }

  bool contains(const Triple& edge) const { return edges_.count(edge) > 0; }

  const std::set<Triple>& edges() const { return edges_; }
  const std::set<std::string>& entities() const { return entities_; }
  bool empty() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }

  friend bool operator==(const StandardKG&, const StandardKG&) = default;

 private:
  std::set<std::string> entities_;
  std::set<Triple> edges_;
};

/// Stationary quintuple store. `semi` marks the restriction that every edge
/// is still active (valid_until = +inf); a semi store refuses closed edges.
class ReminiscentKG {
 public:
  ReminiscentKG() = default;
  explicit ReminiscentKG(bool semi) : semi_(semi) {}

  /// Inserts an edge; returns false on an exact five-way duplicate.
  bool add(const Quintuple& edge) {
    if (semi_ && !edge.active()) {
      throw std::invalid_argument("semi-reminiscent store only holds edges with valid_until = inf");
    }
    auto [it, inserted] = edges_.insert(edge);
    if (inserted) {
      entities_.insert(edge.head);
      if (edge.tail.is_entity()) entities_.insert(edge.tail.iri());
    }
    return inserted;
  }

  bool contains(const Quintuple& edge) const { return edges_.count(edge) > 0; }

  const std::set<Quintuple>& edges() const { return edges_; }
  const std::set<std::string>& entities() const { return entities_; }
  bool semi() const { return semi_; }
  bool empty() const { return edges_.empty(); }
  std::size_t size() const { return edges_.size(); }

  /// Timestamp-free image: every edge projected to its triple.
  StandardKG project() const {
    StandardKG g;
    for (const auto& q : edges_) g.add(q.project());
    return g;
  }

  friend bool operator==(const ReminiscentKG&, const ReminiscentKG&) = default;

 private:
  std::set<std::string> entities_;
  std::set<Quintuple> edges_;
  bool semi_ = false;
};

/// True iff every edge is active, i.e. the store carries only start
/// timestamps. Vacuously true for the empty store.
inline bool is_semi_reminiscent(const ReminiscentKG& g) {
  for (const auto& q : g.edges()) {
    if (!q.active()) return false;
  }
  return true;
}

}  // namespace chronokg
