#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "chronokg/event_log.hpp"
#include "chronokg/graph.hpp"

namespace chronokg {

/// Structural pattern over edges. Unset fields are wildcards; the temporal
/// filters only make sense against quintuple stores. Setting both means
/// "active and valid at the tick".
struct Pattern {
  std::optional<std::string> head;
  std::optional<std::string> relation;
  std::optional<Term> tail;
  std::optional<std::int64_t> valid_at;
  bool active_only = false;
};

inline std::vector<Triple> match(const StandardKG& g, const Pattern& p) {
  if (p.valid_at || p.active_only) {
    throw std::invalid_argument("match: temporal filter against a triple store");
  }
  std::vector<Triple> out;
  for (const Triple& t : g.edges()) {
    if (p.head && t.head != *p.head) continue;
    if (p.relation && t.relation != *p.relation) continue;
    if (p.tail && t.tail != *p.tail) continue;
    out.push_back(t);
  }
  return out;
}

inline std::vector<Quintuple> match(const ReminiscentKG& g, const Pattern& p) {
  std::vector<Quintuple> out;
  for (const Quintuple& q : g.edges()) {
    if (p.head && q.head != *p.head) continue;
    if (p.relation && q.relation != *p.relation) continue;
    if (p.tail && q.tail != *p.tail) continue;
    if (p.valid_at && !q.contains(TimePoint::at(*p.valid_at))) continue;
    if (p.active_only && !q.active()) continue;
    out.push_back(q);
  }
  return out;
}

/// Every event that touched the key, in commit order: the full accessibility
/// and validity trace of one fact.
inline std::vector<ChangeEvent> history(const ChangeLog& log, const Triple& key) {
  std::vector<ChangeEvent> out;
  for (const ChangeEvent& e : log.events()) {
    if (e.key() == key) out.push_back(e);
  }
  return out;
}

}  // namespace chronokg
