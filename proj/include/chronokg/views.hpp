#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chronokg/event_log.hpp"
#include "chronokg/graph.hpp"

namespace chronokg {

enum class ViewKind { Mutable, SemiIncremental, Incremental };

inline std::string to_string(ViewKind k) {
  switch (k) {
    case ViewKind::Mutable: return "mutable";
    case ViewKind::SemiIncremental: return "semi-incremental";
    case ViewKind::Incremental: return "incremental";
  }
  return "";
}

inline std::optional<ViewKind> view_kind_from_name(const std::string& name) {
  if (name == "mutable") return ViewKind::Mutable;
  if (name == "semi-incremental") return ViewKind::SemiIncremental;
  if (name == "incremental") return ViewKind::Incremental;
  return std::nullopt;
}

/// Immutable stationary image of a log at one tick. Mutable snapshots hold a
/// triple store, the other kinds a quintuple store.
struct Snapshot {
  ViewKind kind;
  std::int64_t at;
  std::variant<StandardKG, ReminiscentKG> graph;

  const StandardKG& standard() const { return std::get<StandardKG>(graph); }
  const ReminiscentKG& reminiscent() const { return std::get<ReminiscentKG>(graph); }

  std::size_t edge_count() const {
    if (const auto* g = std::get_if<StandardKG>(&graph)) return g->size();
    return std::get<ReminiscentKG>(graph).size();
  }

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Walks a log commit by commit, materializing stationary images on demand.
/// One pass over the events serves any number of per-commit inspections,
/// which keeps series queries linear instead of replaying per tick.
class Replayer {
 public:
  explicit Replayer(const ChangeLog& log) : log_(&log) {}

  /// Applies every event at the next distinct commit time; returns that time,
  /// or nothing when the log is exhausted.
  std::optional<std::int64_t> advance() {
    const auto& events = log_->events();
    if (next_ == events.size()) return std::nullopt;
    const std::int64_t commit = events[next_].commit;
    while (next_ < events.size() && events[next_].commit == commit) {
      state_.apply(events[next_]);
      ++next_;
    }
    return commit;
  }

  /// Applies all events with commit time <= tick.
  void advance_to(std::int64_t tick) {
    const auto& events = log_->events();
    while (next_ < events.size() && events[next_].commit <= tick) {
      state_.apply(events[next_]);
      ++next_;
    }
  }

  Snapshot materialize(ViewKind kind, std::int64_t at) const {
    switch (kind) {
      case ViewKind::Mutable: return {kind, at, state_.mutable_graph()};
      case ViewKind::SemiIncremental: return {kind, at, state_.semi_graph()};
      case ViewKind::Incremental: return {kind, at, state_.incremental_graph()};
    }
    throw std::logic_error("unreachable");
  }

  /// Whether the key is visible in the given view of the current position.
  bool present(ViewKind kind, const Triple& key) const {
    if (kind == ViewKind::Incremental) return state_.projected.count(key) > 0;
    return state_.any_active_with_key(key);  // mutable and semi views show active edges
  }

 private:
  const ChangeLog* log_;
  detail::ReplayState state_;
  std::size_t next_ = 0;
};

/// The stationary image of the log at a tick: all events with commit <= at,
/// folded under the view's policy. Between commits the image is the step
/// function of the latest commit.
inline Snapshot snapshot(const ChangeLog& log, ViewKind kind, std::int64_t at) {
  Replayer r(log);
  r.advance_to(at);
  return r.materialize(kind, at);
}

/// Earliest commit at which the key was asserted, i.e. became accessible.
inline std::optional<std::int64_t> accessibility_time(const ChangeLog& log,
                                                      const Triple& key) {
  for (const ChangeEvent& e : log.events()) {
    if (const auto* a = std::get_if<AssertAction>(&e.action)) {
      if (a->edge.project() == key) return e.commit;
    }
  }
  return std::nullopt;
}

struct DeletionTime {
  enum class Status { NotFound, StillPresent, DeletedAt };
  Status status;
  std::int64_t at = 0;  // meaningful for DeletedAt

  static DeletionTime not_found() { return {Status::NotFound, 0}; }
  static DeletionTime still_present() { return {Status::StillPresent, 0}; }
  static DeletionTime deleted_at(std::int64_t t) { return {Status::DeletedAt, t}; }

  friend bool operator==(const DeletionTime&, const DeletionTime&) = default;
};

/// Reconstructs when the key vanished from a view by inspecting consecutive
/// stationary images: the first commit whose image lacks a key present in
/// the previous image. Only meaningful for views that drop edges; an
/// incremental view closes edges instead of deleting them.
inline DeletionTime deletion_time(const ChangeLog& log, const Triple& key,
                                  ViewKind kind) {
  if (kind == ViewKind::Incremental) {
    throw std::invalid_argument("deletion_time: incremental views never delete edges");
  }
  Replayer r(log);
  bool was_present = false;
  bool ever_present = false;
  while (auto commit = r.advance()) {
    const bool now = r.present(kind, key);
    if (was_present && !now) return DeletionTime::deleted_at(*commit);
    ever_present = ever_present || now;
    was_present = now;
  }
  if (was_present) return DeletionTime::still_present();
  return DeletionTime::not_found();
}

/// Set difference of two stationary images of the same view.
///
/// For quintuple views, a removed and an added edge that agree on everything
/// but valid_until are reported as one rewrite: that is the shape a close
/// leaves behind. Only incremental views can produce rewrites.
struct GraphDiff {
  ViewKind kind;
  std::int64_t from;
  std::int64_t to;
  std::vector<Triple> added_triples;
  std::vector<Triple> removed_triples;
  std::vector<Quintuple> added;
  std::vector<Quintuple> removed;
  std::vector<std::pair<Quintuple, Quintuple>> rewritten;  // (old, new)

  bool empty() const {
    return added_triples.empty() && removed_triples.empty() && added.empty() &&
           removed.empty() && rewritten.empty();
  }

  friend bool operator==(const GraphDiff&, const GraphDiff&) = default;
};

inline GraphDiff diff(const ChangeLog& log, ViewKind kind, std::int64_t from,
                      std::int64_t to) {
  if (from > to) {
    throw std::invalid_argument("diff: range start exceeds range end");
  }
  GraphDiff out{kind, from, to, {}, {}, {}, {}, {}};

  Replayer r(log);
  r.advance_to(from);
  const Snapshot before = r.materialize(kind, from);
  r.advance_to(to);
  const Snapshot after = r.materialize(kind, to);

  if (kind == ViewKind::Mutable) {
    const auto& a = before.standard().edges();
    const auto& b = after.standard().edges();
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(),
                        std::back_inserter(out.added_triples));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out.removed_triples));
    return out;
  }

  const auto& a = before.reminiscent().edges();
  const auto& b = after.reminiscent().edges();
  std::vector<Quintuple> removed_raw, added_raw;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(removed_raw));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added_raw));

  // Pair k-th removed with k-th added per (triple, valid_from) group; both
  // sides are already sorted with valid_until last.
  using GroupKey = std::pair<Triple, TimePoint>;
  std::map<GroupKey, std::pair<std::vector<Quintuple>, std::vector<Quintuple>>> groups;
  for (const Quintuple& q : removed_raw) {
    groups[{q.project(), q.valid_from}].first.push_back(q);
  }
  for (const Quintuple& q : added_raw) {
    groups[{q.project(), q.valid_from}].second.push_back(q);
  }
  for (const auto& [key, pair] : groups) {
    const auto& [olds, news] = pair;
    const std::size_t paired = std::min(olds.size(), news.size());
    for (std::size_t i = 0; i < paired; ++i) {
      out.rewritten.emplace_back(olds[i], news[i]);
    }
    for (std::size_t i = paired; i < olds.size(); ++i) out.removed.push_back(olds[i]);
    for (std::size_t i = paired; i < news.size(); ++i) out.added.push_back(news[i]);
  }
  std::sort(out.added.begin(), out.added.end());
  std::sort(out.removed.begin(), out.removed.end());
  return out;
}

/// Taxonomy of time-aware stores: stationary stores classify by edge shape,
/// logs by the most specific view that loses none of their information.
enum class TaxonomyCell {
  Standard,
  Reminiscent,
  SemiReminiscent,
  Mutable,
  SemiIncremental,
  Incremental,
};

inline std::string to_string(TaxonomyCell c) {
  switch (c) {
    case TaxonomyCell::Standard: return "standard";
    case TaxonomyCell::Reminiscent: return "reminiscent";
    case TaxonomyCell::SemiReminiscent: return "semi-reminiscent";
    case TaxonomyCell::Mutable: return "mutable";
    case TaxonomyCell::SemiIncremental: return "semi-incremental";
    case TaxonomyCell::Incremental: return "incremental";
  }
  return "";
}

inline TaxonomyCell classify(const StandardKG&) { return TaxonomyCell::Standard; }

inline TaxonomyCell classify(const ReminiscentKG& g) {
  return is_semi_reminiscent(g) ? TaxonomyCell::SemiReminiscent : TaxonomyCell::Reminiscent;
}

inline TaxonomyCell classify(const ChangeLog& log) {
  bool needs_incremental = false;  // closed validity intervals somewhere
  bool needs_semi = false;         // start timestamps somewhere
  for (const ChangeEvent& e : log.events()) {
    if (std::holds_alternative<CloseAction>(e.action)) {
      needs_incremental = true;
    } else if (const auto* a = std::get_if<AssertAction>(&e.action)) {
      if (!a->edge.valid_until.is_pos_inf()) needs_incremental = true;
      if (!a->edge.valid_from.is_neg_inf()) needs_semi = true;
    }
  }
  if (needs_incremental) return TaxonomyCell::Incremental;
  if (needs_semi) return TaxonomyCell::SemiIncremental;
  return TaxonomyCell::Mutable;
}

}  // namespace chronokg
