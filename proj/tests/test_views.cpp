#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "chronokg/validate.hpp"
#include "chronokg/views.hpp"
#include "testing/brute.hpp"
#include "testing/generators.hpp"

using namespace chronokg;
using chronokg::kgtest::LogGenOptions;
using chronokg::kgtest::random_log;

namespace {

Quintuple quint(const char* h, const char* r, const char* t, TimePoint from,
                TimePoint until) {
  return Quintuple::unchecked(h, r, Term::entity(t), from, until);
}

Triple key(const char* h, const char* r, const char* t) {
  return Triple(h, r, Term::entity(t));
}

ChangeLog membership_log() {
  ChangeLog log;
  EXPECT_FALSE(log.append(make_assert(
      2012, quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::pos_inf()))));
  EXPECT_FALSE(log.append(make_close(2021, key("UK", "member", "EU"), 2020)));
  return log;
}

}  // namespace

TEST(Snapshot, MembershipIncrementalRetainsClosedFact) {
  const ChangeLog log = membership_log();
  const Snapshot s = snapshot(log, ViewKind::Incremental, 2021);
  ASSERT_EQ(s.reminiscent().size(), 1u);
  EXPECT_TRUE(s.reminiscent().contains(
      quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::at(2020))));
}

TEST(Snapshot, MembershipMutableDropsFactAtClose) {
  const ChangeLog log = membership_log();
  const Snapshot at_2020 = snapshot(log, ViewKind::Mutable, 2020);
  ASSERT_EQ(at_2020.standard().size(), 1u);
  EXPECT_TRUE(at_2020.standard().contains(key("UK", "member", "EU")));

  const Snapshot at_2021 = snapshot(log, ViewKind::Mutable, 2021);
  EXPECT_TRUE(at_2021.standard().empty());
}

TEST(Snapshot, MembershipSemiIncrementalShowsActiveQuintuple) {
  const ChangeLog log = membership_log();
  const Snapshot s = snapshot(log, ViewKind::SemiIncremental, 2012);
  ASSERT_EQ(s.reminiscent().size(), 1u);
  EXPECT_TRUE(s.reminiscent().semi());
  EXPECT_TRUE(s.reminiscent().contains(
      quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::pos_inf())));

  EXPECT_TRUE(snapshot(log, ViewKind::SemiIncremental, 2021).reminiscent().empty());
}

TEST(Snapshot, BeforeFirstCommitIsEmpty) {
  const ChangeLog log = membership_log();
  EXPECT_TRUE(snapshot(log, ViewKind::Mutable, 2000).standard().empty());
  EXPECT_TRUE(snapshot(log, ViewKind::Incremental, 2000).reminiscent().empty());
}

TEST(Snapshot, StepSemanticsBetweenCommits) {
  std::mt19937 rng(23);
  for (int iter = 0; iter < 30; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 40});
    const auto commits = log.commit_times();
    if (commits.empty()) continue;
    for (const ViewKind kind :
         {ViewKind::Mutable, ViewKind::SemiIncremental, ViewKind::Incremental}) {
      for (std::size_t i = 0; i < commits.size(); ++i) {
        // Any tick in [commit_i, next commit) sees the commit_i image.
        const std::int64_t probe =
            (i + 1 < commits.size())
                ? commits[i] + (commits[i + 1] - commits[i]) / 2
                : commits[i] + 17;
        EXPECT_EQ(snapshot(log, kind, probe).graph, snapshot(log, kind, commits[i]).graph);
      }
    }
  }
}

TEST(Snapshot, MatchesBruteForceFoldPerKind) {
  std::mt19937 rng(29);
  for (int iter = 0; iter < 50; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 50, .entities = 6, .relations = 3});
    for (const std::int64_t at : log.commit_times()) {
      EXPECT_EQ(snapshot(log, ViewKind::Incremental, at).reminiscent(),
                kgtest::brute_incremental(log.events(), at));
      EXPECT_EQ(snapshot(log, ViewKind::SemiIncremental, at).reminiscent(),
                kgtest::brute_semi_incremental(log.events(), at));
      EXPECT_EQ(snapshot(log, ViewKind::Mutable, at).standard(),
                kgtest::brute_mutable(log.events(), at));
    }
  }
}

TEST(Snapshot, ProjectionTowerOnRandomLogs) {
  std::mt19937 rng(31);
  for (int iter = 0; iter < 50; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 60});
    for (const std::int64_t at : log.commit_times()) {
      const ReminiscentKG incr = snapshot(log, ViewKind::Incremental, at).reminiscent();
      const ReminiscentKG semi = snapshot(log, ViewKind::SemiIncremental, at).reminiscent();
      const StandardKG mut = snapshot(log, ViewKind::Mutable, at).standard();

      // Semi view is exactly the active subset of the incremental view.
      ReminiscentKG active_subset(true);
      for (const Quintuple& q : incr.edges()) {
        if (q.active()) active_subset.add(q);
      }
      EXPECT_EQ(semi, active_subset);

      // Mutable view is exactly the projection of the semi view.
      EXPECT_EQ(mut, semi.project());
    }
  }
}

TEST(Snapshot, StationarySpecialization) {
  // Every commit-time image is a valid store under the log's ontology.
  std::mt19937 rng(37);
  for (int iter = 0; iter < 20; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 40});
    for (const std::int64_t at : log.commit_times()) {
      EXPECT_TRUE(validate_reminiscent(snapshot(log, ViewKind::Incremental, at).reminiscent(),
                                       log.ontology())
                      .empty());
      EXPECT_TRUE(validate_standard(snapshot(log, ViewKind::Mutable, at).standard(),
                                    log.ontology().base)
                      .empty());
      EXPECT_TRUE(is_semi_reminiscent(
          snapshot(log, ViewKind::SemiIncremental, at).reminiscent()));
    }
  }
}

TEST(Snapshot, MonotoneGrowthWithoutRetracts) {
  std::mt19937 rng(41);
  for (int iter = 0; iter < 40; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 60, .allow_retract = false});
    std::size_t prev = 0;
    for (const std::int64_t at : log.commit_times()) {
      const std::size_t count = snapshot(log, ViewKind::Incremental, at).edge_count();
      EXPECT_GE(count, prev);
      prev = count;
    }
  }
}

TEST(AccessibilityTime, EarliestAssert) {
  const ChangeLog log = membership_log();
  EXPECT_EQ(accessibility_time(log, key("UK", "member", "EU")), 2012);
  EXPECT_EQ(accessibility_time(log, key("FR", "member", "EU")), std::nullopt);
}

TEST(AccessibilityTime, SurvivesRetractionAndReassertion) {
  ChangeLog log;
  ASSERT_FALSE(log.append(
      make_assert(5, quint("a", "r", "b", TimePoint::at(1), TimePoint::pos_inf()))));
  ASSERT_FALSE(log.append(make_retract(7, key("a", "r", "b"))));
  ASSERT_FALSE(log.append(
      make_assert(9, quint("a", "r", "b", TimePoint::at(1), TimePoint::pos_inf()))));

  // Oracle: linear scan for the first matching assert.
  std::int64_t expected = -1;
  for (const ChangeEvent& e : log.events()) {
    if (std::holds_alternative<AssertAction>(e.action) && e.key() == key("a", "r", "b")) {
      expected = e.commit;
      break;
    }
  }
  EXPECT_EQ(expected, 5);
  EXPECT_EQ(accessibility_time(log, key("a", "r", "b")), expected);
}

TEST(DeletionTime, MembershipVanishesAt2021) {
  const ChangeLog log = membership_log();
  EXPECT_EQ(deletion_time(log, key("UK", "member", "EU"), ViewKind::Mutable),
            DeletionTime::deleted_at(2021));
  EXPECT_EQ(deletion_time(log, key("UK", "member", "EU"), ViewKind::SemiIncremental),
            DeletionTime::deleted_at(2021));
}

TEST(DeletionTime, StatusCases) {
  ChangeLog log;
  ASSERT_FALSE(log.append(
      make_assert(1, quint("a", "r", "b", TimePoint::at(1), TimePoint::pos_inf()))));
  EXPECT_EQ(deletion_time(log, key("a", "r", "b"), ViewKind::Mutable),
            DeletionTime::still_present());
  EXPECT_EQ(deletion_time(log, key("x", "r", "y"), ViewKind::Mutable),
            DeletionTime::not_found());
  EXPECT_THROW(deletion_time(log, key("a", "r", "b"), ViewKind::Incremental),
               std::invalid_argument);
}

TEST(DeletionTime, FirstDisappearanceWins) {
  ChangeLog log;
  ASSERT_FALSE(log.append(
      make_assert(1, quint("a", "r", "b", TimePoint::at(1), TimePoint::pos_inf()))));
  ASSERT_FALSE(log.append(make_retract(3, key("a", "r", "b"))));
  ASSERT_FALSE(log.append(
      make_assert(5, quint("a", "r", "b", TimePoint::at(5), TimePoint::pos_inf()))));
  EXPECT_EQ(deletion_time(log, key("a", "r", "b"), ViewKind::Mutable),
            DeletionTime::deleted_at(3));
}

TEST(DeletionTime, AgreesWithGeneratingEventOnSingleRemovalLogs) {
  std::mt19937 rng(43);
  for (int iter = 0; iter < 40; ++iter) {
    const ChangeLog log = random_log(
        rng, {.max_events = 50, .consume_keys_once = true, .assert_active_only = true});

    // Oracle: scan the event list for each key's single close/retract.
    std::map<Triple, std::int64_t> removal;
    std::set<Triple> asserted;
    for (const ChangeEvent& e : log.events()) {
      if (std::holds_alternative<AssertAction>(e.action)) {
        asserted.insert(e.key());
      } else {
        removal[e.key()] = e.commit;
      }
    }

    for (const Triple& k : asserted) {
      for (const ViewKind kind : {ViewKind::Mutable, ViewKind::SemiIncremental}) {
        const DeletionTime got = deletion_time(log, k, kind);
        if (auto it = removal.find(k); it != removal.end()) {
          EXPECT_EQ(got, DeletionTime::deleted_at(it->second));
        } else {
          EXPECT_EQ(got, DeletionTime::still_present());
        }
      }
    }
  }
}

TEST(Diff, MembershipRewriteShowsTheUpdate) {
  const ChangeLog log = membership_log();
  const GraphDiff d = diff(log, ViewKind::Incremental, 2012, 2021);
  EXPECT_TRUE(d.added.empty());
  EXPECT_TRUE(d.removed.empty());
  ASSERT_EQ(d.rewritten.size(), 1u);
  EXPECT_EQ(d.rewritten[0].first,
            quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::pos_inf()));
  EXPECT_EQ(d.rewritten[0].second,
            quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::at(2020)));
}

TEST(Diff, ReflexiveDiffIsEmpty) {
  const ChangeLog log = membership_log();
  for (const ViewKind kind :
       {ViewKind::Mutable, ViewKind::SemiIncremental, ViewKind::Incremental}) {
    EXPECT_TRUE(diff(log, kind, 2012, 2012).empty());
    EXPECT_TRUE(diff(log, kind, 2021, 2021).empty());
  }
}

TEST(Diff, RejectsBadRange) {
  const ChangeLog log = membership_log();
  EXPECT_THROW(diff(log, ViewKind::Mutable, 2021, 2012), std::invalid_argument);
}

TEST(Diff, MatchesBruteForceSetDifference) {
  std::mt19937 rng(47);
  for (int iter = 0; iter < 25; ++iter) {
    const ChangeLog log = random_log(rng, {.max_events = 30, .entities = 5, .relations = 2});
    const auto commits = log.commit_times();
    for (std::size_t i = 0; i < commits.size(); ++i) {
      for (std::size_t j = i; j < commits.size(); ++j) {
        for (const ViewKind kind :
             {ViewKind::Mutable, ViewKind::SemiIncremental, ViewKind::Incremental}) {
          const GraphDiff d = diff(log, kind, commits[i], commits[j]);
          if (kind == ViewKind::Mutable) {
            const StandardKG before = kgtest::brute_mutable(log.events(), commits[i]);
            const StandardKG after = kgtest::brute_mutable(log.events(), commits[j]);
            std::set<Triple> expect_removed, expect_added;
            for (const Triple& t : before.edges()) {
              if (!after.contains(t)) expect_removed.insert(t);
            }
            for (const Triple& t : after.edges()) {
              if (!before.contains(t)) expect_added.insert(t);
            }
            EXPECT_EQ(std::set<Triple>(d.removed_triples.begin(), d.removed_triples.end()),
                      expect_removed);
            EXPECT_EQ(std::set<Triple>(d.added_triples.begin(), d.added_triples.end()),
                      expect_added);
            EXPECT_TRUE(d.rewritten.empty());
          } else {
            const ReminiscentKG before =
                kind == ViewKind::Incremental
                    ? kgtest::brute_incremental(log.events(), commits[i])
                    : kgtest::brute_semi_incremental(log.events(), commits[i]);
            const ReminiscentKG after =
                kind == ViewKind::Incremental
                    ? kgtest::brute_incremental(log.events(), commits[j])
                    : kgtest::brute_semi_incremental(log.events(), commits[j]);
            // removed + rewritten-old must equal before \ after; added +
            // rewritten-new must equal after \ before.
            std::set<Quintuple> got_removed(d.removed.begin(), d.removed.end());
            std::set<Quintuple> got_added(d.added.begin(), d.added.end());
            for (const auto& [old_q, new_q] : d.rewritten) {
              got_removed.insert(old_q);
              got_added.insert(new_q);
            }
            std::set<Quintuple> expect_removed, expect_added;
            for (const Quintuple& q : before.edges()) {
              if (!after.contains(q)) expect_removed.insert(q);
            }
            for (const Quintuple& q : after.edges()) {
              if (!before.contains(q)) expect_added.insert(q);
            }
            EXPECT_EQ(got_removed, expect_removed);
            EXPECT_EQ(got_added, expect_added);
            if (kind == ViewKind::SemiIncremental) EXPECT_TRUE(d.rewritten.empty());
          }
        }
      }
    }
  }
}

TEST(Classify, StationaryStores) {
  StandardKG triples;
  triples.add(key("UK", "member", "EU"));
  EXPECT_EQ(classify(triples), TaxonomyCell::Standard);

  ReminiscentKG closed;
  closed.add(quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::at(2020)));
  EXPECT_EQ(classify(closed), TaxonomyCell::Reminiscent);

  ReminiscentKG active;
  active.add(quint("UK", "member", "EU", TimePoint::at(1973), TimePoint::pos_inf()));
  EXPECT_EQ(classify(active), TaxonomyCell::SemiReminiscent);
}

TEST(Classify, Logs) {
  EXPECT_EQ(classify(membership_log()), TaxonomyCell::Incremental);

  ChangeLog sentinel_only;
  ASSERT_FALSE(sentinel_only.append(
      make_assert(1, quint("a", "r", "b", TimePoint::neg_inf(), TimePoint::pos_inf()))));
  ASSERT_FALSE(sentinel_only.append(make_retract(2, key("a", "r", "b"))));
  EXPECT_EQ(classify(sentinel_only), TaxonomyCell::Mutable);

  ChangeLog dated_starts;
  ASSERT_FALSE(dated_starts.append(
      make_assert(1, quint("a", "r", "b", TimePoint::at(1), TimePoint::pos_inf()))));
  EXPECT_EQ(classify(dated_starts), TaxonomyCell::SemiIncremental);

  ChangeLog pre_closed;
  ASSERT_FALSE(pre_closed.append(
      make_assert(1, quint("a", "r", "b", TimePoint::at(1), TimePoint::at(5)))));
  EXPECT_EQ(classify(pre_closed), TaxonomyCell::Incremental);
}

TEST(Snapshot, NeverObservesLaterAppends) {
  ChangeLog log = membership_log();
  const Snapshot before = snapshot(log, ViewKind::Incremental, 2021);
  ASSERT_FALSE(log.append(
      make_assert(2030, quint("UK", "member", "CPTPP", TimePoint::at(2024),
                              TimePoint::pos_inf()))));
  EXPECT_EQ(before, snapshot(membership_log(), ViewKind::Incremental, 2021));
  EXPECT_EQ(snapshot(log, ViewKind::Incremental, 2030).edge_count(), 2u);
}

TEST(ViewKindNames, RoundTrip) {
  for (const ViewKind kind :
       {ViewKind::Mutable, ViewKind::SemiIncremental, ViewKind::Incremental}) {
    EXPECT_EQ(view_kind_from_name(to_string(kind)), kind);
  }
  EXPECT_EQ(view_kind_from_name("full"), std::nullopt);
}
