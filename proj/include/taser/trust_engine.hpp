#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "taser/params.hpp"
#include "taser/stat_tests.hpp"
#include "taser/types.hpp"

namespace taser {

// One row of an observer's score table: the neighbor's last report, a short
// velocity history for the t-test, its classification and trust score.
struct ScoreEntry {
  Pseudonym pseudonym = 0;
  Vec2 last_position;
  std::optional<Vec2> prev_position;  // previous report, for heading estimates
  double last_velocity = 0.0;
  Epoch last_timestamp = 0;
  Category category = Category::Unknown;
  double trust = 0.0;
  std::vector<double> velocity_window;  // ring of <= window_size recent reports
  Epoch first_seen = 0;
  std::optional<Epoch> final_classified_at;  // set on VerifiedHonest / ConfirmedMalicious
};

// What process_bsm did to an entry's trust this message.
enum TrustChange : unsigned {
  kTrustSeeded = 1u << 0,
  kTrustFloored = 1u << 1,
  kTrustIncremented = 1u << 2,
  kTrustDeducted = 1u << 3,
};

struct ProcessOutcome {
  bool accepted = false;  // false for stale/duplicate timestamps
  bool trust_changed = false;
  unsigned change_bits = 0;
  double trust_after = 0.0;
  std::optional<SuspectEvent> suspect;
};

// Per-observer score table (one per vehicle, single-writer).
class ScoreTable {
 public:
  explicit ScoreTable(Pseudonym owner = 0) : owner_(owner) {}

  Pseudonym owner() const { return owner_; }
  const std::map<Pseudonym, ScoreEntry>& entries() const { return entries_; }
  std::map<Pseudonym, ScoreEntry>& entries() { return entries_; }
  const std::set<Pseudonym>& suspect_list() const { return suspects_; }

  ScoreEntry* find(Pseudonym p) {
    auto it = entries_.find(p);
    return it == entries_.end() ? nullptr : &it->second;
  }
  const ScoreEntry* find(Pseudonym p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? nullptr : &it->second;
  }

  // Arithmetic mean of all trust scores; 0 for an empty table.
  double average_trust() const {
    if (entries_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [id, e] : entries_) sum += e.trust;
    return sum / static_cast<double>(entries_.size());
  }

  // Creates or refreshes the sender's entry from a beacon. New entries are
  // seeded at the supplied table average. Returns nullptr for stale or
  // duplicate timestamps (no state change).
  ScoreEntry* upsert(const BsmStatus& bsm, double average_trust, std::size_t window_size) {
    auto it = entries_.find(bsm.sender);
    if (it == entries_.end()) {
      ScoreEntry e;
      e.pseudonym = bsm.sender;
      e.trust = average_trust;
      e.category = Category::Unknown;
      e.first_seen = bsm.timestamp;
      e.last_position = bsm.position;
      e.last_velocity = bsm.velocity;
      e.last_timestamp = bsm.timestamp;
      e.velocity_window.push_back(bsm.velocity);
      return &entries_.emplace(bsm.sender, std::move(e)).first->second;
    }
    ScoreEntry& e = it->second;
    if (bsm.timestamp <= e.last_timestamp) return nullptr;  // replayed or stale
    e.prev_position = e.last_position;
    e.last_position = bsm.position;
    e.last_velocity = bsm.velocity;
    e.last_timestamp = bsm.timestamp;
    e.velocity_window.push_back(bsm.velocity);
    if (e.velocity_window.size() > window_size)
      e.velocity_window.erase(e.velocity_window.begin(),
                              e.velocity_window.begin() +
                                  static_cast<std::ptrdiff_t>(e.velocity_window.size() - window_size));
    return &e;
  }

  // Malicious is terminal: none of the marks below can leave it.
  void mark_suspect(Pseudonym p) {
    if (ScoreEntry* e = find(p); e != nullptr && e->category != Category::Malicious) {
      e->category = Category::Suspect;
      suspects_.insert(p);
    }
  }

  void mark_malicious(Pseudonym p, Epoch epoch) {
    if (ScoreEntry* e = find(p)) {
      e->category = Category::Malicious;
      e->final_classified_at = epoch;
      suspects_.insert(p);
    }
  }

  void mark_honest(Pseudonym p, Epoch epoch, double average_trust) {
    if (ScoreEntry* e = find(p); e != nullptr && e->category != Category::Malicious) {
      e->category = Category::Honest;
      e->final_classified_at = epoch;
      suspects_.erase(p);
      apply_honest_floor(*e, average_trust);
    }
  }

  // Algorithm line: honest entries below the table average are lifted to it.
  static void apply_honest_floor(ScoreEntry& e, double average_trust) {
    if (e.category == Category::Honest && e.trust < average_trust) e.trust = average_trust;
  }

 private:
  Pseudonym owner_;
  std::map<Pseudonym, ScoreEntry> entries_;
  std::set<Pseudonym> suspects_;
};

inline double table_average_trust(const ScoreTable& t) { return t.average_trust(); }

// True iff the reported velocity is inside the +/- delta band around the
// speed limit; boundary values are within.
inline bool within_speed_threshold(double velocity, double speed_limit, double delta) {
  return velocity >= speed_limit * (1.0 - delta) && velocity <= speed_limit * (1.0 + delta);
}

inline double clamp_trust(double t, const TrustParams& p) {
  return std::clamp(t, p.trust_min, p.trust_max);
}

// Standard increment 1 + beta * trust, clamped to the score bounds.
inline double trust_increment(double trust, const TrustParams& p) {
  return clamp_trust(trust + (1.0 + p.beta * trust), p);
}

// Deduction 1 - beta * trust, clamped. Low scores lose more, gain less.
inline double trust_deduction(double trust, const TrustParams& p) {
  return clamp_trust(trust - (1.0 - p.beta * trust), p);
}

// Literal suspect rule, applied for any sign of the average:
//   AverageTrust - trust >= lambda * AverageTrust
inline bool check_suspect(const ScoreEntry& e, double average_trust, double lambda) {
  return average_trust - e.trust >= lambda * average_trust;
}

// Whether a verified-honest entry is still inside its re-suspicion grace
// window at `epoch`.
inline bool honest_within_grace(const ScoreEntry& e, Epoch epoch, const TrustParams& p) {
  return e.category == Category::Honest && e.final_classified_at &&
         epoch - *e.final_classified_at < p.honest_grace_epochs;
}

// Full trust-assessment procedure for one received beacon, in order:
// average, upsert (seeding new entries at the average), honest floor, the
// delta gate (increment inside, t-test outside: reject -> deduction,
// fail-to-reject -> no change), then the lambda suspect rule.
inline ProcessOutcome process_bsm(ScoreTable& table, const BsmStatus& bsm, double speed_limit,
                                  const TrustParams& params, Epoch epoch) {
  ProcessOutcome out;

  const double average = table.average_trust();

  const bool is_new = table.find(bsm.sender) == nullptr;
  ScoreEntry* entry = table.upsert(bsm, average, params.window_size);
  if (entry == nullptr) return out;  // stale timestamp: rejected, no state change
  out.accepted = true;
  if (is_new) out.change_bits |= kTrustSeeded;

  const double before_floor = entry->trust;
  ScoreTable::apply_honest_floor(*entry, average);
  if (entry->trust != before_floor) out.change_bits |= kTrustFloored;

  const double before_gate = entry->trust;
  if (within_speed_threshold(bsm.velocity, speed_limit, params.delta)) {
    entry->trust = trust_increment(entry->trust, params);
    if (entry->trust != before_gate) out.change_bits |= kTrustIncremented;
  } else {
    TTestResult t = velocity_t_test(entry->velocity_window, speed_limit, params.alpha,
                                    params.delta, params.min_t_samples);
    if (t.reject) {
      entry->trust = trust_deduction(entry->trust, params);
      if (entry->trust != before_gate) out.change_bits |= kTrustDeducted;
    }
    // fail-to-reject: suspect but trusted this iteration, no score change
  }

  out.trust_after = entry->trust;
  out.trust_changed = is_new || out.change_bits != 0;

  if (check_suspect(*entry, average, params.lambda) && entry->category != Category::Malicious &&
      entry->category != Category::Suspect && !honest_within_grace(*entry, epoch, params)) {
    table.mark_suspect(bsm.sender);
    out.suspect = SuspectEvent{table.owner(), bsm.sender, epoch, false};
  }
  return out;
}

// Pseudonyms appearing in any pair of distinct senders whose reported
// positions lie within epsilon of each other. All BSMs share one epoch.
inline std::set<Pseudonym> detect_colocation(std::span<const BsmStatus> bsms_this_epoch,
                                             double epsilon) {
  std::set<Pseudonym> out;
  for (std::size_t i = 0; i < bsms_this_epoch.size(); ++i) {
    for (std::size_t j = i + 1; j < bsms_this_epoch.size(); ++j) {
      const BsmStatus& a = bsms_this_epoch[i];
      const BsmStatus& b = bsms_this_epoch[j];
      if (a.sender == b.sender) continue;
      if (distance(a.position, b.position) <= epsilon) {
        out.insert(a.sender);
        out.insert(b.sender);
      }
    }
  }
  return out;
}

}  // namespace taser
