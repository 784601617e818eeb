#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "taser/radio_channel.hpp"
#include "taser/rng.hpp"
#include "taser/trust_engine.hpp"
#include "taser/types.hpp"

namespace taser {

struct ChallengePacket {
  Pseudonym challenger = 0;
  Pseudonym target = 0;
  std::uint64_t nonce = 0;
  Vec2 aim_xy;
  Vec2 challenger_xy;
  Epoch issued_epoch = 0;
  int attempt = 0;
};

struct ChallengeResponse {
  Pseudonym responder = 0;  // identity the reply claims to come from
  std::uint64_t nonce = 0;
  Epoch epoch = 0;
  bool forged = false;  // ground truth: emitted by a Sybil transmitter
};

enum class ChallengeOutcome : std::uint8_t {
  Pending = 0,
  VerifiedHonest = 1,
  ConfirmedMalicious = 2,
};

struct ChallengeState {
  Pseudonym target = 0;
  int attempts_sent = 0;
  int max_attempts = 3;
  Epoch per_attempt_timeout = 2;
  ChallengeOutcome outcome = ChallengeOutcome::Pending;
  std::uint64_t outstanding_nonce = 0;
  Epoch last_issue_epoch = 0;
  bool nonce_live = false;  // nonce not yet consumed or expired
};

// Aim point for a challenge: dead-reckon the suspect from its last report.
// Heading comes from the last two claimed positions; with a single report we
// fall back to the road tangent at the claimed position.
inline Vec2 challenge_aim(const ScoreEntry& entry, Epoch epoch, double epoch_duration) {
  Vec2 heading;
  if (entry.prev_position && !(*entry.prev_position == entry.last_position)) {
    heading = normalized(entry.last_position - *entry.prev_position);
  } else {
    // Tangent of the circular embedding at the claimed point, travel
    // direction (counterclockwise).
    heading = normalized(Vec2{-entry.last_position.y, entry.last_position.x});
  }
  const double elapsed = static_cast<double>(epoch - entry.last_timestamp) * epoch_duration;
  return anticipated_position(entry.last_position, entry.last_velocity, heading, elapsed);
}

// Physical vehicles the directed packet reaches. Ghost identities never
// appear: there is no radio at a claimed-only position.
inline std::set<Pseudonym> deliver_challenge(const ChallengePacket& packet,
                                             std::span<const VehicleState> all_vehicles,
                                             const ChannelConfig& cfg, const RoadConfig& road) {
  std::set<Pseudonym> receivers;
  for (const VehicleState& v : all_vehicles) {
    if (v.id == packet.challenger) continue;
    if (beam_contains(packet.challenger_xy, packet.aim_xy, to_xy(v.arc_position, v.lane, road),
                      cfg))
      receivers.insert(v.id);
  }
  return receivers;
}

// Per-observer challenge bookkeeping. Owned by the observing vehicle and
// mutated only on the simulation thread.
class ChallengeManager {
 public:
  explicit ChallengeManager(Pseudonym owner = 0, ChallengeConfig cfg = {})
      : owner_(owner), cfg_(cfg) {}

  const std::map<Pseudonym, ChallengeState>& states() const { return states_; }

  const ChallengeState* find(Pseudonym target) const {
    auto it = states_.find(target);
    return it == states_.end() ? nullptr : &it->second;
  }

  // Starts a challenge series against a suspect. Fails (nullopt) when the
  // target is already resolved or a challenge is in flight.
  std::optional<ChallengePacket> issue(const ScoreTable& table, Pseudonym target,
                                       Vec2 challenger_xy, Epoch epoch, double epoch_duration,
                                       Rng& nonce_rng) {
    const ScoreEntry* entry = table.find(target);
    if (entry == nullptr || entry->category != Category::Suspect) return std::nullopt;
    if (table.suspect_list().count(target) == 0) return std::nullopt;

    auto it = states_.find(target);
    if (it != states_.end()) {
      if (it->second.outcome == ChallengeOutcome::Pending) return std::nullopt;
      if (it->second.outcome == ChallengeOutcome::ConfirmedMalicious) return std::nullopt;
      states_.erase(it);  // re-suspected after an earlier VerifiedHonest
    }

    ChallengeState st;
    st.target = target;
    st.max_attempts = cfg_.max_attempts;
    st.per_attempt_timeout = cfg_.per_attempt_timeout;
    states_.emplace(target, st);
    return next_attempt(*entry, target, challenger_xy, epoch, epoch_duration, nonce_rng);
  }

  // Valid response inside the timeout window resolves the series as
  // VerifiedHonest and lifts the entry via the honest floor. Mismatched,
  // late, or replayed nonces are ignored.
  ChallengeOutcome handle_response(const ChallengeResponse& response, ScoreTable& table) {
    auto it = states_.find(response.responder);
    if (it == states_.end()) return ChallengeOutcome::Pending;
    ChallengeState& st = it->second;
    if (st.outcome != ChallengeOutcome::Pending) return st.outcome;
    if (!st.nonce_live || response.nonce != st.outstanding_nonce) return st.outcome;
    if (response.epoch - st.last_issue_epoch >= st.per_attempt_timeout) return st.outcome;

    st.nonce_live = false;  // nonce validates at most one response
    st.outcome = ChallengeOutcome::VerifiedHonest;
    table.mark_honest(response.responder, response.epoch, table.average_trust());
    return st.outcome;
  }

  // Targets whose current attempt has timed out by `epoch`.
  std::vector<Pseudonym> due(Epoch epoch) const {
    std::vector<Pseudonym> out;
    for (const auto& [target, st] : states_)
      if (st.outcome == ChallengeOutcome::Pending &&
          epoch - st.last_issue_epoch >= st.per_attempt_timeout)
        out.push_back(target);
    return out;
  }

  // Resolves one due state: either re-issues the next attempt (re-aimed) or,
  // with attempts exhausted, confirms the target malicious.
  struct Resolution {
    ChallengeOutcome outcome = ChallengeOutcome::Pending;
    std::optional<ChallengePacket> retry;
  };

  Resolution resolve_timeout(ScoreTable& table, Pseudonym target, Vec2 challenger_xy, Epoch epoch,
                             double epoch_duration, Rng& nonce_rng) {
    Resolution res;
    auto it = states_.find(target);
    if (it == states_.end() || it->second.outcome != ChallengeOutcome::Pending) return res;
    ChallengeState& st = it->second;
    st.nonce_live = false;
    if (st.attempts_sent < st.max_attempts) {
      if (const ScoreEntry* entry = table.find(target))
        res.retry = next_attempt(*entry, target, challenger_xy, epoch, epoch_duration, nonce_rng);
      return res;
    }
    st.outcome = ChallengeOutcome::ConfirmedMalicious;
    table.mark_malicious(target, epoch);
    res.outcome = st.outcome;
    return res;
  }

 private:
  ChallengePacket next_attempt(const ScoreEntry& entry, Pseudonym target, Vec2 challenger_xy,
                               Epoch epoch, double epoch_duration, Rng& nonce_rng) {
    ChallengeState& st = states_.at(target);
    ChallengePacket p;
    p.challenger = owner_;
    p.target = target;
    p.nonce = nonce_rng.next_u64();
    p.aim_xy = challenge_aim(entry, epoch, epoch_duration);
    p.challenger_xy = challenger_xy;
    p.issued_epoch = epoch;
    st.attempts_sent += 1;
    p.attempt = st.attempts_sent;
    st.outstanding_nonce = p.nonce;
    st.last_issue_epoch = epoch;
    st.nonce_live = true;
    return p;
  }

  Pseudonym owner_ = 0;
  ChallengeConfig cfg_;
  std::map<Pseudonym, ChallengeState> states_;
};

}  // namespace taser
