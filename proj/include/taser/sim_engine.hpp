#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "taser/attack_model.hpp"
#include "taser/challenge_protocol.hpp"
#include "taser/event_log.hpp"
#include "taser/metrics_report.hpp"
#include "taser/mobility.hpp"
#include "taser/params.hpp"
#include "taser/radio_channel.hpp"
#include "taser/rng.hpp"
#include "taser/trust_engine.hpp"

namespace taser {

// One observing vehicle's protocol state. Honest vehicles only; Sybil
// transmitters emit forged beacons and run no detection.
struct Agent {
  ScoreTable table;
  ChallengeManager challenges;
  std::set<Pseudonym> fresh_suspects;  // flagged this epoch, challenge not yet issued
};

// Deterministic epoch-driven world. A run is strictly single-threaded;
// separate runs share nothing.
class World {
 public:
  explicit World(const ScenarioConfig& config, bool record_bsm_rows = true)
      : config_(config),
        log_(record_bsm_rows),
        noise_rng_(Rng::stream(config.seed, "noise")),
        nonce_rng_(Rng::stream(config.seed, "nonce")) {
    config_.validate_or_throw();
    place_vehicles();
    spawn_ghosts();
  }

  const ScenarioConfig& config() const { return config_; }
  Epoch epoch() const { return epoch_; }
  const std::vector<VehicleState>& vehicles() const { return vehicles_; }
  const std::map<Pseudonym, Agent>& agents() const { return agents_; }
  const EventLog& log() const { return log_; }
  const std::set<Pseudonym>& ghost_ids() const { return ghost_ids_; }
  const std::map<Pseudonym, Pseudonym>& ghost_transmitter() const { return ghost_transmitter_; }
  const std::map<Pseudonym, Epoch>& ghost_exposure() const { return ghost_exposure_; }

  // Identity count conservation: honest broadcasters + ghosts.
  std::size_t identity_count() const { return honest_count_ + ghost_ids_.size(); }

  void step_epoch();
  RunMetrics metrics() const;

 private:
  struct PendingBsm {
    Epoch due = 0;
    Pseudonym radio_vehicle = 0;  // physical emitter (transmitter for ghosts)
    BsmStatus bsm;
  };

  void place_vehicles();
  void spawn_ghosts();
  void deliver_and_process(Epoch e);
  void run_challenge_phase(Epoch e);
  void send_packet(Agent& agent, const ChallengePacket& packet, Epoch e);

  const VehicleState& vehicle(Pseudonym id) const { return vehicles_[vehicle_index_.at(id)]; }

  Vec2 vehicle_xy(const VehicleState& v) const {
    return to_xy(v.arc_position, v.lane, config_.road);
  }

  Vec2 cached_xy(Pseudonym id) const { return xy_cache_[vehicle_index_.at(id)]; }

  ScenarioConfig config_;
  std::vector<VehicleState> vehicles_;  // sorted by id
  std::map<Pseudonym, std::size_t> vehicle_index_;
  std::vector<Vec2> xy_cache_;  // physical positions, rebuilt each epoch
  std::map<Pseudonym, Agent> agents_;
  std::vector<std::pair<Pseudonym, std::size_t>> agent_index_;  // ascending by id
  std::set<Pseudonym> ghost_ids_;
  std::map<Pseudonym, Pseudonym> ghost_transmitter_;
  std::map<Pseudonym, Epoch> ghost_exposure_;
  std::deque<PendingBsm> pending_;
  std::size_t honest_count_ = 0;
  Epoch epoch_ = 0;
  EventLog log_;
  Rng noise_rng_;
  Rng nonce_rng_;
};

inline void World::place_vehicles() {
  const int n = config_.vehicles;
  const int transmitters =
      static_cast<int>(std::llround(config_.sybil_fraction * static_cast<double>(n)));
  honest_count_ = static_cast<std::size_t>(n - transmitters);

  Rng placement = Rng::stream(config_.seed, "placement");
  std::vector<std::vector<double>> lane_arcs(static_cast<std::size_t>(config_.road.lanes));

  vehicles_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    VehicleState v;
    v.id = static_cast<Pseudonym>(i);
    v.lane = i % config_.road.lanes;
    v.true_speed = config_.road.speed_limit;
    v.role = i < n - transmitters ? VehicleRole::Honest : VehicleRole::SybilTransmitter;

    // Uniform arc, re-drawn until the same-lane minimum gap holds (vehicles
    // occupy physical space; feasibility is checked at config validation).
    auto& placed = lane_arcs[static_cast<std::size_t>(v.lane)];
    for (int attempt = 0;; ++attempt) {
      if (attempt > 100000) throw std::runtime_error("vehicle placement did not converge");
      const double arc = placement.uniform(0.0, config_.road.length);
      bool ok = true;
      for (double other : placed) {
        double gap = std::fabs(arc - other);
        gap = std::min(gap, config_.road.length - gap);
        if (gap < config_.road.min_gap) {
          ok = false;
          break;
        }
      }
      if (ok) {
        v.arc_position = arc;
        placed.push_back(arc);
        break;
      }
    }

    vehicle_index_[v.id] = vehicles_.size();
    vehicles_.push_back(v);
    if (v.role == VehicleRole::Honest) {
      Agent a{ScoreTable(v.id), ChallengeManager(v.id, config_.challenge), {}};
      agents_.emplace(v.id, std::move(a));
      agent_index_.emplace_back(v.id, vehicle_index_[v.id]);
    }
  }
}

inline void World::spawn_ghosts() {
  Rng ghost_rng = Rng::stream(config_.seed, "ghost");
  Pseudonym next_id = static_cast<Pseudonym>(config_.vehicles);
  for (VehicleState& v : vehicles_) {
    if (v.role != VehicleRole::SybilTransmitter) continue;
    for (int g = 0; g < config_.attack.ghosts_per_attacker; ++g) {
      GhostTrack track = spawn_sybil(v, next_id, config_.attack, ghost_rng, config_.road);
      ghost_ids_.insert(next_id);
      ghost_transmitter_[next_id] = v.id;
      v.ghosts.push_back(track);
      ++next_id;
    }
  }
}

inline void World::step_epoch() {
  const Epoch e = epoch_;
  const double dt = config_.epoch_duration;

  // (1) kinematics: physical vehicles and fabricated tracks
  xy_cache_.resize(vehicles_.size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    VehicleState& v = vehicles_[i];
    v = advance(v, dt, config_.road);
    for (GhostTrack& g : v.ghosts) advance_ghost(g, dt, config_.road);
    xy_cache_[i] = to_xy(v.arc_position, v.lane, config_.road);
  }

  // (2) beacon emission, canonical sender order (honest ids precede ghost ids)
  for (const VehicleState& v : vehicles_) {
    if (v.role == VehicleRole::Honest) {
      BsmStatus bsm;
      bsm.sender = v.id;
      bsm.velocity = report_velocity(v, config_.noise_sigma, noise_rng_);
      bsm.timestamp = e;
      bsm.position = vehicle_xy(v);
      pending_.push_back({e + config_.channel.delivery_delay, v.id, bsm});
    } else {
      for (const GhostTrack& g : v.ghosts)
        pending_.push_back(
            {e + config_.channel.delivery_delay, v.id, forge_bsm(g, e, config_.road)});
    }
  }

  // (3)-(5) delivery, trust processing, colocation
  deliver_and_process(e);

  // (6) challenge lifecycle
  run_challenge_phase(e);

  epoch_ = e + 1;
}

inline void World::deliver_and_process(Epoch e) {
  // Inboxes in canonical (sender-sorted) order per observer.
  std::map<Pseudonym, std::vector<BsmStatus>> inbox;
  std::set<Pseudonym> ghosts_heard;

  while (!pending_.empty() && pending_.front().due <= e) {
    const PendingBsm msg = pending_.front();
    pending_.pop_front();
    const Vec2 origin = cached_xy(msg.radio_vehicle);
    for (const auto& [id, index] : agent_index_) {
      if (id == msg.bsm.sender || id == msg.radio_vehicle) continue;
      if (within_omni_range(origin, xy_cache_[index], config_.channel)) {
        inbox[id].push_back(msg.bsm);
        if (ghost_ids_.count(msg.bsm.sender)) ghosts_heard.insert(msg.bsm.sender);
      }
    }
  }

  for (Pseudonym g : ghosts_heard) ghost_exposure_[g] += 1;

  for (auto& [id, agent] : agents_) {
    auto it = inbox.find(id);
    if (it == inbox.end()) continue;
    const std::vector<BsmStatus>& msgs = it->second;

    // (4) trust assessment per delivered beacon
    for (const BsmStatus& bsm : msgs) {
      const ProcessOutcome out =
          process_bsm(agent.table, bsm, config_.road.speed_limit, config_.trust, e);
      log_.push({e, EventKind::Bsm, id, bsm.sender, bsm.velocity, bsm.position.x, bsm.position.y,
                 static_cast<double>(bsm.timestamp)});
      if (!out.accepted) continue;
      if (out.trust_changed)
        log_.push({e, EventKind::Trust, id, bsm.sender, out.trust_after,
                   static_cast<double>(out.change_bits),
                   static_cast<double>(agent.table.find(bsm.sender)->category)});
      if (out.suspect) {
        log_.push({e, EventKind::Suspect, id, bsm.sender, 0.0});
        agent.fresh_suspects.insert(bsm.sender);
      }
    }

    // (5) colocated claims bypass the lambda path
    for (Pseudonym p : detect_colocation(msgs, config_.colocation_epsilon)) {
      const ScoreEntry* entry = agent.table.find(p);
      if (entry == nullptr) continue;
      if (entry->category == Category::Malicious || entry->category == Category::Suspect) continue;
      if (honest_within_grace(*entry, e, config_.trust)) continue;
      agent.table.mark_suspect(p);
      log_.push({e, EventKind::Suspect, id, p, 1.0});
      agent.fresh_suspects.insert(p);
    }
  }
}

inline void World::run_challenge_phase(Epoch e) {
  for (auto& [id, agent] : agents_) {
    const Vec2 challenger_xy = cached_xy(id);

    // (6a) timed-out attempts: retry or confirm
    for (Pseudonym target : agent.challenges.due(e)) {
      auto res = agent.challenges.resolve_timeout(agent.table, target, challenger_xy, e,
                                                  config_.epoch_duration, nonce_rng_);
      if (res.retry) send_packet(agent, *res.retry, e);
      if (res.outcome == ChallengeOutcome::ConfirmedMalicious) {
        const ChallengeState* st = agent.challenges.find(target);
        log_.push({e, EventKind::ConfirmedMalicious, id, target,
                   st ? static_cast<double>(st->attempts_sent) : 0.0});
      }
    }

    // (6b) first attempt for identities flagged this epoch
    for (Pseudonym target : agent.fresh_suspects) {
      auto packet = agent.challenges.issue(agent.table, target, challenger_xy, e,
                                           config_.epoch_duration, nonce_rng_);
      if (packet) send_packet(agent, *packet, e);
    }
    agent.fresh_suspects.clear();
  }
}

inline void World::send_packet(Agent& agent, const ChallengePacket& packet, Epoch e) {
  log_.push({e, EventKind::Challenge, packet.challenger, packet.target,
             static_cast<double>(packet.attempt), packet.aim_xy.x, packet.aim_xy.y,
             packet.challenger_xy.x, packet.challenger_xy.y, packet.nonce, true});

  const std::set<Pseudonym> receivers =
      deliver_challenge(packet, vehicles_, config_.channel, config_.road);
  for (Pseudonym r : receivers) {
    const Vec2 rxy = cached_xy(r);
    log_.push({e, EventKind::ChallengeRecv, packet.challenger, r,
               static_cast<double>(packet.attempt), rxy.x, rxy.y,
               static_cast<double>(packet.target)});
  }

  // A reply, if any: the addressed vehicle echoes the nonce; for ghost
  // targets only the transmitter may echo, and only when the beam reached it.
  std::optional<ChallengeResponse> response;
  Pseudonym responder_radio = 0;
  if (ghost_ids_.count(packet.target)) {
    const Pseudonym tx = ghost_transmitter_.at(packet.target);
    const auto echoed = attacker_respond(config_.attack.policy, receivers.count(tx) > 0,
                                         packet.nonce);
    if (echoed) {
      response = ChallengeResponse{packet.target, *echoed, e, true};
      responder_radio = tx;
    }
  } else if (receivers.count(packet.target) > 0) {
    response = ChallengeResponse{packet.target, packet.nonce, e, false};
    responder_radio = packet.target;
  }
  if (!response) return;

  // Response returns omnidirectionally; it must physically reach the challenger.
  const Vec2 responder_xy = cached_xy(responder_radio);
  if (!within_omni_range(responder_xy, packet.challenger_xy, config_.channel)) return;

  const bool accepted =
      agent.challenges.handle_response(*response, agent.table) == ChallengeOutcome::VerifiedHonest;
  log_.push({e, EventKind::Response, packet.challenger, response->responder,
             response->forged ? 1.0 : 0.0, accepted ? 1.0 : 0.0, 0.0, 0.0, 0.0, response->nonce,
             true});
  if (accepted)
    log_.push({e, EventKind::VerifiedHonest, packet.challenger, packet.target,
               static_cast<double>(packet.attempt)});
}

inline RunMetrics World::metrics() const {
  RunMetrics m;
  m.seed = config_.seed;
  m.sybil_fraction = config_.sybil_fraction;
  m.lambda = config_.trust.lambda;
  m.ghost_exposure_epochs = ghost_exposure_;

  for (std::size_t i = 0; i < honest_count_; ++i)
    m.ground_truth[static_cast<Pseudonym>(i)] = GroundTruth::Honest;
  for (Pseudonym g : ghost_ids_) m.ground_truth[g] = GroundTruth::Sybil;

  if (config_.aggregation == AggregationMode::Identity) {
    // Network-level verdict over identities observed by at least one agent:
    // Malicious if any observer confirmed it, else Honest if any verified it,
    // else Unknown (a negative prediction).
    for (const auto& [oid, agent] : agents_) {
      for (const auto& [sid, entry] : agent.table.entries()) {
        if (m.ground_truth.find(sid) == m.ground_truth.end()) continue;
        auto [it, inserted] = m.verdicts.try_emplace(sid, Category::Unknown);
        Category& v = it->second;
        if (entry.category == Category::Malicious) v = Category::Malicious;
        else if (entry.category == Category::Honest && v != Category::Malicious)
          v = Category::Honest;
      }
    }
    m.counts = confusion(m.ground_truth, m.verdicts);
  } else {
    // One verdict per (observer, identity) pair that was actually observed.
    ConfusionCounts c;
    for (const auto& [oid, agent] : agents_) {
      for (const auto& [sid, entry] : agent.table.entries()) {
        auto it = m.ground_truth.find(sid);
        if (it == m.ground_truth.end()) continue;
        const bool predicted = entry.category == Category::Malicious;
        const bool sybil = it->second == GroundTruth::Sybil;
        if (predicted && sybil) ++c.tp;
        else if (predicted && !sybil) ++c.fp;
        else if (!predicted && !sybil) ++c.tn;
        else ++c.fn;
      }
    }
    m.counts = c;
  }

  m.scores = derive_scores(m.counts);
  if (m.counts.tn + m.counts.fp > 0)
    m.fp_rate = static_cast<double>(m.counts.fp) / static_cast<double>(m.counts.fp + m.counts.tn);

  // Detection / resolution times per (observer, identity) pair.
  for (const auto& [oid, agent] : agents_) {
    for (const auto& [sid, entry] : agent.table.entries()) {
      if (!entry.final_classified_at) continue;
      const double dt = static_cast<double>(*entry.final_classified_at - entry.first_seen);
      if (entry.category == Category::Malicious) m.detection.malicious_epochs.push_back(dt);
      else if (entry.category == Category::Honest)
        m.detection.honest_resolution_epochs.push_back(dt);
    }
  }
  m.detection.finalize();
  return m;
}

struct RunResult {
  EventLog log{true};
  RunMetrics metrics;
};

// Executes a full scenario: duration_epochs steps, then metrics. Fully
// deterministic for a given (config, seed).
inline RunResult run(const ScenarioConfig& config, bool record_bsm_rows = true) {
  World world(config, record_bsm_rows);
  for (Epoch e = 0; e < config.duration_epochs; ++e) world.step_epoch();
  return {world.log(), world.metrics()};
}

}  // namespace taser
