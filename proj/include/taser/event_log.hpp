#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "taser/types.hpp"

namespace taser {

enum class EventKind : std::uint8_t {
  Bsm = 0,              // delivery of a beacon to an observer
  Trust = 1,            // trust score changed while processing a beacon
  Suspect = 2,          // lambda rule or colocation flagged an identity
  Challenge = 3,        // directed packet issued
  ChallengeRecv = 4,    // physical vehicle inside the beam
  Response = 5,         // nonce echoed back
  VerifiedHonest = 6,   // challenge series resolved honest
  ConfirmedMalicious = 7,  // challenge series exhausted
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Bsm: return "bsm";
    case EventKind::Trust: return "trust";
    case EventKind::Suspect: return "suspect";
    case EventKind::Challenge: return "challenge";
    case EventKind::ChallengeRecv: return "challenge_recv";
    case EventKind::Response: return "response";
    case EventKind::VerifiedHonest: return "verified_honest";
    case EventKind::ConfirmedMalicious: return "confirmed_malicious";
  }
  return "?";
}

// One log record. Payload slots by kind:
//   bsm:                 p0 velocity, p1 x, p2 y, p3 sender timestamp
//   trust:               p0 trust after, p1 change bits, p2 category code
//   suspect:             p0 source (0 lambda, 1 colocation)
//   challenge:           p0 attempt, p1 aim x, p2 aim y, p3 challenger x,
//                        p4 challenger y, nonce
//   challenge_recv:      p0 attempt, p1 receiver x, p2 receiver y
//   response:            p0 forged (0/1), p1 accepted (0/1), nonce
//   verified_honest:     p0 attempt answered
//   confirmed_malicious: p0 attempts sent
struct EventRecord {
  Epoch epoch = 0;
  EventKind kind = EventKind::Bsm;
  std::int64_t observer = -1;
  std::int64_t subject = -1;
  double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
  std::uint64_t nonce = 0;
  bool has_nonce = false;
};

class EventLog {
 public:
  // When false, high-volume bsm/trust rows are skipped (sweep runs that only
  // need metrics); classification and challenge rows are always kept.
  explicit EventLog(bool record_bsm_rows = true) : record_bsm_rows_(record_bsm_rows) {}

  bool recording_bsm_rows() const { return record_bsm_rows_; }
  const std::vector<EventRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  void push(EventRecord r) {
    if (!record_bsm_rows_ && (r.kind == EventKind::Bsm || r.kind == EventKind::Trust)) return;
    records_.push_back(r);
  }

  std::string to_csv() const;

 private:
  bool record_bsm_rows_;
  std::vector<EventRecord> records_;
};

namespace detail {

// All floats in emitted CSVs use 9 significant digits.
inline void append_double(std::string& out, double v) {
  char buf[40];
  int n = std::snprintf(buf, sizeof(buf), "%.9g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

inline void append_i64(std::string& out, std::int64_t v) {
  char buf[24];
  int n = std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
  out.append(buf, static_cast<std::size_t>(n));
}

inline void append_u64(std::string& out, std::uint64_t v) {
  char buf[24];
  int n = std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace detail

inline std::string EventLog::to_csv() const {
  std::string out = "epoch,kind,observer,subject,p0,p1,p2,p3,p4,nonce\n";
  out.reserve(out.size() + records_.size() * 48);
  for (const EventRecord& r : records_) {
    detail::append_i64(out, r.epoch);
    out += ',';
    out += to_string(r.kind);
    out += ',';
    detail::append_i64(out, r.observer);
    out += ',';
    detail::append_i64(out, r.subject);
    out += ',';
    detail::append_double(out, r.p0);
    out += ',';
    detail::append_double(out, r.p1);
    out += ',';
    detail::append_double(out, r.p2);
    out += ',';
    detail::append_double(out, r.p3);
    out += ',';
    detail::append_double(out, r.p4);
    out += ',';
    if (r.has_nonce) detail::append_u64(out, r.nonce);
    out += '\n';
  }
  return out;
}

}  // namespace taser
