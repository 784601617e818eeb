#pragma once

#include <cstdint>
#include <string>

#include "taser/geometry.hpp"

namespace taser {

// Opaque broadcast identity. Unique per identity within a run.
using Pseudonym = std::uint32_t;

using Epoch = std::int64_t;

// Periodic status beacon: pseudonym, reported velocity, timestamp (epoch
// index) and reported GPS position.
struct BsmStatus {
  Pseudonym sender = 0;
  double velocity = 0.0;  // m/s, as claimed by the sender
  Epoch timestamp = 0;
  Vec2 position;  // m, as claimed by the sender
};

enum class Category : std::uint8_t {
  Unknown = 0,
  Honest = 1,     // verified by challenge-response; may be re-suspected after a grace period
  Suspect = 2,    // flagged, challenge pending or never resolved
  Malicious = 3,  // terminal
};

inline const char* to_string(Category c) {
  switch (c) {
    case Category::Unknown: return "unknown";
    case Category::Honest: return "honest";
    case Category::Suspect: return "suspect";
    case Category::Malicious: return "malicious";
  }
  return "?";
}

enum class VehicleRole : std::uint8_t {
  Honest = 0,
  SybilTransmitter = 1,  // emits forged beacons for ghost identities only
};

enum class AttackerPolicy : std::uint8_t {
  Silent = 0,         // never responds to challenges
  Opportunistic = 1,  // echoes a ghost's challenge nonce if the beam reached the transmitter
};

struct SuspectEvent {
  Pseudonym observer = 0;
  Pseudonym subject = 0;
  Epoch epoch = 0;
  bool via_colocation = false;
};

}  // namespace taser
