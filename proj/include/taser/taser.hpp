#pragma once

// Umbrella header for the trust-aware Sybil detection simulator.

#include "taser/attack_model.hpp"
#include "taser/challenge_protocol.hpp"
#include "taser/config.hpp"
#include "taser/event_log.hpp"
#include "taser/geometry.hpp"
#include "taser/metrics_report.hpp"
#include "taser/mobility.hpp"
#include "taser/params.hpp"
#include "taser/radio_channel.hpp"
#include "taser/rng.hpp"
#include "taser/sim_engine.hpp"
#include "taser/stat_tests.hpp"
#include "taser/sweep.hpp"
#include "taser/trust_engine.hpp"
#include "taser/types.hpp"
