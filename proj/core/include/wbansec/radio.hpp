#pragma once

#include <cstdint>

#include "wbansec/rng.hpp"
#include "wbansec/trace.hpp"

namespace wbansec {

struct RadioParams {
  double tx_power_dbm = -60.0;
  double sensitivity_dbm = -100.0;
  // No single bitrate is canonical for on-body radios; the default keeps the
  // heaviest simulated load (all six sources at 10 pkt/s with flooded
  // authentication traffic) below MAC saturation so scheme-relative
  // transmission counts stay comparable.
  double bitrate_bps = 2'000'000.0;
  int header_bytes = 16;              // per-frame MAC/PHY overhead
  int backoff_slot_us = 320;          // contention slot
  int backoff_window = 8;             // initial slot window, doubles per retry
  int max_retries = 4;                // unicast retransmissions after the first try
  int queue_capacity = 64;            // per-node frame/custody queue bound

  void validate() const;  // ConfigError unless tx_power > sensitivity etc.
};

// Shadowed received power for one emission over one directed link.
double received_power_dbm(const RadioParams& radio, const LinkStat& link,
                          DeterministicRng& rng);

// One channel trial: true iff the receiver decodes the frame (no interference
// considered here; collisions are the MAC layer's business).
bool step_channel(const RadioParams& radio, const LinkTrace& trace, NodeId src, NodeId dst,
                  std::uint64_t now_us, DeterministicRng& rng);

// Mean-attenuation reachability (no shadowing draw).  `margin_db` relaxes the
// sensitivity threshold: carrier sensing detects energy below the decoding
// floor, and routing estimates may keep marginal links that shadowing can
// still carry.
bool link_audible(const RadioParams& radio, const LinkTrace& trace, int frame, NodeId src,
                  NodeId dst, double margin_db = 0.0);

// Time a frame of `payload_bytes` plus the MAC header occupies the medium.
std::uint64_t airtime_us(const RadioParams& radio, std::size_t payload_bytes);

}  // namespace wbansec
