#include "wbansec/radio.hpp"

#include <cmath>

#include "wbansec/errors.hpp"

namespace wbansec {

void RadioParams::validate() const {
  if (!(tx_power_dbm > sensitivity_dbm)) {
    throw ConfigError("tx power must exceed receiver sensitivity");
  }
  if (!(bitrate_bps > 0.0)) throw ConfigError("bitrate must be positive");
  if (header_bytes < 0) throw ConfigError("negative header size");
  if (backoff_slot_us <= 0 || backoff_window <= 0) throw ConfigError("bad backoff settings");
  if (max_retries < 0) throw ConfigError("negative retry count");
  if (queue_capacity < 1) throw ConfigError("queue capacity must be at least 1");
}

double received_power_dbm(const RadioParams& radio, const LinkStat& link,
                          DeterministicRng& rng) {
  const double shadow = link.std_db > 0.0 ? rng.gaussian(0.0, link.std_db) : 0.0;
  return radio.tx_power_dbm - (link.mean_db + shadow);
}

bool step_channel(const RadioParams& radio, const LinkTrace& trace, NodeId src, NodeId dst,
                  std::uint64_t now_us, DeterministicRng& rng) {
  const LinkStat& link = trace.at(trace.frame_at(now_us), src, dst);
  return received_power_dbm(radio, link, rng) >= radio.sensitivity_dbm;
}

bool link_audible(const RadioParams& radio, const LinkTrace& trace, int frame, NodeId src,
                  NodeId dst, double margin_db) {
  return radio.tx_power_dbm - trace.at(frame, src, dst).mean_db >=
         radio.sensitivity_dbm - margin_db;
}

std::uint64_t airtime_us(const RadioParams& radio, std::size_t payload_bytes) {
  const double bits = 8.0 * static_cast<double>(payload_bytes + radio.header_bytes);
  return static_cast<std::uint64_t>(std::ceil(bits * 1e6 / radio.bitrate_bps));
}

}  // namespace wbansec
