#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wbansec/handshake.hpp"
#include "wbansec/radio.hpp"
#include "wbansec/strategy.hpp"
#include "wbansec/trace.hpp"

namespace wbansec {

// Authentication plugged into the convergecast traffic: none (baseline
// strategies as published), the five-phase end-to-end scheme, or the
// hop-by-hop scheme with the shortened three-phase fast path.
enum class AuthMode { None, Banzkp, BanGzkp };

const char* auth_mode_name(AuthMode mode);
std::optional<AuthMode> parse_auth_mode(const std::string& name);
const std::array<AuthMode, 3>& all_auth_modes();

enum class DropReason {
  QueueOverflow,   // a bounded node queue refused the packet
  TtlExpired,      // forwarding budget exhausted
  NoRoute,         // no usable next hop / no replier
  RadioLoss,       // every copy lost to shadowing or collisions
  HopAuthFailed,   // hop-by-hop handshake attempts exhausted
  AuthTimeout,     // end-to-end session expired at the source
  Unfinished,      // still in flight when the run ended
};

const char* drop_reason_name(DropReason reason);

struct RunMetrics {
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_received_at_sink = 0;
  double sum_end_to_end_delay_ms = 0.0;
  std::uint64_t total_transmissions = 0;  // every MAC frame emission

  // Partition of total_transmissions by frame class.
  std::uint64_t auth_frames = 0;
  std::uint64_t data_frames = 0;
  std::uint64_t control_frames = 0;  // beacons, route requests/replies

  std::array<std::uint64_t, 8> auth_kind_counts{};  // indexed by MsgKind value
  std::array<std::uint64_t, kNodeCount> transmissions_by_node{};
  std::array<std::uint64_t, kNodeCount> generated_by_source{};
  std::array<std::uint64_t, kNodeCount> delivered_by_source{};
  std::array<double, kNodeCount> delay_sum_by_source_ms{};

  std::map<DropReason, std::uint64_t> drops;
  double duration_s = 0.0;

  double ratio() const;
  double avg_delay_ms() const;
  std::uint64_t dropped_total() const;
};

struct SimConfig {
  AuthMode scheme = AuthMode::None;
  StrategyKind strategy = StrategyKind::FloodToSink;
  Posture posture = Posture::Walk;
  double rate_pps = 1.0;
  double duration_s = 30.0;
  std::uint64_t seed = 1;

  RadioParams radio{};
  std::optional<StrategyConfig> strategy_cfg;  // StrategyConfig::defaults(strategy) when unset

  std::vector<NodeId> sources = {kNavel, kHead, kUpperArm, kAnkle, kThigh, kWrist};
  std::size_t payload_bytes = 32;

  // Sources emit periodically; staggered phases spread them across the period.
  bool stagger_sources = true;
  // Mark every pair mutually authenticated so the hop-by-hop scheme starts on
  // its three-message fast path.
  bool prewarm_auth = false;

  double warmup_s = 1.0;  // beacons settle before generation starts
  double drain_s = 2.0;   // traffic in flight may finish after generation ends

  int hop_auth_attempts = 4;                   // handshake attempts per hop
  std::uint64_t hop_auth_timeout_us = 80'000;  // reply timeout per attempt
  std::uint64_t session_timeout_us = 500'000;  // end-to-end session lifetime
  int max_hops = 7;                            // forwarding budget for any packet
};

RunMetrics run_simulation(const SimConfig& cfg, const LinkTrace& trace);
// Convenience: runs on the built-in synthetic trace for cfg.posture.
RunMetrics run_simulation(const SimConfig& cfg);

// Stable per-run CSV schema.
std::string metrics_csv_header();
std::string metrics_csv_row(const SimConfig& cfg, const RunMetrics& metrics);

}  // namespace wbansec
