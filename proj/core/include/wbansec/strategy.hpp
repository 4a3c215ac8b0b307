#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wbansec/radio.hpp"
#include "wbansec/trace.hpp"

namespace wbansec {

enum class StrategyKind { Apap, Ctp, TreeBased, FloodToSink, MiniAtt };

const char* strategy_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(const std::string& name);
const std::array<StrategyKind, 5>& all_strategies();

struct StrategyConfig {
  StrategyKind kind = StrategyKind::FloodToSink;

  // Up to two pre-set parents per node, acyclic toward the sink.
  std::array<std::vector<NodeId>, kNodeCount> apap_parents;

  int flood_ttl = 7;
  double beacon_interval_s = 1.0;       // gradient refresh (CTP)
  double req_retry_timeout_s = 0.1;     // REQ re-issue when no REP arrives
  int data_retransmissions = 3;         // hop-level re-attempts beyond the first

  // Fixed per-run tree; when unset, computed from the trace's first frame.
  std::optional<std::array<NodeId, kNodeCount>> tree_parents;

  static StrategyConfig defaults(StrategyKind kind);
  void validate() const;  // ConfigError on cyclic parent tables etc.
};

// Minimal-attenuation route table: parent[n] on the cheapest path from n to
// the sink using the frame's mean attenuations; unusable links (mean above
// the link budget) are excluded. parent[sink] = sink; unreachable = self.
std::array<NodeId, kNodeCount> best_path_tree(const LinkTrace& trace, int frame,
                                              const RadioParams& radio,
                                              double margin_db = 0.0);

// Dijkstra cost (summed mean dB) from `node` to the sink on one frame;
// nullopt when unreachable.
std::optional<double> path_cost_to_sink(const LinkTrace& trace, int frame, NodeId node,
                                        const RadioParams& radio, double margin_db = 0.0);

// Replier choice: minimal reported attenuation estimate, ties to the lowest
// node id. Empty input yields nullopt.
std::optional<NodeId> select_min_attenuation(
    const std::vector<std::pair<NodeId, double>>& replies);

}  // namespace wbansec
