#include "wbansec/strategy.hpp"

#include <algorithm>
#include <limits>

#include "wbansec/errors.hpp"

namespace wbansec {

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Apap: return "apap";
    case StrategyKind::Ctp: return "ctp";
    case StrategyKind::TreeBased: return "tree";
    case StrategyKind::FloodToSink: return "flood";
    case StrategyKind::MiniAtt: return "miniatt";
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy(const std::string& name) {
  for (StrategyKind k : all_strategies()) {
    if (name == strategy_name(k)) return k;
  }
  return std::nullopt;
}

const std::array<StrategyKind, 5>& all_strategies() {
  static const std::array<StrategyKind, 5> kAll = {
      StrategyKind::Apap, StrategyKind::Ctp, StrategyKind::TreeBased,
      StrategyKind::FloodToSink, StrategyKind::MiniAtt,
  };
  return kAll;
}

StrategyConfig StrategyConfig::defaults(StrategyKind kind) {
  StrategyConfig cfg;
  cfg.kind = kind;
  // Default parent table over the body geometry: torso nodes report straight
  // to the chest, limbs climb inward; the head and the ankle keep a second
  // parent for path diversity.
  cfg.apap_parents[kNavel] = {kChest};
  cfg.apap_parents[kChest] = {};
  cfg.apap_parents[kHead] = {kChest, kUpperArm};
  cfg.apap_parents[kUpperArm] = {kChest};
  cfg.apap_parents[kAnkle] = {kThigh, kNavel};
  cfg.apap_parents[kThigh] = {kNavel};
  cfg.apap_parents[kWrist] = {kUpperArm};
  return cfg;
}

void StrategyConfig::validate() const {
  if (flood_ttl < 1) throw ConfigError("flood ttl must be at least 1");
  if (!(beacon_interval_s > 0.0)) throw ConfigError("beacon interval must be positive");
  if (!(req_retry_timeout_s > 0.0)) throw ConfigError("req retry timeout must be positive");
  if (data_retransmissions < 0) throw ConfigError("negative retransmission budget");
  if (!apap_parents[kSinkId].empty()) throw ConfigError("the sink has no parents");
  for (NodeId n = 0; n < kNodeCount; ++n) {
    if (apap_parents[n].size() > 2) throw ConfigError("at most two parents per node");
    for (NodeId p : apap_parents[n]) {
      if (p >= kNodeCount || p == n) throw ConfigError("bad parent id");
    }
  }
  // Acyclic toward the sink: every node with parents must admit a finite
  // depth where each parent sits strictly closer to the sink.
  std::array<int, kNodeCount> depth{};
  depth.fill(-1);
  depth[kSinkId] = 0;
  for (int round = 0; round < kNodeCount; ++round) {
    for (NodeId n = 0; n < kNodeCount; ++n) {
      if (depth[n] >= 0 || apap_parents[n].empty()) continue;
      int worst = 0;
      bool ready = true;
      for (NodeId p : apap_parents[n]) {
        if (depth[p] < 0) {
          ready = false;
          break;
        }
        worst = std::max(worst, depth[p] + 1);
      }
      if (ready) depth[n] = worst;
    }
  }
  for (NodeId n = 0; n < kNodeCount; ++n) {
    if (!apap_parents[n].empty() && depth[n] < 0) {
      throw ConfigError("parent table has a cycle");
    }
  }
  if (tree_parents) {
    for (NodeId n = 0; n < kNodeCount; ++n) {
      NodeId cur = n;
      for (int hop = 0; hop < kNodeCount && cur != kSinkId; ++hop) cur = (*tree_parents)[cur];
      if (cur != kSinkId && (*tree_parents)[n] != n) {
        throw ConfigError("tree parents do not reach the sink");
      }
    }
  }
}

namespace {

struct Dijkstra {
  std::array<double, kNodeCount> dist;
  std::array<NodeId, kNodeCount> next_toward_sink;
};

// Shortest summed-attenuation paths toward the sink over usable links.
Dijkstra run_dijkstra(const LinkTrace& trace, int frame, const RadioParams& radio,
                      double margin_db) {
  Dijkstra out{};
  out.dist.fill(std::numeric_limits<double>::infinity());
  for (NodeId n = 0; n < kNodeCount; ++n) out.next_toward_sink[n] = n;
  out.dist[kSinkId] = 0.0;
  std::array<bool, kNodeCount> done{};
  for (int round = 0; round < kNodeCount; ++round) {
    NodeId best = kNodeCount;
    for (NodeId n = 0; n < kNodeCount; ++n) {
      if (!done[n] && out.dist[n] < (best == kNodeCount
                                         ? std::numeric_limits<double>::infinity()
                                         : out.dist[best])) {
        best = n;
      }
    }
    if (best == kNodeCount) break;
    done[best] = true;
    for (NodeId n = 0; n < kNodeCount; ++n) {
      if (n == best || done[n]) continue;
      if (!link_audible(radio, trace, frame, n, best, margin_db)) continue;
      // Strict improvement only: on equal cost the earliest-settled relaxer
      // wins, which prefers fewer hops and keeps the tree deterministic.
      const double cand = out.dist[best] + trace.at(frame, n, best).mean_db;
      if (cand < out.dist[n]) {
        out.dist[n] = cand;
        out.next_toward_sink[n] = best;
      }
    }
  }
  return out;
}

}  // namespace

std::array<NodeId, kNodeCount> best_path_tree(const LinkTrace& trace, int frame,
                                              const RadioParams& radio, double margin_db) {
  return run_dijkstra(trace, frame, radio, margin_db).next_toward_sink;
}

std::optional<double> path_cost_to_sink(const LinkTrace& trace, int frame, NodeId node,
                                        const RadioParams& radio, double margin_db) {
  const double d = run_dijkstra(trace, frame, radio, margin_db).dist[node];
  if (!std::isfinite(d)) return std::nullopt;
  return d;
}

std::optional<NodeId> select_min_attenuation(
    const std::vector<std::pair<NodeId, double>>& replies) {
  std::optional<NodeId> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& [id, cost] : replies) {
    if (cost < best_cost || (cost == best_cost && best && id < *best)) {
      best = id;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace wbansec
