#include "wbansec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <queue>
#include <set>

#include "wbansec/errors.hpp"
#include "wbansec/rng.hpp"

namespace wbansec {

namespace {

constexpr NodeId kNoNode = 0xfe;
constexpr std::size_t kPacketHeaderBytes = 19;
constexpr std::uint64_t kRepWindowUs = 20'000;       // REQ answer collection window
constexpr std::uint64_t kRetryPauseUs = 1'000;       // pause between hop attempts
constexpr std::uint64_t kHistoryGraceUs = 50'000;    // transmission history retention
constexpr double kRouteMarginDb = 6.0;               // routing may use marginal links
constexpr double kCarrierSenseMarginDb = 10.0;       // energy detect beats decoding

std::uint8_t bit(NodeId n) { return static_cast<std::uint8_t>(1u << n); }

// Custody metadata rides inside the opaque payload so it survives per-hop
// re-encryption: id, origin, hop count, visited mask and the generation time.
struct PacketHeader {
  std::uint64_t packet_id = 0;
  NodeId origin = 0;
  std::uint8_t hops = 0;
  std::uint8_t visited = 0;
  std::uint64_t gen_us = 0;
};

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t read_u64(const Bytes& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[at + i];
  return v;
}

Bytes make_payload(const PacketHeader& hdr, std::size_t payload_bytes) {
  Bytes out;
  put_u64(out, hdr.packet_id);
  out.push_back(hdr.origin);
  out.push_back(hdr.hops);
  out.push_back(hdr.visited);
  put_u64(out, hdr.gen_us);
  if (out.size() < payload_bytes) out.resize(payload_bytes, 0);
  return out;
}

std::optional<PacketHeader> parse_payload(const Bytes& data) {
  if (data.size() < kPacketHeaderBytes) return std::nullopt;
  PacketHeader hdr;
  hdr.packet_id = read_u64(data, 0);
  hdr.origin = data[8];
  hdr.hops = data[9];
  hdr.visited = data[10];
  hdr.gen_us = read_u64(data, 11);
  return hdr;
}

bool data_bearing(MsgKind kind) {
  return kind == MsgKind::Auth5Data || kind == MsgKind::Auth3OptData;
}

enum class FrameClass { Data, Auth, Beacon, Req, Rep };
enum class Direction { Up, Down };

struct Frame {
  FrameClass cls = FrameClass::Data;
  NodeId src = 0;
  NodeId dst = kBroadcastId;
  std::size_t bytes = 0;
  Direction dir = Direction::Up;
  std::uint64_t packet_id = 0;
  bool holds_ref = false;  // fire-and-forget carrier of the packet's payload

  ProtocolMessage auth;  // cls Auth
  PacketHeader hdr{};    // Data / Auth(first contact) / Req custody metadata
  Bytes payload;         // cls Data
  int ttl = 0;
  int gradient = 0;         // Beacon
  double rep_cost = 0.0;    // Rep
  std::uint64_t req_seq = 0;  // Req / Rep matching
  std::uint64_t xchg = 0;     // hop-handshake attempt tag; replies echo it
};

struct Tracker {
  int refs = 0;
  bool delivered = false;
  DropReason last_cause = DropReason::RadioLoss;
  NodeId origin = 0;
  std::uint64_t gen_us = 0;
  bool dropped = false;
};

// One queued custody item: a packet this node must move one hop closer to the
// sink (or, transparently, an end-to-end authentication frame that the
// minimal-attenuation strategy can only forward after a REQ/REP round).
struct CustodyItem {
  PacketHeader hdr;
  int attempts_left = 1;
  std::optional<Frame> relay_frame;  // transparent forward (no re-authentication)
};

struct Transmission {
  std::uint64_t id = 0;
  Frame frame;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::array<std::optional<bool>, kNodeCount> channel_memo;
};

struct MacEntry {
  Frame frame;
  int retries = 0;
  int window = 8;
  std::function<void(bool)> done;
};

class Simulation {
 public:
  Simulation(const SimConfig& cfg, const LinkTrace& trace)
      : cfg_(cfg),
        trace_(trace),
        strat_(cfg.strategy_cfg ? *cfg.strategy_cfg : StrategyConfig::defaults(cfg.strategy)),
        channel_rng_(derive_seed(cfg.seed, 0xC4A7)),
        mac_rng_(derive_seed(cfg.seed, 0xBAC0FF)) {
    cfg_.radio.validate();
    strat_.kind = cfg.strategy;
    strat_.validate();
    trace_.validate();
    if (cfg_.rate_pps < 0.0 || cfg_.duration_s < 0.0) throw ConfigError("negative rate or duration");
    for (NodeId s : cfg_.sources) {
      if (s >= kNodeCount || s == kSinkId) throw ConfigError("bad source id");
    }
    payload_bytes_ = std::max(cfg_.payload_bytes, kPacketHeaderBytes);
    horizon_us_ = static_cast<std::uint64_t>((cfg_.warmup_s + cfg_.duration_s + cfg_.drain_s) * 1e6);

    if (cfg_.strategy == StrategyKind::TreeBased && !strat_.tree_parents) {
      strat_.tree_parents = best_path_tree(trace_, 0, cfg_.radio, kRouteMarginDb);
    }

    if (cfg_.scheme != AuthMode::None) {
      Bytes key_bytes(16);
      for (std::size_t i = 0; i < key_bytes.size(); ++i) {
        key_bytes[i] = static_cast<std::uint8_t>((i * 29 + 11) % 256);
      }
      const GroupParams& params = GroupParams::compact();
      Bytes v_bytes(static_cast<std::size_t>(params.secret_bytes()));
      for (std::size_t i = 0; i < v_bytes.size(); ++i) {
        v_bytes[i] = static_cast<std::uint8_t>((i * 31 + 7) % 251);
      }
      HandshakeConfig hcfg;
      hcfg.params = params;
      hcfg.timeout_us = cfg_.session_timeout_us;
      const Scheme scheme = cfg_.scheme == AuthMode::Banzkp ? Scheme::Banzkp : Scheme::BanGzkp;
      std::vector<NodeId> roster;
      for (NodeId n = 0; n < kNodeCount; ++n) roster.push_back(n);
      for (NodeId n = 0; n < kNodeCount; ++n) {
        NodeIdentity ident;
        ident.id = n;
        ident.initial_key = key_from_bytes(key_bytes);
        ident.shared_secret = make_element(mpz_from_bytes(v_bytes), params);
        nodes_[n].peer = std::make_unique<AuthPeer>(ident, scheme, hcfg,
                                                    derive_seed(cfg_.seed, 0xA117, n));
        nodes_[n].peer->set_roster(roster);
      }
      if (cfg_.prewarm_auth) {
        for (NodeId n = 0; n < kNodeCount; ++n) {
          for (NodeId m = 0; m < kNodeCount; ++m) {
            if (n != m) nodes_[n].peer->mark_known(m);
          }
        }
      }
    }
  }

  RunMetrics run() {
    metrics_.duration_s = cfg_.duration_s;
    if (cfg_.strategy == StrategyKind::Ctp) schedule_beacons();
    schedule_generation();
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      if (ev.t > horizon_us_) break;
      queue_.pop();
      now_ = ev.t;
      (*ev.fn)();
    }
    finalize();
    return metrics_;
  }

 private:
  // ---- events ----------------------------------------------------------
  struct Event {
    std::uint64_t t;
    std::uint64_t seq;
    std::shared_ptr<std::function<void()>> fn;
    bool operator>(const Event& o) const { return std::tie(t, seq) > std::tie(o.t, o.seq); }
  };

  void at(std::uint64_t t, std::function<void()> fn) {
    queue_.push(Event{t, ++event_seq_, std::make_shared<std::function<void()>>(std::move(fn))});
  }
  void after(std::uint64_t dt, std::function<void()> fn) { at(now_ + dt, std::move(fn)); }

  // ---- per-node state ---------------------------------------------------
  struct NodeState {
    // MAC
    std::deque<MacEntry> mac_queue;
    bool mac_busy = false;
    // scheme
    std::unique_ptr<AuthPeer> peer;
    // custody
    std::deque<CustodyItem> custody;
    bool custody_busy = false;
    std::uint64_t attempt_token = 0;
    std::uint64_t attempt_xchg = 0;
    std::vector<NodeId> attempt_targets;
    std::map<NodeId, std::uint64_t> resp_xchg;  // initiator -> exchange being served
    // End-to-end send in flight: at most one live session per source-sink
    // pair, parked off the queue so relay holds keep flowing.
    std::optional<CustodyItem> inflight;
    std::uint64_t inflight_token = 0;
    // relay bookkeeping
    std::set<std::pair<std::uint64_t, int>> seen;            // (packet_id, kind/dir key)
    std::map<std::uint64_t, NodeId> breadcrumb;              // packet_id -> reverse hop
    // CTP
    std::map<NodeId, std::pair<int, std::uint64_t>> heard;   // neighbor -> (gradient, when)
    // MiniAtt
    std::uint64_t req_seq = 0;
    std::vector<std::pair<NodeId, double>> reps;
    bool collecting_reps = false;
  };

  // ---- helpers ----------------------------------------------------------
  int cur_frame() const { return trace_.frame_at(now_); }

  // ---- packet accounting -------------------------------------------------
  Tracker& tracker(std::uint64_t id) { return trackers_[id]; }

  void ref_inc(std::uint64_t id) { tracker(id).refs++; }

  void note_cause(std::uint64_t id, DropReason cause) {
    auto it = trackers_.find(id);
    if (it != trackers_.end() && !it->second.delivered && !it->second.dropped) {
      it->second.last_cause = cause;
    }
  }

  void ref_dec(std::uint64_t id, std::optional<DropReason> cause) {
    auto it = trackers_.find(id);
    if (it == trackers_.end()) return;
    Tracker& t = it->second;
    if (cause && !t.delivered && !t.dropped) t.last_cause = *cause;
    if (t.refs > 0) t.refs--;
    if (t.refs == 0 && !t.delivered && !t.dropped) {
      t.dropped = true;
      metrics_.drops[t.last_cause]++;
    }
  }

  void deliver(const PacketHeader& hdr) {
    Tracker& t = tracker(hdr.packet_id);
    if (t.delivered || t.dropped) return;  // the sink counts each id once
    t.delivered = true;
    metrics_.packets_received_at_sink++;
    const double delay_ms = static_cast<double>(now_ - t.gen_us) / 1000.0;
    metrics_.sum_end_to_end_delay_ms += delay_ms;
    if (t.origin < kNodeCount) {
      metrics_.delivered_by_source[t.origin]++;
      metrics_.delay_sum_by_source_ms[t.origin] += delay_ms;
    }
  }

  // ---- medium ------------------------------------------------------------
  bool sense_busy(NodeId n) const {
    for (const auto& tx : air_) {
      if (tx.end <= now_ || tx.frame.src == n) continue;
      if (link_audible(cfg_.radio, trace_, cur_frame(), tx.frame.src, n,
                       kCarrierSenseMarginDb)) {
        return true;
      }
    }
    return false;
  }

  std::uint64_t busy_end(NodeId n) const {
    std::uint64_t end = now_;
    for (const auto& tx : air_) {
      if (tx.end <= now_ || tx.frame.src == n) continue;
      if (link_audible(cfg_.radio, trace_, cur_frame(), tx.frame.src, n,
                       kCarrierSenseMarginDb)) {
        end = std::max(end, tx.end);
      }
    }
    return end;
  }

  bool channel_sample(Transmission& tx, NodeId rx) {
    if (!tx.channel_memo[rx]) {
      const int frame = trace_.frame_at(tx.start);
      const LinkStat& ls = trace_.at(frame, tx.frame.src, rx);
      tx.channel_memo[rx] =
          received_power_dbm(cfg_.radio, ls, channel_rng_) >= cfg_.radio.sensitivity_dbm;
    }
    return *tx.channel_memo[rx];
  }

  bool receive_ok(Transmission& tx, NodeId rx) {
    if (rx == tx.frame.src) return false;
    // Half-duplex: a node transmitting during the frame cannot receive it, and
    // any other decodable overlapping emission collides at this receiver.
    for (auto& other : air_) {
      if (other.id == tx.id) continue;
      if (other.start >= tx.end || other.end <= tx.start) continue;
      if (other.frame.src == rx) return false;
      if (channel_sample(other, rx)) return false;
    }
    return channel_sample(tx, rx);
  }

  // ---- MAC ---------------------------------------------------------------
  void count_emission(const Frame& f) {
    metrics_.total_transmissions++;
    metrics_.transmissions_by_node[f.src]++;
    switch (f.cls) {
      case FrameClass::Data: metrics_.data_frames++; break;
      case FrameClass::Auth:
        metrics_.auth_frames++;
        metrics_.auth_kind_counts[static_cast<int>(f.auth.kind)]++;
        break;
      default: metrics_.control_frames++; break;
    }
  }

  void enqueue_frame(NodeId n, Frame f, std::function<void(bool)> done = {}) {
    NodeState& node = nodes_[n];
    if (node.mac_queue.size() >= static_cast<std::size_t>(cfg_.radio.queue_capacity)) {
      if (f.packet_id != 0) note_cause(f.packet_id, DropReason::QueueOverflow);
      if (f.holds_ref) ref_dec(f.packet_id, DropReason::QueueOverflow);
      if (done) after(0, [done] { done(false); });
      return;
    }
    MacEntry entry;
    entry.frame = std::move(f);
    entry.window = cfg_.radio.backoff_window;
    entry.done = std::move(done);
    node.mac_queue.push_back(std::move(entry));
    if (!node.mac_busy) {
      node.mac_busy = true;
      schedule_attempt(n);
    }
  }

  void schedule_attempt(NodeId n) {
    NodeState& node = nodes_[n];
    const MacEntry& entry = node.mac_queue.front();
    std::uint64_t start = sense_busy(n) ? busy_end(n) : now_;
    start += static_cast<std::uint64_t>(cfg_.radio.backoff_slot_us) *
             mac_rng_.below(static_cast<std::uint64_t>(entry.window));
    at(start, [this, n] { attempt_tx(n); });
  }

  void attempt_tx(NodeId n) {
    NodeState& node = nodes_[n];
    if (node.mac_queue.empty()) return;
    if (sense_busy(n)) {
      schedule_attempt(n);
      return;
    }
    const MacEntry& entry = node.mac_queue.front();
    Transmission tx;
    tx.id = ++tx_seq_;
    tx.frame = entry.frame;
    tx.start = now_;
    tx.end = now_ + airtime_us(cfg_.radio, entry.frame.bytes);
    count_emission(entry.frame);
    air_.push_back(std::move(tx));
    const std::uint64_t tid = tx_seq_;
    at(air_.back().end, [this, n, tid] { tx_end(n, tid); });
  }

  void tx_end(NodeId n, std::uint64_t tid) {
    auto it = std::find_if(air_.begin(), air_.end(),
                           [tid](const Transmission& t) { return t.id == tid; });
    if (it == air_.end()) return;
    Transmission& tx = *it;
    const Frame frame = tx.frame;

    bool unicast_ok = false;
    bool delivered_any = false;
    if (frame.dst == kBroadcastId) {
      for (NodeId r = 0; r < kNodeCount; ++r) {
        if (r != frame.src && receive_ok(tx, r)) {
          delivered_any = true;
          on_frame(r, frame);
        }
      }
    } else {
      unicast_ok = receive_ok(tx, frame.dst);
      delivered_any = unicast_ok;
      if (unicast_ok) on_frame(frame.dst, frame);
    }

    NodeState& node = nodes_[n];
    MacEntry& entry = node.mac_queue.front();
    bool resolved = true;
    bool success = true;
    if (frame.dst != kBroadcastId && !unicast_ok) {
      if (entry.retries < cfg_.radio.max_retries) {
        entry.retries++;
        entry.window = std::min(entry.window * 2, 256);
        resolved = false;
      } else {
        success = false;
      }
    }

    if (resolved) {
      if (frame.holds_ref) {
        ref_dec(frame.packet_id,
                delivered_any ? std::optional<DropReason>{} : DropReason::RadioLoss);
      }
      auto done = std::move(entry.done);
      node.mac_queue.pop_front();
      if (node.mac_queue.empty()) {
        node.mac_busy = false;
      } else {
        schedule_attempt(n);
      }
      if (done) done(success);
    } else {
      schedule_attempt(n);
    }

    prune_air();
  }

  void prune_air() {
    std::erase_if(air_, [this](const Transmission& t) {
      return t.end + kHistoryGraceUs < now_;
    });
  }

  // ---- strategy plumbing ---------------------------------------------------
  struct Route {
    enum class Kind { Unicast, Multi, Broadcast, Negotiate, None } kind = Kind::None;
    std::vector<NodeId> targets;
  };

  Route route_upstream_at(NodeId n, const PacketHeader& hdr) {
    Route r;
    switch (strat_.kind) {
      case StrategyKind::Apap: {
        for (NodeId p : strat_.apap_parents[n]) {
          if (!(hdr.visited & bit(p))) r.targets.push_back(p);
        }
        if (r.targets.empty()) return r;
        r.kind = r.targets.size() > 1 ? Route::Kind::Multi : Route::Kind::Unicast;
        return r;
      }
      case StrategyKind::Ctp: {
        const NodeId p = ctp_parent(n);
        if (p == kNoNode || (hdr.visited & bit(p))) return r;
        r.kind = Route::Kind::Unicast;
        r.targets = {p};
        return r;
      }
      case StrategyKind::TreeBased: {
        const NodeId p = (*strat_.tree_parents)[n];
        if (p == n || (hdr.visited & bit(p))) return r;
        r.kind = Route::Kind::Unicast;
        r.targets = {p};
        return r;
      }
      case StrategyKind::FloodToSink:
        r.kind = Route::Kind::Broadcast;
        return r;
      case StrategyKind::MiniAtt:
        r.kind = Route::Kind::Negotiate;
        return r;
    }
    return r;
  }

  NodeId ctp_parent(NodeId n) {
    if (n == kSinkId) return kNoNode;
    NodeState& node = nodes_[n];
    const std::uint64_t fresh_us =
        static_cast<std::uint64_t>(3.0 * strat_.beacon_interval_s * 1e6);
    NodeId best = kNoNode;
    int best_gradient = std::numeric_limits<int>::max();
    double best_mean = std::numeric_limits<double>::infinity();
    for (const auto& [who, info] : node.heard) {
      const auto& [gradient, when] = info;
      if (now_ - when > fresh_us || gradient >= kNodeCount) continue;
      const double mean = trace_.at(cur_frame(), n, who).mean_db;
      if (gradient < best_gradient || (gradient == best_gradient && mean < best_mean) ||
          (gradient == best_gradient && mean == best_mean && who < best)) {
        best = who;
        best_gradient = gradient;
        best_mean = mean;
      }
    }
    return best;
  }

  int ctp_gradient(NodeId n) {
    if (n == kSinkId) return 0;
    const NodeId p = ctp_parent(n);
    if (p == kNoNode) return kNodeCount + 1;
    const auto& info = nodes_[n].heard[p];
    return info.first + 1;
  }

  void schedule_beacons() {
    for (NodeId n = 0; n < kNodeCount; ++n) {
      const std::uint64_t phase = 50'000 + static_cast<std::uint64_t>(n) * 10'000;
      schedule_beacon(n, phase);
    }
  }

  void schedule_beacon(NodeId n, std::uint64_t when) {
    at(when, [this, n] {
      Frame f;
      f.cls = FrameClass::Beacon;
      f.src = n;
      f.dst = kBroadcastId;
      f.bytes = 4;
      f.gradient = ctp_gradient(n);
      enqueue_frame(n, std::move(f));
      schedule_beacon(n, now_ + static_cast<std::uint64_t>(strat_.beacon_interval_s * 1e6));
    });
  }

  // ---- custody / authentication machinery ----------------------------------
  void enqueue_custody(NodeId n, CustodyItem item) {
    NodeState& node = nodes_[n];
    if (node.custody.size() >= static_cast<std::size_t>(cfg_.radio.queue_capacity)) {
      if (!item.relay_frame) ref_inc(item.hdr.packet_id);
      custody_discard(item, DropReason::QueueOverflow);
      return;
    }
    if (!item.relay_frame) ref_inc(item.hdr.packet_id);
    node.custody.push_back(std::move(item));
    poke_custody(n);
  }

  // Releases whatever reference a custody item guards (its own for packet
  // custody, the carried frame's for a transparent relay hold).
  void custody_discard(const CustodyItem& item, DropReason reason) {
    if (item.relay_frame) {
      if (item.relay_frame->holds_ref) {
        ref_dec(item.relay_frame->packet_id, reason);
      } else {
        note_cause(item.relay_frame->packet_id, reason);
      }
    } else {
      ref_dec(item.hdr.packet_id, reason);
    }
  }

  void poke_custody(NodeId n) {
    if (nodes_[n].custody_busy || nodes_[n].custody.empty()) return;
    nodes_[n].custody_busy = true;
    after(0, [this, n] { service_custody(n); });
  }

  void service_custody(NodeId n) {
    NodeState& node = nodes_[n];
    // An end-to-end send must wait for the previous one to resolve (one live
    // session per pair); serve queued relay holds past it meanwhile.
    std::size_t pick = node.custody.size();
    for (std::size_t i = 0; i < node.custody.size(); ++i) {
      const bool parked = cfg_.scheme == AuthMode::Banzkp &&
                          !node.custody[i].relay_frame && node.inflight.has_value();
      if (!parked) {
        pick = i;
        break;
      }
    }
    if (pick == node.custody.size()) {
      node.custody_busy = false;
      return;
    }
    if (pick != 0) {
      std::rotate(node.custody.begin(), node.custody.begin() + pick,
                  node.custody.begin() + pick + 1);
    }
    CustodyItem& item = node.custody.front();
    const PacketHeader& hdr = item.hdr;

    if (!item.relay_frame && hdr.hops >= cfg_.max_hops) {
      return custody_drop(n, DropReason::TtlExpired);
    }

    if (cfg_.scheme == AuthMode::Banzkp && !item.relay_frame) {
      return banzkp_initiate(n);
    }

    const PacketHeader route_hdr = item.relay_frame ? PacketHeader{item.relay_frame->packet_id,
                                                                   hdr.origin, 0, bit(n), 0}
                                                    : hdr;
    Route route = route_upstream_at(n, route_hdr);
    switch (route.kind) {
      case Route::Kind::None:
        return custody_drop(n, DropReason::NoRoute);
      case Route::Kind::Negotiate:
        return start_req_round(n);
      case Route::Kind::Broadcast:
      case Route::Kind::Unicast:
      case Route::Kind::Multi:
        return dispatch_custody(n, route);
    }
  }

  void dispatch_custody(NodeId n, const Route& route) {
    NodeState& node = nodes_[n];
    CustodyItem& item = node.custody.front();

    if (item.relay_frame) {
      // Transparent forward of an end-to-end frame after negotiation/parenting.
      Frame f = *item.relay_frame;
      f.src = n;
      f.dst = route.targets.empty() ? kBroadcastId : route.targets.front();
      const std::uint64_t token = ++node.attempt_token;
      enqueue_frame(n, std::move(f), [this, n, token](bool) {
        // Single try: transparent relays never re-authenticate or retry.
        if (nodes_[n].attempt_token == token) custody_complete(n);
      });
      return;
    }

    if (cfg_.scheme == AuthMode::BanGzkp) return gzkp_initiate(n, route);
    return baseline_transfer(n, route);
  }

  // Baseline (no authentication) one-hop custody transfer.
  void baseline_transfer(NodeId n, const Route& route) {
    NodeState& node = nodes_[n];
    CustodyItem& item = node.custody.front();

    if (route.kind == Route::Kind::Broadcast) {
      // Flooding has no custody chain: emit once and let copies fend off.
      PacketHeader hdr = item.hdr;
      Frame f;
      f.cls = FrameClass::Data;
      f.src = n;
      f.dst = kBroadcastId;
      f.dir = Direction::Up;
      f.packet_id = hdr.packet_id;
      f.hdr = hdr;
      f.payload = make_payload(hdr, payload_bytes_);
      f.bytes = f.payload.size();
      f.ttl = strat_.flood_ttl;
      f.holds_ref = true;
      ref_inc(hdr.packet_id);
      nodes_[n].seen.insert({hdr.packet_id, seen_key(FrameClass::Data, 0, Direction::Up)});
      enqueue_frame(n, std::move(f));
      return custody_complete(n);
    }

    PacketHeader next = item.hdr;
    next.hops++;
    next.visited |= bit(n);
    const std::uint64_t token = ++node.attempt_token;
    auto outstanding = std::make_shared<int>(static_cast<int>(route.targets.size()));
    auto any_ok = std::make_shared<bool>(false);
    for (NodeId target : route.targets) {
      Frame f;
      f.cls = FrameClass::Data;
      f.src = n;
      f.dst = target;
      f.dir = Direction::Up;
      f.packet_id = next.packet_id;
      f.hdr = next;
      f.payload = make_payload(next, payload_bytes_);
      f.bytes = f.payload.size();
      enqueue_frame(n, std::move(f), [this, n, token, outstanding, any_ok](bool ok) {
        if (ok) *any_ok = true;
        if (--*outstanding > 0 || nodes_[n].attempt_token != token) return;
        if (*any_ok) {
          custody_complete(n);
        } else {
          custody_attempt_failed(n, DropReason::RadioLoss);
        }
      });
    }
  }

  // End-to-end scheme: only sources run sessions; relays stay transparent.
  // The packet parks in the in-flight slot until the session completes or its
  // watchdog expires; the scheme never retries a timed-out transfer.
  void banzkp_initiate(NodeId n) {
    NodeState& node = nodes_[n];
    node.inflight = std::move(node.custody.front());
    node.custody.pop_front();
    const std::uint64_t token = ++node.inflight_token;
    const std::uint64_t packet = node.inflight->hdr.packet_id;

    ProtocolMessage msg =
        node.peer->initiate(kSinkId, make_payload(node.inflight->hdr, payload_bytes_), now_);
    send_endpoint_message(n, msg, packet);

    at(now_ + cfg_.session_timeout_us + 1'000, [this, n, token] {
      NodeState& me = nodes_[n];
      if (!me.inflight || me.inflight_token != token) return;  // already resolved
      me.peer->expire_sessions(now_);
      resolve_inflight(n, DropReason::AuthTimeout);
    });

    node.custody_busy = false;
    poke_custody(n);
  }

  void resolve_inflight(NodeId n, std::optional<DropReason> cause) {
    NodeState& node = nodes_[n];
    node.inflight_token++;
    ref_dec(node.inflight->hdr.packet_id, cause);
    node.inflight.reset();
    poke_custody(n);
  }

  // Hop-by-hop scheme: authenticate with the chosen next hop, then hand over.
  void gzkp_initiate(NodeId n, const Route& route) {
    NodeState& node = nodes_[n];
    CustodyItem& item = node.custody.front();
    PacketHeader next = item.hdr;
    next.hops++;
    next.visited |= bit(n);
    Bytes payload = make_payload(next, payload_bytes_);
    const std::uint64_t token = ++node.attempt_token;
    node.attempt_xchg = ++xchg_seq_;
    node.attempt_targets = route.targets;

    if (route.kind == Route::Kind::Unicast) {
      ProtocolMessage msg = node.peer->initiate(route.targets.front(), std::move(payload), now_);
      Frame f = auth_frame(n, route.targets.front(), msg, next);
      enqueue_frame(n, std::move(f), [this, n, token](bool ok) {
        if (!ok && nodes_[n].attempt_token == token) {
          custody_attempt_failed(n, DropReason::HopAuthFailed);
        }
      });
    } else if (route.kind == Route::Kind::Multi) {
      ProtocolMessage msg = node.peer->initiate_any(std::move(payload), now_);
      auto outstanding = std::make_shared<int>(static_cast<int>(route.targets.size()));
      auto any_ok = std::make_shared<bool>(false);
      for (NodeId target : route.targets) {
        Frame f = auth_frame(n, target, msg, next);
        enqueue_frame(n, std::move(f), [this, n, token, outstanding, any_ok](bool ok) {
          if (ok) *any_ok = true;
          if (--*outstanding > 0) return;
          if (!*any_ok && nodes_[n].attempt_token == token) {
            custody_attempt_failed(n, DropReason::HopAuthFailed);
          }
        });
      }
    } else {  // Broadcast solicitation (flooding strategy): one emission.
      ProtocolMessage msg = node.peer->initiate_any(std::move(payload), now_);
      Frame f = auth_frame(n, kBroadcastId, msg, next);
      enqueue_frame(n, std::move(f));
    }

    at(now_ + cfg_.hop_auth_timeout_us, [this, n, token] {
      if (nodes_[n].attempt_token == token) {
        custody_attempt_failed(n, DropReason::HopAuthFailed);
      }
    });
  }

  Frame auth_frame(NodeId src, NodeId dst, const ProtocolMessage& msg, const PacketHeader& hdr) {
    Frame f;
    f.cls = FrameClass::Auth;
    f.src = src;
    f.dst = dst;
    f.auth = msg;
    f.bytes = msg.encode().size();
    f.packet_id = hdr.packet_id;
    f.hdr = hdr;
    f.dir = Direction::Up;
    f.ttl = strat_.flood_ttl;
    f.xchg = nodes_[src].attempt_xchg;
    return f;
  }

  void custody_complete(NodeId n) {
    NodeState& node = nodes_[n];
    node.attempt_token++;
    node.collecting_reps = false;
    const CustodyItem item = std::move(node.custody.front());
    node.custody.pop_front();
    if (!item.relay_frame) ref_dec(item.hdr.packet_id, std::nullopt);
    node.custody_busy = false;
    poke_custody(n);
  }

  void custody_drop(NodeId n, DropReason reason) {
    NodeState& node = nodes_[n];
    node.attempt_token++;
    node.collecting_reps = false;
    for (NodeId t : node.attempt_targets) {
      if (node.peer) node.peer->abort_initiation(t);
    }
    node.attempt_targets.clear();
    const CustodyItem item = std::move(node.custody.front());
    node.custody.pop_front();
    custody_discard(item, reason);
    node.custody_busy = false;
    poke_custody(n);
  }

  void custody_attempt_failed(NodeId n, DropReason reason) {
    NodeState& node = nodes_[n];
    node.attempt_token++;
    for (NodeId t : node.attempt_targets) {
      if (node.peer) node.peer->abort_initiation(t);
    }
    node.attempt_targets.clear();
    CustodyItem& item = node.custody.front();
    if (--item.attempts_left <= 0) return custody_drop(n, reason);
    const std::uint64_t token = node.attempt_token;
    after(kRetryPauseUs, [this, n, token] {
      // A straggler from the failed attempt may still move the packet; only
      // retry if nothing resolved the item in the meantime.
      if (nodes_[n].attempt_token == token) service_custody(n);
    });
  }

  // ---- MiniAtt negotiation --------------------------------------------------
  void start_req_round(NodeId n) {
    NodeState& node = nodes_[n];
    CustodyItem& item = node.custody.front();
    const std::uint64_t seq = ++node.req_seq;
    node.reps.clear();
    node.collecting_reps = true;
    const std::uint64_t token = node.attempt_token;

    Frame f;
    f.cls = FrameClass::Req;
    f.src = n;
    f.dst = kBroadcastId;
    f.bytes = 8;
    f.req_seq = seq;
    f.packet_id = item.relay_frame ? item.relay_frame->packet_id : item.hdr.packet_id;
    f.hdr = item.hdr;
    if (item.relay_frame) f.hdr.visited = bit(n);
    f.hdr.visited |= bit(n);
    enqueue_frame(n, std::move(f));

    at(now_ + kRepWindowUs, [this, n, seq, token] { finish_req_round(n, seq, token); });
  }

  void finish_req_round(NodeId n, std::uint64_t seq, std::uint64_t token) {
    NodeState& node = nodes_[n];
    if (node.attempt_token != token || node.req_seq != seq || !node.collecting_reps) return;
    node.collecting_reps = false;
    if (node.reps.empty()) {
      // No replier: re-issue after the retry timeout, burning one attempt.
      const std::uint64_t wait = strat_.req_retry_timeout_s * 1e6 > kRepWindowUs
                                     ? static_cast<std::uint64_t>(strat_.req_retry_timeout_s * 1e6) -
                                           kRepWindowUs
                                     : 0;
      CustodyItem& item = node.custody.front();
      if (--item.attempts_left <= 0) return custody_drop(n, DropReason::NoRoute);
      after(wait, [this, n, token] {
        if (nodes_[n].attempt_token == token) service_custody(n);
      });
      return;
    }
    std::vector<std::pair<NodeId, double>> scored;
    for (const auto& [who, cost] : node.reps) {
      scored.push_back({who, cost + trace_.at(cur_frame(), n, who).mean_db});
    }
    const auto winner = select_min_attenuation(scored);
    Route route;
    route.kind = Route::Kind::Unicast;
    route.targets = {*winner};
    dispatch_custody(n, route);
  }

  // ---- frame dispatch --------------------------------------------------------
  int seen_key(FrameClass cls, int kind, Direction dir) const {
    return (static_cast<int>(cls) << 5) | (kind << 1) | (dir == Direction::Up ? 0 : 1);
  }

  void on_frame(NodeId r, const Frame& f) {
    switch (f.cls) {
      case FrameClass::Beacon:
        nodes_[r].heard[f.src] = {f.gradient, now_};
        return;
      case FrameClass::Req:
        return on_req(r, f);
      case FrameClass::Rep:
        if (nodes_[r].collecting_reps && f.req_seq == nodes_[r].req_seq) {
          nodes_[r].reps.push_back({f.src, f.rep_cost});
        }
        return;
      case FrameClass::Data:
        return on_data(r, f);
      case FrameClass::Auth:
        return on_auth(r, f);
    }
  }

  void on_req(NodeId r, const Frame& f) {
    if (f.hdr.visited & bit(r)) return;
    const auto cost = path_cost_to_sink(trace_, cur_frame(), r, cfg_.radio, kRouteMarginDb);
    if (!cost) return;
    Frame rep;
    rep.cls = FrameClass::Rep;
    rep.src = r;
    rep.dst = f.src;
    rep.bytes = 8;
    rep.req_seq = f.req_seq;
    rep.rep_cost = *cost;
    enqueue_frame(r, std::move(rep));
  }

  void on_data(NodeId r, const Frame& f) {
    if (f.dst == kBroadcastId) {
      // Flooded baseline data.
      NodeState& node = nodes_[r];
      const auto key = std::make_pair(f.packet_id, seen_key(FrameClass::Data, 0, f.dir));
      if (!node.seen.insert(key).second) return;
      if (r == kSinkId) return deliver(f.hdr);
      if (f.ttl <= 1) {
        note_cause(f.packet_id, DropReason::TtlExpired);
        return;
      }
      Frame copy = f;
      copy.src = r;
      copy.ttl = f.ttl - 1;
      copy.holds_ref = true;
      ref_inc(f.packet_id);
      enqueue_frame(r, std::move(copy));
      return;
    }
    // Unicast custody transfer (baseline).
    if (r == kSinkId) return deliver(f.hdr);
    NodeState& node = nodes_[r];
    const auto key = std::make_pair(f.packet_id, seen_key(FrameClass::Data, 0, f.dir));
    if (!node.seen.insert(key).second) return;  // duplicate custody copy
    CustodyItem item;
    item.hdr = f.hdr;
    item.attempts_left = 1 + strat_.data_retransmissions;
    enqueue_custody(r, item);
  }

  void on_auth(NodeId r, const Frame& f) {
    if (cfg_.scheme == AuthMode::Banzkp) return on_auth_banzkp(r, f);
    if (cfg_.scheme == AuthMode::BanGzkp) return on_auth_gzkp(r, f);
  }

  void send_endpoint_message(NodeId n, const ProtocolMessage& msg, std::uint64_t packet_id);

  void on_auth_banzkp(NodeId r, const Frame& f) {
    const ProtocolMessage& msg = f.auth;
    if (msg.receiver == r) {
      // Endpoint: feed the protocol machine once per message; multi-path
      // strategies can deliver duplicates that would derail a live session.
      const auto key = std::make_pair(
          f.packet_id, seen_key(FrameClass::Auth, static_cast<int>(msg.kind), f.dir));
      if (!nodes_[r].seen.insert(key).second) return;
      if (f.dir == Direction::Up) remember_breadcrumb(r, f);
      AuthResult result = nodes_[r].peer->on_message(msg, now_);
      for (const ProtocolMessage& out : result.send) {
        send_endpoint_message(r, out, f.packet_id);
      }
      if (result.accepted_data) {
        const auto hdr = parse_payload(*result.accepted_data);
        if (hdr && r == kSinkId) deliver(*hdr);
      }
      if (result.completed && r != kSinkId) {
        // Source side: the session finished; the data frame carries on alone.
        NodeState& node = nodes_[r];
        if (node.inflight && node.inflight->hdr.packet_id == f.packet_id) {
          resolve_inflight(r, std::nullopt);
        }
      }
      return;
    }
    // Transparent relay.
    NodeState& node = nodes_[r];
    const auto key =
        std::make_pair(f.packet_id, seen_key(FrameClass::Auth, static_cast<int>(msg.kind), f.dir));
    if (!node.seen.insert(key).second) return;
    if (f.dir == Direction::Up) remember_breadcrumb(r, f);
    if (f.ttl <= 1) {
      if (f.holds_ref) note_cause(f.packet_id, DropReason::TtlExpired);
      return;
    }
    forward_auth(r, f);
  }

  void remember_breadcrumb(NodeId r, const Frame& f) {
    auto& bc = nodes_[r].breadcrumb;
    bc.emplace(f.packet_id, f.src);  // first upstream copy wins
  }

  void forward_auth(NodeId r, const Frame& f) {
    Frame copy = f;
    copy.src = r;
    copy.ttl = f.ttl - 1;

    if (strat_.kind == StrategyKind::FloodToSink) {
      copy.dst = kBroadcastId;
      if (copy.holds_ref) ref_inc(copy.packet_id);
      enqueue_frame(r, std::move(copy));
      return;
    }

    if (f.dir == Direction::Down) {
      const auto it = nodes_[r].breadcrumb.find(f.packet_id);
      if (it == nodes_[r].breadcrumb.end()) {
        note_cause(f.packet_id, DropReason::NoRoute);
        return;
      }
      copy.dst = it->second;
      if (copy.holds_ref) ref_inc(copy.packet_id);
      enqueue_frame(r, std::move(copy));
      return;
    }

    // Upstream over a parent-based strategy.
    if (strat_.kind == StrategyKind::MiniAtt) {
      CustodyItem item;
      item.hdr = f.hdr;
      item.attempts_left = 1;
      item.relay_frame = copy;
      if (copy.holds_ref) ref_inc(copy.packet_id);
      enqueue_custody(r, std::move(item));
      return;
    }
    Route route = route_upstream_at(r, PacketHeader{f.packet_id, f.hdr.origin, 0, 0, 0});
    if (route.kind == Route::Kind::None) {
      note_cause(f.packet_id, DropReason::NoRoute);
      return;
    }
    for (NodeId target : route.targets) {
      Frame one = copy;
      one.dst = target;
      if (one.holds_ref) ref_inc(one.packet_id);
      enqueue_frame(r, std::move(one));
    }
  }

  static bool reply_kind(MsgKind kind) {
    return kind == MsgKind::Auth2 || kind == MsgKind::Auth2Opt || kind == MsgKind::Auth4;
  }

  void on_auth_gzkp(NodeId r, const Frame& f) {
    const ProtocolMessage& msg = f.auth;
    NodeState& node = nodes_[r];
    if (msg.kind == MsgKind::Auth1) {
      // Next-hop solicitation: apply the strategy's candidate filter.
      if (f.hdr.visited & bit(r)) return;
      if (msg.receiver == kBroadcastId && strat_.kind == StrategyKind::Apap) {
        const auto& parents = strat_.apap_parents[f.src];
        if (std::find(parents.begin(), parents.end(), r) == parents.end()) return;
      }
      if (msg.receiver != kBroadcastId && msg.receiver != r) return;
      node.resp_xchg[msg.sender] = f.xchg;
    } else if (msg.receiver != r) {
      return;
    } else if (reply_kind(msg.kind)) {
      // A reply to a superseded attempt must not touch the live one.
      if (f.xchg != node.attempt_xchg) return;
    } else {
      // Initiator-side follow-up: only for the exchange this node is serving.
      const auto it = node.resp_xchg.find(msg.sender);
      if (it == node.resp_xchg.end() || it->second != f.xchg) return;
    }

    AuthResult result = node.peer->on_message(msg, now_);
    for (const ProtocolMessage& out : result.send) {
      Frame reply;
      reply.cls = FrameClass::Auth;
      reply.src = r;
      reply.dst = out.receiver;
      reply.auth = out;
      reply.bytes = out.encode().size();
      reply.packet_id = f.packet_id;
      reply.hdr = f.hdr;
      reply.xchg = f.xchg;
      const bool bears_data = data_bearing(out.kind);
      const std::uint64_t token = node.attempt_token;
      std::function<void(bool)> cb;
      if (bears_data) {
        cb = [this, r, token](bool ok) {
          if (nodes_[r].attempt_token != token) return;
          if (ok) {
            custody_complete(r);
          } else {
            custody_attempt_failed(r, DropReason::HopAuthFailed);
          }
        };
      } else if (node.custody_busy && node.peer->has_initiator_session(out.receiver)) {
        cb = [this, r, token](bool ok) {
          if (!ok && nodes_[r].attempt_token == token) {
            custody_attempt_failed(r, DropReason::HopAuthFailed);
          }
        };
      }
      enqueue_frame(r, std::move(reply), std::move(cb));
    }
    if (result.accepted_data) {
      const auto hdr = parse_payload(*result.accepted_data);
      if (!hdr) return;
      if (r == kSinkId) return deliver(*hdr);
      CustodyItem item;
      item.hdr = *hdr;
      item.attempts_left = cfg_.hop_auth_attempts;
      enqueue_custody(r, item);
    }
  }

  // ---- traffic generation -----------------------------------------------------
  void schedule_generation() {
    if (cfg_.rate_pps <= 0.0 || cfg_.duration_s <= 0.0) return;
    const double period_us = 1e6 / cfg_.rate_pps;
    const auto count = static_cast<std::uint64_t>(cfg_.rate_pps * cfg_.duration_s + 1e-9);
    const std::uint64_t start = static_cast<std::uint64_t>(cfg_.warmup_s * 1e6);
    for (std::size_t i = 0; i < cfg_.sources.size(); ++i) {
      const NodeId src = cfg_.sources[i];
      const std::uint64_t phase =
          cfg_.stagger_sources
              ? static_cast<std::uint64_t>(period_us * static_cast<double>(i) /
                                           static_cast<double>(cfg_.sources.size()))
              : 0;
      for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t t = start + phase + static_cast<std::uint64_t>(k * period_us);
        at(t, [this, src] { generate_packet(src); });
      }
    }
  }

  void generate_packet(NodeId src) {
    PacketHeader hdr;
    hdr.packet_id = ++packet_seq_;
    hdr.origin = src;
    hdr.gen_us = now_;
    Tracker& t = tracker(hdr.packet_id);
    t.origin = src;
    t.gen_us = now_;
    metrics_.packets_generated++;
    metrics_.generated_by_source[src]++;

    CustodyItem item;
    item.hdr = hdr;
    switch (cfg_.scheme) {
      case AuthMode::None:
        item.attempts_left = 1 + strat_.data_retransmissions;
        break;
      case AuthMode::Banzkp:
        item.attempts_left = 1;  // one session; a timeout closes the transfer
        break;
      case AuthMode::BanGzkp:
        item.attempts_left = cfg_.hop_auth_attempts;
        break;
    }
    enqueue_custody(src, item);
  }

  void finalize() {
    for (auto& [id, t] : trackers_) {
      if (!t.delivered && !t.dropped) {
        t.dropped = true;
        metrics_.drops[DropReason::Unfinished]++;
      }
    }
  }

  // ---- members ------------------------------------------------------------
  SimConfig cfg_;
  LinkTrace trace_;
  StrategyConfig strat_;
  DeterministicRng channel_rng_;
  DeterministicRng mac_rng_;
  std::size_t payload_bytes_ = 32;
  std::uint64_t horizon_us_ = 0;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t now_ = 0;
  std::uint64_t event_seq_ = 0;
  std::uint64_t tx_seq_ = 0;
  std::uint64_t packet_seq_ = 0;
  std::uint64_t xchg_seq_ = 0;

  std::array<NodeState, kNodeCount> nodes_;
  std::vector<Transmission> air_;
  std::map<std::uint64_t, Tracker> trackers_;
  RunMetrics metrics_;
};

// The end-to-end scheme's protocol messages ride the convergecast strategy:
// upstream toward the sink, downstream along recorded breadcrumbs (flooding
// both ways under the flooding strategy).
void Simulation::send_endpoint_message(NodeId n, const ProtocolMessage& msg,
                                       std::uint64_t packet_id) {
  Frame f;
  f.cls = FrameClass::Auth;
  f.src = n;
  f.auth = msg;
  f.bytes = msg.encode().size();
  f.packet_id = packet_id;
  f.dir = n == kSinkId ? Direction::Down : Direction::Up;
  f.ttl = std::max(strat_.flood_ttl, cfg_.max_hops);
  f.holds_ref = data_bearing(msg.kind);
  f.hdr.packet_id = packet_id;

  if (msg.receiver == n) return;  // self-addressed: nothing to transmit

  if (strat_.kind == StrategyKind::FloodToSink) {
    f.dst = kBroadcastId;
    if (f.holds_ref) ref_inc(packet_id);
    nodes_[n].seen.insert(
        {packet_id, seen_key(FrameClass::Auth, static_cast<int>(msg.kind), f.dir)});
    enqueue_frame(n, std::move(f));
    return;
  }

  if (f.dir == Direction::Down) {
    const auto it = nodes_[n].breadcrumb.find(packet_id);
    if (it == nodes_[n].breadcrumb.end()) {
      if (f.holds_ref) note_cause(packet_id, DropReason::NoRoute);
      return;
    }
    f.dst = it->second;
    if (f.holds_ref) ref_inc(packet_id);
    enqueue_frame(n, std::move(f));
    return;
  }

  if (strat_.kind == StrategyKind::MiniAtt) {
    CustodyItem item;
    item.hdr = f.hdr;
    item.attempts_left = 1;
    item.relay_frame = f;
    if (f.holds_ref) ref_inc(packet_id);
    enqueue_custody(n, std::move(item));
    return;
  }

  Route route = route_upstream_at(n, PacketHeader{packet_id, n, 0, 0, 0});
  if (route.kind == Route::Kind::None) {
    if (f.holds_ref) note_cause(packet_id, DropReason::NoRoute);
    return;
  }
  for (NodeId target : route.targets) {
    Frame one = f;
    one.dst = target;
    if (one.holds_ref) ref_inc(packet_id);
    enqueue_frame(n, std::move(one));
  }
}

}  // namespace

const char* auth_mode_name(AuthMode mode) {
  switch (mode) {
    case AuthMode::None: return "none";
    case AuthMode::Banzkp: return "banzkp";
    case AuthMode::BanGzkp: return "ban_gzkp";
  }
  return "?";
}

std::optional<AuthMode> parse_auth_mode(const std::string& name) {
  for (AuthMode m : all_auth_modes()) {
    if (name == auth_mode_name(m)) return m;
  }
  return std::nullopt;
}

const std::array<AuthMode, 3>& all_auth_modes() {
  static const std::array<AuthMode, 3> kAll = {AuthMode::None, AuthMode::Banzkp,
                                               AuthMode::BanGzkp};
  return kAll;
}

const char* drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::QueueOverflow: return "queue_overflow";
    case DropReason::TtlExpired: return "ttl_expired";
    case DropReason::NoRoute: return "no_route";
    case DropReason::RadioLoss: return "radio_loss";
    case DropReason::HopAuthFailed: return "hop_auth_failed";
    case DropReason::AuthTimeout: return "auth_timeout";
    case DropReason::Unfinished: return "unfinished";
  }
  return "?";
}

double RunMetrics::ratio() const {
  return packets_generated == 0
             ? 0.0
             : static_cast<double>(packets_received_at_sink) /
                   static_cast<double>(packets_generated);
}

double RunMetrics::avg_delay_ms() const {
  return packets_received_at_sink == 0
             ? 0.0
             : sum_end_to_end_delay_ms / static_cast<double>(packets_received_at_sink);
}

std::uint64_t RunMetrics::dropped_total() const {
  std::uint64_t total = 0;
  for (const auto& [reason, count] : drops) total += count;
  return total;
}

RunMetrics run_simulation(const SimConfig& cfg, const LinkTrace& trace) {
  Simulation sim(cfg, trace);
  return sim.run();
}

RunMetrics run_simulation(const SimConfig& cfg) {
  return run_simulation(cfg, LinkTrace::synthetic(cfg.posture));
}

std::string metrics_csv_header() {
  return "scheme,strategy,posture,rate_pps,seed,generated,received,ratio,avg_delay_ms,"
         "transmissions";
}

std::string metrics_csv_row(const SimConfig& cfg, const RunMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%s,%g,%llu,%llu,%llu,%.6f,%.3f,%llu",
                auth_mode_name(cfg.scheme), strategy_name(cfg.strategy),
                posture_name(cfg.posture), cfg.rate_pps,
                static_cast<unsigned long long>(cfg.seed),
                static_cast<unsigned long long>(m.packets_generated),
                static_cast<unsigned long long>(m.packets_received_at_sink), m.ratio(),
                m.avg_delay_ms(), static_cast<unsigned long long>(m.total_transmissions));
  return buf;
}

}  // namespace wbansec
