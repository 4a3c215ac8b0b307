// Microbenchmarks for the hot paths: group exponentiation, full handshake
// sessions on both schemes (first contact and warm fast path), and complete
// simulation runs.

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "wbansec/group.hpp"
#include "wbansec/handshake.hpp"
#include "wbansec/rng.hpp"
#include "wbansec/simulator.hpp"

namespace {

using namespace wbansec;

NodeIdentity bench_identity(NodeId id, const GroupParams& params) {
  NodeIdentity ident;
  ident.id = id;
  Bytes kb(16);
  for (std::size_t i = 0; i < kb.size(); ++i) kb[i] = static_cast<std::uint8_t>(i * 5 + 2);
  ident.initial_key = key_from_bytes(kb);
  Bytes vb(static_cast<std::size_t>(params.secret_bytes()));
  for (std::size_t i = 0; i < vb.size(); ++i) {
    vb[i] = static_cast<std::uint8_t>((i * 11 + 3) % 251);
  }
  ident.shared_secret = make_element(mpz_from_bytes(vb), params);
  return ident;
}

const GroupParams& profile(int index) {
  switch (index) {
    case 0: return GroupParams::compact();
    case 1: return GroupParams::standard();
    default: return GroupParams::wide();
  }
}

void BM_GroupExponentiation(benchmark::State& state) {
  const GroupParams& params = profile(static_cast<int>(state.range(0)));
  DeterministicRng rng(7);
  Bytes seed_bytes(static_cast<std::size_t>(params.secret_bytes()));
  for (auto& b : seed_bytes) b = static_cast<std::uint8_t>(rng.below(256));
  const GroupElement base = make_element(mpz_from_bytes(seed_bytes), params);
  const Nonce exponent = random_nonce(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pow_secret(base, exponent, params));
  }
}
BENCHMARK(BM_GroupExponentiation)->Arg(0)->Arg(1)->Arg(2);

void run_one_session(AuthPeer& initiator, AuthPeer& responder, const Bytes& payload) {
  std::vector<ProtocolMessage> queue;
  queue.push_back(initiator.initiate(responder.identity().id, payload, 0));
  while (!queue.empty()) {
    ProtocolMessage msg = queue.front();
    queue.erase(queue.begin());
    AuthPeer& dest = msg.receiver == responder.identity().id ? responder : initiator;
    AuthResult result = dest.on_message(msg, 0);
    for (auto& out : result.send) queue.push_back(std::move(out));
  }
}

void BM_HandshakeSession(benchmark::State& state) {
  const Scheme scheme = state.range(0) == 0 ? Scheme::Banzkp : Scheme::BanGzkp;
  const bool warm = state.range(1) != 0;
  const GroupParams& params = GroupParams::compact();
  HandshakeConfig cfg;
  cfg.params = params;
  AuthPeer initiator(bench_identity(0, params), scheme, cfg, derive_seed(1, 10));
  AuthPeer responder(bench_identity(1, params), scheme, cfg, derive_seed(1, 20));
  Bytes payload(16, 0x5a);
  if (warm) run_one_session(initiator, responder, payload);
  for (auto _ : state) {
    run_one_session(initiator, responder, payload);
  }
}
BENCHMARK(BM_HandshakeSession)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"gzkp", "warm"});

void BM_SimulationRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.scheme = static_cast<AuthMode>(state.range(0));
  cfg.strategy = StrategyKind::Apap;
  cfg.posture = Posture::Walk;
  cfg.rate_pps = 5.0;
  cfg.duration_s = 5.0;
  const LinkTrace trace = LinkTrace::synthetic(cfg.posture);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    cfg.seed = seed++;
    benchmark::DoNotOptimize(run_simulation(cfg, trace));
  }
}
BENCHMARK(BM_SimulationRun)->Arg(0)->Arg(1)->Arg(2)->ArgName("scheme");

}  // namespace

BENCHMARK_MAIN();
