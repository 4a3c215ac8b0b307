// Command-line front end: run experiment plans to CSV, exercise the scripted
// attack scenarios, and dump deterministic handshake transcripts.
//
// Exit codes: 0 success, 1 invalid plan (or bad invocation), 2 attack
// regression (a scenario the hop-by-hop scheme must block was not blocked),
// 3 missing trace file.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wbansec/bytes.hpp"
#include "wbansec/handshake.hpp"
#include "wbansec/plan.hpp"
#include "wbansec/scenarios.hpp"
#include "wbansec/trace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidPlan = 1;
constexpr int kExitAttackRegression = 2;
constexpr int kExitMissingTrace = 3;

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& plan_path, const std::string& out_path,
            const std::string& runs_out_path, const std::string& trace_dir, int jobs,
            std::uint64_t seed, bool seed_given) {
  using namespace wbansec;
  try {
    ExperimentPlan plan = parse_plan_file(plan_path);
    if (seed_given) plan.base_seed = seed;
    std::string runs_csv;
    const auto rows =
        run_plan(plan, trace_dir, jobs, runs_out_path.empty() ? nullptr : &runs_csv);
    const std::string csv = aggregate_csv(rows);
    if (out_path.empty()) {
      std::cout << csv;
    } else if (!write_text(out_path, csv)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInvalidPlan;
    }
    if (!runs_out_path.empty() && !write_text(runs_out_path, runs_csv)) {
      std::cerr << "error: cannot write " << runs_out_path << "\n";
      return kExitInvalidPlan;
    }
    std::cerr << rows.size() << " cell(s), " << plan.repetitions << " run(s) each\n";
    return kExitOk;
  } catch (const InvalidPlan& e) {
    std::cerr << "invalid plan: " << e.what() << "\n";
    return kExitInvalidPlan;
  } catch (const MissingTrace& e) {
    std::cerr << "missing trace: " << e.what() << "\n";
    return kExitMissingTrace;
  }
}

int cmd_attacks(const std::vector<std::string>& scheme_names, std::uint64_t seed) {
  using namespace wbansec;
  std::vector<Scheme> schemes;
  if (scheme_names.empty()) {
    schemes = {Scheme::Banzkp, Scheme::BanGzkp};
  } else {
    for (const std::string& name : scheme_names) {
      if (name == "banzkp") {
        schemes.push_back(Scheme::Banzkp);
      } else if (name == "ban-gzkp" || name == "ban_gzkp") {
        schemes.push_back(Scheme::BanGzkp);
      } else {
        std::cerr << "unknown scheme '" << name << "' (want banzkp or ban-gzkp)\n";
        return kExitInvalidPlan;
      }
    }
  }
  const LabTopology topo = default_lab(GroupParams::compact());
  bool regression = false;
  std::printf("%-10s %-18s %s\n", "scheme", "scenario", "verdict");
  for (Scheme scheme : schemes) {
    for (ScenarioName name : all_scenarios()) {
      const ScenarioOutcome outcome = run_scenario(name, scheme, topo, seed);
      std::printf("%-10s %-18s %s\n", scheme_name(scheme), scenario_name(name),
                  verdict_name(outcome.verdict));
      if (scheme == Scheme::BanGzkp && outcome.verdict != Verdict::AttackBlocked) {
        regression = true;
      }
    }
  }
  return regression ? kExitAttackRegression : kExitOk;
}

int cmd_handshake_vectors(std::uint64_t seed) {
  using namespace wbansec;
  const GroupParams& params = GroupParams::compact();

  auto identity = [&](NodeId id) {
    NodeIdentity ident;
    ident.id = id;
    Bytes kb(16);
    for (std::size_t i = 0; i < kb.size(); ++i) kb[i] = static_cast<std::uint8_t>(i * 3 + 1);
    ident.initial_key = key_from_bytes(kb);
    Bytes vb(static_cast<std::size_t>(params.secret_bytes()));
    for (std::size_t i = 0; i < vb.size(); ++i) {
      vb[i] = static_cast<std::uint8_t>((i * 13 + 5) % 251);
    }
    ident.shared_secret = make_element(mpz_from_bytes(vb), params);
    return ident;
  };

  HandshakeConfig cfg;
  cfg.params = params;
  Bytes payload(8);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i);

  for (Scheme scheme : {Scheme::Banzkp, Scheme::BanGzkp}) {
    // Two full sessions: for the hop-by-hop scheme the second one exercises
    // the shortened fast path against the now-warm responder.
    AuthPeer alice(identity(0), scheme, cfg, derive_seed(seed, 1));
    AuthPeer bob(identity(1), scheme, cfg, derive_seed(seed, 2));
    for (int round = 0; round < 2; ++round) {
      std::printf("# %s session %d\n", scheme_name(scheme), round + 1);
      std::vector<ProtocolMessage> queue;
      queue.push_back(alice.initiate(1, payload, 0));
      while (!queue.empty()) {
        ProtocolMessage msg = queue.front();
        queue.erase(queue.begin());
        std::printf("%s %u->%u %s\n", msg_kind_name(msg.kind), msg.sender, msg.receiver,
                    to_hex(msg.encode()).c_str());
        AuthPeer& dest = msg.receiver == 1 ? bob : alice;
        AuthResult result = dest.on_message(msg, 0);
        if (result.checking_failed) {
          std::fprintf(stderr, "handshake unexpectedly failed\n");
          return kExitInvalidPlan;
        }
        for (auto& out : result.send) queue.push_back(std::move(out));
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Body-area convergecast authentication workbench"};
  app.require_subcommand(1);
  app.fallthrough();  // global options (e.g. --seed) may follow the subcommand

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Override the base seed");

  std::string plan_path, out_path, runs_out_path, trace_dir;
  int jobs = 1;
  CLI::App* run = app.add_subcommand("run", "Run an experiment plan and emit aggregate CSV");
  run->add_option("plan", plan_path, "Plan file (key = value sections)")->required();
  run->add_option("--out", out_path, "Aggregate CSV path (default: stdout)");
  run->add_option("--runs-out", runs_out_path, "Also dump the per-run CSV here");
  run->add_option("--trace-dir", trace_dir,
                  "Trace directory (default: $WBANSEC_TRACE_DIR, then ./traces)");
  run->add_option("--jobs", jobs, "Worker threads across cells")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> scheme_names;
  CLI::App* attacks = app.add_subcommand("attacks", "Run the scripted attack scenarios");
  attacks->add_option("--scheme", scheme_names, "banzkp and/or ban-gzkp (default: both)");

  CLI::App* vectors =
      app.add_subcommand("handshake-vectors", "Emit deterministic handshake transcripts as hex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidPlan;
  }

  try {
    if (run->parsed()) {
      return cmd_run(plan_path, out_path, runs_out_path, trace_dir, jobs, seed,
                     app.count("--seed") > 0);
    }
    if (attacks->parsed()) return cmd_attacks(scheme_names, seed);
    if (vectors->parsed()) return cmd_handshake_vectors(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidPlan;
  }
  return kExitInvalidPlan;
}
