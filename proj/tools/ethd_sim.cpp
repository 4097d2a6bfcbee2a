// ethd-sim: encountered-type haptic display simulator CLI.
//
// Subcommands:
//   trial          run one interaction trial under the virtual clock
//   batch          run seeded trial batches and report latency statistics
//   colocation     run the registration / spatial-alignment evaluation
//   protocol-soak  codec round-trip fuzz plus loss/redundancy sweep
//   safety-suite   scripted intrusion, safe-zone and e-stop scenarios
//   serve-robot    real-time robot side over UDP (two-process mode)
//   serve-headset  real-time headset side over UDP
//
// Exit codes: 0 success, 2 configuration/usage error, 3 trial failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ethd/colocation.hpp"
#include "ethd/csv.hpp"
#include "ethd/realtime.hpp"
#include "ethd/trial.hpp"

namespace {

using namespace ethd;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrialFailure = 3;

struct CommonOpts {
  std::string kind = "handover";
  std::string strategy = "static";
  std::uint64_t seed = 1;
  std::string config_path;
  std::string out_dir = "out";
};

Scenario make_scenario(const CommonOpts& c) {
  Scenario s = Scenario::defaults(parse_kind(c.kind), parse_strategy(c.strategy));
  if (!c.config_path.empty()) {
    s.apply(load_config_file(c.config_path));
    // Explicit CLI kind/strategy/seed win over the file.
    s.kind = parse_kind(c.kind);
    s.strategy = parse_strategy(c.strategy);
  }
  s.seed = c.seed;
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_kind = true) {
  if (with_kind) {
    cmd->add_option("--kind", c.kind, "handover|fistbump|highfive|all");
    cmd->add_option("--strategy", c.strategy, "static|dynamic|both");
  }
  cmd->add_option("--seed", c.seed, "base random seed");
  cmd->add_option("--config", c.config_path, "scenario config file");
  cmd->add_option("--out", c.out_dir, "output directory for CSV artifacts");
}

int cmd_trial(const CommonOpts& c, bool trace) {
  Scenario s = make_scenario(c);
  const TrialRecord rec = run_trial(s, trace);

  std::cout << "trial " << kind_name(s.kind) << "/" << strategy_name(s.strategy)
            << " seed=" << s.seed << ": " << trial_status_name(rec.status);
  if (rec.latency_ms)
    std::cout << ", latency " << fmt_fixed(*rec.latency_ms, 3) << " ms";
  std::cout << "\n";
  for (const auto& tr : rec.phase_log)
    std::cout << "  t=" << tr.t << "us phase=" << phase_name(tr.phase) << "\n";

  const std::filesystem::path out(c.out_dir);
  write_file(out / "trial_phases.csv", phase_csv(rec.phase_log));
  write_file(out / "trial_safety.csv", safety_csv(rec.safety_log));
  if (trace) write_file(out / "trial_trace.csv", trace_csv(rec));

  return rec.status == TrialStatus::Completed ? kExitOk : kExitTrialFailure;
}

int cmd_batch(const CommonOpts& c, int trials) {
  std::vector<InteractionKind> kinds;
  if (c.kind == "all")
    kinds = {InteractionKind::Handover, InteractionKind::FistBump,
             InteractionKind::HighFive};
  else
    kinds = {parse_kind(c.kind)};
  std::vector<Strategy> strategies;
  if (c.strategy == "both")
    strategies = {Strategy::Static, Strategy::Dynamic};
  else
    strategies = {parse_strategy(c.strategy)};

  std::vector<BatchReport> reports;
  bool any_failure = false;
  for (InteractionKind k : kinds) {
    for (Strategy st : strategies) {
      CommonOpts cc = c;
      cc.kind = kind_name(k);
      cc.strategy = strategy_name(st);
      Scenario base = make_scenario(cc);
      // Cell-specific seed stream keeps cells independent of each other.
      const std::uint64_t cell_seed =
          derive_seed(c.seed, (static_cast<std::uint64_t>(k) << 8) |
                                  static_cast<std::uint64_t>(st));
      BatchReport rep = run_batch(base, trials, cell_seed);
      attach_colocation_summary(rep, base);
      if (rep.completed < rep.trials) any_failure = true;
      reports.push_back(std::move(rep));
    }
  }

  const std::filesystem::path out(c.out_dir);
  write_file(out / "batch_trials.csv", batch_trials_csv(reports));
  write_file(out / "batch_summary.csv", batch_summary_csv(reports));
  std::cout << batch_table(reports);
  return any_failure ? kExitTrialFailure : kExitOk;
}

int cmd_colocation(const CommonOpts& c, int trials, int probes) {
  Scenario s = make_scenario(c);
  const ColocationReport report = run_colocation_eval(
      trials, probes, s.registration_noise, s.registration_settings,
      s.registration_rate_hz, s.registration_duration_s, s.seed);

  write_file(std::filesystem::path(c.out_dir) / "colocation.csv",
             colocation_csv(report));
  std::cout << "colocation: " << report.measurements_mm.size()
            << " measurements, error " << fmt_fixed(report.mean_mm, 2) << " +/- "
            << fmt_fixed(report.std_mm, 2) << " mm\n";
  return kExitOk;
}

int cmd_protocol_soak(const CommonOpts& c, int n_messages, int n_events) {
  // Round-trip fuzz over randomized messages.
  Rng rng(derive_seed(c.seed, 0xf022));
  int roundtrip_failures = 0;
  for (int i = 0; i < n_messages; ++i) {
    wire::MessageSender sender;
    wire::Payload payload;
    switch (rng.next_u64() % 4) {
      case 0: {
        wire::HeadPoseMsg m;
        m.position = {float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)),
                      float(rng.uniform(-2, 2))};
        m.orientation = {float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)),
                         float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1))};
        payload = m;
        break;
      }
      case 1: {
        wire::HandPoseMsg m;
        m.hand_id = rng.next_u64() % 2;
        m.tracked = rng.next_u64() % 2;
        m.position = {float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)),
                      float(rng.uniform(-2, 2))};
        payload = m;
        break;
      }
      case 2: {
        wire::EventFlagsMsg m;
        m.flags = rng.next_u64() & wire::kKnownEventFlags;
        m.event_seq = static_cast<std::uint32_t>(rng.next_u64());
        payload = m;
        break;
      }
      default: {
        wire::EndEffectorStateMsg m;
        m.position = {float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)),
                      float(rng.uniform(-2, 2))};
        m.velocity = {float(rng.uniform(-1, 1)), 0.f, 0.f};
        m.force = {float(rng.uniform(0, 50)), 0.f, 0.f};
        payload = m;
        break;
      }
    }
    const auto msg = sender.stamp(payload, static_cast<Micros>(i));
    const auto bytes = wire::encode(msg);
    const auto back = wire::decode(bytes);
    if (!back || !(*back.message == msg) || wire::encode(*back.message) != bytes)
      ++roundtrip_failures;
  }

  // Loss / redundancy sweep.
  std::ostringstream csv;
  csv << csv_header_line("protocol_soak");
  csv << "loss_rate,repeat_count,events,delivered,rate,theory\n";
  std::cout << "round-trip: " << n_messages - roundtrip_failures << "/"
            << n_messages << " ok\n";
  for (double p : {0.0, 0.1, 0.3, 0.5}) {
    for (int k : {1, 3, 5}) {
      SimClock clock;
      ChannelConfig cfg;
      cfg.loss_rate = p;
      cfg.seed = derive_seed(c.seed, std::uint64_t(p * 1000) * 31 + k);
      LoopbackChannel channel(&clock, cfg);
      wire::MessageSender sender;
      wire::RedundantEventSender events({k});
      wire::EventDeduper dedup;
      int delivered = 0;
      for (int e = 0; e < n_events; ++e) {
        events.announce(wire::kSequenceAdvance);
        // Drain this event's repeats over the next k sender frames.
        for (int f = 0; f < k; ++f) {
          clock.advance(11'111);
          for (const auto& ev : events.frame_batch())
            sender.send(channel, ev, clock.now());
          for (const auto& d : channel.poll()) {
            const auto res = wire::decode(d);
            if (!res) continue;
            if (const auto* ev = std::get_if<wire::EventFlagsMsg>(
                    &res.message->payload))
              if (dedup.accept(*ev)) ++delivered;
          }
        }
      }
      const double rate = double(delivered) / n_events;
      const double theory = 1.0 - std::pow(p, k);
      csv << fmt_fixed(p, 2) << ',' << k << ',' << n_events << ',' << delivered
          << ',' << fmt_fixed(rate, 5) << ',' << fmt_fixed(theory, 5) << '\n';
      std::cout << "loss " << fmt_fixed(p, 2) << " K=" << k << ": delivery "
                << fmt_fixed(100 * rate, 2) << "% (theory "
                << fmt_fixed(100 * theory, 2) << "%)\n";
    }
  }
  write_file(std::filesystem::path(c.out_dir) / "protocol_soak.csv", csv.str());
  return roundtrip_failures == 0 ? kExitOk : kExitTrialFailure;
}

int cmd_safety_suite(const CommonOpts& c) {
  const std::filesystem::path out(c.out_dir);
  bool ok = true;

  // 1. Head intrusion mid-interaction: the plant must freeze on the tick the
  //    intruding pose is delivered and resume after the head leaves.
  {
    CommonOpts cc = c;
    Scenario s = make_scenario(cc);
    s.intrusion_at_s = 5.0;
    s.horizon_s = 15.0;
    const TrialRecord rec = run_trial(s);
    bool halted = false, left_halt = false;
    for (const auto& tr : rec.safety_log) {
      if (tr.to == SafetyMode::Halted) halted = true;
      if (tr.from == SafetyMode::Halted) left_halt = true;
    }
    const bool completed = rec.status == TrialStatus::Completed;
    const bool pass = halted && left_halt && completed;
    ok &= pass;
    std::cout << "intrusion scenario: " << (pass ? "PASS" : "FAIL")
              << " (halted=" << halted << " cleared=" << left_halt
              << " trial_completed=" << completed << ")\n";
    write_file(out / "safety_intrusion.csv", safety_csv(rec.safety_log));
  }

  // 2. Safe-zone exit: passthrough must engage while the user is outside.
  {
    CommonOpts cc = c;
    Scenario s = make_scenario(cc);
    s.zone_exit_at_s = 5.0;
    s.horizon_s = 12.0;
    const TrialRecord rec = run_trial(s);
    bool passthrough = false;
    for (const auto& tr : rec.safety_log)
      if (tr.to == SafetyMode::Passthrough) passthrough = true;
    ok &= passthrough;
    std::cout << "safe-zone scenario: " << (passthrough ? "PASS" : "FAIL")
              << "\n";
    write_file(out / "safety_zone_exit.csv", safety_csv(rec.safety_log));
  }

  // 3. Operator e-stop without reset: must latch to the end of the trial.
  {
    CommonOpts cc = c;
    Scenario s = make_scenario(cc);
    s.estop_at_s = 4.0;
    s.horizon_s = 8.0;
    const TrialRecord rec = run_trial(s);
    const bool latched = rec.status == TrialStatus::SafetyAbort;
    ok &= latched;
    std::cout << "e-stop scenario: " << (latched ? "PASS" : "FAIL") << "\n";
    write_file(out / "safety_estop.csv", safety_csv(rec.safety_log));
  }

  return ok ? kExitOk : kExitTrialFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"encountered-type haptic display simulator"};
  app.require_subcommand(1);

  CommonOpts c;
  bool trace = false;
  int trials = 25;
  int probes = 5;
  int soak_messages = 100000;
  int soak_events = 10000;
  RealtimeOptions rt;

  auto* trial = app.add_subcommand("trial", "run one interaction trial");
  add_common(trial, c);
  trial->add_flag("--trace", trace, "write the controller trace CSV");

  auto* batch = app.add_subcommand("batch", "run seeded trial batches");
  add_common(batch, c);
  batch->add_option("--trials", trials, "trials per (kind, strategy) cell");

  auto* colocation =
      app.add_subcommand("colocation", "registration alignment evaluation");
  add_common(colocation, c, false);
  colocation->add_option("--trials", trials, "registration trials")
      ->default_val(20);
  colocation->add_option("--probes", probes, "probe points per trial");

  auto* soak = app.add_subcommand("protocol-soak", "codec and loss soak");
  add_common(soak, c, false);
  soak->add_option("--messages", soak_messages, "round-trip fuzz count");
  soak->add_option("--events", soak_events, "events per loss/K cell");

  auto* safety = app.add_subcommand("safety-suite", "scripted safety scenarios");
  add_common(safety, c);

  auto* serve_r = app.add_subcommand("serve-robot", "real-time robot side");
  add_common(serve_r, c);
  serve_r->add_option("--peer", rt.peer_host, "headset host");
  serve_r->add_option("--port", rt.local_port, "local UDP port (47810)");
  serve_r->add_option("--peer-port", rt.remote_port, "headset UDP port (47811)");

  auto* serve_h = app.add_subcommand("serve-headset", "real-time headset side");
  add_common(serve_h, c);
  serve_h->add_option("--peer", rt.peer_host, "robot host");
  serve_h->add_option("--port", rt.local_port, "local UDP port (47811)");
  serve_h->add_option("--peer-port", rt.remote_port, "robot UDP port (47810)");

  auto* schema =
      app.add_subcommand("schema", "print the scenario config schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/help
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (schema->parsed()) {
      print_schema(std::cout);
      return kExitOk;
    }
    if (trial->parsed()) return cmd_trial(c, trace);
    if (batch->parsed()) return cmd_batch(c, trials);
    if (colocation->parsed()) return cmd_colocation(c, trials, probes);
    if (soak->parsed()) return cmd_protocol_soak(c, soak_messages, soak_events);
    if (safety->parsed()) return cmd_safety_suite(c);
    if (serve_r->parsed()) {
      const auto rec = serve_robot(make_scenario(c), rt);
      return rec.status == TrialStatus::Completed ? kExitOk : kExitTrialFailure;
    }
    if (serve_h->parsed()) {
      const auto rec = serve_headset(make_scenario(c), rt);
      return rec.status == TrialStatus::Completed ? kExitOk : kExitTrialFailure;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTrialFailure;
  }
  return kExitConfig;
}
