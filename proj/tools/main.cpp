#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lakee/adversary/attack.hpp"
#include "lakee/bench/report.hpp"
#include "lakee/metrics.hpp"
#include "lakee/transport/udp.hpp"
#include "settings.hpp"

using namespace lakee;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

// Exit codes: 0 success, 1 attack or check failed, 2 handshake terminated,
// 3 configuration error. CLI11 usage errors keep their own codes.
constexpr int kFailed = 1;
constexpr int kTerminated = 2;
constexpr int kConfig = 3;

class Options {
 public:
  void add(CLI::App* sub, const std::string& key, const std::string& help) {
    options_[sub][key] = sub->add_option("--" + key, values_[key], help);
  }
  void add_flag(CLI::App* sub, const std::string& key, const std::string& help) {
    options_[sub][key] = sub->add_flag("--" + key, flags_[key], help);
  }

  cli::Settings resolve(CLI::App* sub, const std::string& config_path) const {
    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : options_.at(sub)) {
      if (opt->count() == 0) continue;
      given[key] = flags_.count(key) ? "true" : values_.at(key);
    }
    std::map<std::string, std::string> config;
    std::string path = config_path;
    if (path.empty()) {
      if (auto env = cli::process_env()("LAKEE_CONFIG")) path = *env;
    }
    if (!path.empty()) config = cli::load_config(path);
    return cli::resolve_settings(given, config, cli::process_env());
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, bool> flags_;
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> options_;
};

struct ProfileHolder {
  std::optional<curve::CurveProfile> loaded;
  const curve::CurveProfile* profile = nullptr;

  explicit ProfileHolder(const std::string& name) {
    if (name == "toy" || name == "ed448") {
      profile = &curve::builtin_profile(name);
    } else {
      loaded = curve::load_profile(name);
      profile = &*loaded;
    }
  }
};

std::string trace_line(const transport::TraceEntry& t, transport::Millis start) {
  std::ostringstream out;
  out << "+" << (t.at - start).count() << "ms " << transport::to_string(t.direction) << " "
      << (t.index ? "#" + std::to_string(t.index) : std::string("inj")) << " " << t.event << " " << t.bytes << "B";
  return out.str();
}

json ops_json(const metrics::OpCounters& ops) {
  return {{"ecpm", ops.ecpm},           {"subgroup_checks", ops.subgroup_checks}, {"ecpa", ops.ecpa},
          {"aead_seal", ops.aead_seal}, {"aead_open", ops.aead_open},             {"hash_direct", ops.hash_direct},
          {"hash_kdf", ops.hash_kdf}};
}

std::string outcome_name(const transport::ClientOutcome& outcome) {
  if (std::holds_alternative<protocol::ClientEstablished>(outcome)) return "Established";
  if (auto* t = std::get_if<protocol::Terminated>(&outcome)) return std::string(protocol::to_string(t->reason));
  if (std::holds_alternative<transport::ServerReset>(outcome)) return "ServerReset";
  return "HandshakeTimeout";
}

int handshake_sim(const cli::Settings& s, bool timing, unsigned latency_ms) {
  ProfileHolder holder(s.profile);
  const std::uint64_t seed = s.seed ? *s.seed : SystemRandom().next_u64();
  adversary::WorldOptions options;
  options.curve = holder.profile;
  options.seed = seed;
  options.rotate = s.rotate;
  options.handshake.delta_t = s.delta_t;
  options.latency = transport::Millis(latency_ms);
  adversary::World world(options);
  const auto start = world.net.clock().now();

  metrics::reset();
  const auto wall_start = std::chrono::steady_clock::now();
  const auto& run = world.run_client();
  const std::chrono::duration<double, std::milli> wall = std::chrono::steady_clock::now() - wall_start;
  const auto ops = metrics::counters();

  std::optional<protocol::TerminateReason> server_reason;
  bool server_established = false;
  for (const auto& e : world.events) {
    if (e.kind == transport::ResponderEvent::Kind::terminated) server_reason = e.reason;
    if (e.kind == transport::ResponderEvent::Kind::established) server_established = true;
  }
  auto* client = std::get_if<protocol::ClientEstablished>(&run.outcome);
  const bool ok = client && server_established;
  std::string reason = ok ? "" : outcome_name(run.outcome);
  if (!ok && server_reason) reason = std::string(protocol::to_string(*server_reason));
  if (!ok && client && !server_reason) reason = "NoServerSession";

  if (s.format == "json") {
    json j = {{"profile", holder.profile->name()},
              {"seed", seed},
              {"rotate", s.rotate},
              {"delta_t", s.delta_t.count()},
              {"outcome", ok ? "Established" : reason},
              {"rotated", client && client->result.rotated_key.has_value()},
              {"messages", world.net.datagrams_sent()},
              {"transmissions", run.transmissions},
              {"ops", ops_json(ops)}};
    for (const auto& t : world.net.trace()) j["transcript"].push_back(trace_line(t, start));
    if (timing) j["wall_ms"] = wall.count();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "handshake profile " << holder.profile->name() << " seed " << seed << " delta-t "
              << s.delta_t.count() << "s" << (s.rotate ? " rotate" : "") << "\n";
    for (const auto& t : world.net.trace()) std::cout << "  " << trace_line(t, start) << "\n";
    std::cout << "messages " << world.net.datagrams_sent() << ", ECPM " << ops.ecpm << ", ECPA " << ops.ecpa
              << ", AEAD seal " << ops.aead_seal << " open " << ops.aead_open << ", hashes " << ops.hash_direct
              << " direct + " << ops.hash_kdf << " in kdf\n";
    if (ok) {
      std::cout << "established: session key agreed" << (client->result.rotated_key ? ", Y rotated" : "") << "\n";
    }
    if (timing) std::cout << "wall " << wall.count() << " ms\n";
  }
  if (!ok) {
    std::cerr << "handshake failed: " << reason << "\n";
    return kTerminated;
  }
  return 0;
}

int handshake_udp(const cli::Settings& s, const std::string& server, const std::string& client_hex) {
  ProfileHolder holder(s.profile);
  if (s.keystore.empty()) throw cli::SettingsError("--keystore is required with --server");
  protocol::Keystore keystore;
  keystore.load(s.keystore);
  Bytes id_bytes = from_hex(client_hex);
  if (id_bytes.size() != 8) throw cli::SettingsError("--client-id takes 16 hex digits");
  std::uint64_t id_value = 0;
  for (auto b : id_bytes) id_value = id_value << 8 | b;
  protocol::ClientId id{id_value};
  auto key = keystore.find(id);
  if (!key) throw cli::SettingsError("client " + client_hex + " is not in " + s.keystore);

  std::unique_ptr<RandomSource> rng;
  if (s.seed) {
    rng = std::make_unique<SeededRandom>(*s.seed, "client");
  } else {
    rng = std::make_unique<SystemRandom>();
  }
  protocol::HandshakeConfig config;
  config.delta_t = s.delta_t;
  protocol::ClientSession session(id, *key, *holder.profile, *rng, config);
  transport::UdpClientChannel channel(Address::parse(server));
  auto run = transport::run_client_handshake(session, channel, *rng);

  auto* done = std::get_if<protocol::ClientEstablished>(&run.outcome);
  if (done && done->result.rotated_key) keystore.put(id, *done->result.rotated_key);
  const std::string outcome = outcome_name(run.outcome);
  if (s.format == "json") {
    std::cout << json{{"server", server},
                      {"outcome", outcome},
                      {"transmissions", run.transmissions},
                      {"rotated", done && done->result.rotated_key.has_value()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "handshake with " << server << ": " << outcome << " after " << run.transmissions << " CON"
              << (done && done->result.rotated_key ? ", Y rotated and saved" : "") << "\n";
  }
  if (!done) {
    std::cerr << "handshake failed: " << outcome << "\n";
    return kTerminated;
  }
  return 0;
}

int serve(const cli::Settings& s, unsigned workers, unsigned duration) {
  ProfileHolder holder(s.profile);
  if (s.keystore.empty()) throw cli::SettingsError("serve needs --keystore");
  protocol::Keystore keystore;
  keystore.load(s.keystore);
  std::unique_ptr<RandomSource> rng;
  if (s.seed) {
    rng = std::make_unique<SeededRandom>(*s.seed, "server");
  } else {
    rng = std::make_unique<SystemRandom>();
  }
  protocol::HandshakeConfig config;
  config.delta_t = s.delta_t;
  if (s.rotate) config.rotation_policy = [](protocol::ClientId) { return true; };
  protocol::ServerSessionTable table(keystore, *holder.profile, config, *rng);
  transport::UdpServer server(table, Address::parse(s.listen), workers);

  std::mutex out_mutex;
  server.responder().set_observer([&](const transport::ResponderEvent& e) {
    using Kind = transport::ResponderEvent::Kind;
    std::string what;
    switch (e.kind) {
      case Kind::replied: what = "replied"; break;
      case Kind::replied_cached: what = "replied (cached)"; break;
      case Kind::silent_drop: what = "silent drop"; break;
      case Kind::terminated: what = "terminated " + std::string(protocol::to_string(*e.reason)); break;
      case Kind::established: what = e.session->result.rotated_key ? "established, Y rotated" : "established"; break;
      case Kind::ignored: what = "ignored"; break;
    }
    std::lock_guard lock(out_mutex);
    std::cout << e.peer.to_string() << " " << what << std::endl;
  });

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.start();
  std::cout << "serving " << holder.profile->name() << " on " << server.local_address().to_string() << " with "
            << keystore.size() << " clients" << std::endl;
  const auto until = std::chrono::steady_clock::now() + std::chrono::seconds(duration);
  while (!g_stop && (duration == 0 || std::chrono::steady_clock::now() < until)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  server.stop();
  const auto stats = table.stats();
  std::lock_guard lock(out_mutex);
  std::cout << "stopped: " << server.datagrams_received() << " datagrams, " << stats.established << " sessions"
            << std::endl;
  return 0;
}

json report_json(const adversary::AttackReport& r) {
  json j = {{"script", r.script},
            {"profile", r.profile},
            {"seed", r.seed},
            {"passed", r.passed},
            {"server_established", r.server_established},
            {"rejections", r.rejections},
            {"transcript", r.transcript},
            {"server", r.server_log},
            {"client", r.client_log}};
  for (const auto& c : r.checks) j["checks"].push_back({{"what", c.what}, {"ok", c.ok}, {"detail", c.detail}});
  return j;
}

std::optional<adversary::MutationField> parse_field(const std::string& name) {
  using adversary::MutationField;
  for (auto f : {MutationField::version, MutationField::type, MutationField::client_id, MutationField::nonce,
                 MutationField::ciphertext, MutationField::tag}) {
    if (adversary::to_string(f) == name) return f;
  }
  return std::nullopt;
}

struct AttackArgs {
  std::string script;
  bool list = false;
  std::uint64_t sweep = 0;
  std::string field;
  unsigned message = 0;
  bool identity = false;
};

int run_attack_command(const cli::Settings& s, const AttackArgs& a) {
  const bool profile_given = s.sources.at("profile") != cli::Source::fallback;
  if (a.list) {
    for (const auto& name : adversary::builtin_script_names()) std::cout << name << "\n";
    return 0;
  }
  if (a.sweep > 0) {
    ProfileHolder holder(s.profile);
    adversary::SweepOptions options;
    options.trials = a.sweep;
    options.seed = s.seed.value_or(1);
    options.profile = holder.profile;
    options.identity_control = a.identity;
    if (!a.field.empty()) {
      options.only_field = parse_field(a.field);
      if (!options.only_field) throw cli::SettingsError("unknown field '" + a.field + "'");
    }
    if (a.message) options.only_message = a.message;
    auto report = adversary::mutation_sweep(options);
    if (s.format == "json") {
      std::cout << json{{"trials", report.trials},
                        {"server_established", report.server_established},
                        {"unclassified", report.unclassified},
                        {"histogram", report.histogram},
                        {"by_field", report.by_field},
                        {"passed", report.passed}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << report.render();
    }
    if (!report.passed) {
      std::cerr << "sweep failed: " << report.server_established << " server sessions, " << report.unclassified
                << " unclassified\n";
      return kFailed;
    }
    return 0;
  }
  if (a.script.empty()) throw CLI::RequiredError("--script, --sweep or --list");

  adversary::AttackScript script;
  if (std::filesystem::exists(a.script)) {
    std::ifstream in(a.script);
    std::stringstream text;
    text << in.rdbuf();
    script = adversary::parse_script(text.str());
  } else {
    script = adversary::builtin_script(a.script);
  }
  if (s.seed) script.seed = *s.seed;
  if (s.sources.at("rotate") != cli::Source::fallback) script.rotate = s.rotate;
  std::optional<ProfileHolder> holder;
  if (profile_given) holder.emplace(s.profile);
  auto report = adversary::run_attack(script, holder ? holder->profile : nullptr);

  if (s.format == "json") {
    std::cout << report_json(report).dump(2) << "\n";
  } else {
    std::cout << report.render();
  }
  if (!report.passed) {
    for (const auto& c : report.checks) {
      if (!c.ok) {
        std::cerr << "attack failed: " << c.what << " (" << c.detail << ")\n";
        break;
      }
    }
    return kFailed;
  }
  return 0;
}

int run_bench(const cli::Settings& s, bool timing) {
  std::vector<std::string> profiles{"toy", "ed448"};
  if (s.sources.at("profile") != cli::Source::fallback) profiles = {s.profile};
  std::vector<bool> rotations{false, true};
  if (s.sources.at("rotate") != cli::Source::fallback) rotations = {s.rotate};
  std::vector<bench::HandshakeMeasurement> runs;
  for (const auto& p : profiles) {
    ProfileHolder holder(p);
    for (bool rotate : rotations) runs.push_back(bench::measure_handshake(*holder.profile, rotate, s.seed.value_or(1)));
  }
  auto tables = bench::report_tables(std::move(runs), s.point_bits);
  std::cout << (s.format == "json" ? bench::render_json(tables, timing) : bench::render_text(tables, timing));
  for (const auto& r : tables.runs) {
    if (!r.keys_match) {
      std::cerr << "bench: " << r.profile << " handshake did not agree on a key\n";
      return kFailed;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LAKEE lightweight authenticated key exchange over CoAP"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::string config_path;
  app.add_option("--config", config_path, "INI file with defaults (also LAKEE_CONFIG)");

  Options opts;
  auto* serve_cmd = app.add_subcommand("serve", "Run the UDP handshake server");
  auto* handshake_cmd = app.add_subcommand("handshake", "Run one client handshake (in-process unless --server)");
  auto* attack_cmd = app.add_subcommand("attack", "Run an attack script or the mutation sweep");
  auto* bench_cmd = app.add_subcommand("bench", "Measure operation counts and print the comparison tables");
  auto* sizes_cmd = app.add_subcommand("sizes", "Print the nominal message size model");

  for (auto* sub : {serve_cmd, handshake_cmd, attack_cmd, bench_cmd}) {
    opts.add(sub, "profile", "toy, ed448 or a profile file");
    opts.add(sub, "seed", "Seed for every random choice");
    opts.add_flag(sub, "rotate", "Take the key-rotation branch");
    opts.add(sub, "format", "text or json");
  }
  for (auto* sub : {serve_cmd, handshake_cmd}) {
    opts.add(sub, "delta-t", "Freshness window in seconds");
    opts.add(sub, "keystore", "Keystore file");
  }
  opts.add(serve_cmd, "listen", "ADDR:PORT to bind");
  opts.add(bench_cmd, "point-bits", "Point width for the size table");
  opts.add(sizes_cmd, "point-bits", "Nominal point width in bits");
  opts.add(sizes_cmd, "format", "text or json");

  unsigned workers = 2, duration = 0;
  serve_cmd->add_option("--workers", workers, "Receive threads")->check(CLI::Range(1, 64));
  serve_cmd->add_option("--duration", duration, "Stop after this many seconds (0: until signalled)");

  std::string server, client_id = "00000000c0ffee01";
  bool timing = false;
  unsigned latency = 5;
  handshake_cmd->add_option("--server", server, "Talk to a UDP server at ADDR:PORT");
  handshake_cmd->add_option("--client-id", client_id, "Client id, 16 hex digits (with --server)");
  handshake_cmd->add_flag("--timing", timing, "Also print wall time");
  handshake_cmd->add_option("--latency", latency, "Simulated one-way link delay in ms");
  bench_cmd->add_flag("--timing", timing, "Also print wall time (not comparable to published figures)");

  AttackArgs attack_args;
  attack_cmd->add_option("--script", attack_args.script, "Built-in script name or script file");
  attack_cmd->add_flag("--list", attack_args.list, "List built-in scripts");
  attack_cmd->add_option("--sweep", attack_args.sweep, "Run the mutation sweep with this many trials");
  attack_cmd->add_option("--field", attack_args.field, "Sweep: mutate only this field");
  attack_cmd->add_option("--message", attack_args.message, "Sweep: mutate only Msg1, 2 or 3")->check(CLI::Range(1, 3));
  attack_cmd->add_flag("--identity", attack_args.identity, "Sweep: mask 0 control run");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const auto settings = opts.resolve(sub, config_path);
    if (sub == sizes_cmd) {
      auto model = bench::nominal_sizes(settings.point_bits);
      std::cout << (settings.format == "json" ? bench::render_sizes_json(model) : bench::render_sizes_text(model));
      return 0;
    }
    if (sub == bench_cmd) return run_bench(settings, timing);
    if (sub == attack_cmd) return run_attack_command(settings, attack_args);
    if (sub == serve_cmd) return serve(settings, workers, duration);
    return server.empty() ? handshake_sim(settings, timing, latency) : handshake_udp(settings, server, client_id);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const cli::SettingsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const adversary::ScriptError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const curve::ProfileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
