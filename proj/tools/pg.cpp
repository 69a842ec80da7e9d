// pg: serve, simulate, replay, stats, llm-stub.

#include <csignal>
#include <chrono>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "pg/bot/stub_endpoint.hpp"
#include "pg/server/ws_server.hpp"
#include "pg/sim/simulate.hpp"
#include "pg/transcript/log.hpp"
#include "pg/transcript/stats.hpp"

namespace {

const std::string kDataDir = PG_DATA_DIR;

std::pair<std::string, unsigned short> split_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected addr:port");
  return {bind.substr(0, colon), static_cast<unsigned short>(std::stoi(bind.substr(colon + 1)))};
}

pg::GameConfig config_from(const std::string& path) { return path.empty() ? pg::GameConfig{} : pg::load_config(path); }

// Blocks SIGINT/SIGTERM on every thread and waits for one on the caller.
void block_signals(sigset_t& set) {
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
}

int wait_signal(sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
  return sig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Categories with disclosed artificial participants"};
  app.require_subcommand(1);

  std::string config_path, lexicon_path = kDataDir + "/lexicon.tsv", prompts_dir = kDataDir + "/prompts";
  std::string llm_url, bots_spec;
  auto add_bot_options = [&](CLI::App* sub) {
    sub->add_option("--lexicon", lexicon_path, "default lexicon for scripted bots");
    sub->add_option("--prompts", prompts_dir, "prompt template directory for llm bots");
    sub->add_option("--llm-url", llm_url, "completion endpoint (default $PG_LLM_URL)");
  };

  auto* serve = app.add_subcommand("serve", "run the websocket game server");
  std::string bind = "127.0.0.1:8080", log_dir = "logs", game_id = "main";
  double lobby_seconds = 30;
  bool sync = false;
  serve->add_option("--config", config_path, "GameConfig JSON file")->check(CLI::ExistingFile);
  serve->add_option("--bind", bind, "listen address addr:port");
  serve->add_option("--log-dir", log_dir, "transcript directory");
  serve->add_option("--bots", bots_spec, "bots to seat in --game, e.g. lexicon,lexicon,llm");
  serve->add_option("--game", game_id, "game id for --bots");
  serve->add_option("--lobby-seconds", lobby_seconds, "lobby countdown once the roster can start");
  serve->add_flag("--fsync", sync, "fsync every transcript line");
  add_bot_options(serve);

  auto* simulate = app.add_subcommand("simulate", "run headless bot games on a virtual clock");
  int games = 10, jobs = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "sim-out";
  simulate->add_option("--config", config_path, "GameConfig JSON file")->check(CLI::ExistingFile);
  simulate->add_option("--bots", bots_spec, "roster spec")->required();
  simulate->add_option("--games", games, "number of games");
  simulate->add_option("--seed", seed, "base seed; game i uses seed + i");
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--jobs", jobs, "games run in parallel");
  add_bot_options(simulate);

  auto* replay_cmd = app.add_subcommand("replay", "replay a transcript and print the final scoreboard");
  std::string replay_path;
  replay_cmd->add_option("file", replay_path, "transcript .jsonl")->required();

  auto* stats_cmd = app.add_subcommand("stats", "aggregate influence statistics over a directory of transcripts");
  std::string stats_dir, format = "json";
  stats_cmd->add_option("dir", stats_dir, "directory of .jsonl transcripts")->required();
  stats_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* stub_cmd = app.add_subcommand("llm-stub", "serve a canned completion endpoint");
  std::string stub_bind = "127.0.0.1:8090", stub_mode = "fixed", stub_text = "REJECT";
  stub_cmd->add_option("--bind", stub_bind, "listen address addr:port");
  stub_cmd->add_option("--mode", stub_mode, "echo, fixed or fail")->check(CLI::IsMember({"echo", "fixed", "fail"}));
  stub_cmd->add_option("--text", stub_text, "reply text for --mode fixed");

  CLI11_PARSE(app, argc, argv);

  auto factory_endpoint = [&] {
    auto ep = pg::bot::EndpointConfig::from_env();
    if (!llm_url.empty()) ep.url = llm_url;
    return ep;
  };

  try {
    if (*serve) {
      pg::server::ServerOptions o;
      std::tie(o.address, o.port) = split_bind(bind);
      o.config = config_from(config_path);
      o.log_dir = log_dir;
      o.host.lobby_ms = static_cast<pg::TimestampMs>(lobby_seconds * 1000);
      o.sync_writes = sync;
      if (!bots_spec.empty()) o.bots = pg::bot::parse_bot_spec(bots_spec);
      o.bot_game = game_id;
      o.lexicon_path = lexicon_path;
      o.prompts_dir = prompts_dir;
      o.endpoint = factory_endpoint();

      sigset_t set;
      block_signals(set);
      pg::server::WsServer server(std::move(o));
      std::cerr << "listening on " << split_bind(bind).first << ":" << server.port() << "\n";
      std::thread loop([&] { server.run(); });
      wait_signal(set);
      server.stop();
      loop.join();
      return 0;
    }

    if (*simulate) {
      pg::sim::SimulationPlan plan;
      plan.games = games;
      plan.seed = seed;
      plan.roster = pg::bot::parse_bot_spec(bots_spec);
      plan.config = config_from(config_path);
      plan.out_dir = out_dir;
      plan.jobs = jobs;
      pg::bot::BotFactory factory;
      factory.default_lexicon_path = lexicon_path;
      factory.prompts_dir = prompts_dir;
      factory.endpoint = factory_endpoint();

      const auto t0 = std::chrono::steady_clock::now();
      const auto summary = pg::sim::run_simulation(plan, factory);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      int valid = 0;
      for (const auto& g : summary.games) {
        if (g.valid) ++valid;
        else std::cerr << g.game_id << ": " << g.problem << "\n";
      }
      std::cout << summary.games.size() << " games, " << valid << " validated, " << secs << " s, output in " << out_dir
                << "\n";
      return summary.all_valid ? 0 : 1;
    }

    if (*replay_cmd) {
      const auto r = pg::replay_file(replay_path);
      nlohmann::json doc{{"game_id", r.game_id}, {"board", pg::scoreboard_json(r.state.scoreboard)}};
      doc["result"] = r.state.result ? pg::codec::result_json(*r.state.result) : nlohmann::json(nullptr);
      std::cout << doc.dump(2) << "\n";
      return 0;
    }

    if (*stats_cmd) {
      const auto table = pg::compute_stats_dir(stats_dir);
      if (format == "csv") std::cout << pg::stats_csv(table);
      else std::cout << pg::stats_json(table).dump(2) << "\n";
      return 0;
    }

    if (*stub_cmd) {
      using Mode = pg::bot::StubCompletionServer::Mode;
      pg::bot::StubCompletionServer stub;
      stub.set_mode(stub_mode == "echo" ? Mode::Echo : stub_mode == "fail" ? Mode::Fail : Mode::Fixed);
      stub.set_fixed_text(stub_text);
      const auto [host, port] = split_bind(stub_bind);
      sigset_t set;
      block_signals(set);
      stub.start(host, port);
      std::cerr << "stub endpoint at " << stub.url() << "\n";
      wait_signal(set);
      stub.stop();
      return 0;
    }
  } catch (const pg::CorruptLogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
