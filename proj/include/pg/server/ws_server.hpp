#pragma once

// Websocket transport for any number of GameHosts. One text frame carries one
// JSON frame; a session's first frame must be JOIN and its "game" field picks
// (or creates) the game. Everything runs on one io_context thread, so each
// game sees a single ordered input queue.

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "pg/bot/registry.hpp"
#include "pg/core/config.hpp"
#include "pg/server/host.hpp"

namespace pg::server {

struct ServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0: pick a free port
  GameConfig config;
  std::string log_dir;  // transcripts go to <log_dir>/games/<game_id>.jsonl
  HostOptions host;
  std::chrono::milliseconds tick_interval{200};
  bool sync_writes = false;

  // In-process bots seated in `bot_game` when the server starts.
  std::vector<bot::BotSlot> bots;
  std::string bot_game = "main";
  std::uint64_t bot_seed = 0;
  std::string lexicon_path;
  std::string prompts_dir;
  bot::EndpointConfig endpoint = bot::EndpointConfig::from_env();
};

/// Game ids become file names, so they are kept to [A-Za-z0-9_-]{1,64}.
bool valid_game_id(const std::string& id);

class Session;

class WsServer {
 public:
  explicit WsServer(ServerOptions opts);  // binds immediately
  ~WsServer();
  WsServer(const WsServer&) = delete;
  WsServer& operator=(const WsServer&) = delete;

  unsigned short port() const;

  void run();   // blocks until stop()
  void stop();  // safe from any thread

 private:
  friend class Session;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pg::server
