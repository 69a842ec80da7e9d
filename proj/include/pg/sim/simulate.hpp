#pragma once

// Headless bot tournaments on a virtual clock. Each game runs through the
// same GameHost as a live server; once the bots have acted the clock jumps
// straight to the next deadline.

#include <atomic>
#include <exception>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "pg/bot/registry.hpp"
#include "pg/server/host.hpp"
#include "pg/transcript/stats.hpp"

namespace pg::sim {

inline constexpr TimestampMs kVirtualEpochMs = 1'700'000'000'000;

struct SimulationPlan {
  int games = 1;
  std::uint64_t seed = 0;
  std::vector<bot::BotSlot> roster;
  GameConfig config;
  std::string out_dir;  // empty: keep transcripts in memory only
  int jobs = 1;

  void validate() const {
    if (games < 1) fail(ErrorCode::InvalidPlan, "games must be at least 1");
    try {
      config.validate();
    } catch (const Error& e) {
      fail(ErrorCode::InvalidPlan, e.what());
    }
    const auto n = static_cast<int>(roster.size());
    if (n < config.min_players || n > config.max_players)
      fail(ErrorCode::InvalidPlan, "roster of " + std::to_string(n) + " outside [" + std::to_string(config.min_players) +
                                       ", " + std::to_string(config.max_players) + "]");
    if (jobs < 1) fail(ErrorCode::InvalidPlan, "jobs must be at least 1");
  }
};

struct GameSummary {
  std::string game_id;
  std::string log_path;
  std::vector<GameEvent> events;
  std::string live_board;    // dump of the final SCORES board as broadcast
  std::string replay_board;  // dump of the replayed scoreboard
  std::optional<GameResult> result;
  StatsTable stats;
  bool valid = false;
  std::string problem;
};

struct SimulationSummary {
  std::vector<GameSummary> games;
  StatsTable stats;
  bool all_valid = true;
};

inline std::string game_id_for(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim-%04d", index);
  return buf;
}

inline std::uint64_t bot_seed(std::uint64_t game_seed, std::size_t slot) {
  std::uint64_t z = game_seed + 0x9E3779B97F4A7C15ULL * (slot + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline GameSummary run_game(const SimulationPlan& plan, int index, bot::BotFactory& factory) {
  GameSummary g;
  g.game_id = game_id_for(index);
  GameConfig cfg = plan.config;
  cfg.rng_seed = plan.seed + static_cast<std::uint64_t>(index);

  TranscriptLog log;
  if (!plan.out_dir.empty()) {
    const auto dir = std::filesystem::path(plan.out_dir) / "games";
    std::filesystem::create_directories(dir);
    g.log_path = (dir / (g.game_id + ".jsonl")).string();
    log = TranscriptLog::open_file(g.log_path);
  }

  TimestampMs now = kVirtualEpochMs;
  server::GameHost host(g.game_id, cfg, std::move(log), now, server::HostOptions{0, false});
  for (std::size_t slot = 0; slot < plan.roster.size(); ++slot) {
    const std::string name = plan.roster[slot].policy + "-" + std::to_string(slot + 1);
    host.seat_bot(factory.make(plan.roster[slot], name, bot_seed(cfg.rng_seed, slot)), now);
  }

  std::string last_board;
  auto capture = [&](const std::vector<server::Outbound>& frames) {
    for (const auto& f : frames)
      if (f.frame.at("type") == "SCORES") last_board = f.frame.at("payload").at("board").dump();
  };
  capture(host.start(now));
  for (int guard = 0; !host.state().over(); ++guard) {
    if (host.paused()) fail(ErrorCode::StorageFailure, "transcript write failed for " + g.game_id);
    const auto next = host.next_deadline();
    if (!next || guard > 1'000'000) fail(ErrorCode::InvalidPlan, g.game_id + " stalled");
    now = std::max(now, *next);
    capture(host.tick(now));
  }
  if (host.paused()) fail(ErrorCode::StorageFailure, "transcript write failed for " + g.game_id);

  g.events = host.log().events();
  g.live_board = last_board.empty() ? scoreboard_json(host.state().scoreboard).dump() : last_board;
  g.result = host.state().result;

  try {
    const ReplayResult r = g.log_path.empty() ? replay(g.events) : replay_file(g.log_path);
    g.replay_board = scoreboard_json(r.state.scoreboard).dump();
    g.stats = game_stats(r.state);
    g.valid = g.replay_board == g.live_board;
    if (!g.valid) g.problem = "replayed scoreboard differs from live";
  } catch (const Error& e) {
    g.problem = e.what();
  }
  return g;
}

inline SimulationSummary run_simulation(const SimulationPlan& plan, bot::BotFactory& factory) {
  plan.validate();
  SimulationSummary summary;
  summary.games.resize(static_cast<std::size_t>(plan.games));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(plan.games));
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < plan.games;) {
      try {
        summary.games[static_cast<std::size_t>(i)] = run_game(plan, i, factory);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int jobs = std::min(plan.jobs, plan.games);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& g : summary.games) {
    merge_into(summary.stats, g.stats);
    summary.all_valid = summary.all_valid && g.valid;
  }
  if (!plan.out_dir.empty()) {
    std::ofstream(std::filesystem::path(plan.out_dir) / "stats.json") << stats_json(summary.stats).dump(2) << "\n";
    std::ofstream(std::filesystem::path(plan.out_dir) / "stats.csv") << stats_csv(summary.stats);
  }
  return summary;
}

}  // namespace pg::sim
