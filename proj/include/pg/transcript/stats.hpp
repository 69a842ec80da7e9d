#pragma once

// Per-player influence statistics aggregated over replayed games. Only scored
// rounds count; a round cut off by the game clock contributes nothing.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "pg/transcript/log.hpp"

namespace pg {

struct InfluenceStats {
  std::string name;
  Kind kind = Kind::Human;
  long games = 0;
  long wins = 0;
  long words_submitted = 0;
  long auto_rejected = 0;
  long contested_as_author = 0;
  long contested_won = 0;
  long challenges_raised = 0;
  long challenges_upheld = 0;
  long arguments_sent = 0;
  long final_score = 0;

  double persuasion_rate() const { return static_cast<double>(contested_won) / std::max(contested_as_author, 1L); }
  double challenge_success_rate() const {
    return static_cast<double>(challenges_upheld) / std::max(challenges_raised, 1L);
  }

  InfluenceStats& operator+=(const InfluenceStats& o) {
    games += o.games;
    wins += o.wins;
    words_submitted += o.words_submitted;
    auto_rejected += o.auto_rejected;
    contested_as_author += o.contested_as_author;
    contested_won += o.contested_won;
    challenges_raised += o.challenges_raised;
    challenges_upheld += o.challenges_upheld;
    arguments_sent += o.arguments_sent;
    final_score += o.final_score;
    return *this;
  }

  bool operator==(const InfluenceStats&) const = default;
};

using StatsKey = std::pair<std::string, Kind>;
using StatsTable = std::map<StatsKey, InfluenceStats>;

/// Statistics of one game, one row per participant.
inline StatsTable game_stats(const GameState& state) {
  std::map<PlayerId, InfluenceStats> rows;
  for (const auto& p : state.participants) {
    auto& r = rows[p.id];
    r.name = p.display_name;
    r.kind = p.kind;
    r.games = 1;
    auto it = state.scoreboard.find(p.id);
    r.final_score = it == state.scoreboard.end() ? 0 : it->second;
    if (state.result && std::count(state.result->winners.begin(), state.result->winners.end(), p.id)) r.wins = 1;
  }
  for (const auto& round : state.rounds) {
    for (const auto& [author, slots] : round.submissions) {
      auto& r = rows[author];
      for (const auto& slot : slots) {
        if (!slot.blank()) ++r.words_submitted;
        if (!slot.blank() && slot.status == WordStatus::AutoRejected) ++r.auto_rejected;
      }
    }
    for (const auto& ref : round.contested_queue) {
      const auto* entry = round.find(ref);
      auto& author = rows[ref.author];
      ++author.contested_as_author;
      if (entry->status == WordStatus::Approved) ++author.contested_won;
      auto ch = round.challengers.find(ref);
      if (ch == round.challengers.end()) continue;
      for (const auto& who : ch->second) {
        ++rows[who].challenges_raised;
        if (entry->status == WordStatus::Rejected) ++rows[who].challenges_upheld;
      }
    }
    for (const auto& arg : round.transcript) ++rows[arg.author].arguments_sent;
  }
  StatsTable table;
  for (auto& [_, r] : rows) {
    auto& row = table[{r.name, r.kind}];
    if (row.name.empty()) {
      row.name = r.name;
      row.kind = r.kind;
    }
    row += r;
  }
  return table;
}

inline void merge_into(StatsTable& into, const StatsTable& from) {
  for (const auto& [key, row] : from) {
    auto& dst = into[key];
    if (dst.name.empty()) {
      dst.name = row.name;
      dst.kind = row.kind;
    }
    dst += row;
  }
}

/// Replays each log and sums the per-game rows keyed by (display name, kind).
inline StatsTable compute_stats(const std::vector<std::vector<GameEvent>>& logs) {
  StatsTable table;
  for (const auto& log : logs) merge_into(table, game_stats(replay(log).state));
  return table;
}

/// Sorted *.jsonl files of a directory.
inline std::vector<std::string> list_logs(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  return paths;
}

inline StatsTable compute_stats_dir(const std::string& dir) {
  StatsTable table;
  for (const auto& path : list_logs(dir)) merge_into(table, game_stats(replay_file(path).state));
  return table;
}

inline std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline nlohmann::json stats_json(const StatsTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [_, r] : table) {
    rows.push_back({{"name", r.name},
                    {"kind", r.kind},
                    {"games", r.games},
                    {"wins", r.wins},
                    {"words_submitted", r.words_submitted},
                    {"auto_rejected", r.auto_rejected},
                    {"contested_as_author", r.contested_as_author},
                    {"contested_won", r.contested_won},
                    {"challenges_raised", r.challenges_raised},
                    {"challenges_upheld", r.challenges_upheld},
                    {"arguments_sent", r.arguments_sent},
                    {"final_score", r.final_score},
                    {"persuasion_rate", r.persuasion_rate()},
                    {"challenge_success_rate", r.challenge_success_rate()}});
  }
  return nlohmann::json{{"players", rows}};
}

inline std::string stats_csv(const StatsTable& table) {
  std::string out =
      "name,kind,games,wins,words_submitted,auto_rejected,contested_as_author,contested_won,challenges_raised,"
      "challenges_upheld,arguments_sent,final_score,persuasion_rate,challenge_success_rate\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  for (const auto& [_, r] : table) {
    out += quote(r.name) + "," + (r.kind == Kind::Human ? "HUMAN" : "ARTIFICIAL");
    for (long v : {r.games, r.wins, r.words_submitted, r.auto_rejected, r.contested_as_author, r.contested_won,
                   r.challenges_raised, r.challenges_upheld, r.arguments_sent, r.final_score})
      out += "," + std::to_string(v);
    out += "," + format_rate(r.persuasion_rate()) + "," + format_rate(r.challenge_success_rate()) + "\n";
  }
  return out;
}

}  // namespace pg
