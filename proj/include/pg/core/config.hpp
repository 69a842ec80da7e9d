#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pg/core/error.hpp"
#include "pg/core/text.hpp"

namespace pg {

inline std::vector<std::string> default_categories() {
  return {"foods",   "places",  "first names", "films",       "fowl",      "colors",
          "animals", "sports",  "occupations", "instruments", "beverages", "tools"};
}

inline std::vector<std::string> default_alphabet() {
  std::vector<std::string> letters;
  for (char c = 'A'; c <= 'Z'; ++c) {
    if (c == 'Q' || c == 'X' || c == 'Z') continue;
    letters.emplace_back(1, c);
  }
  return letters;
}

struct GameConfig {
  std::vector<std::string> categories = default_categories();
  std::vector<std::string> alphabet = default_alphabet();
  int submission_seconds = 180;
  int debate_seconds = 120;
  int vote_seconds = 30;
  int victory_points = 21;
  int max_rounds = 26;
  int max_game_seconds = 1800;
  int min_players = 4;
  int max_players = 6;
  std::uint64_t rng_seed = 0;

  bool operator==(const GameConfig&) const = default;

  // max_rounds may exceed the alphabet; the alphabet then ends the game first.
  int effective_max_rounds() const { return std::min<int>(max_rounds, static_cast<int>(alphabet.size())); }

  void validate() const {
    auto bad = [](const std::string& why) { fail(ErrorCode::InvalidConfig, why); };
    if (categories.empty()) bad("categories must be nonempty");
    for (const auto& c : categories)
      if (normalize_word(c).empty()) bad("blank category label");
    if (alphabet.empty()) bad("alphabet must be nonempty");
    std::set<std::string> seen;
    for (const auto& letter : alphabet) {
      if (!is_single_grapheme(letter)) bad("alphabet entry '" + letter + "' is not a single grapheme");
      if (!seen.insert(normalize_word(letter)).second) bad("duplicate alphabet letter '" + letter + "'");
    }
    if (submission_seconds <= 0 || debate_seconds <= 0 || vote_seconds <= 0 || max_game_seconds <= 0)
      bad("timers must be positive");
    if (victory_points <= 0) bad("victory_points must be positive");
    if (max_rounds <= 0) bad("max_rounds must be positive");
    if (min_players < 1) bad("min_players must be at least 1");
    if (min_players > max_players) bad("min_players exceeds max_players");
  }
};

inline void to_json(nlohmann::json& j, const GameConfig& c) {
  j = nlohmann::json{{"categories", c.categories},
                     {"alphabet", c.alphabet},
                     {"submission_seconds", c.submission_seconds},
                     {"debate_seconds", c.debate_seconds},
                     {"vote_seconds", c.vote_seconds},
                     {"victory_points", c.victory_points},
                     {"max_rounds", c.max_rounds},
                     {"max_game_seconds", c.max_game_seconds},
                     {"min_players", c.min_players},
                     {"max_players", c.max_players},
                     {"rng_seed", c.rng_seed}};
}

/// Missing fields keep their defaults; unknown fields are rejected so that a
/// misspelt key does not silently fall back to a default.
inline void from_json(const nlohmann::json& j, GameConfig& c) {
  if (!j.is_object()) fail(ErrorCode::InvalidConfig, "config must be a JSON object");
  static const std::set<std::string> known = {"categories",     "alphabet",     "submission_seconds", "debate_seconds",
                                              "vote_seconds",   "victory_points", "max_rounds",       "max_game_seconds",
                                              "min_players",    "max_players",  "rng_seed"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) fail(ErrorCode::InvalidConfig, "unknown config field '" + key + "'");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("categories", c.categories);
    get("alphabet", c.alphabet);
    get("submission_seconds", c.submission_seconds);
    get("debate_seconds", c.debate_seconds);
    get("vote_seconds", c.vote_seconds);
    get("victory_points", c.victory_points);
    get("max_rounds", c.max_rounds);
    get("max_game_seconds", c.max_game_seconds);
    get("min_players", c.min_players);
    get("max_players", c.max_players);
    get("rng_seed", c.rng_seed);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
}

inline GameConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::InvalidConfig, e.what());
  }
  GameConfig c = j.get<GameConfig>();
  c.validate();
  return c;
}

inline GameConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidConfig, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pg
