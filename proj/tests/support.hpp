#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "pg/core/game.hpp"

namespace pgt {

using namespace pg;

inline constexpr TimestampMs kT0 = 1'700'000'000'000;

inline PlayerId pid(int i) { return PlayerId("p" + std::to_string(i)); }

/// n participants p1..pn; the last `artificial` of them are artificial.
inline std::vector<Participant> roster(int n, int artificial = 1) {
  std::vector<Participant> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(Participant{pid(i), "player" + std::to_string(i), i > n - artificial ? Kind::Artificial : Kind::Human, true});
  return out;
}

inline GameConfig worked_example_config() {
  GameConfig c;
  c.categories = {"foods", "places", "first names", "films", "fowl", "colors"};
  c.alphabet = {"F"};
  c.max_rounds = 1;
  return c;
}

inline const std::vector<std::string>& worked_example_words() {
  static const std::vector<std::string> w = {"fruit", "France", "Frank", "Fargo", "flamingos", "fuchsia"};
  return w;
}

inline std::vector<SubmissionItem> items(const std::vector<std::string>& words) {
  std::vector<SubmissionItem> out;
  for (std::size_t i = 0; i < words.size(); ++i) out.push_back({static_cast<int>(i), words[i]});
  return out;
}

/// Drives a Game directly with explicit timestamps.
struct Table {
  explicit Table(GameConfig cfg, int players = 4, int artificial = 1) : game(std::move(cfg)) {
    for (const auto& p : roster(players, artificial)) game.apply(JoinInput{p.id, p.display_name, p.kind}, now);
  }

  std::vector<Transition> start() { return game.apply(StartInput{}, now); }
  std::vector<Transition> submit(int player, const std::vector<std::string>& words) {
    return game.apply(SubmitInput{pid(player), round().round_number, items(words)}, now);
  }
  std::vector<Transition> challenge(int who, int author, int category) {
    return game.apply(ChallengeInput{pid(who), WordRef{round().round_number, pid(author), category}}, now);
  }
  std::vector<Transition> argue(int who, const WordRef& ref, const std::string& text) {
    return game.apply(ArgueInput{pid(who), ref, text}, now);
  }
  std::vector<Transition> vote(int who, const WordRef& ref, Choice c) {
    return game.apply(VoteInput{pid(who), ref, c}, now);
  }
  /// Jumps to the next deadline and fires it.
  std::vector<Transition> advance() {
    const auto d = game.next_deadline();
    if (d) now = std::max(now, *d);
    return game.apply(TickInput{}, now);
  }
  const RoundState& round() const { return *game.state().current; }
  const GameState& state() const { return game.state(); }

  Game game;
  TimestampMs now = kT0;
};

template <class T>
int count_of(const std::vector<Transition>& ts) {
  int n = 0;
  for (const auto& t : ts) n += std::holds_alternative<T>(t);
  return n;
}

template <class T>
const T* find_of(const std::vector<Transition>& ts) {
  for (const auto& t : ts)
    if (auto* x = std::get_if<T>(&t)) return x;
  return nullptr;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pgtest-" + name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string data_path(const std::string& rel) { return std::string(PG_DATA_DIR) + "/" + rel; }

}  // namespace pgt
