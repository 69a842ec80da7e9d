#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "pg/core/game.hpp"

namespace pg::bot {

/// What one seat at the table can see: never other players' words before
/// the reveal, never ballots before the tally.
struct BotContext {
  GameConfig config;
  PlayerId self;
  std::vector<Participant> roster;
  int round = 0;
  std::string letter;
  Phase phase = Phase::Submission;
  TimestampMs deadline = 0;
  std::vector<WordEntry> own_entries;
  std::vector<WordEntry> revealed;
  std::optional<WordRef> contested;
  std::string contested_word;
  std::vector<PlayerId> challengers;
  std::vector<Argument> debate;
  Scoreboard scoreboard;
  int own_score = 0;

  const std::string& category_label(int index) const { return config.categories.at(static_cast<std::size_t>(index)); }

  bool is_party(const PlayerId& who) const {
    if (!contested) return false;
    return contested->author == who || std::find(challengers.begin(), challengers.end(), who) != challengers.end();
  }

  const WordEntry* revealed_entry(const WordRef& ref) const {
    for (const auto& e : revealed)
      if (e.author == ref.author && e.category_index == ref.category && ref.round == round) return &e;
    return nullptr;
  }
};

inline BotContext make_context(const GameState& state, const PlayerId& self) {
  BotContext ctx;
  ctx.config = state.config;
  ctx.self = self;
  ctx.roster = state.participants;
  ctx.scoreboard = state.scoreboard;
  if (auto it = state.scoreboard.find(self); it != state.scoreboard.end()) ctx.own_score = it->second;
  if (!state.current) return ctx;

  const RoundState& r = *state.current;
  ctx.round = r.round_number;
  ctx.letter = r.letter;
  ctx.phase = r.phase;
  ctx.deadline = r.phase_deadline_ms;
  if (auto it = r.submissions.find(self); it != r.submissions.end()) ctx.own_entries = it->second;
  if (r.phase != Phase::Submission) ctx.revealed = r.all_entries();
  if (auto ref = r.current_word()) {
    ctx.contested = *ref;
    ctx.contested_word = r.find(*ref)->raw;
    if (auto ch = r.challengers.find(*ref); ch != r.challengers.end()) ctx.challengers = ch->second;
    for (const auto& a : r.transcript)
      if (a.target == *ref) ctx.debate.push_back(a);
  }
  return ctx;
}

}  // namespace pg::bot
