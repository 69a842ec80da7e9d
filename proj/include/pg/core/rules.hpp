#pragma once

// Round-level rules. Every mutating operation validates its whole input before
// touching the round, so a thrown pg::Error leaves the RoundState unchanged.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pg/core/config.hpp"
#include "pg/core/error.hpp"
#include "pg/core/text.hpp"
#include "pg/core/types.hpp"

namespace pg {

inline constexpr std::size_t kMaxArgumentGraphemes = 2000;
// Debate floor per contested word.
inline constexpr int kPartyArgumentLimit = 3;
inline constexpr int kBystanderArgumentLimit = 1;

using Rng = std::mt19937_64;

/// Uniform integer in [0, n) by rejection sampling; unlike
/// std::uniform_int_distribution the sequence is identical on every standard
/// library.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - (Rng::max() % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline std::string draw_letter(Rng& rng, const std::set<std::string>& used, const std::vector<std::string>& alphabet) {
  std::vector<const std::string*> remaining;
  for (const auto& letter : alphabet)
    if (!used.count(letter)) remaining.push_back(&letter);
  if (remaining.empty()) fail(ErrorCode::AlphabetExhausted, "every letter of the alphabet has been drawn");
  return *remaining[uniform_index(rng, remaining.size())];
}

inline bool is_registered(const std::vector<Participant>& participants, const PlayerId& id) {
  return std::any_of(participants.begin(), participants.end(), [&](const Participant& p) { return p.id == id; });
}

inline RoundState make_round(int round_number, std::string letter, const std::vector<Participant>& participants,
                             std::size_t category_count, TimestampMs deadline) {
  RoundState r;
  r.round_number = round_number;
  r.letter = std::move(letter);
  r.phase = Phase::Submission;
  r.phase_deadline_ms = deadline;
  for (const auto& p : participants) {
    auto& slots = r.submissions[p.id];
    for (std::size_t c = 0; c < category_count; ++c) slots.push_back(WordEntry{p.id, static_cast<int>(c), "", "", WordStatus::Pending});
  }
  return r;
}

struct SubmissionItem {
  int category = 0;
  std::string word;

  bool operator==(const SubmissionItem&) const = default;
};

inline void accept_submission(RoundState& round, const PlayerId& player, std::span<const SubmissionItem> entries,
                              TimestampMs now) {
  if (round.phase != Phase::Submission) fail(ErrorCode::WrongPhase, "submissions are closed");
  auto slots = round.submissions.find(player);
  if (slots == round.submissions.end()) fail(ErrorCode::UnknownPlayer, "'" + player.value + "' is not seated in this round");
  if (now >= round.phase_deadline_ms) fail(ErrorCode::DeadlinePassed, "submission deadline has passed");
  const auto category_count = static_cast<int>(slots->second.size());
  for (const auto& e : entries)
    if (e.category < 0 || e.category >= category_count)
      fail(ErrorCode::UnknownCategory, "category index " + std::to_string(e.category) + " out of range");
  for (const auto& e : entries) {
    auto& slot = slots->second[static_cast<std::size_t>(e.category)];
    slot.raw = e.word;
    slot.normalized = normalize_word(e.word);
    slot.status = WordStatus::Pending;
  }
  round.submitted.insert(player);
}

/// Applies the mechanical letter check and opens the reveal window.
inline void close_submissions(RoundState& round, TimestampMs reveal_deadline) {
  if (round.phase != Phase::Submission) fail(ErrorCode::WrongPhase, "round is not accepting submissions");
  for (auto& [_, slots] : round.submissions)
    for (auto& slot : slots)
      if (slot.blank() || !starts_with_letter(slot.normalized, round.letter)) slot.status = WordStatus::AutoRejected;
  round.phase = Phase::Reveal;
  round.phase_deadline_ms = reveal_deadline;
}

inline void raise_challenge(RoundState& round, const std::vector<Participant>& participants, const PlayerId& challenger,
                            const WordRef& ref) {
  if (round.phase != Phase::Reveal && round.phase != Phase::Debate)
    fail(ErrorCode::WrongPhase, "challenges are only accepted during reveal and debate");
  if (!is_registered(participants, challenger)) fail(ErrorCode::UnknownPlayer, "'" + challenger.value + "' is not a participant");
  WordEntry* entry = round.find(ref);
  if (!entry) fail(ErrorCode::UnknownWord, "no such word in this round");
  if (ref.author == challenger) fail(ErrorCode::SelfChallenge, "authors cannot challenge their own words");
  if (entry->status != WordStatus::Pending && entry->status != WordStatus::Contested)
    fail(ErrorCode::NotChallengeable, "word is already settled");

  entry->status = WordStatus::Contested;
  if (std::find(round.contested_queue.begin(), round.contested_queue.end(), ref) == round.contested_queue.end())
    round.contested_queue.push_back(ref);
  auto& who = round.challengers[ref];
  if (std::find(who.begin(), who.end(), challenger) == who.end()) who.push_back(challenger);
}

/// Approves every unchallenged word. With nothing contested the round moves
/// straight to SCORED; otherwise the first contested word opens for debate.
inline void close_reveal(RoundState& round, TimestampMs debate_deadline) {
  if (round.phase != Phase::Reveal) fail(ErrorCode::WrongPhase, "round is not in reveal");
  for (auto& [_, slots] : round.submissions)
    for (auto& slot : slots)
      if (slot.status == WordStatus::Pending) slot.status = WordStatus::UncontestedApproved;
  round.debate_index = 0;
  if (round.contested_queue.empty()) {
    round.phase = Phase::Scored;
  } else {
    round.phase = Phase::Debate;
    round.phase_deadline_ms = debate_deadline;
  }
}

inline int argument_limit(const RoundState& round, const WordRef& ref, const PlayerId& author) {
  if (ref.author == author) return kPartyArgumentLimit;
  auto it = round.challengers.find(ref);
  if (it != round.challengers.end() && std::find(it->second.begin(), it->second.end(), author) != it->second.end())
    return kPartyArgumentLimit;
  return kBystanderArgumentLimit;
}

inline int arguments_sent(const RoundState& round, const WordRef& ref, const PlayerId& author) {
  return static_cast<int>(std::count_if(round.transcript.begin(), round.transcript.end(),
                                        [&](const Argument& a) { return a.target == ref && a.author == author; }));
}

inline const Argument& record_argument(RoundState& round, const std::vector<Participant>& participants,
                                       const PlayerId& author, const WordRef& ref, const std::string& text,
                                       std::uint64_t seq) {
  if (round.phase != Phase::Debate) fail(ErrorCode::WrongPhase, "no debate is open");
  if (!is_registered(participants, author)) fail(ErrorCode::UnknownPlayer, "'" + author.value + "' is not a participant");
  if (round.current_word() != ref) fail(ErrorCode::WrongWord, "that word is not under debate");
  if (normalize_word(text).empty()) fail(ErrorCode::EmptyArgument, "argument text is empty");
  if (grapheme_count(text) > kMaxArgumentGraphemes)
    fail(ErrorCode::TooLong, "argument exceeds " + std::to_string(kMaxArgumentGraphemes) + " characters");
  if (arguments_sent(round, ref, author) >= argument_limit(round, ref, author))
    fail(ErrorCode::FloorExhausted, "argument budget for this word is spent");
  round.transcript.push_back(Argument{author, ref, text, seq});
  return round.transcript.back();
}

inline void open_vote(RoundState& round, TimestampMs vote_deadline) {
  if (round.phase != Phase::Debate) fail(ErrorCode::WrongPhase, "no debate is open");
  round.phase = Phase::Voting;
  round.phase_deadline_ms = vote_deadline;
}

inline void cast_vote(RoundState& round, const std::vector<Participant>& participants, const PlayerId& voter,
                      const WordRef& ref, Choice choice) {
  if (round.phase != Phase::Voting) fail(ErrorCode::WrongPhase, "no vote is open");
  if (round.current_word() != ref) fail(ErrorCode::WrongWord, "that word is not being voted on");
  if (!is_registered(participants, voter)) fail(ErrorCode::UnknownVoter, "'" + voter.value + "' is not a participant");
  round.ballots[ref][voter] = choice;
}

/// Strict majority of cast ballots from registered participants; ties and
/// empty ballot boxes reject.
inline Tally tally_votes(const std::map<PlayerId, Choice>& ballots, const std::vector<Participant>& participants) {
  Tally t;
  for (const auto& [voter, choice] : ballots) {
    if (!is_registered(participants, voter)) continue;
    (choice == Choice::Approve ? t.approve : t.reject)++;
  }
  t.outcome = t.approve > t.reject ? Outcome::Approved : Outcome::Rejected;
  return t;
}

/// Settles the word under vote and moves to the next contested word, or to
/// SCORED when the queue is done.
inline Tally close_vote(RoundState& round, const std::vector<Participant>& participants, TimestampMs next_debate_deadline) {
  const auto ref = round.current_word();
  if (round.phase != Phase::Voting || !ref) fail(ErrorCode::WrongPhase, "no vote is open");
  static const std::map<PlayerId, Choice> no_ballots;
  auto it = round.ballots.find(*ref);
  const Tally t = tally_votes(it == round.ballots.end() ? no_ballots : it->second, participants);
  round.find(*ref)->status = t.outcome == Outcome::Approved ? WordStatus::Approved : WordStatus::Rejected;
  round.tallies[*ref] = t;
  ++round.debate_index;
  if (round.debate_index < round.contested_queue.size()) {
    round.phase = Phase::Debate;
    round.phase_deadline_ms = next_debate_deadline;
  } else {
    round.phase = Phase::Scored;
  }
  return t;
}

/// One event per (player, category) slot: 2 for an approved word no other
/// approved entry in the category shares, 1 for a shared approved word, 0
/// otherwise.
inline std::vector<ScoreEvent> score_round(const RoundState& round) {
  std::map<std::pair<int, std::string>, int> approved_count;
  for (const auto& [_, slots] : round.submissions) {
    for (const auto& slot : slots) {
      if (!is_terminal(slot.status))
        fail(ErrorCode::NonTerminalEntry, "entry of '" + slot.author.value + "' is not settled");
      if (is_approved(slot.status) && !slot.blank()) ++approved_count[{slot.category_index, slot.normalized}];
    }
  }
  std::vector<ScoreEvent> events;
  for (const auto& [player, slots] : round.submissions) {
    for (const auto& slot : slots) {
      int points = 0;
      if (is_approved(slot.status) && !slot.blank())
        points = approved_count[{slot.category_index, slot.normalized}] > 1 ? 1 : 2;
      events.push_back(ScoreEvent{player, round.round_number, slot.category_index, points});
    }
  }
  return events;
}

inline std::vector<RankEntry> rank(const Scoreboard& board, const std::vector<Participant>& participants) {
  std::vector<RankEntry> ranking;
  for (const auto& p : participants) {
    auto it = board.find(p.id);
    ranking.push_back(RankEntry{p.id, p.display_name, p.kind, it == board.end() ? 0 : it->second});
  }
  std::sort(ranking.begin(), ranking.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.display_name != b.display_name) return a.display_name < b.display_name;
    return a.player < b.player;
  });
  return ranking;
}

/// Returns the final result when any end condition holds, otherwise nullopt.
/// Every player sharing the top score is a winner.
inline std::optional<GameResult> check_termination(const Scoreboard& board, const std::vector<Participant>& participants,
                                                   std::int64_t elapsed_seconds, int round_number,
                                                   const GameConfig& config, bool alphabet_exhausted = false) {
  std::optional<EndReason> reason;
  const bool victory =
      std::any_of(board.begin(), board.end(), [&](const auto& kv) { return kv.second >= config.victory_points; });
  if (victory) reason = EndReason::Victory;
  else if (elapsed_seconds >= config.max_game_seconds) reason = EndReason::TimeUp;
  else if (round_number >= config.max_rounds) reason = EndReason::MaxRounds;
  else if (alphabet_exhausted) reason = EndReason::AlphabetExhausted;
  if (!reason) return std::nullopt;

  GameResult result;
  result.reason = *reason;
  result.ranking = rank(board, participants);
  if (!result.ranking.empty()) {
    const int top = result.ranking.front().score;
    for (const auto& r : result.ranking)
      if (r.score == top) result.winners.push_back(r.player);
  }
  return result;
}

}  // namespace pg
