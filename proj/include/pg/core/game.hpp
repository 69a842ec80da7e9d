#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pg/core/config.hpp"
#include "pg/core/error.hpp"
#include "pg/core/rules.hpp"
#include "pg/core/types.hpp"

namespace pg {

// ---- inputs -----------------------------------------------------------------

struct JoinInput {
  PlayerId id;
  std::string name;
  Kind kind = Kind::Human;
  bool operator==(const JoinInput&) const = default;
};
struct LeaveInput {
  PlayerId id;
  bool operator==(const LeaveInput&) const = default;
};
struct DisconnectInput {
  PlayerId id;
  bool operator==(const DisconnectInput&) const = default;
};
struct ReconnectInput {
  PlayerId id;
  bool operator==(const ReconnectInput&) const = default;
};
struct StartInput {
  bool operator==(const StartInput&) const = default;
};
struct SubmitInput {
  PlayerId player;
  int round = 0;
  std::vector<SubmissionItem> entries;
  bool operator==(const SubmitInput&) const = default;
};
struct ChallengeInput {
  PlayerId challenger;
  WordRef ref;
  bool operator==(const ChallengeInput&) const = default;
};
struct ArgueInput {
  PlayerId author;
  WordRef ref;
  std::string text;
  bool operator==(const ArgueInput&) const = default;
};
struct VoteInput {
  PlayerId voter;
  WordRef ref;
  Choice choice = Choice::Approve;
  bool operator==(const VoteInput&) const = default;
};
struct TickInput {
  bool operator==(const TickInput&) const = default;
};

using Input = std::variant<JoinInput, LeaveInput, DisconnectInput, ReconnectInput, StartInput, SubmitInput, ChallengeInput, ArgueInput,
                           VoteInput, TickInput>;

// ---- transitions ------------------------------------------------------------

struct RosterChanged {
  std::vector<Participant> roster;
};
struct RoundStarted {
  int round = 0;
  std::string letter;
  TimestampMs deadline = 0;
};
struct Submitted {
  int round = 0;
  PlayerId player;
};
struct Revealed {
  int round = 0;
  std::vector<WordEntry> entries;
  TimestampMs deadline = 0;
};
struct Challenged {
  WordRef ref;
  PlayerId challenger;
};
struct DebateOpened {
  WordRef ref;
  std::string word;
  std::vector<PlayerId> challengers;
  TimestampMs deadline = 0;
};
struct Argued {
  Argument argument;
};
struct VoteOpened {
  WordRef ref;
  TimestampMs deadline = 0;
};
struct Voted {
  WordRef ref;
  PlayerId voter;
};
struct Tallied {
  WordRef ref;
  Tally tally;
};
struct Scored {
  int round = 0;
  Scoreboard board;
  std::vector<ScoreEvent> events;
};
struct Ended {
  GameResult result;
};

using Transition = std::variant<RosterChanged, RoundStarted, Submitted, Revealed, Challenged, DebateOpened, Argued,
                                VoteOpened, Voted, Tallied, Scored, Ended>;

// ---- state ------------------------------------------------------------------

struct GameState {
  GameConfig config;
  std::vector<Participant> participants;
  std::vector<RoundState> rounds;
  std::optional<RoundState> current;
  // A round cut short by the game clock; never scored.
  std::optional<RoundState> abandoned;
  Scoreboard scoreboard;
  std::vector<ScoreEvent> score_events;
  std::set<std::string> used_letters;
  std::vector<std::string> letter_sequence;
  std::uint64_t next_argument_seq = 1;
  std::optional<TimestampMs> started_at_ms;
  std::int64_t elapsed_seconds = 0;
  std::optional<GameResult> result;
  Rng rng;

  bool started() const { return started_at_ms.has_value(); }
  bool over() const { return result.has_value(); }

  const Participant* participant(const PlayerId& id) const {
    auto it = std::find_if(participants.begin(), participants.end(), [&](const Participant& p) { return p.id == id; });
    return it == participants.end() ? nullptr : &*it;
  }
};

/// The complete rules engine for one game. Inputs are applied in caller
/// order; the clock only enters through the `now` argument, so identical
/// (input, now) sequences yield identical states.
class Game {
 public:
  explicit Game(GameConfig config) {
    config.validate();
    state_.config = std::move(config);
    state_.rng.seed(state_.config.rng_seed);
  }

  const GameState& state() const { return state_; }
  const GameConfig& config() const { return state_.config; }

  std::vector<Transition> apply(const Input& input, TimestampMs now) {
    std::vector<Transition> out;
    std::visit([&](const auto& in) { on(in, now, out); }, input);
    return out;
  }

  /// The next phase deadline or the end of the game period, whichever is first.
  std::optional<TimestampMs> next_deadline() const {
    if (state_.over() || !state_.current) return std::nullopt;
    return std::min(state_.current->phase_deadline_ms, time_limit());
  }

 private:
  void require_running() const {
    if (state_.over()) fail(ErrorCode::GameOver, "the game has ended");
    if (!state_.current) fail(ErrorCode::WrongPhase, "no round is running");
  }

  void on(const JoinInput& in, TimestampMs, std::vector<Transition>& out) {
    if (state_.started()) fail(ErrorCode::GameStartedNoToken, "the game has already started");
    if (in.id.empty() || state_.participant(in.id)) fail(ErrorCode::BadFrame, "participant id missing or reused");
    const std::string name = normalize_word(in.name);
    if (name.empty()) fail(ErrorCode::BadFrame, "display name must not be blank");
    for (const auto& p : state_.participants)
      if (normalize_word(p.display_name) == name) fail(ErrorCode::NameTaken, "display name '" + in.name + "' is taken");
    if (static_cast<int>(state_.participants.size()) >= state_.config.max_players)
      fail(ErrorCode::GameFull, "the game already has " + std::to_string(state_.config.max_players) + " players");
    state_.participants.push_back(Participant{in.id, in.name, in.kind, true});
    out.push_back(RosterChanged{state_.participants});
  }

  void on(const LeaveInput& in, TimestampMs, std::vector<Transition>& out) {
    auto it = std::find_if(state_.participants.begin(), state_.participants.end(),
                           [&](const Participant& p) { return p.id == in.id; });
    if (it == state_.participants.end()) fail(ErrorCode::UnknownPlayer, "'" + in.id.value + "' is not a participant");
    if (state_.started()) {
      it->connected = false;
    } else {
      state_.participants.erase(it);
    }
    out.push_back(RosterChanged{state_.participants});
  }

  void on(const DisconnectInput& in, TimestampMs, std::vector<Transition>& out) { set_connected(in.id, false, out); }
  void on(const ReconnectInput& in, TimestampMs, std::vector<Transition>& out) { set_connected(in.id, true, out); }

  // Connection state never affects rules: absent players simply abstain.
  void set_connected(const PlayerId& id, bool connected, std::vector<Transition>& out) {
    auto it = std::find_if(state_.participants.begin(), state_.participants.end(),
                           [&](const Participant& p) { return p.id == id; });
    if (it == state_.participants.end()) fail(ErrorCode::UnknownPlayer, "'" + id.value + "' is not a participant");
    it->connected = connected;
    out.push_back(RosterChanged{state_.participants});
  }

  void on(const StartInput&, TimestampMs now, std::vector<Transition>& out) {
    if (state_.over()) fail(ErrorCode::GameOver, "the game has ended");
    if (state_.started()) fail(ErrorCode::WrongPhase, "the game has already started");
    const auto n = static_cast<int>(state_.participants.size());
    if (n < state_.config.min_players)
      fail(ErrorCode::NotEnoughPlayers, std::to_string(n) + " players, need " + std::to_string(state_.config.min_players));
    if (n > state_.config.max_players) fail(ErrorCode::TooManyPlayers, std::to_string(n) + " players");
    if (std::none_of(state_.participants.begin(), state_.participants.end(),
                     [](const Participant& p) { return p.kind == Kind::Artificial; }))
      fail(ErrorCode::NoArtificialParticipant, "at least one artificial participant is required");
    if (state_.used_letters.size() >= state_.config.alphabet.size())
      fail(ErrorCode::AlphabetExhausted, "no letters to draw");
    state_.started_at_ms = now;
    for (const auto& p : state_.participants) state_.scoreboard[p.id] = 0;
    open_round(now, out);
  }

  void on(const SubmitInput& in, TimestampMs now, std::vector<Transition>& out) {
    require_running();
    auto& round = *state_.current;
    if (in.round != round.round_number) fail(ErrorCode::WrongPhase, "round " + std::to_string(in.round) + " is not open");
    if (!state_.participant(in.player)) fail(ErrorCode::UnknownPlayer, "'" + in.player.value + "' is not a participant");
    accept_submission(round, in.player, in.entries, now);
    out.push_back(Submitted{round.round_number, in.player});
  }

  void on(const ChallengeInput& in, TimestampMs, std::vector<Transition>& out) {
    require_running();
    raise_challenge(*state_.current, state_.participants, in.challenger, in.ref);
    out.push_back(Challenged{in.ref, in.challenger});
  }

  void on(const ArgueInput& in, TimestampMs, std::vector<Transition>& out) {
    require_running();
    const auto& arg = record_argument(*state_.current, state_.participants, in.author, in.ref, in.text, state_.next_argument_seq);
    ++state_.next_argument_seq;
    out.push_back(Argued{arg});
  }

  void on(const VoteInput& in, TimestampMs, std::vector<Transition>& out) {
    require_running();
    cast_vote(*state_.current, state_.participants, in.voter, in.ref, in.choice);
    out.push_back(Voted{in.ref, in.voter});
  }

  void on(const TickInput&, TimestampMs now, std::vector<Transition>& out) {
    if (state_.over() || !state_.started()) return;
    // Deadlines fire at their scheduled time, so a late tick changes nothing.
    // Only deadlines inside the game period count.
    const TimestampMs limit = time_limit();
    while (state_.current && state_.current->phase_deadline_ms <= std::min(now, limit))
      fire_deadline(state_.current->phase_deadline_ms, out);
    if (!state_.over() && now >= limit) {
      state_.abandoned = std::move(state_.current);
      state_.current.reset();
      end_if_done(limit, out);
    }
  }

  static TimestampMs seconds(int s) { return static_cast<TimestampMs>(s) * 1000; }

  TimestampMs time_limit() const { return *state_.started_at_ms + seconds(state_.config.max_game_seconds); }

  void open_round(TimestampMs now, std::vector<Transition>& out) {
    const int number = static_cast<int>(state_.rounds.size()) + 1;
    std::string letter = draw_letter(state_.rng, state_.used_letters, state_.config.alphabet);
    state_.used_letters.insert(letter);
    state_.letter_sequence.push_back(letter);
    state_.current = make_round(number, letter, state_.participants, state_.config.categories.size(),
                                now + seconds(state_.config.submission_seconds));
    out.push_back(RoundStarted{number, std::move(letter), state_.current->phase_deadline_ms});
  }

  void fire_deadline(TimestampMs now, std::vector<Transition>& out) {
    auto& round = *state_.current;
    const auto& cfg = state_.config;
    switch (round.phase) {
      case Phase::Submission:
        close_submissions(round, now + seconds(cfg.debate_seconds));
        out.push_back(Revealed{round.round_number, round.all_entries(), round.phase_deadline_ms});
        break;
      case Phase::Reveal:
        close_reveal(round, now + seconds(cfg.debate_seconds));
        after_settlement(now, out);
        break;
      case Phase::Debate:
        open_vote(round, now + seconds(cfg.vote_seconds));
        out.push_back(VoteOpened{*round.current_word(), round.phase_deadline_ms});
        break;
      case Phase::Voting: {
        const WordRef ref = *round.current_word();
        const Tally t = close_vote(round, state_.participants, now + seconds(cfg.debate_seconds));
        out.push_back(Tallied{ref, t});
        after_settlement(now, out);
        break;
      }
      case Phase::Scored:
        finish_round(now, out);
        break;
    }
  }

  // Called once a word queue step is done: either debate the next word or
  // score the round.
  void after_settlement(TimestampMs now, std::vector<Transition>& out) {
    auto& round = *state_.current;
    if (round.phase == Phase::Scored) {
      finish_round(now, out);
    } else {
      const WordRef ref = *round.current_word();
      out.push_back(DebateOpened{ref, round.find(ref)->raw, round.challengers[ref], round.phase_deadline_ms});
    }
  }

  void finish_round(TimestampMs now, std::vector<Transition>& out) {
    auto events = score_round(*state_.current);
    for (const auto& e : events) state_.scoreboard[e.player] += e.points;
    state_.score_events.insert(state_.score_events.end(), events.begin(), events.end());
    out.push_back(Scored{state_.current->round_number, state_.scoreboard, std::move(events)});
    state_.rounds.push_back(std::move(*state_.current));
    state_.current.reset();
    if (!end_if_done(now, out)) open_round(now, out);
  }

  bool end_if_done(TimestampMs now, std::vector<Transition>& out) {
    state_.elapsed_seconds = (now - *state_.started_at_ms) / 1000;
    const bool exhausted = state_.used_letters.size() >= state_.config.alphabet.size();
    auto result = check_termination(state_.scoreboard, state_.participants, state_.elapsed_seconds,
                                    static_cast<int>(state_.rounds.size()), state_.config, exhausted);
    if (!result) return false;
    state_.result = *result;
    out.push_back(Ended{*result});
    return true;
  }

  GameState state_;
};

}  // namespace pg
