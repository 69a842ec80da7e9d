#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pg/core/error.hpp"

namespace pg {

/// Opaque participant identifier, unique within one game.
struct PlayerId {
  std::string value;

  PlayerId() = default;
  explicit PlayerId(std::string v) : value(std::move(v)) {}

  auto operator<=>(const PlayerId&) const = default;
  bool empty() const { return value.empty(); }
};

inline void to_json(nlohmann::json& j, const PlayerId& p) { j = p.value; }
inline void from_json(const nlohmann::json& j, PlayerId& p) { p.value = j.get<std::string>(); }

using TimestampMs = std::int64_t;

enum class Kind { Human, Artificial };
enum class Phase { Submission, Reveal, Debate, Voting, Scored };
enum class WordStatus { Pending, AutoRejected, UncontestedApproved, Contested, Approved, Rejected };
enum class Choice { Approve, Reject };
enum class Outcome { Approved, Rejected };

NLOHMANN_JSON_SERIALIZE_ENUM(Kind, {{Kind::Human, "HUMAN"}, {Kind::Artificial, "ARTIFICIAL"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Phase, {{Phase::Submission, "SUBMISSION"},
                                     {Phase::Reveal, "REVEAL"},
                                     {Phase::Debate, "DEBATE"},
                                     {Phase::Voting, "VOTING"},
                                     {Phase::Scored, "SCORED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(WordStatus, {{WordStatus::Pending, "PENDING"},
                                          {WordStatus::AutoRejected, "AUTO_REJECTED"},
                                          {WordStatus::UncontestedApproved, "UNCONTESTED_APPROVED"},
                                          {WordStatus::Contested, "CONTESTED"},
                                          {WordStatus::Approved, "APPROVED"},
                                          {WordStatus::Rejected, "REJECTED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Outcome, {{Outcome::Approved, "APPROVED"}, {Outcome::Rejected, "REJECTED"}})

// Enum parsing for inbound data must reject unknown strings rather than fall
// back to the first enumerator as NLOHMANN_JSON_SERIALIZE_ENUM does.
inline Kind parse_kind(std::string_view s) {
  if (s == "HUMAN") return Kind::Human;
  if (s == "ARTIFICIAL") return Kind::Artificial;
  fail(ErrorCode::BadFrame, "kind must be HUMAN or ARTIFICIAL");
}

inline Choice parse_choice(std::string_view s) {
  if (s == "APPROVE") return Choice::Approve;
  if (s == "REJECT") return Choice::Reject;
  fail(ErrorCode::BadFrame, "choice must be APPROVE or REJECT");
}

inline void to_json(nlohmann::json& j, const Choice& c) { j = c == Choice::Approve ? "APPROVE" : "REJECT"; }
inline void from_json(const nlohmann::json& j, Choice& c) { c = parse_choice(j.get<std::string>()); }

constexpr bool is_terminal(WordStatus s) {
  return s == WordStatus::AutoRejected || s == WordStatus::UncontestedApproved || s == WordStatus::Approved ||
         s == WordStatus::Rejected;
}

constexpr bool is_approved(WordStatus s) { return s == WordStatus::UncontestedApproved || s == WordStatus::Approved; }

struct Participant {
  PlayerId id;
  std::string display_name;
  Kind kind = Kind::Human;
  bool connected = true;

  bool operator==(const Participant&) const = default;
};

inline void to_json(nlohmann::json& j, const Participant& p) {
  j = nlohmann::json{{"id", p.id}, {"name", p.display_name}, {"kind", p.kind}, {"connected", p.connected}};
}

/// (round, author, category) identifies one submitted word.
struct WordRef {
  int round = 0;
  PlayerId author;
  int category = 0;

  auto operator<=>(const WordRef&) const = default;
};

inline void to_json(nlohmann::json& j, const WordRef& r) {
  j = nlohmann::json{{"round", r.round}, {"author", r.author}, {"category", r.category}};
}
inline void from_json(const nlohmann::json& j, WordRef& r) {
  j.at("round").get_to(r.round);
  j.at("author").get_to(r.author);
  j.at("category").get_to(r.category);
}

struct WordEntry {
  PlayerId author;
  int category_index = 0;
  std::string raw;
  std::string normalized;
  WordStatus status = WordStatus::Pending;

  bool blank() const { return normalized.empty(); }
  bool operator==(const WordEntry&) const = default;
};

inline void to_json(nlohmann::json& j, const WordEntry& e) {
  j = nlohmann::json{{"author", e.author},
                     {"category", e.category_index},
                     {"word", e.raw},
                     {"normalized", e.normalized},
                     {"status", e.status}};
}

struct Argument {
  PlayerId author;
  WordRef target;
  std::string text;
  std::uint64_t seq = 0;

  bool operator==(const Argument&) const = default;
};

inline void to_json(nlohmann::json& j, const Argument& a) {
  j = nlohmann::json{{"author", a.author}, {"word_ref", a.target}, {"text", a.text}, {"seq", a.seq}};
}

struct Tally {
  int approve = 0;
  int reject = 0;
  Outcome outcome = Outcome::Rejected;

  bool operator==(const Tally&) const = default;
};

struct ScoreEvent {
  PlayerId player;
  int round_number = 0;
  int category_index = 0;
  int points = 0;

  bool operator==(const ScoreEvent&) const = default;
};

inline void to_json(nlohmann::json& j, const ScoreEvent& e) {
  j = nlohmann::json{{"player", e.player}, {"round", e.round_number}, {"category", e.category_index}, {"points", e.points}};
}

using Scoreboard = std::map<PlayerId, int>;

inline nlohmann::json scoreboard_json(const Scoreboard& board) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, score] : board) j[id.value] = score;
  return j;
}

struct RoundState {
  int round_number = 0;
  std::string letter;
  Phase phase = Phase::Submission;
  TimestampMs phase_deadline_ms = 0;
  // One slot per category for every participant; blank until submitted.
  std::map<PlayerId, std::vector<WordEntry>> submissions;
  std::set<PlayerId> submitted;
  std::vector<WordRef> contested_queue;
  std::size_t debate_index = 0;
  std::map<WordRef, std::vector<PlayerId>> challengers;
  std::vector<Argument> transcript;
  std::map<WordRef, std::map<PlayerId, Choice>> ballots;
  std::map<WordRef, Tally> tallies;

  const WordEntry* find(const WordRef& ref) const {
    if (ref.round != round_number) return nullptr;
    auto it = submissions.find(ref.author);
    if (it == submissions.end() || ref.category < 0 || ref.category >= static_cast<int>(it->second.size()))
      return nullptr;
    return &it->second[static_cast<std::size_t>(ref.category)];
  }
  WordEntry* find(const WordRef& ref) { return const_cast<WordEntry*>(std::as_const(*this).find(ref)); }

  /// The word under debate or vote, if any.
  std::optional<WordRef> current_word() const {
    if ((phase != Phase::Debate && phase != Phase::Voting) || debate_index >= contested_queue.size()) return std::nullopt;
    return contested_queue[debate_index];
  }

  std::vector<WordEntry> all_entries() const {
    std::vector<WordEntry> out;
    for (const auto& [_, slots] : submissions) out.insert(out.end(), slots.begin(), slots.end());
    return out;
  }

  bool operator==(const RoundState&) const = default;
};

struct RankEntry {
  PlayerId player;
  std::string display_name;
  Kind kind = Kind::Human;
  int score = 0;

  bool operator==(const RankEntry&) const = default;
};

inline void to_json(nlohmann::json& j, const RankEntry& r) {
  j = nlohmann::json{{"player", r.player}, {"name", r.display_name}, {"kind", r.kind}, {"score", r.score}};
}

enum class EndReason { Victory, TimeUp, MaxRounds, AlphabetExhausted };
NLOHMANN_JSON_SERIALIZE_ENUM(EndReason, {{EndReason::Victory, "VICTORY"},
                                         {EndReason::TimeUp, "TIME_UP"},
                                         {EndReason::MaxRounds, "MAX_ROUNDS"},
                                         {EndReason::AlphabetExhausted, "ALPHABET_EXHAUSTED"}})

struct GameResult {
  std::vector<RankEntry> ranking;
  std::vector<PlayerId> winners;
  EndReason reason = EndReason::Victory;

  bool operator==(const GameResult&) const = default;
};

}  // namespace pg
