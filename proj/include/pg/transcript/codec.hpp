#pragma once

// JSON encoding of engine inputs and transitions. The same payloads appear in
// transcript events and in outbound frames.

#include <string>

#include "json.hpp"
#include "pg/core/game.hpp"

namespace pg::codec {

using nlohmann::json;

// ---- transitions ------------------------------------------------------------

inline const char* tag(const Transition& t) {
  struct V {
    const char* operator()(const RosterChanged&) const { return "ROSTER"; }
    const char* operator()(const RoundStarted&) const { return "ROUND_START"; }
    const char* operator()(const Submitted&) const { return "SUBMITTED"; }
    const char* operator()(const Revealed&) const { return "REVEAL"; }
    const char* operator()(const Challenged&) const { return "CHALLENGED"; }
    const char* operator()(const DebateOpened&) const { return "DEBATE_OPEN"; }
    const char* operator()(const Argued&) const { return "ARGUMENT"; }
    const char* operator()(const VoteOpened&) const { return "VOTE_OPEN"; }
    const char* operator()(const Voted&) const { return "VOTED"; }
    const char* operator()(const Tallied&) const { return "TALLY"; }
    const char* operator()(const Scored&) const { return "SCORES"; }
    const char* operator()(const Ended&) const { return "GAME_OVER"; }
  };
  return std::visit(V{}, t);
}

/// Phase transitions are logged; echoes of an input (roster, acks, argument
/// echo) are implied by the logged input itself.
inline bool is_logged(const Transition& t) {
  return !std::holds_alternative<RosterChanged>(t) && !std::holds_alternative<Submitted>(t) &&
         !std::holds_alternative<Challenged>(t) && !std::holds_alternative<Argued>(t) && !std::holds_alternative<Voted>(t);
}

inline json result_json(const GameResult& r) {
  json winners = json::array();
  for (const auto& w : r.winners) winners.push_back(w);
  return json{{"ranking", r.ranking}, {"winners", winners}, {"reason", r.reason}};
}

inline json payload(const Transition& t) {
  struct V {
    json operator()(const RosterChanged& x) const { return json{{"roster", x.roster}}; }
    json operator()(const RoundStarted& x) const {
      return json{{"round", x.round}, {"letter", x.letter}, {"deadline", x.deadline}};
    }
    json operator()(const Submitted& x) const { return json{{"round", x.round}, {"player", x.player}}; }
    json operator()(const Revealed& x) const {
      return json{{"round", x.round}, {"entries", x.entries}, {"deadline", x.deadline}};
    }
    json operator()(const Challenged& x) const { return json{{"word_ref", x.ref}, {"challenger", x.challenger}}; }
    json operator()(const DebateOpened& x) const {
      return json{{"word_ref", x.ref}, {"word", x.word}, {"challengers", x.challengers}, {"deadline", x.deadline}};
    }
    json operator()(const Argued& x) const { return x.argument; }
    json operator()(const VoteOpened& x) const { return json{{"word_ref", x.ref}, {"deadline", x.deadline}}; }
    json operator()(const Voted& x) const { return json{{"word_ref", x.ref}, {"voter", x.voter}}; }
    json operator()(const Tallied& x) const {
      return json{{"word_ref", x.ref},
                  {"approve", x.tally.approve},
                  {"reject", x.tally.reject},
                  {"outcome", x.tally.outcome}};
    }
    json operator()(const Scored& x) const {
      return json{{"round", x.round}, {"board", scoreboard_json(x.board)}, {"events", x.events}};
    }
    json operator()(const Ended& x) const { return result_json(x.result); }
  };
  return std::visit(V{}, t);
}

// ---- inputs -----------------------------------------------------------------

inline const char* tag(const Input& in) {
  struct V {
    const char* operator()(const JoinInput&) const { return "JOIN"; }
    const char* operator()(const LeaveInput&) const { return "LEAVE"; }
    const char* operator()(const DisconnectInput&) const { return "DISCONNECT"; }
    const char* operator()(const ReconnectInput&) const { return "RECONNECT"; }
    const char* operator()(const StartInput&) const { return "START"; }
    const char* operator()(const SubmitInput&) const { return "SUBMIT_WORDS"; }
    const char* operator()(const ChallengeInput&) const { return "CHALLENGE"; }
    const char* operator()(const ArgueInput&) const { return "ARGUMENT"; }
    const char* operator()(const VoteInput&) const { return "VOTE"; }
    const char* operator()(const TickInput&) const { return "TICK"; }
  };
  return std::visit(V{}, in);
}

inline json payload(const Input& in) {
  struct V {
    json operator()(const JoinInput& x) const { return json{{"player_id", x.id}, {"name", x.name}, {"kind", x.kind}}; }
    json operator()(const LeaveInput& x) const { return json{{"player_id", x.id}}; }
    json operator()(const DisconnectInput& x) const { return json{{"player_id", x.id}}; }
    json operator()(const ReconnectInput& x) const { return json{{"player_id", x.id}}; }
    json operator()(const StartInput&) const { return json::object(); }
    json operator()(const SubmitInput& x) const {
      json entries = json::array();
      for (const auto& e : x.entries) entries.push_back(json{{"category", e.category}, {"word", e.word}});
      return json{{"player_id", x.player}, {"round", x.round}, {"entries", entries}};
    }
    json operator()(const ChallengeInput& x) const { return json{{"player_id", x.challenger}, {"word_ref", x.ref}}; }
    json operator()(const ArgueInput& x) const {
      return json{{"player_id", x.author}, {"word_ref", x.ref}, {"text", x.text}};
    }
    json operator()(const VoteInput& x) const {
      return json{{"player_id", x.voter}, {"word_ref", x.ref}, {"choice", x.choice}};
    }
    json operator()(const TickInput&) const { return json::object(); }
  };
  return std::visit(V{}, in);
}

inline bool is_input_tag(const std::string& kind) {
  return kind == "JOIN" || kind == "LEAVE" || kind == "DISCONNECT" || kind == "RECONNECT" || kind == "START" || kind == "SUBMIT_WORDS" ||
         kind == "CHALLENGE" || kind == "ARGUMENT" || kind == "VOTE" || kind == "TICK";
}

/// Inverse of payload(const Input&). Throws nlohmann::json::exception or
/// pg::Error(BadFrame) on malformed payloads.
inline Input parse_input(const std::string& kind, const json& p) {
  auto pid = [&] { return p.at("player_id").get<PlayerId>(); };
  if (kind == "JOIN") return JoinInput{pid(), p.at("name").get<std::string>(), parse_kind(p.at("kind").get<std::string>())};
  if (kind == "LEAVE") return LeaveInput{pid()};
  if (kind == "DISCONNECT") return DisconnectInput{pid()};
  if (kind == "RECONNECT") return ReconnectInput{pid()};
  if (kind == "START") return StartInput{};
  if (kind == "TICK") return TickInput{};
  if (kind == "SUBMIT_WORDS") {
    SubmitInput s{pid(), p.at("round").get<int>(), {}};
    for (const auto& e : p.at("entries")) s.entries.push_back({e.at("category").get<int>(), e.at("word").get<std::string>()});
    return s;
  }
  if (kind == "CHALLENGE") return ChallengeInput{pid(), p.at("word_ref").get<WordRef>()};
  if (kind == "ARGUMENT") return ArgueInput{pid(), p.at("word_ref").get<WordRef>(), p.at("text").get<std::string>()};
  if (kind == "VOTE") return VoteInput{pid(), p.at("word_ref").get<WordRef>(), parse_choice(p.at("choice").get<std::string>())};
  fail(ErrorCode::BadFrame, "unknown input kind '" + kind + "'");
}

}  // namespace pg::codec
