#pragma once

// One game behind the wire protocol, independent of any transport.
//
// A host is a single-writer event loop: every inbound frame and every clock
// tick goes through it in order. Accepted inputs are appended to the
// transcript before the frames they caused are returned for delivery, and
// rejected frames are answered with an ERROR to the sender only.

#include <deque>
#include <iomanip>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pg/bot/context.hpp"
#include "pg/bot/seat.hpp"
#include "pg/core/game.hpp"
#include "pg/transcript/codec.hpp"
#include "pg/transcript/log.hpp"

namespace pg::server {

using nlohmann::json;

struct Outbound {
  std::optional<PlayerId> to;  // nullopt: broadcast to every session of the game
  json frame;
};

struct HostOptions {
  // Once the roster can start, the lobby stays open this long (or until full).
  TimestampMs lobby_ms = 30'000;
  bool autostart = true;
};

inline json make_frame(const std::string& type, const std::string& game, std::uint64_t seq, json payload) {
  return json{{"type", type}, {"game", game}, {"seq", seq}, {"payload", std::move(payload)}};
}

inline json error_payload(ErrorCode code, const std::string& message, const json& ref_seq) {
  return json{{"code", to_string(code)}, {"message", message}, {"ref_seq", ref_seq}};
}

/// Public view of the game for one participant: hidden words stay hidden
/// until the reveal and ballots stay hidden until the tally.
inline json snapshot_json(const GameState& s, const PlayerId& viewer) {
  json snap{{"roster", s.participants}, {"board", scoreboard_json(s.scoreboard)}, {"started", s.started()}};
  snap["game_over"] = s.result ? codec::result_json(*s.result) : json(nullptr);
  if (!s.current) {
    snap["round"] = nullptr;
    return snap;
  }
  const RoundState& r = *s.current;
  json round{{"round", r.round_number}, {"letter", r.letter}, {"phase", r.phase}, {"deadline", r.phase_deadline_ms}};
  if (r.phase == Phase::Submission) {
    auto it = r.submissions.find(viewer);
    round["own_entries"] = it == r.submissions.end() ? json::array() : json(it->second);
    round["submitted"] = r.submitted;
  } else {
    round["entries"] = r.all_entries();
  }
  round["contested"] = r.contested_queue;
  round["word_ref"] = r.current_word() ? json(*r.current_word()) : json(nullptr);
  round["transcript"] = r.transcript;
  json tallies = json::array();
  for (const auto& [ref, t] : r.tallies)
    tallies.push_back({{"word_ref", ref}, {"approve", t.approve}, {"reject", t.reject}, {"outcome", t.outcome}});
  round["tallies"] = tallies;
  snap["round"] = round;
  return snap;
}

inline std::string random_token() {
  std::random_device rd;
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) os << std::hex << std::setw(8) << std::setfill('0') << rd();
  return os.str();
}

class GameHost {
 public:
  GameHost(std::string game_id, GameConfig config, TranscriptLog log, TimestampMs now, HostOptions opts = {})
      : id_(std::move(game_id)), game_(config), log_(std::move(log)), opts_(opts) {
    log_.append_event(GameEvent{log_.next_seq(), now, "CONFIG", json{{"game_id", id_}, {"config", game_.config()}}});
  }

  const std::string& id() const { return id_; }
  const Game& game() const { return game_; }
  const GameState& state() const { return game_.state(); }
  const TranscriptLog& log() const { return log_; }
  bool paused() const { return paused_; }
  std::uint64_t last_seq() const { return seq_; }
  const std::vector<bot::BotSeat>& bots() const { return bots_; }

  struct JoinOutcome {
    std::optional<PlayerId> player;
    json reply;  // WELCOME or ERROR, addressed to the joining session
    std::vector<Outbound> out;
  };

  /// JOIN{name, kind, token?}. A valid token resumes the same participant
  /// (with its original kind) at any point; without one, joins are lobby-only.
  JoinOutcome handle_join(const json& payload, TimestampMs now, const json& ref_seq = nullptr) {
    JoinOutcome res;
    try {
      if (paused_) fail(ErrorCode::StorageFailure, "game is paused after a storage failure");
      if (!payload.is_object()) fail(ErrorCode::BadFrame, "JOIN payload must be an object");
      if (payload.contains("token") && !payload["token"].is_null()) {
        const auto token = payload.at("token").get<std::string>();
        auto it = std::find_if(tokens_.begin(), tokens_.end(), [&](const auto& kv) { return kv.second == token; });
        if (it == tokens_.end()) fail(ErrorCode::BadToken, "unknown session token");
        const PlayerId pid = it->first;
        apply(ReconnectInput{pid}, now, res.out);
        res.player = pid;
      } else {
        if (game_.state().started()) fail(ErrorCode::GameStartedNoToken, "the game has started; rejoin needs a token");
        const std::string name = payload.at("name").get<std::string>();
        const Kind kind = parse_kind(payload.at("kind").get<std::string>());
        const PlayerId pid = next_player_id();
        apply(JoinInput{pid, name, kind}, now, res.out);
        ++joined_;
        tokens_[pid] = random_token();
        res.player = pid;
        after_roster_change(now, res.out);
      }
      res.reply = make_frame("WELCOME", id_, seq_,
                             json{{"player_id", *res.player},
                                  {"token", tokens_.at(*res.player)},
                                  {"config", game_.config()},
                                  {"roster", game_.state().participants},
                                  {"snapshot", snapshot_json(game_.state(), *res.player)}});
    } catch (const Error& e) {
      res.player.reset();
      res.reply = make_frame("ERROR", id_, seq_, error_payload(e.code(), e.detail(), ref_seq));
    } catch (const json::exception& e) {
      res.player.reset();
      res.reply = make_frame("ERROR", id_, seq_, error_payload(ErrorCode::BadFrame, e.what(), ref_seq));
    }
    return res;
  }

  /// Any inbound frame from a joined participant other than JOIN.
  std::vector<Outbound> dispatch(const PlayerId& sender, const json& frame, TimestampMs now) {
    std::vector<Outbound> out;
    const json ref_seq = frame.is_object() && frame.contains("seq") ? frame["seq"] : json(nullptr);
    try {
      if (paused_) fail(ErrorCode::StorageFailure, "game is paused after a storage failure");
      if (!frame.is_object()) fail(ErrorCode::BadFrame, "frame must be a JSON object");
      const std::string type = frame.at("type").get<std::string>();
      const json payload = frame.contains("payload") ? frame.at("payload") : json::object();
      if (!game_.state().participant(sender)) fail(ErrorCode::NotJoined, "session has not joined this game");
      apply(to_input(sender, type, payload), now, out);
      if (type == "LEAVE") after_roster_change(now, out);
    } catch (const Error& e) {
      out.push_back({sender, make_frame("ERROR", id_, seq_, error_payload(e.code(), e.detail(), ref_seq))});
    } catch (const json::exception& e) {
      out.push_back({sender, make_frame("ERROR", id_, seq_, error_payload(ErrorCode::BadFrame, e.what(), ref_seq))});
    }
    return out;
  }

  /// A transport-level disconnect: the participant stays seated but absent.
  std::vector<Outbound> disconnect(const PlayerId& who, TimestampMs now) {
    std::vector<Outbound> out;
    if (paused_ || !game_.state().participant(who)) return out;
    try {
      apply(DisconnectInput{who}, now, out);
    } catch (const Error&) {
    }
    return out;
  }

  /// Fires whatever deadlines have passed, including the lobby countdown.
  std::vector<Outbound> tick(TimestampMs now) {
    std::vector<Outbound> out;
    if (paused_) return out;
    try {
      if (!game_.state().started() && lobby_deadline_ && now >= *lobby_deadline_) {
        lobby_deadline_.reset();
        apply(StartInput{}, now, out);
      } else {
        apply(TickInput{}, now, out);
      }
    } catch (const Error&) {
      // A roster that stopped being startable just waits for more joins.
    }
    return out;
  }

  std::vector<Outbound> start(TimestampMs now) {
    std::vector<Outbound> out;
    lobby_deadline_.reset();
    apply(StartInput{}, now, out);
    return out;
  }

  std::optional<TimestampMs> next_deadline() const {
    if (!game_.state().started()) return lobby_deadline_;
    return game_.next_deadline();
  }

  /// Seats an in-process bot as a lobby participant.
  PlayerId seat_bot(std::unique_ptr<bot::BotPolicy> policy, TimestampMs now, std::vector<Outbound>* sink = nullptr) {
    std::vector<Outbound> out;
    const PlayerId pid = next_player_id();
    const std::string name = policy->display_name();
    apply(JoinInput{pid, name, bot::BotPolicy::kind()}, now, out);
    ++joined_;
    tokens_[pid] = random_token();
    bots_.emplace_back(pid, std::move(policy));
    after_roster_change(now, out);
    if (sink) sink->insert(sink->end(), out.begin(), out.end());
    return pid;
  }

  void set_bots_verbose(bool v) {
    for (auto& b : bots_) b.set_verbose(v);
  }

 private:
  PlayerId next_player_id() const { return PlayerId("p" + std::to_string(joined_ + 1)); }

  Input to_input(const PlayerId& sender, const std::string& type, const json& p) const {
    if (type == "SUBMIT_WORDS") {
      SubmitInput s{sender, p.at("round").get<int>(), {}};
      for (const auto& e : p.at("entries")) s.entries.push_back({e.at("category").get<int>(), e.at("word").get<std::string>()});
      return s;
    }
    if (type == "CHALLENGE")
      return ChallengeInput{sender, WordRef{p.at("round").get<int>(), p.at("author").get<PlayerId>(), p.at("category").get<int>()}};
    if (type == "ARGUMENT") return ArgueInput{sender, p.at("word_ref").get<WordRef>(), p.at("text").get<std::string>()};
    if (type == "VOTE") return VoteInput{sender, p.at("word_ref").get<WordRef>(), parse_choice(p.at("choice").get<std::string>())};
    if (type == "LEAVE") return LeaveInput{sender};
    if (type == "JOIN") fail(ErrorCode::BadFrame, "session has already joined");
    fail(ErrorCode::BadFrame, "unknown frame type '" + type + "'");
  }

  void after_roster_change(TimestampMs now, std::vector<Outbound>& out) {
    const auto& s = game_.state();
    if (!opts_.autostart || s.started()) return;
    const auto n = static_cast<int>(s.participants.size());
    const bool startable = n >= s.config.min_players &&
                           std::any_of(s.participants.begin(), s.participants.end(),
                                       [](const Participant& p) { return p.kind == Kind::Artificial; });
    if (!startable) {
      lobby_deadline_.reset();
    } else if (n >= s.config.max_players) {
      lobby_deadline_.reset();
      try {
        apply(StartInput{}, now, out);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::StorageFailure) throw;
      }
    } else if (!lobby_deadline_) {
      lobby_deadline_ = now + opts_.lobby_ms;
    }
  }

  // Applies one input, logs it with its phase transitions, queues the frames,
  // then lets seated bots react until nothing more happens.
  void apply(const Input& input, TimestampMs now, std::vector<Outbound>& out) {
    std::deque<Input> queue{input};
    bool first = true;
    while (!queue.empty()) {
      Input next = std::move(queue.front());
      queue.pop_front();
      std::vector<Transition> ts;
      try {
        ts = game_.apply(next, now);
      } catch (const Error& e) {
        if (first) throw;
        note_bot_error(next, e);
        continue;
      }
      first = false;
      record(next, ts, now);
      for (const auto& t : ts) out.push_back({std::nullopt, make_frame(codec::tag(t), id_, ++seq_, codec::payload(t))});
      react(ts, queue);
    }
  }

  void record(const Input& input, const std::vector<Transition>& ts, TimestampMs now) {
    const bool is_tick = std::holds_alternative<TickInput>(input);
    if (is_tick && ts.empty()) return;
    try {
      log_.append_event(GameEvent{log_.next_seq(), now, codec::tag(input), codec::payload(input)});
      for (const auto& t : ts)
        if (codec::is_logged(t)) log_.append_event(GameEvent{log_.next_seq(), now, codec::tag(t), codec::payload(t)});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StorageFailure) paused_ = true;
      throw;
    }
  }

  static std::optional<PlayerId> actor(const Input& in) {
    if (const auto* x = std::get_if<SubmitInput>(&in)) return x->player;
    if (const auto* x = std::get_if<ChallengeInput>(&in)) return x->challenger;
    if (const auto* x = std::get_if<ArgueInput>(&in)) return x->author;
    if (const auto* x = std::get_if<VoteInput>(&in)) return x->voter;
    return std::nullopt;
  }

  void note_bot_error(const Input& in, const Error& e) {
    const auto who = actor(in);
    for (auto& b : bots_)
      if (who && b.id() == *who) b.note(std::string("engine rejected ") + codec::tag(in) + ": " + e.what());
  }

  void react(const std::vector<Transition>& ts, std::deque<Input>& queue) {
    if (bots_.empty()) return;
    const auto& s = game_.state();
    for (const auto& t : ts) {
      if (std::holds_alternative<RoundStarted>(t)) {
        for (auto& b : bots_)
          if (auto in = b.on_round_start(bot::make_context(s, b.id()))) queue.push_back(std::move(*in));
      } else if (std::holds_alternative<Revealed>(t)) {
        for (auto& b : bots_)
          for (auto& in : b.on_reveal(bot::make_context(s, b.id()))) queue.push_back(std::move(in));
      } else if (const auto* d = std::get_if<DebateOpened>(&t)) {
        // Author speaks first, then challengers in challenge order, then the rest.
        std::vector<bot::BotSeat*> order;
        auto add = [&](const PlayerId& who) {
          for (auto& b : bots_)
            if (b.id() == who && std::find(order.begin(), order.end(), &b) == order.end()) order.push_back(&b);
        };
        add(d->ref.author);
        for (const auto& c : d->challengers) add(c);
        for (auto& b : bots_) add(b.id());
        for (auto* b : order)
          if (auto in = b->on_debate(bot::make_context(s, b->id()))) queue.push_back(std::move(*in));
      } else if (const auto* a = std::get_if<Argued>(&t)) {
        for (auto& b : bots_) {
          if (b.id() == a->argument.author) continue;
          auto ctx = bot::make_context(s, b.id());
          if (!ctx.is_party(b.id())) continue;
          if (auto in = b.on_debate(ctx)) queue.push_back(std::move(*in));
        }
      } else if (std::holds_alternative<VoteOpened>(t)) {
        for (auto& b : bots_)
          if (auto in = b.on_vote(bot::make_context(s, b.id()))) queue.push_back(std::move(*in));
      }
    }
  }

  std::string id_;
  Game game_;
  TranscriptLog log_;
  HostOptions opts_;
  std::uint64_t seq_ = 0;
  int joined_ = 0;
  bool paused_ = false;
  std::optional<TimestampMs> lobby_deadline_;
  std::map<PlayerId, std::string> tokens_;
  std::vector<bot::BotSeat> bots_;
};

}  // namespace pg::server
