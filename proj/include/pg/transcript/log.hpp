#pragma once

// Append-only JSONL game log and deterministic replay.
//
// Line 1 is the CONFIG event (seq 1) carrying the game id and full config,
// which makes each file self-contained. Every accepted input follows as its
// own event, immediately followed by the phase transitions it produced.
// Replay re-applies the inputs and requires the re-derived transitions to
// match the logged ones exactly.

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "pg/core/game.hpp"
#include "pg/transcript/codec.hpp"

namespace pg {

struct GameEvent {
  std::uint64_t seq = 0;
  TimestampMs ts_ms = 0;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const GameEvent&) const = default;

  std::string to_line() const {
    nlohmann::json j{{"seq", seq}, {"ts_ms", ts_ms}, {"kind", kind}, {"payload", payload}};
    return j.dump();
  }
};

inline GameEvent parse_event_line(const std::string& line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptLogError(line_no, e.what());
  }
  try {
    GameEvent ev;
    ev.seq = j.at("seq").get<std::uint64_t>();
    ev.ts_ms = j.at("ts_ms").get<TimestampMs>();
    ev.kind = j.at("kind").get<std::string>();
    ev.payload = j.at("payload");
    return ev;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptLogError(line_no, e.what());
  }
}

/// In-memory event log with an optional write-ahead file sink.
class TranscriptLog {
 public:
  TranscriptLog() = default;

  /// Opens (truncating) a file sink. With `sync` set every append is fsync'ed.
  static TranscriptLog open_file(const std::string& path, bool sync = false) {
    TranscriptLog log;
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) fail(ErrorCode::StorageFailure, "cannot open " + path + ": " + std::strerror(errno));
    log.file_.reset(f);
    log.path_ = path;
    log.sync_ = sync;
    return log;
  }

  const std::vector<GameEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::optional<std::uint64_t> last_seq() const {
    if (events_.empty()) return std::nullopt;
    return events_.back().seq;
  }
  std::uint64_t next_seq() const { return events_.empty() ? 1 : events_.back().seq + 1; }
  const std::string& path() const { return path_; }

  /// Appends one event; it is on disk (flushed) before this returns.
  void append_event(GameEvent ev) {
    if (ev.seq != next_seq())
      fail(ErrorCode::SequenceGap, "expected seq " + std::to_string(next_seq()) + ", got " + std::to_string(ev.seq));
    if (file_) {
      // Raw writes, no stdio buffer: a failed append must not resurface later.
      const std::string line = ev.to_line() + "\n";
      const int fd = ::fileno(file_.get());
      std::size_t done = 0;
      while (done < line.size()) {
        const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
          const int err = n < 0 ? errno : ENOSPC;
          // Drop the partial line so the file still ends on a whole event.
          if (done > 0 && ::ftruncate(fd, static_cast<off_t>(bytes_)) == 0) ::lseek(fd, static_cast<off_t>(bytes_), SEEK_SET);
          fail(ErrorCode::StorageFailure, "write to " + path_ + " failed: " + std::strerror(err));
        }
        done += static_cast<std::size_t>(n);
      }
      if (sync_ && ::fsync(fd) != 0) fail(ErrorCode::StorageFailure, "fsync of " + path_ + " failed: " + std::strerror(errno));
      bytes_ += line.size();
    }
    events_.push_back(std::move(ev));
  }

  std::string to_jsonl() const {
    std::string out;
    for (const auto& e : events_) out += e.to_line() + "\n";
    return out;
  }

 private:
  struct Closer {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };
  std::vector<GameEvent> events_;
  std::unique_ptr<std::FILE, Closer> file_;
  std::string path_;
  bool sync_ = false;
  std::uint64_t bytes_ = 0;
};

/// Parses a JSONL log and validates that sequence numbers are gapless from 1.
/// A final line without its newline terminator counts as truncated.
inline std::vector<GameEvent> read_events(std::istream& in) {
  std::vector<GameEvent> events;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) throw CorruptLogError(line_no, "truncated final line");
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    GameEvent ev = parse_event_line(line, line_no);
    const std::uint64_t expected = events.empty() ? 1 : events.back().seq + 1;
    if (ev.seq != expected)
      throw CorruptLogError(line_no, "sequence gap: expected " + std::to_string(expected) + ", got " + std::to_string(ev.seq));
    events.push_back(std::move(ev));
  }
  return events;
}

inline std::vector<GameEvent> read_events_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptLogError(0, "cannot open " + path);
  return read_events(in);
}

struct ReplayResult {
  std::string game_id;
  GameState state;
  // Payload of the last SCORES event as recorded in the log, if any.
  std::optional<nlohmann::json> recorded_board;
};

/// Rebuilds the terminal state of a game from its events. An empty log yields
/// an empty lobby with the default config.
inline ReplayResult replay(const std::vector<GameEvent>& events) {
  ReplayResult out;
  if (events.empty()) {
    out.state = Game(GameConfig{}).state();
    return out;
  }
  if (events.front().kind != "CONFIG") throw CorruptLogError(1, "first event must be CONFIG");
  std::optional<Game> game;
  try {
    out.game_id = events.front().payload.at("game_id").get<std::string>();
    game.emplace(events.front().payload.at("config").get<GameConfig>());
  } catch (const nlohmann::json::exception& e) {
    throw CorruptLogError(1, e.what());
  } catch (const Error& e) {
    throw CorruptLogError(1, e.what());
  }

  std::size_t i = 1;
  while (i < events.size()) {
    const auto& ev = events[i];
    const std::size_t line_no = i + 1;
    if (!codec::is_input_tag(ev.kind)) throw CorruptLogError(line_no, "unexpected event kind '" + ev.kind + "'");
    std::vector<Transition> derived;
    try {
      derived = game->apply(codec::parse_input(ev.kind, ev.payload), ev.ts_ms);
    } catch (const nlohmann::json::exception& e) {
      throw CorruptLogError(line_no, e.what());
    } catch (const Error& e) {
      throw CorruptLogError(line_no, std::string("input rejected on replay: ") + e.what());
    }
    ++i;
    for (const auto& t : derived) {
      if (!codec::is_logged(t)) continue;
      if (i >= events.size()) throw CorruptLogError(i, std::string("log ends before ") + codec::tag(t));
      const auto& rec = events[i];
      if (rec.kind != codec::tag(t) || rec.payload != codec::payload(t))
        throw CorruptLogError(i + 1, std::string("recorded ") + rec.kind + " differs from replayed " + codec::tag(t));
      if (rec.kind == "SCORES") out.recorded_board = rec.payload.at("board");
      ++i;
    }
  }
  out.state = game->state();
  return out;
}

inline ReplayResult replay_file(const std::string& path) { return replay(read_events_file(path)); }

}  // namespace pg
