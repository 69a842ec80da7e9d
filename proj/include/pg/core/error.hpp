#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pg {

enum class ErrorCode {
  // game-core
  AlphabetExhausted,
  NotEnoughPlayers,
  TooManyPlayers,
  NoArtificialParticipant,
  WrongPhase,
  DeadlinePassed,
  UnknownCategory,
  UnknownPlayer,
  SelfChallenge,
  UnknownWord,
  NotChallengeable,
  WrongWord,
  EmptyArgument,
  TooLong,
  FloorExhausted,
  UnknownVoter,
  NonTerminalEntry,
  GameOver,
  InvalidConfig,
  // server
  GameFull,
  NameTaken,
  GameStartedNoToken,
  BadToken,
  BadFrame,
  NotJoined,
  // transcript
  SequenceGap,
  StorageFailure,
  CorruptLog,
  // cli
  InvalidPlan,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AlphabetExhausted: return "AlphabetExhausted";
    case ErrorCode::NotEnoughPlayers: return "NotEnoughPlayers";
    case ErrorCode::TooManyPlayers: return "TooManyPlayers";
    case ErrorCode::NoArtificialParticipant: return "NoArtificialParticipant";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::DeadlinePassed: return "DeadlinePassed";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::SelfChallenge: return "SelfChallenge";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::NotChallengeable: return "NotChallengeable";
    case ErrorCode::WrongWord: return "WrongWord";
    case ErrorCode::EmptyArgument: return "EmptyArgument";
    case ErrorCode::TooLong: return "TooLong";
    case ErrorCode::FloorExhausted: return "FloorExhausted";
    case ErrorCode::UnknownVoter: return "UnknownVoter";
    case ErrorCode::NonTerminalEntry: return "NonTerminalEntry";
    case ErrorCode::GameOver: return "GameOver";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::GameFull: return "GameFull";
    case ErrorCode::NameTaken: return "NameTaken";
    case ErrorCode::GameStartedNoToken: return "GameStartedNoToken";
    case ErrorCode::BadToken: return "BadToken";
    case ErrorCode::BadFrame: return "BadFrame";
    case ErrorCode::NotJoined: return "NotJoined";
    case ErrorCode::SequenceGap: return "SequenceGap";
    case ErrorCode::StorageFailure: return "StorageFailure";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
  }
  return "Unknown";
}

/// Raised by every rules, session and transcript operation that refuses an
/// input. Operations validate before mutating, so a thrown Error leaves the
/// target state untouched.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// CorruptLog carries the 1-based line where reading stopped.
class CorruptLogError : public Error {
 public:
  CorruptLogError(std::size_t line, const std::string& message)
      : Error(ErrorCode::CorruptLog, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace pg
