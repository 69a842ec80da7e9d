#pragma once

// The SDK boundary between a BotPolicy and the engine. Whatever a policy
// returns or throws, a seat only emits inputs that are well-formed for the
// current phase; everything else is dropped and noted in diagnostics().

#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pg/bot/policy.hpp"
#include "pg/core/game.hpp"

namespace pg::bot {

inline constexpr std::size_t kMaxWordGraphemes = 64;

class BotSeat {
 public:
  BotSeat(PlayerId id, std::unique_ptr<BotPolicy> policy) : id_(std::move(id)), policy_(std::move(policy)) {}

  const PlayerId& id() const { return id_; }
  BotPolicy& policy() { return *policy_; }
  const std::string& display_name() const { return policy_->display_name(); }
  static constexpr Kind kind() { return BotPolicy::kind(); }

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  void set_verbose(bool v) { verbose_ = v; }

  std::optional<SubmitInput> on_round_start(const BotContext& ctx) {
    if (ctx.phase != Phase::Submission) return std::nullopt;
    std::vector<Proposal> proposals;
    if (!guard("propose_words", [&] { proposals = policy_->propose_words(ctx); })) return std::nullopt;
    SubmitInput in{id_, ctx.round, {}};
    std::set<int> seen;
    const auto categories = static_cast<int>(ctx.config.categories.size());
    for (auto& p : proposals) {
      if (p.category < 0 || p.category >= categories) {
        note("dropped proposal for unknown category " + std::to_string(p.category));
        continue;
      }
      if (!seen.insert(p.category).second) {
        note("dropped second proposal for category " + std::to_string(p.category));
        continue;
      }
      std::string word = normalize_word(p.word).empty() ? std::string{} : p.word;
      if (grapheme_count(word) > kMaxWordGraphemes) {
        note("dropped overlong word for category " + std::to_string(p.category));
        continue;
      }
      if (word.empty()) continue;
      in.entries.push_back({p.category, std::move(word)});
    }
    if (in.entries.empty()) return std::nullopt;
    return in;
  }

  std::vector<ChallengeInput> on_reveal(const BotContext& ctx) {
    std::vector<ChallengeInput> out;
    if (ctx.phase != Phase::Reveal) return out;
    std::vector<WordRef> refs;
    if (!guard("decide_challenges", [&] { refs = policy_->decide_challenges(ctx); })) return out;
    std::set<WordRef> seen;
    for (const auto& ref : refs) {
      const WordEntry* e = ctx.revealed_entry(ref);
      if (ref.author == id_) {
        note("filtered self-challenge");
        continue;
      }
      if (!e || e->status == WordStatus::AutoRejected || !(e->status == WordStatus::Pending || e->status == WordStatus::Contested)) {
        note("filtered challenge of an unknown or settled word");
        continue;
      }
      if (!seen.insert(ref).second) continue;
      out.push_back(ChallengeInput{id_, ref});
    }
    return out;
  }

  std::optional<ArgueInput> on_debate(const BotContext& ctx) {
    if (ctx.phase != Phase::Debate || !ctx.contested) return std::nullopt;
    const int limit = ctx.is_party(id_) ? kPartyArgumentLimit : kBystanderArgumentLimit;
    int sent = 0;
    for (const auto& a : ctx.debate)
      if (a.author == id_) ++sent;
    if (sent >= limit) return std::nullopt;
    std::string text;
    if (!guard("compose_argument", [&] { text = policy_->compose_argument(ctx); })) return std::nullopt;
    if (normalize_word(text).empty()) return std::nullopt;
    if (grapheme_count(text) > kMaxArgumentGraphemes) {
      note("truncated overlong argument");
      text = truncate_graphemes(text, kMaxArgumentGraphemes);
    }
    return ArgueInput{id_, *ctx.contested, std::move(text)};
  }

  std::optional<VoteInput> on_vote(const BotContext& ctx) {
    if (ctx.phase != Phase::Voting || !ctx.contested) return std::nullopt;
    VoteDecision d = VoteDecision::Abstain;
    if (!guard("decide_vote", [&] { d = policy_->decide_vote(ctx); })) return std::nullopt;
    if (d == VoteDecision::Abstain) return std::nullopt;
    return VoteInput{id_, *ctx.contested, d == VoteDecision::Approve ? Choice::Approve : Choice::Reject};
  }

  void note(const std::string& msg) {
    diagnostics_.push_back(msg);
    if (verbose_) std::clog << "[bot " << policy_->display_name() << "] " << msg << "\n";
  }

 private:
  template <typename F>
  bool guard(const char* what, F&& f) {
    try {
      f();
      return true;
    } catch (const std::exception& e) {
      note(std::string(what) + " threw: " + e.what());
    } catch (...) {
      note(std::string(what) + " threw");
    }
    return false;
  }

  PlayerId id_;
  std::unique_ptr<BotPolicy> policy_;
  std::vector<std::string> diagnostics_;
  bool verbose_ = false;
};

}  // namespace pg::bot
