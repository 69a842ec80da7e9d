#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pg/bot/context.hpp"
#include "pg/bot/lexicon.hpp"
#include "pg/core/rules.hpp"

namespace pg::bot {

enum class VoteDecision { Approve, Reject, Abstain };

struct Proposal {
  int category = 0;
  std::string word;

  bool operator==(const Proposal&) const = default;
};

/// An artificial participant's decision functions. The kind is fixed to
/// ARTIFICIAL: no subclass can declare itself human.
class BotPolicy {
 public:
  virtual ~BotPolicy() = default;

  const std::string& display_name() const { return name_; }
  static constexpr Kind kind() { return Kind::Artificial; }

  virtual std::vector<Proposal> propose_words(const BotContext& ctx) = 0;
  virtual std::vector<WordRef> decide_challenges(const BotContext& ctx) = 0;
  virtual std::string compose_argument(const BotContext& ctx) = 0;
  virtual VoteDecision decide_vote(const BotContext& ctx) = 0;

 protected:
  explicit BotPolicy(std::string name) : name_(std::move(name)) {}

 private:
  std::string name_;
};

// ---- scripted baselines -----------------------------------------------------

enum class PickMode { First, Random, Stretch };
enum class ChallengeMode { Never, Contrarian };
enum class VoteMode { Lexicon, Abstain };

struct ScriptedOptions {
  PickMode pick = PickMode::First;
  ChallengeMode challenge = ChallengeMode::Never;
  VoteMode vote = VoteMode::Lexicon;
  bool argue = true;
  std::uint64_t seed = 0;
};

inline std::string author_argument(const std::string& word, const std::string& category, const std::string& gloss) {
  if (gloss.empty()) return word + " is a valid " + category + " entry because it can be read as one of the " + category + ".";
  return word + " is a valid " + category + " entry because it " + gloss + ".";
}

inline std::string challenger_argument(const std::string& word, const std::string& category) {
  return word + " is not a valid " + category + " entry; nothing I know files it under " + category + ".";
}

/// Lexicon-driven bot. Proposes listed words, votes by lexicon membership, and
/// argues from lexicon glosses. Always approves its own words.
class ScriptedBot : public BotPolicy {
 public:
  ScriptedBot(std::string name, std::shared_ptr<const Lexicon> lexicon, ScriptedOptions opts = {})
      : BotPolicy(std::move(name)), lexicon_(std::move(lexicon)), opts_(opts), rng_(opts.seed) {}

  std::vector<Proposal> propose_words(const BotContext& ctx) override {
    std::vector<Proposal> out;
    for (int c = 0; c < static_cast<int>(ctx.config.categories.size()); ++c) {
      const auto& label = ctx.category_label(c);
      auto hits = lexicon_->candidates(label, ctx.letter);
      if (opts_.pick == PickMode::Stretch) {
        // A third of the time, or whenever nothing fits, reach across categories.
        auto stretch = lexicon_->stretch_candidates(label, ctx.letter);
        if (!stretch.empty() && (hits.empty() || uniform_index(rng_, 3) == 0)) hits = std::move(stretch);
      }
      if (hits.empty()) continue;
      const LexiconEntry* pick = hits.front();
      if (opts_.pick != PickMode::First) pick = hits[uniform_index(rng_, hits.size())];
      out.push_back({c, pick->word});
    }
    return out;
  }

  std::vector<WordRef> decide_challenges(const BotContext& ctx) override {
    std::vector<WordRef> out;
    if (opts_.challenge != ChallengeMode::Contrarian) return out;
    for (const auto& e : ctx.revealed) {
      if (e.author == ctx.self || e.blank() || e.status == WordStatus::AutoRejected) continue;
      if (!lexicon_->contains(e.raw, ctx.category_label(e.category_index)))
        out.push_back(WordRef{ctx.round, e.author, e.category_index});
    }
    return out;
  }

  std::string compose_argument(const BotContext& ctx) override {
    if (!opts_.argue || !ctx.contested) return {};
    for (const auto& a : ctx.debate)
      if (a.author == ctx.self) return {};
    const auto& label = ctx.category_label(ctx.contested->category);
    if (ctx.contested->author == ctx.self) {
      const auto* hit = lexicon_->find(ctx.contested_word, label);
      std::string gloss = hit ? hit->gloss : std::string{};
      return author_argument(ctx.contested_word, label, gloss);
    }
    if (ctx.is_party(ctx.self)) return challenger_argument(ctx.contested_word, label);
    return {};
  }

  VoteDecision decide_vote(const BotContext& ctx) override {
    if (opts_.vote == VoteMode::Abstain || !ctx.contested) return VoteDecision::Abstain;
    if (ctx.contested->author == ctx.self) return VoteDecision::Approve;
    return lexicon_->contains(ctx.contested_word, ctx.category_label(ctx.contested->category)) ? VoteDecision::Approve
                                                                                                : VoteDecision::Reject;
  }

  const Lexicon& lexicon() const { return *lexicon_; }

 private:
  std::shared_ptr<const Lexicon> lexicon_;
  ScriptedOptions opts_;
  Rng rng_;
};

}  // namespace pg::bot
