#pragma once

// Named bot policies and the roster spec used by the CLI:
//   comma-separated slots, each `policy[:lexicon_path]`, e.g.
//   "lexicon,contrarian,random:data/lexicon.tsv,creative,llm"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "pg/bot/llm_bot.hpp"
#include "pg/bot/policy.hpp"

namespace pg::bot {

struct BotSlot {
  std::string policy;
  std::string lexicon_path;  // empty: factory default

  bool operator==(const BotSlot&) const = default;
};

inline const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names = {"lexicon", "random", "contrarian", "creative", "passive", "llm"};
  return names;
}

inline std::vector<BotSlot> parse_bot_spec(const std::string& spec) {
  std::vector<BotSlot> slots;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const std::string item = trim(spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!item.empty()) {
      BotSlot slot;
      const auto colon = item.find(':');
      slot.policy = trim(item.substr(0, colon));
      if (colon != std::string::npos) slot.lexicon_path = trim(item.substr(colon + 1));
      if (std::find(known_policies().begin(), known_policies().end(), slot.policy) == known_policies().end())
        throw std::invalid_argument("unknown bot policy '" + slot.policy + "'");
      slots.push_back(std::move(slot));
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return slots;
}

struct BotFactory {
  std::string default_lexicon_path;
  std::string prompts_dir;
  EndpointConfig endpoint = EndpointConfig::from_env();

  std::shared_ptr<const Lexicon> lexicon(const std::string& path) {
    const std::string key = path.empty() ? default_lexicon_path : path;
    std::lock_guard lock(cache_->mu);
    auto& slot = cache_->lexicons[key];
    if (!slot) slot = std::make_shared<const Lexicon>(Lexicon::load(key));
    return slot;
  }

  std::unique_ptr<BotPolicy> make(const BotSlot& slot, const std::string& name, std::uint64_t seed) {
    if (slot.policy == "llm") return std::make_unique<LlmBot>(name, endpoint, PromptSet::load(prompts_dir));
    ScriptedOptions o;
    o.seed = seed;
    if (slot.policy == "random") o.pick = PickMode::Random;
    else if (slot.policy == "contrarian") o.challenge = ChallengeMode::Contrarian;
    else if (slot.policy == "creative") o.pick = PickMode::Stretch;
    else if (slot.policy == "passive") {
      o.vote = VoteMode::Abstain;
      o.argue = false;
    } else if (slot.policy != "lexicon") {
      throw std::invalid_argument("unknown bot policy '" + slot.policy + "'");
    }
    return std::make_unique<ScriptedBot>(name, lexicon(slot.lexicon_path), o);
  }

 private:
  // Shared by copies, so every copy loads each lexicon once.
  struct Cache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const Lexicon>> lexicons;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace pg::bot
