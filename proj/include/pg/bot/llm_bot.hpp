#pragma once

// Endpoint-backed artificial participant. Every decision is one completion
// call rendered from an external prompt template; any endpoint failure
// degrades to a blank sheet, no challenges, a template argument, or an
// abstention.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pg/bot/llm.hpp"
#include "pg/bot/policy.hpp"

namespace pg::bot {

/// Replaces every `{key}` with vars[key]; unknown placeholders stay verbatim.
inline std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = vars.find(tmpl.substr(i + 1, close - i - 1));
        if (it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

struct PromptSet {
  std::string propose;
  std::string challenge;
  std::string argue;
  std::string vote;

  /// Reads propose.txt, challenge.txt, argue.txt and vote.txt from `dir`.
  static PromptSet load(const std::string& dir) {
    auto read = [&](const char* name) {
      const auto path = std::filesystem::path(dir) / name;
      std::ifstream in(path, std::ios::binary);
      if (!in) throw std::invalid_argument("cannot open prompt template " + path.string());
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    return PromptSet{read("propose.txt"), read("challenge.txt"), read("argue.txt"), read("vote.txt")};
  }
};

inline std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && issp(static_cast<unsigned char>(s[b]))) ++b;
  return s.substr(b);
}

inline std::string upper_ascii(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

class LlmBot : public BotPolicy {
 public:
  LlmBot(std::string name, EndpointConfig endpoint, PromptSet prompts)
      : BotPolicy(std::move(name)), endpoint_(std::move(endpoint)), prompts_(std::move(prompts)) {}

  int failures() const { return failures_; }

  std::vector<Proposal> propose_words(const BotContext& ctx) override {
    std::string listing;
    for (std::size_t c = 0; c < ctx.config.categories.size(); ++c)
      listing += std::to_string(c + 1) + ": " + ctx.config.categories[c] + "\n";
    auto reply = complete(prompts_.propose, vars(ctx, {{"categories", listing}}), ctx.config.submission_seconds);
    std::vector<Proposal> out;
    if (!reply) return out;
    // Expected reply: one "N: word" line per category.
    std::istringstream in(*reply);
    std::string line;
    while (std::getline(in, line)) {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(0, colon));
      const std::string word = trim(line.substr(colon + 1));
      int index = -1;
      try {
        std::size_t used = 0;
        index = std::stoi(key, &used) - 1;
        if (used != key.size()) index = -1;
      } catch (const std::exception&) {
        for (std::size_t c = 0; c < ctx.config.categories.size(); ++c)
          if (normalize_word(ctx.config.categories[c]) == normalize_word(key)) index = static_cast<int>(c);
      }
      if (index >= 0 && !word.empty()) out.push_back({index, word});
    }
    return out;
  }

  std::vector<WordRef> decide_challenges(const BotContext& ctx) override {
    std::vector<const WordEntry*> listed;
    std::string listing;
    for (const auto& e : ctx.revealed) {
      if (e.author == ctx.self || e.blank() || e.status == WordStatus::AutoRejected) continue;
      listed.push_back(&e);
      listing += std::to_string(listed.size()) + ": " + e.raw + " (" + ctx.category_label(e.category_index) + ")\n";
    }
    std::vector<WordRef> out;
    if (listed.empty()) return out;
    auto reply = complete(prompts_.challenge, vars(ctx, {{"entries", listing}}), ctx.config.debate_seconds);
    if (!reply) return out;
    // Expected reply: numbers of entries to challenge, or "none".
    std::string token;
    for (char ch : *reply + " ") {
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        token += ch;
        continue;
      }
      if (!token.empty() && token.size() < 7) {
        const auto n = std::stoul(token);
        if (n >= 1 && n <= listed.size()) {
          const auto* e = listed[n - 1];
          out.push_back(WordRef{ctx.round, e->author, e->category_index});
        }
      }
      token.clear();
    }
    return out;
  }

  std::string compose_argument(const BotContext& ctx) override {
    if (!ctx.contested) return {};
    const bool author = ctx.contested->author == ctx.self;
    const bool party = ctx.is_party(ctx.self);
    std::string transcript;
    for (const auto& a : ctx.debate) transcript += a.author.value + ": " + a.text + "\n";
    const auto& label = ctx.category_label(ctx.contested->category);
    auto reply = complete(prompts_.argue,
                          vars(ctx, {{"word", ctx.contested_word},
                                     {"category", label},
                                     {"transcript", transcript},
                                     {"stance", author ? "defend" : "assess"}}),
                          ctx.config.debate_seconds);
    if (reply && !trim(*reply).empty()) return trim(*reply);
    if (author) return author_argument(ctx.contested_word, label, "");
    if (party) return challenger_argument(ctx.contested_word, label);
    return {};
  }

  VoteDecision decide_vote(const BotContext& ctx) override {
    if (!ctx.contested) return VoteDecision::Abstain;
    std::string transcript;
    for (const auto& a : ctx.debate) transcript += a.author.value + ": " + a.text + "\n";
    auto reply = complete(prompts_.vote,
                          vars(ctx, {{"word", ctx.contested_word},
                                     {"category", ctx.category_label(ctx.contested->category)},
                                     {"transcript", transcript}}),
                          ctx.config.vote_seconds);
    if (!reply) return VoteDecision::Abstain;
    const std::string up = upper_ascii(*reply);
    const auto a = up.find("APPROVE"), r = up.find("REJECT");
    if (a == std::string::npos && r == std::string::npos) return VoteDecision::Abstain;
    return a < r ? VoteDecision::Approve : VoteDecision::Reject;
  }

 private:
  std::map<std::string, std::string> vars(const BotContext& ctx, std::map<std::string, std::string> extra) const {
    extra.emplace("name", display_name());
    extra.emplace("letter", ctx.letter);
    return extra;
  }

  // The call budget stays under half of the phase it serves.
  std::optional<std::string> complete(const std::string& tmpl, const std::map<std::string, std::string>& v,
                                      int phase_seconds) {
    EndpointConfig cfg = endpoint_;
    cfg.budget = std::min(cfg.budget, std::chrono::milliseconds(static_cast<long>(phase_seconds) * 500));
    const Completion c = llm_complete(render_template(tmpl, v), cfg);
    if (!c.ok()) {
      ++failures_;
      return std::nullopt;
    }
    return c.text;
  }

  EndpointConfig endpoint_;
  PromptSet prompts_;
  int failures_ = 0;
};

}  // namespace pg::bot
